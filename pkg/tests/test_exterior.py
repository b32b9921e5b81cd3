import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundary_wres.exterior import (
    Covector,
    DimensionError,
    ExtOp,
    clifford_op,
    contract_op,
    form_basis,
    formal_covector,
    graded_trace,
    p_op,
    trace_of_product,
    unit_covector,
    wedge_op,
)
from boundary_wres.scalars import Poly

from _numeric import degree_mask, jw_in_engine_basis, jw_wedge, to_numpy


def test_basis_order_and_counts():
    b = form_basis(4)
    assert b.dim == 16
    assert b.elements[:6] == ((), (1,), (2,), (3,), (4,), (1, 2))
    for m in range(5):
        assert len(b.block(m)) == [1, 4, 6, 4, 1][m]
        assert all(b.degree(i) == m for i in b.block(m))
    assert form_basis(4) is form_basis(4)


def test_wedge_examples_n2():
    dx1, dx2 = unit_covector(1, 2), unit_covector(2, 2)
    e1 = wedge_op(dx1)
    assert e1.apply({(): 1}) == {(1,): Poly.const(1)}
    assert e1.apply({(1, 2): 1}) == {}
    assert len(e1.entries) == 2
    # left multiplication: dx1 ^ dx2 keeps its sign, dx2 ^ dx1 = -dx1 ^ dx2
    assert e1.apply({(2,): 1}) == {(1, 2): Poly.const(1)}
    assert wedge_op(dx2).apply({(1,): 1}) == {(1, 2): Poly.const(-1)}


def test_contraction_examples():
    dx1, dx2 = unit_covector(1, 2), unit_covector(2, 2)
    assert contract_op(dx1).apply({(1, 2): 1}) == {(2,): Poly.const(1)}
    assert contract_op(dx2).apply({(1, 2): 1}) == {(1,): Poly.const(-1)}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_wedge_matches_jordan_wigner(n):
    for k in range(1, n + 1):
        ours = to_numpy(wedge_op(unit_covector(k, n)))
        assert np.array_equal(ours, jw_in_engine_basis(jw_wedge(k, n), n))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_anticommutation_and_nilpotency(n):
    xi, eta = formal_covector("xi", n), formal_covector("eta", n)
    e, i = wedge_op(xi), contract_op(eta)
    assert e @ i + i @ e == ExtOp.scalar(n, xi.dot(eta))
    assert (e @ e).is_zero()
    assert (contract_op(xi) @ contract_op(xi)).is_zero()


def test_p_properties():
    xi = formal_covector("xi", 4)
    p = p_op(xi)
    assert p == wedge_op(xi) @ contract_op(xi) * 2 - ExtOp.scalar(4, xi.norm2())
    assert p @ p == ExtOp.scalar(4, xi.norm2() ** 2)
    assert p.apply({(): 1}) == {(): -xi.norm2()}


def test_clifford_relations():
    for j in range(1, 5):
        c, cb = clifford_op(j, 4, "plain"), clifford_op(j, 4, "bar")
        assert c @ c == -ExtOp.identity(4)
        assert cb @ cb == ExtOp.identity(4)
        assert (c @ cb + cb @ c).is_zero()
    with pytest.raises(DimensionError):
        clifford_op(5, 4)
    with pytest.raises(ValueError):
        clifford_op(1, 4, "twisted")


def test_degree_shifts():
    xi = formal_covector("xi", 4)
    assert wedge_op(xi).degree_shift() == {1}
    assert contract_op(xi).degree_shift() == {-1}
    assert p_op(xi).degree_shift() == {0}


def test_graded_trace_examples():
    assert graded_trace(ExtOp.identity(4), 2) == Poly.const(6)
    xi = formal_covector("xi", 4)
    t = graded_trace(wedge_op(unit_covector(4, 4)) @ contract_op(xi.tangential()), 2)
    assert t.is_zero()
    with pytest.raises(DimensionError):
        graded_trace(ExtOp.identity(4), 5)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        wedge_op(formal_covector("xi", 3), 4)
    with pytest.raises(DimensionError):
        ExtOp.identity(3) @ ExtOp.identity(4)
    with pytest.raises(DimensionError):
        formal_covector("xi", 3).dot(formal_covector("xi", 4))
    with pytest.raises(DimensionError):
        unit_covector(0, 4)


ints = st.integers(-4, 4)
vecs = st.lists(ints, min_size=4, max_size=4)


@given(vecs, vecs, vecs, vecs, st.integers(0, 4))
def test_trace_of_product_matches_numpy(a, b, c, d, m):
    A = wedge_op(Covector(a)) @ contract_op(Covector(b))
    B = wedge_op(Covector(c)) @ contract_op(Covector(d)) + p_op(Covector(a))
    ours = trace_of_product(A, B, m)
    mask = degree_mask(4, m)
    ref = np.trace((to_numpy(A) @ to_numpy(B))[np.ix_(mask, mask)])
    assert complex(ours.constant()) == pytest.approx(ref, abs=0)
    assert ours == graded_trace(A @ B, m)


@given(vecs, vecs, st.integers(0, 4))
def test_trace_cyclicity(a, b, m):
    A, B = p_op(Covector(a)), wedge_op(Covector(b)) @ contract_op(Covector(a))
    assert trace_of_product(A, B, m) == trace_of_product(B, A, m)


@given(vecs, vecs)
def test_wedge_is_linear(a, b):
    u, v = Covector(a), Covector(b)
    assert wedge_op(u + v) == wedge_op(u) + wedge_op(v)
    assert contract_op(u.scale(3)) == contract_op(u) * 3
