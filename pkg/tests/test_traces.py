from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundary_wres.exterior import Covector, formal_covector
from boundary_wres.traces import (
    IdentityViolation,
    TraceConstants,
    a2_closed_form_holds,
    a_m_trace,
    alternating_coeff,
    brute_force_constants,
    closed_form_constants,
    normal_mixed_trace,
    pq_constants,
    recursion_holds,
    full_normal_derivative_trace,
    zero_mixed_trace,
)

from _numeric import jw_wedge


def jw_a_m(n, m, x1, x2, y1, y2):
    eps = [jw_wedge(k, n) for k in range(1, n + 1)]
    E = lambda v: sum(c * e for c, e in zip(v, eps))  # noqa: E731
    Iota = lambda v: E(v).T  # noqa: E731
    prod = E(x1) @ Iota(x2) @ E(y1) @ Iota(y2)
    degs = np.array([bin(b).count("1") for b in range(2**n)])
    return np.trace(prod[np.ix_(degs == m, degs == m)])


vec4 = st.lists(st.integers(-3, 3), min_size=4, max_size=4)


@given(vec4, vec4, vec4, vec4, st.integers(1, 4))
def test_a_m_matches_numpy(x1, x2, y1, y2, m):
    ours = a_m_trace(4, m, *(Covector(v) for v in (x1, x2, y1, y2)))
    assert complex(ours.constant()) == jw_a_m(4, m, x1, x2, y1, y2)


def test_a1_formula():
    x1, x2, y1, y2 = (formal_covector(p, 4) for p in "abcd")
    assert a_m_trace(4, 1, x1, x2, y1, y2) == y2.dot(x1) * x2.dot(y1)
    with pytest.raises(ValueError):
        a_m_trace(4, 0, x1, x2, y1, y2)


def test_alternating_coefficients():
    assert [alternating_coeff(4, m) for m in range(3)] == [1, 3, 3]
    with pytest.raises(ValueError):
        alternating_coeff(4, 5)


@pytest.mark.parametrize("n", [4, 5])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_recursion(n, m):
    assert recursion_holds(n, m)


@pytest.mark.parametrize("n", [4, 5])
def test_a2_closed_form(n):
    assert a2_closed_form_holds(n)


def test_normal_mixed_trace_value():
    xi, eta = formal_covector("xi", 4), formal_covector("eta", 4)
    assert normal_mixed_trace(4) == eta.normal * xi.tangential().dot(eta) * 2
    assert zero_mixed_trace(4).is_zero()


def test_constants_4_2():
    c = pq_constants(4, 2)
    assert (c.a, c.b) == (8, -2)
    assert comb(4, 2) - c.a == c.b


@pytest.mark.parametrize("n", [4, 5, 6])
def test_closed_form_agrees_with_brute_force(n):
    for m in range(0, n + 1):
        assert closed_form_constants(n, m) == brute_force_constants(n, m)


def test_constants_invariant_enforced():
    with pytest.raises(IdentityViolation):
        TraceConstants(4, 2, Fraction(8), Fraction(1))


def test_full_normal_derivative_trace():
    rep = full_normal_derivative_trace(4, 2)
    assert rep.cross_coefficient == 8
    assert rep.split_identity
    assert rep.lhs == rep.rhs
    no_normal = rep.lhs.subs({"xi4": 0})
    assert no_normal == rep.rhs.subs({"xi4": 0})
    assert all(dict(m).get("xi4", 0) == 0 for m in no_normal.terms)


def test_full_trace_numeric_spot_check():
    """Evaluate the normal-derivative trace with numpy at one point."""
    rep = full_normal_derivative_trace(4, 2)
    point = {"xi1": 1, "xi2": -2, "xi3": 3, "xi4": 2, "eta1": 2, "eta2": 1, "eta3": -1, "eta4": 3, "h1": 1}
    eps = [jw_wedge(k, 4) for k in range(1, 5)]
    xi = np.array([point[f"xi{i}"] for i in range(1, 5)], float)
    eta = np.array([point[f"eta{i}"] for i in range(1, 5)], float)
    xt = xi.copy()
    xt[3] = 0
    E = lambda v: sum(c * e for c, e in zip(v, eps))  # noqa: E731
    dp = E(xi) @ E(xt).T - E(xt).T @ E(xi)
    p_eta = E(eta) @ E(eta).T - E(eta).T @ E(eta)
    degs = np.array([bin(b).count("1") for b in range(16)])
    ref = np.trace((dp @ p_eta)[np.ix_(degs == 2, degs == 2)])
    assert complex(rep.lhs.subs(point).constant()) == ref
