from fractions import Fraction
from math import pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import dblquad

from boundary_wres.scalars import GaussRational, Poly
from boundary_wres.sphere import (
    ExactScalar,
    ResidualImaginaryError,
    StrayVariableError,
    integrate_monomial,
    integrate_poly,
    multi_indices,
    reduce_on_sphere,
    sphere_area,
)

V = ("xi1", "xi2", "xi3")


def numeric_s2(alpha):
    def f(phi, theta):
        x = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        return np.prod(x ** np.array(alpha)) * np.sin(theta)

    return dblquad(f, 0, np.pi, 0, 2 * np.pi, epsabs=1e-13, epsrel=1e-12)[0]


@given(st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_monomials_match_numeric_quadrature(alpha):
    ours = integrate_monomial(alpha, 3).to_float()
    assert ours == pytest.approx(numeric_s2(alpha), rel=1e-9, abs=1e-11)


def test_known_values():
    assert integrate_monomial([0, 0, 0], 3) == ExactScalar.monomial(4, 1)
    assert integrate_monomial([2, 0, 0], 3) == ExactScalar.monomial(Fraction(4, 3), 1)
    assert integrate_monomial([2, 2, 0], 3) == ExactScalar.monomial(Fraction(4, 15), 1)
    assert sphere_area(2) == ExactScalar.monomial(2, 1)
    assert sphere_area(4) == ExactScalar.monomial(2, 2)


@given(st.lists(st.integers(0, 5), min_size=3, max_size=3).filter(lambda a: any(x % 2 for x in a)))
def test_odd_monomials_vanish(alpha):
    assert integrate_monomial(alpha, 3).is_zero()


@given(st.integers(0, 4))
def test_unit_norm_consistency(k):
    r2 = sum((Poly.var(v) ** 2 for v in V), Poly())
    assert integrate_poly(r2**k, V) == sphere_area(3)


def test_h1_is_carried_and_others_rejected():
    p = Poly.var("xi1") ** 2 * Poly.var("h1")
    assert integrate_poly(p, V) == ExactScalar.monomial(Fraction(4, 3), 1, 1)
    with pytest.raises(StrayVariableError):
        integrate_poly(Poly.var("eta1"), V)
    with pytest.raises(ValueError):
        integrate_monomial([0], 1)
    with pytest.raises(ValueError):
        integrate_monomial([0, 0], 3)


def test_exact_scalar_arithmetic_and_format():
    a = ExactScalar.monomial(Fraction(-7, 3), 2, 1)
    b = ExactScalar.monomial(2, 2, 1)
    assert str(a) == "-7/3 · pi^2 · h1^1"
    assert (a + b).q == GaussRational(Fraction(-1, 3))
    assert (a - a).is_zero()
    assert (a * b).pi_pow == 4 and (a * b).h1_pow == 2
    assert a.subs_h1(3) == ExactScalar.monomial(-7, 2, 0)
    assert a.to_float(h1=2.0) == pytest.approx(-14 / 3 * pi**2)
    assert a.coefficient(2, 1) == Fraction(-7, 3)
    assert a.times_pi().pi_pow == 3


def test_require_real():
    z = ExactScalar.monomial(GaussRational(1, 1), 2, 1)
    with pytest.raises(ResidualImaginaryError):
        z.require_real()
    with pytest.raises(ResidualImaginaryError):
        z.coefficient(2, 1)
    assert ExactScalar.monomial(3).require_real().is_real


@st.composite
def sphere_polys(draw):
    p = Poly()
    for _ in range(draw(st.integers(1, 4))):
        mono = Poly.const(draw(st.integers(-4, 4)))
        for v in V:
            mono = mono * Poly.var(v) ** draw(st.integers(0, 4))
        p = p + mono
    return p


@given(sphere_polys(), st.floats(0.1, 3.0), st.floats(0, 6.2))
def test_reduction_agrees_on_sphere(p, theta, phi):
    x = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    point = dict(zip(V, x))

    def ev(q):
        return sum(complex(c) * np.prod([point[v] ** e for v, e in m]) for m, c in q.terms.items())

    r = reduce_on_sphere(p, V)
    assert ev(r) == pytest.approx(ev(p), rel=1e-9, abs=1e-9)
    assert max(r.degree_in(["xi3"]), default=0) <= 1
    assert integrate_poly(r, V) == integrate_poly(p, V)


def test_multi_indices():
    assert list(multi_indices(1, 3)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert len(list(multi_indices(2, 3))) == 6
    assert list(multi_indices(0, 3)) == [(0, 0, 0)]
