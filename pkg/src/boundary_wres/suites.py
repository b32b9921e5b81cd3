"""Named exact checks, grouped into suites.

Each check returns a :class:`CheckResult`; nothing here raises on failure, so
a driver can report every check and decide the exit status afterwards.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exterior import (
    ExtOp,
    clifford_op,
    contract_op,
    formal_covector,
    p_op,
    wedge_op,
)
from .halfline import (
    decompose,
    deriv_xin,
    integrate_line,
    pi_minus,
    pi_plus,
)
from .residue import (
    H1,
    N,
    TANGENTIAL,
    XIN,
    dx_sigma_L,
    dxn_sigma_L,
    projection_chain,
    sigma1_composition,
    sigma1_d_delta,
    sigma1_delta_d,
    sigma_L,
    sigma_minus1_F,
)
from .scalars import GaussRational, Poly
from .sphere import ExactScalar, integrate_poly
from .symbols import RadialRational, SphereRational
from .traces import (
    a2_closed_form_holds,
    brute_force_constants,
    closed_form_constants,
    normal_mixed_trace,
    pq_constants,
    recursion_holds,
    full_normal_derivative_trace,
    zero_mixed_trace,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    exact: str = ""
    float_value: float | None = None
    rel_err: float | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "exact": self.exact,
            "float": self.float_value,
            "rel_err": self.rel_err,
        }


@dataclass
class SuiteResult:
    name: str
    results: list[CheckResult]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]


def _run(name: str, checks: list[tuple[str, Callable[[], tuple[bool, str]]]]) -> SuiteResult:
    start = time.perf_counter()
    out = []
    for label, fn in checks:
        try:
            ok, exact = fn()
        except Exception as exc:  # a raised identity violation is a failed check
            ok, exact = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(label, bool(ok), exact))
    return SuiteResult(name, out, time.perf_counter() - start)


# ---------------------------------------------------------------- exterior

def _anticommutation(n: int):
    xi, eta = formal_covector("xi", n), formal_covector("eta", n)
    lhs = wedge_op(xi) @ contract_op(eta) + contract_op(eta) @ wedge_op(xi)
    return lhs == ExtOp.scalar(n, xi.dot(eta)), "eps(xi)iota(eta) + iota(eta)eps(xi) = <xi,eta> I"


def _p_expansion():
    eta = formal_covector("eta", N)
    rhs = wedge_op(eta) @ contract_op(eta) * 2 - ExtOp.scalar(N, eta.norm2())
    return p_op(eta) == rhs, "p(eta) = 2 eps(eta)iota(eta) - |eta|^2 I"


def _p_squared():
    xi = formal_covector("xi", N)
    return p_op(xi) @ p_op(xi) == ExtOp.scalar(N, xi.norm2() ** 2), "p(xi)^2 = |xi|^4 I"


def _nilpotent():
    xi = formal_covector("xi", N)
    e, i = wedge_op(xi), contract_op(xi)
    return (e @ e).is_zero() and (i @ i).is_zero(), "eps^2 = iota^2 = 0"


def _clifford_squares():
    c, cb = clifford_op(1, N, "plain"), clifford_op(1, N, "bar")
    ident = ExtOp.identity(N)
    ok = c @ c == -ident and cb @ cb == ident and (c @ cb + cb @ c).is_zero()
    return ok, "c^2 = -I, cbar^2 = I, c cbar + cbar c = 0"


def _zero_trace():
    t = zero_mixed_trace(N)
    return t.is_zero(), str(t) if not t.is_zero() else "0"


def exterior_suite() -> SuiteResult:
    return _run("exterior", [
        ("anticommutation_n4", lambda: _anticommutation(4)),
        ("anticommutation_n5", lambda: _anticommutation(5)),
        ("p_expansion", _p_expansion),
        ("p_squared", _p_squared),
        ("nilpotent", _nilpotent),
        ("clifford_squares", _clifford_squares),
        ("normal_tangential_trace_zero", _zero_trace),
    ])


# ---------------------------------------------------------------- trace identities

def _recursion(n: int):
    return all(recursion_holds(n, m) for m in (1, 2, 3)), f"n={n}, m=1..3"


def _a2_closed(n: int):
    return a2_closed_form_holds(n), f"n={n}"


def _normal_mixed():
    xi, eta = formal_covector("xi", N), formal_covector("eta", N)
    expected = eta.normal * xi.tangential().dot(eta) * 2
    got = normal_mixed_trace(N)
    return got == expected, "2 eta_n <xi', eta'>"


def _constants():
    c = pq_constants(4, 2)
    ok = (c.a, c.b) == (Fraction(8), Fraction(-2))
    ok &= closed_form_constants(4, 2) == brute_force_constants(4, 2)
    return ok, f"a={c.a}, b={c.b}"


def _full_trace():
    rep = full_normal_derivative_trace(N, 2, H1)
    return rep.cross_coefficient == 8 and rep.split_identity, f"cross coefficient {rep.cross_coefficient}"


def trace_suite() -> SuiteResult:
    return _run("traces", [
        ("recursion_n4", lambda: _recursion(4)),
        ("recursion_n5", lambda: _recursion(5)),
        ("a2_closed_form_n4", lambda: _a2_closed(4)),
        ("a2_closed_form_n5", lambda: _a2_closed(5)),
        ("normal_mixed_trace", _normal_mixed),
        ("pq_constants_4_2", _constants),
        ("full_normal_derivative_trace", _full_trace),
    ])


# ---------------------------------------------------------------- half line

_T = Poly.var(XIN)


def _sr(num, k: int) -> SphereRational:
    return SphereRational(Poly.coerce(num), k, XIN)


def _sample() -> SphereRational:
    return _sr(_T**3 - _T * 2 + 5, 3)


def _round_trip():
    s = _sample()
    return decompose(s).recombine().equals(s), "(t^3 - 2t + 5)/(t^2+1)^3"


def _projections():
    h = decompose(_sample())
    idem = pi_plus(pi_plus(h)).equals(pi_plus(h))
    comp = (pi_plus(h) + pi_minus(h)).equals(h)
    return idem and comp, "pi+ pi+ = pi+, pi+ + pi- = id"


def _pi_plus_value():
    got = pi_plus(decompose(_sr(1, 1))).recombine()
    # 1/(2(1 - i t)) = (1 + i t) / (2 (t^2 + 1))
    expected = _sr(Poly.const(GaussRational(Fraction(1, 2))) + _T * GaussRational(0, Fraction(1, 2)), 1)
    return got.equals(expected), "pi+[1/(t^2+1)] = 1/(2(1 - i t))"


def _line_values():
    a = integrate_line(decompose(_sr(1, 1)))
    b = integrate_line(decompose(_sr(1, 2)))
    ok = a == Poly.const(1) and b == Poly.const(Fraction(1, 2))
    return ok, f"{a.constant()} pi, {b.constant()} pi"


def _same_side_vanishing():
    f, g = decompose(_sr(_T + 3, 2)), decompose(_sr(_T**2 - 1, 2))
    pp = integrate_line(_product(pi_plus(f), pi_plus(g)))
    mm = integrate_line(_product(pi_minus(f), pi_minus(g)))
    return pp.is_zero() and mm.is_zero(), "int pi+f pi+g = int pi-f pi-g = 0"


def _product(a, b):
    ra, rb = a.recombine(), b.recombine()
    return decompose(SphereRational(ra.num * rb.num, ra.k + rb.k, XIN))


def _by_parts():
    f, g = decompose(_sr(_T + 3, 2)), decompose(_sr(_T**2 - 1, 2))
    lhs = integrate_line(_product(deriv_xin(f), g))
    rhs = -integrate_line(_product(f, deriv_xin(g)))
    return lhs == rhs, f"{lhs.constant()} pi"


def halfline_suite() -> SuiteResult:
    return _run("halfline", [
        ("partial_fraction_round_trip", _round_trip),
        ("projection_idempotent_complementary", _projections),
        ("projection_of_lorentzian", _pi_plus_value),
        ("line_integrals", _line_values),
        ("same_side_products_vanish", _same_side_vanishing),
        ("integration_by_parts", _by_parts),
    ])


# ---------------------------------------------------------------- sphere

def _x(i):
    return Poly.var(TANGENTIAL[i])


def _sphere_values():
    one = integrate_poly(Poly.const(1), TANGENTIAL)
    x1 = integrate_poly(_x(0) ** 2, TANGENTIAL)
    x12 = integrate_poly(_x(0) ** 2 * _x(1) ** 2, TANGENTIAL)
    ok = (one == ExactScalar.monomial(4, 1) and x1 == ExactScalar.monomial(Fraction(4, 3), 1)
          and x12 == ExactScalar.monomial(Fraction(4, 15), 1))
    return ok, f"{one}; {x1}; {x12}"


def _odd_vanishing():
    polys = [_x(0), _x(0) * _x(1), _x(0) ** 3 * _x(2) ** 2, _x(0) * _x(1) * _x(2)]
    return all(integrate_poly(p, TANGENTIAL).is_zero() for p in polys), "0"


def _norm_consistency():
    r2 = _x(0) ** 2 + _x(1) ** 2 + _x(2) ** 2
    one = integrate_poly(Poly.const(1), TANGENTIAL)
    return all(integrate_poly(r2**k, TANGENTIAL) == one for k in (1, 2, 3)), str(one)


def sphere_suite() -> SuiteResult:
    return _run("sphere", [
        ("odd_monomials_vanish", _odd_vanishing),
        ("monomial_values", _sphere_values),
        ("unit_norm_consistency", _norm_consistency),
    ])


# ---------------------------------------------------------------- symbols

def _involution():
    sq = sigma_L() @ sigma_L()
    return sq.equals(RadialRational(ExtOp.identity(N), 0, 0)), "sigma_L^2 = I"


def _tangential_jets():
    return all(dx_sigma_L(i).is_zero() for i in range(1, N)), "0"


def _normal_jet():
    return dx_sigma_L(N).equals(dxn_sigma_L()), "Leibniz through jets = closed form"


def _composition():
    ok = sigma1_composition("d") == sigma1_d_delta() and sigma1_composition("delta") == sigma1_delta_d()
    return ok, "composition route = closed-form subleading symbols"


def _subleading():
    s = sigma_minus1_F()
    divisible = all(dict(m).get(H1, 0) >= 1 for e in s.num.entries.values() for m in e.terms)
    return divisible and s.degree == -1, f"homogeneity {s.degree}"


def symbol_suite() -> SuiteResult:
    return _run("symbols", [
        ("leading_symbol_involution", _involution),
        ("tangential_jets_vanish", _tangential_jets),
        ("normal_jet_matches_formula", _normal_jet),
        ("subleading_composition_route", _composition),
        ("order_minus_one_h1_divisible", _subleading),
    ])


# ---------------------------------------------------------------- chain

def _chain_step(name: str):
    return projection_chain().steps[name], "exact on the product of unit spheres"


def chain_suite() -> SuiteResult:
    names = ("projection_split", "integration_by_parts", "plus_plus_vanishing")
    return _run("projection_chain", [(n, (lambda n=n: _chain_step(n))) for n in names])


IDENTITY_SUITES = {
    "exterior": exterior_suite,
    "traces": trace_suite,
    "halfline": halfline_suite,
    "sphere": sphere_suite,
    "symbols": symbol_suite,
    "projection_chain": chain_suite,
}


def run_identity_suites() -> list[SuiteResult]:
    return [IDENTITY_SUITES[k]() for k in sorted(IDENTITY_SUITES)]
