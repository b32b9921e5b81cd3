"""Graded traces of products of wedge and contraction operators.

Brute-force traces over formal covectors are compared against the closed
forms for the constants ``a_{n,m}``, ``b_{n,m}`` and the recursion between
the four-slot traces ``a_m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exterior import (
    Covector,
    contract_op,
    formal_covector,
    graded_trace,
    p_op,
    trace_of_product,
    unit_covector,
    wedge_op,
)
from .scalars import Poly, to_fraction


class IdentityViolation(AssertionError):
    """A trace or symbol identity that must hold exactly did not."""


def _C(n: int, m: int) -> int:
    return comb(n, m) if 0 <= m <= n else 0


@dataclass(frozen=True)
class TraceConstants:
    n: int
    m: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if comb(self.n, self.m) - self.a != self.b:
            raise IdentityViolation(f"C({self.n},{self.m}) - a != b for {self}")


def a_m_trace(n: int, m: int, xi1: Covector, xi2: Covector, eta1: Covector, eta2: Covector) -> Poly:
    """trace over degree-m forms of eps(xi1) iota(xi2) eps(eta1) iota(eta2)."""
    if not 1 <= m <= n:
        raise ValueError(f"degree {m} out of range 1..{n}")
    left = wedge_op(xi1, n) @ contract_op(xi2, n)
    right = wedge_op(eta1, n) @ contract_op(eta2, n)
    return trace_of_product(left, right, m)


def alternating_coeff(n: int, m: int) -> int:
    """C(n,m) - C(n,m-1) + ... + (-1)^m C(n,0)."""
    if not 0 <= m <= n:
        raise ValueError(f"m={m} out of range 0..{n}")
    return sum((-1) ** j * comb(n, m - j) for j in range(m + 1))


def closed_form_constants(n: int, m: int) -> TraceConstants:
    b = _C(n - 2, m - 2) + _C(n - 2, m) - 2 * _C(n - 2, m - 1)
    return TraceConstants(n, m, Fraction(comb(n, m) - b), Fraction(b))


def brute_force_constants(n: int, m: int) -> TraceConstants:
    """Fit trace(p(xi) p(eta)) on degree-m forms to a<xi,eta>^2 + b|xi|^2|eta|^2."""
    if n < 2:
        raise ValueError("need n >= 2 to separate the two invariants")
    xi, eta = formal_covector("xi", n), formal_covector("eta", n)
    tr = trace_of_product(p_op(xi), p_op(eta), m)
    x1, x2, y1, y2 = (Poly.var(v) for v in ("xi1", "xi2", "eta1", "eta2"))
    mono_b = (x1 * x1 * y2 * y2)
    mono_a = (x1 * x2 * y1 * y2)
    b = tr.terms.get(next(iter(mono_b.terms)), None)
    a2 = tr.terms.get(next(iter(mono_a.terms)), None)
    b = to_fraction(b.re) if b is not None else Fraction(0)
    a = to_fraction(a2.re) / 2 if a2 is not None else Fraction(0)
    fitted = xi.dot(eta) ** 2 * a + xi.norm2() * eta.norm2() * b
    if fitted != tr:
        raise IdentityViolation(f"trace(p p) on degree {m} is not of the form a<,>^2 + b||^2||^2")
    return TraceConstants(n, m, a, b)


def pq_constants(n: int, m: int) -> TraceConstants:
    """Closed-form constants, confirmed by an exact brute-force trace."""
    formula = closed_form_constants(n, m)
    brute = brute_force_constants(n, m)
    if formula != brute:
        raise IdentityViolation(f"closed form {formula} disagrees with brute force {brute}")
    return formula


def recursion_holds(n: int, m: int) -> bool:
    """a_{m+1}(eta1, xi2, xi1, eta2) = a_m(xi1, xi2, eta1, eta2) + <xi1,xi2><eta1,eta2>[2A - C]."""
    x1, x2 = formal_covector("u", n), formal_covector("v", n)
    y1, y2 = formal_covector("w", n), formal_covector("z", n)
    lhs = a_m_trace(n, m + 1, y1, x2, x1, y2)
    rhs = a_m_trace(n, m, x1, x2, y1, y2) + x1.dot(x2) * y1.dot(y2) * (
        2 * alternating_coeff(n, m) - comb(n, m))
    return lhs == rhs


def a2_closed_form_holds(n: int) -> bool:
    """a_2(eta1, xi2, xi1, eta2) = <eta2,xi1><xi2,eta1> + <xi1,xi2><eta1,eta2>[2A_{n,1} - n]."""
    x1, x2 = formal_covector("u", n), formal_covector("v", n)
    y1, y2 = formal_covector("w", n), formal_covector("z", n)
    lhs = a_m_trace(n, 2, y1, x2, x1, y2)
    rhs = y2.dot(x1) * x2.dot(y1) + x1.dot(x2) * y1.dot(y2) * (2 * alternating_coeff(n, 1) - n)
    return lhs == rhs


def normal_mixed_trace(n: int = 4) -> Poly:
    """trace_2[eps(dx_n) iota(xi') eps(eta) iota(eta)]."""
    xi, eta = formal_covector("xi", n), formal_covector("eta", n)
    return a_m_trace(n, 2, unit_covector(n, n), xi.tangential(), eta, eta)


def zero_mixed_trace(n: int = 4) -> Poly:
    """trace_2[eps(dx_n) iota(xi')], which vanishes."""
    xi = formal_covector("xi", n)
    return graded_trace(wedge_op(unit_covector(n, n)) @ contract_op(xi.tangential()), 2)


@dataclass
class NormalDerivativeTraceReport:
    lhs: Poly
    rhs: Poly
    cross_coefficient: Fraction
    constants: TraceConstants
    split_identity: bool


def full_normal_derivative_trace(n: int = 4, m: int = 2, h1: str = "h1") -> NormalDerivativeTraceReport:
    """trace_m{[d/dx_n p(xi)](x0) p(eta)} against its closed form.

    The normal derivative uses d/dx_n iota(xi) = h1 iota(xi') and d eps = 0.
    """
    xi, eta = formal_covector("xi", n), formal_covector("eta", n)
    hp = Poly.var(h1)
    xt = xi.tangential()
    dn = unit_covector(n, n)
    dp = (wedge_op(xi) @ contract_op(xt) - contract_op(xt) @ wedge_op(xi)) * hp
    # splitting eps(xi) = eps(xi') + xi_n eps(dx_n)
    B = (wedge_op(dn) @ contract_op(xt) - contract_op(xt) @ wedge_op(dn)) * hp
    split = dp == p_op(xt) * hp + B * xi.normal
    if not split:
        raise IdentityViolation("d/dx_n p(xi) != h1 p(xi',0) + xi_n B")
    if (wedge_op(dn) @ contract_op(xt) - contract_op(xt) @ wedge_op(dn)) != (
            wedge_op(dn) @ contract_op(xt)) * 2:
        raise IdentityViolation("eps(dx_n)iota(xi') - iota(xi')eps(dx_n) != 2 eps(dx_n)iota(xi')")
    lhs = trace_of_product(dp, p_op(eta), m)
    consts = pq_constants(n, m)
    ip = xt.dot(eta)  # <xi', eta'>
    rhs_base = (ip * ip * consts.a + xt.norm2() * eta.norm2() * consts.b) * hp
    cross = lhs - rhs_base
    probe = hp * xi.normal * eta.normal * ip
    # the remainder must be an exact multiple of h1 xi_n eta_n <xi',eta'>
    coeff = Fraction(0)
    key = next(iter((hp * Poly.var(f"xi{n}") * Poly.var(f"eta{n}") * Poly.var("xi1") * Poly.var("eta1")).terms))
    if key in cross.terms:
        coeff = to_fraction(cross.terms[key].re)
    if cross != probe * coeff:
        raise IdentityViolation("remainder of the trace is not a multiple of h1 xi_n eta_n <xi',eta'>")
    return NormalDerivativeTraceReport(lhs, rhs_base + probe * coeff, coeff, consts, split)
