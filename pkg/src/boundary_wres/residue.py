"""Boundary symbols at x0 and the case integrals of the boundary form Omega_3.

Everything is evaluated at a boundary point in normal coordinates of a
4-manifold with metric ``h(x_n)^-1 g_boundary + dx_n^2``. The metric jet
``h1 = h'(0)`` is a formal polynomial variable, so linearity in ``h1`` is a
polynomial identity rather than a sampled property.

x-derivatives enter only through :func:`x_jet`; anything outside that
dictionary raises :class:`UnsupportedJetError`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator

from .exterior import (
    ExtOp,
    clifford_op,
    contract_op,
    formal_covector,
    p_op,
    unit_covector,
    wedge_op,
)
from .halfline import (
    HalfDecomp,
    decompose,
    deriv_xin,
    pi_minus,
    pi_plus,
    trace_line_integral,
)
from .scalars import I, GaussRational, Poly
from .sphere import ExactScalar, integrate_poly, multi_indices, reduce_on_sphere
from .symbols import RadialRational, norm2, restrict_sphere, xi_names
from .traces import IdentityViolation

N = 4
FORM_DEGREE = N // 2
XI = xi_names(N)
TANGENTIAL = XI[:-1]
XIN = XI[-1]
ETA_TANGENTIAL = tuple(f"eta{i}" for i in range(1, N))
H1 = "h1"


class UnsupportedJetError(NotImplementedError):
    pass


@dataclass(frozen=True)
class MetricJet:
    """Normalisation h(0) = 1 and the formal first jet h'(0)."""

    h0: int = 1
    h1: str = H1

    def __post_init__(self):
        if self.h0 != 1:
            raise ValueError("h(0) is normalised to 1")

    @property
    def h1_poly(self) -> Poly:
        return Poly.var(self.h1)


JET = MetricJet()


def _xi():
    return formal_covector("xi", N)


def _h1() -> Poly:
    return JET.h1_poly


def x_jet(quantity: str, direction: int, order: int = 1):
    """First x-derivative at x0 of a primitive quantity.

    ``eps``: eps(xi) has metric-independent entries, derivative 0.
    ``iota``: d/dx_n iota(xi) = h1 iota(xi'), tangential derivatives vanish.
    ``norm2``: d/dx_n |xi|^2 = h1 |xi'|^2, tangential derivatives vanish.
    """
    if order != 1:
        raise UnsupportedJetError(f"order-{order} metric jets are not available")
    if not 1 <= direction <= N:
        raise ValueError(f"direction {direction} out of range")
    normal = direction == N
    if quantity == "eps":
        return ExtOp.zero(N)
    if quantity == "iota":
        return contract_op(_xi().tangential()) * _h1() if normal else ExtOp.zero(N)
    if quantity == "norm2":
        return norm2(N, tangential_only=True) * _h1() if normal else Poly()
    raise UnsupportedJetError(f"no jet rule for {quantity!r}")


# ---------------------------------------------------------------- symbols

@lru_cache(maxsize=None)
def sigma_L() -> RadialRational:
    """Leading symbol p(xi)/|xi|^2 of (d delta - delta d)/(d delta + delta d)."""
    return RadialRational(p_op(_xi()), 1, 0)


@lru_cache(maxsize=None)
def dx_sigma_L(direction: int) -> RadialRational:
    """x-derivative of sigma_L at x0 by Leibniz through the jet dictionary."""
    xi = _xi()
    e, i = wedge_op(xi), contract_op(xi)
    de, di = x_jet("eps", direction), x_jet("iota", direction)
    dnorm = x_jet("norm2", direction)
    dp = de @ i + e @ di - di @ e - i @ de
    first = RadialRational(dp, 1, 0)
    second = RadialRational(p_op(xi) * dnorm, 2, 0) if dnorm else RadialRational.zero(N, 0)
    return first - second


@lru_cache(maxsize=None)
def dxn_sigma_L() -> RadialRational:
    """h1[eps(xi)iota(xi') - iota(xi')eps(xi)]/|xi|^2 - h1|xi'|^2 p(xi)/|xi|^4."""
    xi = _xi()
    xt = xi.tangential()
    h = _h1()
    a = (wedge_op(xi) @ contract_op(xt) - contract_op(xt) @ wedge_op(xi)) * h
    b = p_op(xi) * (norm2(N, tangential_only=True) * h)
    return RadialRational(a, 1, 0) - RadialRational(b, 2, 0)


def _clifford_pair(i: int) -> ExtOp:
    """cbar(e_n)cbar(e_i) - c(e_n)c(e_i)."""
    return (clifford_op(N, N, "bar") @ clifford_op(i, N, "bar")
            - clifford_op(N, N, "plain") @ clifford_op(i, N, "plain"))


@lru_cache(maxsize=None)
def sigma0_d() -> ExtOp:
    out = ExtOp.zero(N)
    for i in range(1, N):
        out = out + wedge_op(unit_covector(i, N)) @ _clifford_pair(i)
    return out * (_h1() * GaussRational(Fraction(1, 4)))


@lru_cache(maxsize=None)
def sigma0_delta() -> ExtOp:
    out = ExtOp.zero(N)
    for i in range(1, N):
        out = out + contract_op(unit_covector(i, N)) @ _clifford_pair(i)
    return out * (_h1() * GaussRational(Fraction(-1, 4)))


@lru_cache(maxsize=None)
def sigma1_d_delta() -> ExtOp:
    """Subleading symbol of d delta at x0, closed form."""
    xi = _xi()
    return (wedge_op(xi) @ sigma0_delta() * I
            - sigma0_d() @ contract_op(xi) * I
            - wedge_op(unit_covector(N, N)) @ contract_op(xi.tangential()) * (_h1() * I))


@lru_cache(maxsize=None)
def sigma1_delta_d() -> ExtOp:
    """Subleading symbol of delta d at x0, closed form."""
    xi = _xi()
    return -(contract_op(xi) @ sigma0_d() * I) + sigma0_delta() @ wedge_op(xi) * I


def sigma1_composition(outer: str) -> ExtOp:
    """Subleading symbol of a product via the composition formula and jets.

    ``outer='d'`` gives d delta, ``outer='delta'`` gives delta d:
    s1(PQ) = s1(P)s0(Q) + s0(P)s1(Q) - i sum_i d_xi_i s1(P) d_x_i s1(Q).
    """
    xi = _xi()
    s1 = {"d": wedge_op(xi) * I, "delta": -(contract_op(xi) * I)}
    s0 = {"d": sigma0_d(), "delta": sigma0_delta()}
    jet_names = {"d": "eps", "delta": "iota"}
    P, Q = ("d", "delta") if outer == "d" else ("delta", "d")
    out = s1[P] @ s0[Q] + s0[P] @ s1[Q]
    sign = {"d": I, "delta": -I}
    for direction in range(1, N + 1):
        dxi_P = s1[P].deriv(XI[direction - 1])
        dx_Q = x_jet(jet_names[Q], direction) * sign[Q]
        out = out - dxi_P @ dx_Q * I
    return out


@lru_cache(maxsize=None)
def sigma1_A() -> RadialRational:
    return RadialRational(sigma1_d_delta() - sigma1_delta_d(), 0, 1)


@lru_cache(maxsize=None)
def sigma1_Delta() -> RadialRational:
    return RadialRational(sigma1_d_delta() + sigma1_delta_d(), 0, 1)


@lru_cache(maxsize=None)
def sigma_minus3_LapInv() -> RadialRational:
    """-s1(Delta)/|xi|^4 - 2i h1 |xi'|^2 xi_n / |xi|^6."""
    scalar = norm2(N, tangential_only=True) * Poly.var(XIN) * (_h1() * (I * -2))
    return (-sigma1_Delta()).over_norm2(2) + RadialRational(ExtOp.scalar(N, scalar), 3, -3)


@lru_cache(maxsize=None)
def sigma_minus1_F() -> RadialRational:
    """s1(A)/|xi|^2 + p(xi) s_{-3}(Delta^-1) + i h1 |xi'|^2 d_xin p(xi) / |xi|^4."""
    p = RadialRational(p_op(_xi()), 0, 2)
    dp = p_op(_xi()).deriv(XIN) * (norm2(N, tangential_only=True) * (_h1() * I))
    return (sigma1_A().over_norm2(1)
            + p @ sigma_minus3_LapInv()
            + RadialRational(dp, 2, -1))


def symbol(order: int, normal_x: int = 0, tangential_x: tuple[int, ...] = (0,) * (N - 1)) -> RadialRational:
    """x-derivative of the order-``order`` symbol of F at x0."""
    tang = sum(tangential_x)
    if order == 0:
        if normal_x == 0 and tang == 0:
            return sigma_L()
        if tang == 0 and normal_x == 1:
            return dxn_sigma_L()
        if normal_x == 0 and tang == 1:
            return dx_sigma_L(tangential_x.index(1) + 1)
    if order == -1 and normal_x == 0 and tang == 0:
        return sigma_minus1_F()
    raise UnsupportedJetError(
        f"symbol of order {order} with x-derivatives (normal {normal_x}, tangential {tangential_x})")


# ---------------------------------------------------------------- cases

@dataclass(frozen=True)
class CaseIndex:
    """One term family of the boundary sum.

    ``beta_tan``/``delta_tan`` set to None mean summed over 1..-r (1..-l).
    """

    label: str
    r: int
    l: int
    k: int
    j: int
    alpha: int
    beta_tan: int | None = None
    beta_normal: int = 0
    delta_tan: int | None = None
    delta_normal: int = 0

    def __post_init__(self):
        if -(self.r + self.l) + self.alpha + self.k + self.j != N - 1:
            raise ValueError(f"{self}: order constraint violated")
        if self.r > -1 or self.l > -1 or min(self.k, self.j, self.alpha) < 0:
            raise ValueError(f"{self}: index out of range")
        if self.beta_tan is not None and not 1 <= self.beta_tan + self.beta_normal <= -self.r:
            raise ValueError(f"{self}: |beta| out of range")
        if self.delta_tan is not None and not 1 <= self.delta_tan + self.delta_normal <= -self.l:
            raise ValueError(f"{self}: |delta| out of range")

    @property
    def key(self) -> tuple[int, int, int, int, int]:
        return (self.r, self.l, self.k, self.j, self.alpha)


STAR_LABELS = {
    (-1, -1, 0, 0, 1): "aI",
    (-1, -1, 0, 1, 0): "aII",
    (-1, -1, 1, 0, 0): "aIII",
    (-2, -1, 0, 0, 0): "b",
    (-1, -2, 0, 0, 0): "c",
}


def _order_tuples() -> Iterator[tuple[int, int, int, int, int]]:
    budget = N - 1
    for s in range(2, budget + 1):
        for r in range(-1, -s, -1):
            l = -s - r
            if l > -1:
                continue
            rest = budget - s
            for alpha in range(rest, -1, -1):
                for k in range(0, rest - alpha + 1):
                    j = rest - alpha - k
                    yield (r, l, k, j, alpha)


def enumerate_cases(star: bool = True) -> list[CaseIndex]:
    """Star mode: the five families for x_n-independent f1, f2.

    General mode: one CaseIndex per (r, l, k, j, |alpha|, |beta'|, beta'', |delta'|, delta'').
    """
    out = []
    for r, l, k, j, alpha in _order_tuples():
        label = STAR_LABELS.get((r, l, k, j, alpha), f"r{r}l{l}k{k}j{j}a{alpha}")
        if star:
            out.append(CaseIndex(label, r, l, k, j, alpha))
            continue
        for bt, bn in _splits(-r):
            for dt, dn in _splits(-l):
                out.append(CaseIndex(f"{label}/b{bt},{bn}/d{dt},{dn}", r, l, k, j, alpha, bt, bn, dt, dn))
    order = list(STAR_LABELS.values())
    out.sort(key=lambda c: (order.index(c.label.split("/")[0]) if c.label.split("/")[0] in order else 99))
    return out


def _splits(top: int) -> list[tuple[int, int]]:
    """(tangential, normal) with 1 <= tangential + normal <= top."""
    return [(t, s - t) for s in range(1, top + 1) for t in range(s, -1, -1)]


def case_count_report(expected: int = 24) -> dict:
    """Count the general-mode terms under two counting conventions."""
    cases = enumerate_cases(star=False)
    d = N - 1
    by_multi_index = 0
    for c in cases:
        by_multi_index += (len(list(multi_indices(c.alpha, d)))
                           * len(list(multi_indices(c.beta_tan, d)))
                           * len(list(multi_indices(c.delta_tan, d))))
    counts = {"magnitude": len(cases), "multi_index": by_multi_index}
    return {
        "expected": expected,
        "counts": counts,
        "mismatch": {k: v != expected for k, v in counts.items()},
    }


def prefactor(j: int, k: int, alpha: tuple, beta: tuple, delta: tuple) -> GaussRational:
    """(-i)^(j+k+1+|alpha|+|beta|+|delta|) / (alpha! beta! delta! (j+k+1)!)."""
    e = j + k + 1 + sum(alpha) + sum(beta) + sum(delta)
    den = (prod(factorial(a) for a in alpha) * prod(factorial(b) for b in beta)
           * prod(factorial(x) for x in delta) * factorial(j + k + 1))
    return (-I) ** e * GaussRational(Fraction(1, den))


def _mi_vars(mi: tuple[int, ...]) -> tuple[str, ...]:
    return tuple(v for v, e in zip(TANGENTIAL, mi) for _ in range(e))


def _sub_indices(alpha: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if not alpha:
        yield ()
        return
    for g in range(alpha[0] + 1):
        for rest in _sub_indices(alpha[1:]):
            yield (g,) + rest


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def _xi_derived(order: int, normal_x: int, tangential_x: tuple, xi_tan: tuple, xi_normal: int) -> RadialRational:
    s = symbol(order, normal_x, tangential_x)
    if s.is_zero():
        return s
    for v in _mi_vars(xi_tan):
        s = s.deriv(v)
    for _ in range(xi_normal):
        s = s.deriv(XIN)
    return s


@lru_cache(maxsize=None)
def _projected(order: int, normal_x: int, xi_tan: tuple, k_after: int) -> HalfDecomp:
    s = _xi_derived(order, normal_x, (0,) * (N - 1), xi_tan, 0)
    h = pi_plus(decompose(restrict_sphere(s)))
    for _ in range(k_after):
        h = deriv_xin(h)
    return h


@lru_cache(maxsize=None)
def boundary_integral(first: tuple, second: tuple) -> ExactScalar:
    """int_{|xi'|=1} int_R trace_2[(d^k pi+ d^a s1) (d^b s2)] dxi_n dsigma.

    ``first = (order, normal_x, xi_tan, k_after)``;
    ``second = (order, normal_x, tangential_x, xi_tan, xi_normal)``.
    """
    s2 = _xi_derived(*second)
    if s2.is_zero():
        return ExactScalar.zero()
    h = _projected(*first)
    if h.is_zero():
        return ExactScalar.zero()
    value = trace_line_integral(h, restrict_sphere(s2), FORM_DEGREE)
    return integrate_poly(value, TANGENTIAL, H1).times_pi(1)


@dataclass
class CoeffMatrix:
    """Coefficients of d_i f1 d_j f2 (i, j tangential) contributed by one case.

    ``higher`` keeps coefficients of higher-order derivative slots
    ``(f1 multi-index, f2 multi-index)``; they are computed, not assumed zero.
    """

    entries: tuple[tuple[ExactScalar, ...], ...]
    higher: dict = field(default_factory=dict)
    degree_audit: set = field(default_factory=set)

    @classmethod
    def zero(cls) -> "CoeffMatrix":
        d = N - 1
        return cls(tuple(tuple(ExactScalar.zero() for _ in range(d)) for _ in range(d)))

    def __getitem__(self, ij) -> ExactScalar:
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: "CoeffMatrix") -> "CoeffMatrix":
        entries = tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries))
        higher = dict(self.higher)
        for k, v in other.higher.items():
            higher[k] = higher[k] + v if k in higher else v
        return CoeffMatrix(entries, higher, self.degree_audit | other.degree_audit)

    def all_entries(self) -> list[ExactScalar]:
        return [x for row in self.entries for x in row]

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.all_entries())

    def higher_vanish(self) -> bool:
        return all(v.is_zero() for v in self.higher.values())

    def h1_linear(self) -> bool:
        return all(x.h1_powers() <= {1} for x in self.all_entries())

    def pi_powers(self) -> set[int]:
        return {a for x in self.all_entries() for a, _ in x.terms}

    def is_real(self) -> bool:
        return all(x.is_real for x in self.all_entries())

    def is_symmetric(self) -> bool:
        d = N - 1
        return all(self.entries[i][j] == self.entries[j][i] for i in range(d) for j in range(d))

    def isotropy_constant(self) -> ExactScalar | None:
        """``a`` with entries == a * delta_ij, or None."""
        d = N - 1
        a = self.entries[0][0]
        for i in range(d):
            for j in range(d):
                if self.entries[i][j] != (a if i == j else ExactScalar.zero()):
                    return None
        return a

    def subs_h1(self, value) -> "CoeffMatrix":
        return CoeffMatrix(tuple(tuple(x.subs_h1(value) for x in row) for row in self.entries),
                           {k: v.subs_h1(value) for k, v in self.higher.items()}, self.degree_audit)

    def as_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.entries]


def eval_case(case: CaseIndex) -> CoeffMatrix:
    """All contributions of one star-mode family, summed exactly."""
    d = N - 1
    if case.beta_normal or case.delta_normal:
        raise UnsupportedJetError("normal derivatives of f1, f2 need higher metric jets")
    beta_orders = [case.beta_tan] if case.beta_tan is not None else range(1, -case.r + 1)
    delta_orders = [case.delta_tan] if case.delta_tan is not None else range(1, -case.l + 1)
    grad = {}
    higher: dict = {}
    audit: set = set()
    for alpha in multi_indices(case.alpha, d):
        for bt in beta_orders:
            for beta in multi_indices(bt, d):
                for dt in delta_orders:
                    for delta in multi_indices(dt, d):
                        pref = prefactor(case.j, case.k, alpha, beta, delta)
                        first = (case.r + bt, case.j, _add(alpha, beta), case.k)
                        for gamma in _sub_indices(alpha):
                            weight = prod(comb(a, g) for a, g in zip(alpha, gamma))
                            second = (case.l + dt, case.k, gamma, delta, case.j + 1)
                            slot = (beta, _add(delta, _sub(alpha, gamma)))
                            val = boundary_integral(first, second) * (pref * weight)
                            deg = _integrand_degree(first, second)
                            if deg is not None:
                                audit.add(deg)
                            if sum(slot[0]) == 1 and sum(slot[1]) == 1:
                                key = (slot[0].index(1), slot[1].index(1))
                                grad[key] = grad[key] + val if key in grad else val
                            else:
                                higher[slot] = higher[slot] + val if slot in higher else val
    entries = tuple(
        tuple(grad.get((i, j), ExactScalar.zero()).require_real(f"case {case.label} entry ({i},{j})")
              for j in range(d))
        for i in range(d))
    for slot, v in higher.items():
        v.require_real(f"case {case.label} slot {slot}")
    return CoeffMatrix(entries, higher, audit)


def _integrand_degree(first: tuple, second: tuple) -> int | None:
    """xi-homogeneity of the trace integrand before the xi_n integral."""
    order1, normal1, xi_tan1, k_after = first
    s1 = _xi_derived(order1, normal1, (0,) * (N - 1), xi_tan1, 0)
    s2 = _xi_derived(*second)
    if s1.is_zero() or s2.is_zero():
        return None
    return s1.degree - k_after + s2.degree


@dataclass
class OmegaReport:
    cases: dict[str, CoeffMatrix]
    total: CoeffMatrix
    isotropy: ExactScalar | None
    conjecture: CoeffMatrix
    flags: dict[str, bool]

    @property
    def a(self) -> Fraction | None:
        """Isotropy constant as the coefficient of pi^2 h1."""
        if self.isotropy is None:
            return None
        return self.isotropy.coefficient(2, 1) if not self.isotropy.is_zero() else Fraction(0)


def star_cases() -> list[CaseIndex]:
    return enumerate_cases(star=True)


def omega3(workers: int = 1) -> OmegaReport:
    cases = star_cases()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            mats = list(pool.map(eval_case, cases))
    else:
        mats = [eval_case(c) for c in cases]
    per_case = {c.label: m for c, m in zip(cases, mats)}
    total = CoeffMatrix.zero()
    for m in mats:
        total = total + m
    conjecture = per_case["b"] + per_case["c"]
    iso = total.isotropy_constant()
    flags = {
        "h1_linear": all(m.h1_linear() for m in mats) and total.h1_linear(),
        "real": all(m.is_real() for m in mats),
        "pi_power_2": all(m.pi_powers() <= {2} for m in mats),
        "higher_slots_vanish": all(m.higher_vanish() for m in mats),
        "degree_audit": all(m.degree_audit == {-N} for m in mats),
        "isotropic": iso is not None,
        "symmetric": total.is_symmetric(),
        "aI_zero": per_case["aI"].is_zero(),
        "total_zero": total.is_zero(),
        "conjecture_zero": conjecture.is_zero(),
    }
    return OmegaReport(per_case, total, iso, conjecture, flags)


# ---------------------------------------------------------------- projection chain

@dataclass
class ChainReport:
    values: list[Poly]
    steps: dict[str, bool]
    identified: Poly


@lru_cache(maxsize=None)
def projection_chain() -> ChainReport:
    """Four equivalent forms of int trace[d_xin pi+ s_{-1}(xi') s_L(eta')] dxi_n.

    sigma_{-1} carries xi', sigma_L carries an independent eta'; both sit on
    unit tangential spheres. Values are polynomials in xi', eta' (units of pi),
    compared as functions on the product of the two spheres.
    """
    to_eta = {x: Poly.var(e) for x, e in zip(TANGENTIAL, ETA_TANGENTIAL)}
    m = FORM_DEGREE
    s_minus = restrict_sphere(sigma_minus1_F())
    ds_minus = restrict_sphere(sigma_minus1_F().deriv(XIN))
    s_L = restrict_sphere(sigma_L()).subs(to_eta)
    ds_L = restrict_sphere(sigma_L().deriv(XIN)).subs(to_eta)
    dec = decompose(s_minus)
    dec_L = decompose(s_L)

    v0 = trace_line_integral(deriv_xin(pi_plus(dec)), s_L, m)
    v1 = (trace_line_integral(ds_minus, s_L, m)
          - trace_line_integral(deriv_xin(pi_minus(dec)), s_L, m))
    v2 = (-trace_line_integral(s_minus, ds_L, m)
          - trace_line_integral(pi_plus(dec_L), deriv_xin(pi_minus(dec)), m))
    v3 = (-trace_line_integral(s_minus, ds_L, m)
          - trace_line_integral(pi_plus(dec_L), ds_minus, m))
    def on_spheres(v: Poly) -> Poly:
        return reduce_on_sphere(reduce_on_sphere(v, TANGENTIAL), ETA_TANGENTIAL)

    r0, r1, r2, r3 = (on_spheres(v) for v in (v0, v1, v2, v3))
    steps = {
        "projection_split": r0 == r1,
        "integration_by_parts": r1 == r2,
        "plus_plus_vanishing": r2 == r3,
    }
    back = {e: Poly.var(x) for x, e in zip(TANGENTIAL, ETA_TANGENTIAL)}
    return ChainReport([v0, v1, v2, v3], steps, v0.subs(back))


def require_chain() -> ChainReport:
    rep = projection_chain()
    for name, ok in rep.steps.items():
        if not ok:
            raise IdentityViolation(f"projection chain step {name} fails")
    return rep


def clear_caches() -> None:
    """Drop every memoised symbol and integral (for cold-start timing)."""
    for fn in (sigma_L, dx_sigma_L, dxn_sigma_L, sigma0_d, sigma0_delta, sigma1_d_delta,
               sigma1_delta_d, sigma1_A, sigma1_Delta, sigma_minus3_LapInv, sigma_minus1_F,
               _xi_derived, _projected, boundary_integral, projection_chain):
        fn.cache_clear()
