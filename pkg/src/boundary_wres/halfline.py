"""Partial fractions in xi_n, the half-line projections and line integrals.

Every symbol restricted to the unit tangential sphere has denominator
``(xi_n^2 + 1)^k``, so it splits as

    c0 + sum_k A_k / (xi_n - i)^k + sum_k B_k / (xi_n + i)^k

over Q(i). ``pi_plus`` keeps the ``B`` terms (poles at ``-i``, holomorphic in
the upper half-plane); ``pi_minus = id - pi_plus``. Coefficients may be
ExtOps or scalar Polys; the code only relies on ``+``, scalar ``*`` and
``powers_of``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .exterior import trace_of_product
from .scalars import I, GaussRational, Poly
from .symbols import SphereRational


class UnboundedSymbolError(ValueError):
    pass


class DivergentIntegralError(ValueError):
    pass


def _zero_like(c):
    return c * 0


def _is_zero(c) -> bool:
    return c.is_zero()


def _drop_zero(d: dict) -> dict:
    return {k: v for k, v in d.items() if not _is_zero(v)}


@dataclass
class HalfDecomp:
    c0: object
    plus: dict = field(default_factory=dict)   # order -> B_k, term B_k / (xi_n + i)^k
    minus: dict = field(default_factory=dict)  # order -> A_k, term A_k / (xi_n - i)^k
    xin: str = "xi4"

    def __post_init__(self):
        self.plus = _drop_zero(self.plus)
        self.minus = _drop_zero(self.minus)

    def _combine(self, other: "HalfDecomp", sign: int) -> "HalfDecomp":
        def merge(a, b):
            out = dict(a)
            for k, v in b.items():
                v = v * sign
                out[k] = out[k] + v if k in out else v
            return out

        return HalfDecomp(self.c0 + other.c0 * sign, merge(self.plus, other.plus),
                          merge(self.minus, other.minus), self.xin)

    def __add__(self, other: "HalfDecomp") -> "HalfDecomp":
        return self._combine(other, 1)

    def __sub__(self, other: "HalfDecomp") -> "HalfDecomp":
        return self._combine(other, -1)

    def scale(self, c) -> "HalfDecomp":
        return HalfDecomp(self.c0 * c, {k: v * c for k, v in self.plus.items()},
                          {k: v * c for k, v in self.minus.items()}, self.xin)

    def is_zero(self) -> bool:
        return _is_zero(self.c0) and not self.plus and not self.minus

    def equals(self, other: "HalfDecomp") -> bool:
        return (self - other).is_zero()

    def recombine(self) -> SphereRational:
        """Put every term over ``(xi_n^2 + 1)^K``."""
        t = Poly.var(self.xin)
        K = max([*self.plus, *self.minus, 0])
        tm, tp = t - I, t + I
        num = self.c0 * (t * t + 1) ** K
        for q, a in self.minus.items():
            num = num + a * (tm ** (K - q) * tp ** K)
        for q, b in self.plus.items():
            num = num + b * (tp ** (K - q) * tm ** K)
        return SphereRational(num, K, self.xin)


def _laurent(powers: dict, k: int, pole: GaussRational) -> dict:
    """Principal part of ``N / (t^2+1)^k`` at ``t = pole``; returns ``{q: coeff of (t-pole)^-q}``."""
    if k == 0:
        return {}
    # N(pole + s) = sum_j shifted[j] s^j, only j < k is needed
    shifted = {}
    for j in range(k):
        acc = None
        for e, c in powers.items():
            if e < j:
                continue
            term = c * (pole ** (e - j) * comb(e, j))
            acc = term if acc is None else acc + term
        if acc is not None:
            shifted[j] = acc
    # (s + 2*pole)^-k = sum_m (-1)^m C(k+m-1, m) (2 pole)^(-k-m) s^m
    two_p = pole * 2
    series = [two_p ** (-k - m) * ((-1) ** m * comb(k + m - 1, m)) for m in range(k)]
    out = {}
    for q in range(1, k + 1):
        acc = None
        for j, c in shifted.items():
            m = k - q - j
            if m < 0:
                continue
            term = c * series[m]
            acc = term if acc is None else acc + term
        if acc is not None and not _is_zero(acc):
            out[q] = acc
    return out


def decompose(s: SphereRational) -> HalfDecomp:
    powers = {e: c for e, c in s.num.powers_of(s.xin).items() if not _is_zero(c)}
    zero = _zero_like(s.num)
    if not powers:
        return HalfDecomp(zero, {}, {}, s.xin)
    deg = max(powers)
    if deg > 2 * s.k:
        raise UnboundedSymbolError(
            f"numerator degree {deg} in {s.xin} exceeds denominator degree {2 * s.k}")
    c0 = powers.get(2 * s.k, zero) if deg == 2 * s.k else zero
    minus = _laurent(powers, s.k, I)
    plus = _laurent(powers, s.k, -I)
    return HalfDecomp(c0, plus, minus, s.xin)


def pi_plus(h: HalfDecomp) -> HalfDecomp:
    return HalfDecomp(_zero_like(h.c0), dict(h.plus), {}, h.xin)


def pi_minus(h: HalfDecomp) -> HalfDecomp:
    return HalfDecomp(h.c0, {}, dict(h.minus), h.xin)


def deriv_xin(h: HalfDecomp) -> HalfDecomp:
    """d/dxi_n term by term: ``(t -+ i)^-q -> -q (t -+ i)^-(q+1)``."""
    plus = {q + 1: b * (-q) for q, b in h.plus.items()}
    minus = {q + 1: a * (-q) for q, a in h.minus.items()}
    return HalfDecomp(_zero_like(h.c0), plus, minus, h.xin)


def integrate_line(h: HalfDecomp):
    """``int_R h(xi_n) dxi_n`` in units of pi, i.e. returns ``2i * A_1``.

    Closing the contour in the upper half-plane picks up the residue at +i.
    """
    if not _is_zero(h.c0):
        raise DivergentIntegralError("integrand tends to a nonzero constant")
    zero = _zero_like(h.c0)
    a1 = h.minus.get(1, zero)
    b1 = h.plus.get(1, zero)
    if not _is_zero(a1 + b1):
        raise DivergentIntegralError("integrand decays only like 1/xi_n")
    return a1 * (I * 2)


def as_decomp(x) -> HalfDecomp:
    return x if isinstance(x, HalfDecomp) else decompose(x)


def trace_line_integral(first, second, m: int) -> Poly:
    """``int_R graded_trace(first @ second, m) dxi_n`` in units of pi.

    Either factor may be a SphereRational or a HalfDecomp.
    """
    a = first.recombine() if isinstance(first, HalfDecomp) else first
    b = second.recombine() if isinstance(second, HalfDecomp) else second
    integrand = SphereRational(trace_of_product(a.num, b.num, m), a.k + b.k, a.xin)
    return integrate_line(decompose(integrand))


def line_integral(s) -> object:
    """``int_R s dxi_n`` in units of pi for a SphereRational or HalfDecomp."""
    return integrate_line(as_decomp(s))
