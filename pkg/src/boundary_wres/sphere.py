"""Exact monomial integrals over the unit sphere, and the exact result type.

For even exponents ``a_1..a_d``,

    int_{S^{d-1}} x^a dsigma = 2 prod Gamma((a_i + 1)/2) / Gamma((|a| + d)/2),

and every half-integer Gamma is a rational multiple of sqrt(pi), so the value
is a rational times an integer power of pi.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .scalars import GaussRational, Poly, to_fraction


class StrayVariableError(ValueError):
    pass


class ResidualImaginaryError(ArithmeticError):
    pass


class ExactScalar:
    """Sum of ``q * pi^a * h1^b`` with ``q`` in Q(i), bucketed by ``(a, b)``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], GaussRational] | None = None):
        self.terms = {}
        for key, q in (terms or {}).items():
            q = GaussRational.coerce(q)
            if q:
                self.terms[key] = q

    @classmethod
    def monomial(cls, q, pi_pow: int = 0, h1_pow: int = 0) -> "ExactScalar":
        return cls({(pi_pow, h1_pow): q})

    @classmethod
    def zero(cls) -> "ExactScalar":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.monomial(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            return NotImplemented
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return ExactScalar(t)

    def __neg__(self):
        return ExactScalar({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            t: dict = {}
            for (a1, b1), q1 in self.terms.items():
                for (a2, b2), q2 in other.terms.items():
                    k = (a1 + a2, b1 + b2)
                    t[k] = t[k] + q1 * q2 if k in t else q1 * q2
            return ExactScalar(t)
        c = GaussRational.coerce(other)
        return ExactScalar({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def times_pi(self, e: int = 1) -> "ExactScalar":
        return ExactScalar({(a + e, b): v for (a, b), v in self.terms.items()})

    # single-term accessors
    def _single(self):
        if len(self.terms) != 1:
            raise ValueError(f"not a single term: {self}")
        return next(iter(self.terms.items()))

    @property
    def q(self) -> GaussRational:
        return self._single()[1] if self.terms else GaussRational(0)

    @property
    def pi_pow(self) -> int:
        return self._single()[0][0] if self.terms else 0

    @property
    def h1_pow(self) -> int:
        return self._single()[0][1] if self.terms else 0

    @property
    def is_real(self) -> bool:
        return all(v.is_real for v in self.terms.values())

    def require_real(self, what: str = "value") -> "ExactScalar":
        if not self.is_real:
            raise ResidualImaginaryError(f"{what} has a residual imaginary part: {self}")
        return self

    def h1_powers(self) -> set[int]:
        return {b for _, b in self.terms}

    def coefficient(self, pi_pow: int, h1_pow: int) -> Fraction:
        q = self.terms.get((pi_pow, h1_pow), GaussRational(0))
        if not q.is_real:
            raise ResidualImaginaryError(f"coefficient is not real: {q}")
        return to_fraction(q.re)

    def subs_h1(self, value) -> "ExactScalar":
        value = GaussRational.coerce(value)
        t: dict = {}
        for (a, b), v in self.terms.items():
            t[(a, 0)] = t.get((a, 0), GaussRational(0)) + v * value ** b
        return ExactScalar(t)

    def to_float(self, h1: float = 1.0) -> complex | float:
        import math

        z = sum(complex(v) * math.pi**a * h1**b for (a, b), v in self.terms.items())
        return z.real if self.is_real else z

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b) in sorted(self.terms):
            q = self.terms[(a, b)]
            if q.is_real:
                c = to_fraction(q.re)
                s = f"{'-' if c < 0 else '+'}{abs(c.numerator)}/{c.denominator}"
            else:
                s = f"+({q})"
            s += f" · pi^{a} · h1^{b}"
            parts.append(s)
        return " ".join(parts)

    def __repr__(self):
        return f"ExactScalar({self})"


def _gamma_half(twice: int) -> tuple[Fraction, int]:
    """Gamma(twice/2) as (rational, number of sqrt(pi) factors)."""
    if twice % 2 == 0:
        return Fraction(factorial(twice // 2 - 1)), 0
    m = (twice - 1) // 2  # Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
    return Fraction(factorial(2 * m), 4**m * factorial(m)), 1


def integrate_monomial(alpha: Sequence[int], d: int) -> ExactScalar:
    """``int_{S^{d-1}} x^alpha dsigma`` exactly (``len(alpha) == d``)."""
    if d < 2:
        raise ValueError(f"sphere dimension parameter must be >= 2, got {d}")
    if len(alpha) != d:
        raise ValueError(f"multi-index has {len(alpha)} entries, expected {d}")
    if any(a % 2 for a in alpha):
        return ExactScalar.zero()
    value = Fraction(2)
    roots = 0
    for a in alpha:
        g, r = _gamma_half(a + 1)
        value *= g
        roots += r
    g, r = _gamma_half(sum(alpha) + d)
    value /= g
    roots -= r
    if roots % 2:
        raise ArithmeticError("half-integer power of pi in sphere integral")
    return ExactScalar.monomial(value, roots // 2, 0)


def integrate_poly(p: Poly, variables: Sequence[str], h1: str = "h1") -> ExactScalar:
    """Integrate a polynomial in ``variables`` over the unit sphere.

    ``h1`` is carried as a formal coefficient; any other variable is an error.
    """
    pos = {v: i for i, v in enumerate(variables)}
    d = len(variables)
    cache: dict = {}
    acc: dict = {}
    for mono, c in p.terms.items():
        alpha = [0] * d
        hp = 0
        for v, e in mono:
            if v in pos:
                alpha[pos[v]] = e
            elif v == h1:
                hp = e
            else:
                raise StrayVariableError(f"variable {v!r} cannot be integrated over the sphere")
        key = tuple(alpha)
        if key not in cache:
            cache[key] = integrate_monomial(key, d)
        val = cache[key]
        for (a, _), q in val.terms.items():
            k = (a, hp)
            acc[k] = acc[k] + q * c if k in acc else q * c
    return ExactScalar(acc)


def reduce_on_sphere(p: Poly, variables: Sequence[str]) -> Poly:
    """Canonical form of ``p`` modulo ``sum(v^2) - 1``.

    The last variable's exponent is reduced below 2 via
    ``v_d^2 = 1 - v_1^2 - ... - v_{d-1}^2``; two polynomials agree on the sphere
    iff their reduced forms are equal.
    """
    last = variables[-1]
    sub = Poly.const(1)
    for v in variables[:-1]:
        sub = sub - Poly.var(v) ** 2
    out = Poly()
    pow_cache = {0: Poly.const(1)}
    for e, coeff in p.powers_of(last).items():
        half, odd = divmod(e, 2)
        if half not in pow_cache:
            pow_cache[half] = sub ** half
        term = coeff * pow_cache[half]
        if odd:
            term = term * Poly.var(last)
        out = out + term
    return out


def sphere_area(d: int) -> ExactScalar:
    return integrate_monomial([0] * d, d)


def multi_indices(order: int, d: int) -> Iterable[tuple[int, ...]]:
    """All multi-indices of total order ``order`` in ``d`` slots, lexicographically descending."""
    if d == 1:
        yield (order,)
        return
    for first in range(order, -1, -1):
        for rest in multi_indices(order - first, d - 1):
            yield (first,) + rest
