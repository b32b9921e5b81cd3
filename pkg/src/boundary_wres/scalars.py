"""Exact scalars: Gaussian rationals and sparse multivariate polynomials.

Coefficients are ``gmpy2.mpq`` pairs. Polynomials are dicts mapping a
monomial (a sorted tuple of ``(variable, exponent)`` pairs) to a nonzero
:class:`GaussRational`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

from gmpy2 import mpq

Monomial = tuple  # tuple[tuple[str, int], ...]

_ZERO_Q = mpq(0)
_ONE_Q = mpq(1)


def _q(x) -> mpq:
    if isinstance(x, type(_ZERO_Q)):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return mpq(x.numerator, x.denominator) if not isinstance(x, int) else mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    raise TypeError(f"not an exact rational: {x!r}")


class GaussRational:
    """Exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def coerce(cls, x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        return cls(x)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        if not isinstance(other, GaussRational):
            try:
                other = GaussRational(other)
            except TypeError:
                return NotImplemented
        r = GaussRational.__new__(GaussRational)
        r.re = self.re + other.re
        r.im = self.im + other.im
        return r

    __radd__ = __add__

    def __neg__(self):
        r = GaussRational.__new__(GaussRational)
        r.re = -self.re
        r.im = -self.im
        return r

    def __sub__(self, other):
        if not isinstance(other, GaussRational):
            try:
                other = GaussRational(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussRational):
            try:
                other = GaussRational(other)
            except TypeError:
                return NotImplemented
        r = GaussRational.__new__(GaussRational)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            r.re, r.im = a * c, _ZERO_Q
        elif not b:
            r.re, r.im = a * c, a * d
        elif not d:
            r.re, r.im = a * c, b * c
        else:
            r.re, r.im = a * c - b * d, a * d + b * c
        return r

    __rmul__ = __mul__

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("GaussRational division by zero")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = GaussRational(1)
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    @property
    def is_real(self) -> bool:
        return not self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}*i)"


I = GaussRational(0, 1)
ONE = GaussRational(1)
ZERO = GaussRational(0)


@lru_cache(maxsize=1 << 18)
def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _as_coeff(x) -> GaussRational | None:
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Fraction, Rational)) or isinstance(x, type(_ZERO_Q)):
        return GaussRational(x)
    return None


class Poly:
    """Sparse polynomial with Gaussian-rational coefficients over named variables."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, GaussRational] | None = None):
        self.terms = {} if terms is None else {m: c for m, c in terms.items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw({((name, 1),): ONE})

    @classmethod
    def const(cls, c) -> "Poly":
        c = GaussRational.coerce(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        c = _as_coeff(x)
        if c is None:
            raise TypeError(f"cannot coerce {x!r} to Poly")
        return cls.const(c)

    def is_zero(self) -> bool:
        return not self.terms

    __bool__ = lambda self: bool(self.terms)  # noqa: E731

    def __eq__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            if s is None:
                t[m] = c
            else:
                s = s + c
                if s:
                    t[m] = s
                else:
                    del t[m]
        return Poly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _as_coeff(other)
            if c is None:
                return NotImplemented
            if not c:
                return Poly()
            return Poly._raw({m: v * c for m, v in self.terms.items()})
        if not self.terms or not other.terms:
            return Poly()
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = t.get(m)
                t[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw({m: c for m, c in t.items() if c})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        r = Poly.const(1)
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    def deriv(self, name: str) -> "Poly":
        t: dict = {}
        for m, c in self.terms.items():
            for idx, (v, e) in enumerate(m):
                if v == name:
                    nm = m[:idx] + (((v, e - 1),) if e > 1 else ()) + m[idx + 1:]
                    t[nm] = c * e
                    break
        return Poly._raw(t)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, names: Iterable[str]) -> set[int]:
        """Set of total degrees of the monomials in the given variables."""
        names = set(names)
        return {sum(e for v, e in m if v in names) for m in self.terms}

    def powers_of(self, name: str) -> dict[int, "Poly"]:
        """Split into ``{e: coefficient}`` with ``self = sum coeff * name**e``."""
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = 0
            rest = m
            for idx, (v, ee) in enumerate(m):
                if v == name:
                    e = ee
                    rest = m[:idx] + m[idx + 1:]
                    break
            out.setdefault(e, {})[rest] = c
        return {e: Poly._raw(t) for e, t in out.items()}

    def subs(self, mapping: Mapping[str, "Poly | int | Fraction"]) -> "Poly":
        mapping = {k: Poly.coerce(v) for k, v in mapping.items()}
        if not self.variables() & set(mapping):
            return self
        result = Poly()
        cache: dict = {}
        for m, c in self.terms.items():
            keep = []
            factor = Poly.const(c)
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = mapping[v] ** e
                    factor = factor * cache[key]
                else:
                    keep.append((v, e))
            result = result + factor * Poly._raw({tuple(keep): ONE})
        return result

    def constant(self) -> GaussRational:
        return self.terms.get((), ZERO)

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def map_coeffs(self, fn) -> "Poly":
        return Poly({m: fn(c) for m, c in self.terms.items()})

    def conjugate(self) -> "Poly":
        return self.map_coeffs(lambda c: c.conjugate())

    def real_part(self) -> "Poly":
        return self.map_coeffs(lambda c: GaussRational(c.re))

    def imag_part(self) -> "Poly":
        return self.map_coeffs(lambda c: GaussRational(c.im))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(e for _, e in m), m)):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def variables(*names: str) -> tuple[Poly, ...]:
    return tuple(Poly.var(n) for n in names)


def to_fraction(q) -> Fraction:
    q = _q(q)
    return Fraction(int(q.numerator), int(q.denominator))


__all__ = ["GaussRational", "Poly", "I", "ONE", "ZERO", "variables", "to_fraction"]
