"""Matrix-valued symbols with radial denominators.

A :class:`RadialRational` is ``N(xi) / |xi|^(2k)`` with ``N`` an ExtOp of
polynomials, homogeneous in the covariable ``xi``. Restricting to the unit
tangential sphere replaces the denominator by ``(xi_n^2 + 1)^k`` and yields a
:class:`SphereRational`, the input of the half-line calculus.

Order of operations matters: every ``xi`` derivative has to be taken on the
RadialRational, since ``d/dxi'`` does not commute with ``|xi'|^2 -> 1``.
"""

from __future__ import annotations

from functools import lru_cache

from .exterior import ExtOp, graded_trace, trace_of_product
from .scalars import Poly


class HomogeneityError(ValueError):
    pass


@lru_cache(maxsize=None)
def xi_names(n: int) -> tuple[str, ...]:
    return tuple(f"xi{i}" for i in range(1, n + 1))


@lru_cache(maxsize=None)
def eta_names(n: int) -> tuple[str, ...]:
    return tuple(f"eta{i}" for i in range(1, n + 1))


@lru_cache(maxsize=None)
def norm2(n: int, tangential_only: bool = False) -> Poly:
    names = xi_names(n)[:-1] if tangential_only else xi_names(n)
    s = Poly()
    for v in names:
        s = s + Poly.var(v) ** 2
    return s


@lru_cache(maxsize=None)
def _norm2_pow(n: int, e: int) -> Poly:
    return norm2(n) ** e


class RadialRational:
    """``numerator / |xi|^(2k)`` with tracked homogeneity degree."""

    __slots__ = ("num", "k", "degree")

    def __init__(self, num: ExtOp, k: int, degree: int | None = None):
        if k < 0:
            raise HomogeneityError(f"negative denominator power {k}")
        self.num = num
        self.k = k
        self.degree = self._check_degree(degree)

    def _check_degree(self, declared):
        degs = self.num.degree_in(xi_names(self.n))
        if len(degs) > 1:
            raise HomogeneityError(f"numerator not homogeneous in xi: degrees {sorted(degs)}")
        if not degs:
            return declared
        actual = degs.pop() - 2 * self.k
        if declared is not None and declared != actual:
            raise HomogeneityError(f"declared homogeneity {declared}, computed {actual}")
        return actual

    @property
    def n(self) -> int:
        return self.num.n

    @classmethod
    def zero(cls, n: int, degree: int | None = None) -> "RadialRational":
        return cls(ExtOp.zero(n), 0, degree)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def lift(self, k: int) -> "RadialRational":
        """Same symbol written over ``|xi|^(2k)``."""
        if k < self.k:
            raise ValueError("cannot lower the denominator power by lifting")
        if k == self.k:
            return self
        return RadialRational(self.num * _norm2_pow(self.n, k - self.k), k, self.degree)

    def __add__(self, other: "RadialRational") -> "RadialRational":
        if not isinstance(other, RadialRational):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise HomogeneityError(f"adding symbols of degree {self.degree} and {other.degree}")
        k = max(self.k, other.k)
        return RadialRational(self.lift(k).num + other.lift(k).num, k, self.degree)

    def __sub__(self, other: "RadialRational") -> "RadialRational":
        if not isinstance(other, RadialRational):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return RadialRational(-self.num, self.k, self.degree)

    def __matmul__(self, other: "RadialRational") -> "RadialRational":
        if not isinstance(other, RadialRational):
            return NotImplemented
        deg = None if self.degree is None or other.degree is None else self.degree + other.degree
        return RadialRational(self.num @ other.num, self.k + other.k, deg)

    def __mul__(self, c) -> "RadialRational":
        """Multiply by a scalar polynomial homogeneous in xi."""
        c = Poly.coerce(c)
        degs = c.degree_in(xi_names(self.n))
        if len(degs) > 1:
            raise HomogeneityError("scalar factor not homogeneous in xi")
        shift = degs.pop() if degs else 0
        deg = None if self.degree is None else self.degree + shift
        return RadialRational(self.num * c, self.k, deg if c else self.degree)

    __rmul__ = __mul__

    def over_norm2(self, e: int = 1) -> "RadialRational":
        """Divide by ``|xi|^(2e)``."""
        deg = None if self.degree is None else self.degree - 2 * e
        return RadialRational(self.num, self.k + e, deg)

    def deriv(self, var: str) -> "RadialRational":
        if var not in xi_names(self.n):
            raise ValueError(f"{var!r} is not a covariable of dimension {self.n}")
        deg = None if self.degree is None else self.degree - 1
        if self.k == 0:
            return RadialRational(self.num.deriv(var), 0, deg)
        x = Poly.var(var)
        num = self.num.deriv(var) * norm2(self.n) - self.num * (x * (2 * self.k))
        return RadialRational(num, self.k + 1, deg)

    def derivs(self, *vars_: str) -> "RadialRational":
        out = self
        for v in vars_:
            out = out.deriv(v)
        return out

    def subs(self, mapping) -> "RadialRational":
        """Substitute non-covariable parameters (e.g. ``h1``)."""
        if set(mapping) & set(xi_names(self.n)):
            raise ValueError("substituting a covariable breaks the radial form")
        return RadialRational(self.num.subs(mapping), self.k, self.degree)

    def equals(self, other: "RadialRational") -> bool:
        """Equality as functions (denominators aligned first)."""
        k = max(self.k, other.k)
        return self.lift(k).num == other.lift(k).num

    def __repr__(self):
        return f"RadialRational(n={self.n}, k={self.k}, degree={self.degree}, nnz={len(self.num.entries)})"


class SphereRational:
    """``numerator / (xi_n^2 + 1)^k``; numerator an ExtOp or a scalar Poly."""

    __slots__ = ("num", "k", "xin")

    def __init__(self, num, k: int, xin: str):
        self.num = num
        self.k = k
        self.xin = xin

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __matmul__(self, other: "SphereRational") -> "SphereRational":
        return SphereRational(self.num @ other.num, self.k + other.k, self.xin)

    def __mul__(self, c) -> "SphereRational":
        return SphereRational(self.num * c, self.k, self.xin)

    def lift(self, k: int) -> "SphereRational":
        if k == self.k:
            return self
        t2p1 = Poly.var(self.xin) ** 2 + 1
        return SphereRational(self.num * t2p1 ** (k - self.k), k, self.xin)

    def __add__(self, other: "SphereRational") -> "SphereRational":
        k = max(self.k, other.k)
        return SphereRational(self.lift(k).num + other.lift(k).num, k, self.xin)

    def __neg__(self):
        return SphereRational(-self.num, self.k, self.xin)

    def __sub__(self, other):
        return self + (-other)

    def trace(self, m: int) -> "SphereRational":
        return SphereRational(graded_trace(self.num, m), self.k, self.xin)

    def trace_product(self, other: "SphereRational", m: int) -> "SphereRational":
        return SphereRational(trace_of_product(self.num, other.num, m), self.k + other.k, self.xin)

    def subs(self, mapping) -> "SphereRational":
        if self.xin in mapping:
            raise ValueError("cannot substitute the normal covariable")
        return SphereRational(self.num.subs(mapping), self.k, self.xin)

    def equals(self, other: "SphereRational") -> bool:
        k = max(self.k, other.k)
        return self.lift(k).num == other.lift(k).num

    def __repr__(self):
        return f"SphereRational(k={self.k})"


def deriv(s: RadialRational, var: str) -> RadialRational:
    return s.deriv(var)


def restrict_sphere(s: RadialRational) -> SphereRational:
    """Set ``|xi'|^2 = 1`` in the denominator; the numerator is untouched."""
    return SphereRational(s.num, s.k, xi_names(s.n)[-1])


def constant_symbol(op: ExtOp, degree: int = 0) -> RadialRational:
    return RadialRational(op, 0, degree)
