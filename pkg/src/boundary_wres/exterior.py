"""Matrix representation of the exterior algebra of R^n.

Basis elements are index subsets of ``{1..n}`` ordered by degree, then
lexicographically. Operators are sparse ``2**n x 2**n`` matrices whose
entries are :class:`~boundary_wres.scalars.Poly`, so a single matrix
covers a fully formal covector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .scalars import GaussRational, Poly


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class FormBasis:
    n: int
    elements: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.elements)

    def index(self, subset: Iterable[int]) -> int:
        return _index_map(self.n)[tuple(sorted(subset))]

    def degree(self, idx: int) -> int:
        return len(self.elements[idx])

    def block(self, m: int) -> range:
        start = sum(comb(self.n, j) for j in range(m))
        return range(start, start + comb(self.n, m))


@lru_cache(maxsize=None)
def form_basis(n: int) -> FormBasis:
    if n < 1:
        raise DimensionError(f"dimension must be positive, got {n}")
    elems = tuple(S for m in range(n + 1) for S in combinations(range(1, n + 1), m))
    return FormBasis(n, elems)


@lru_cache(maxsize=None)
def _index_map(n: int) -> dict:
    return {S: i for i, S in enumerate(form_basis(n).elements)}


@lru_cache(maxsize=None)
def _wedge_basis(n: int, k: int) -> tuple[tuple[int, int, int], ...]:
    """Nonzero entries ``(row, col, sign)`` of eps(dx_k)."""
    basis = form_basis(n)
    idx = _index_map(n)
    out = []
    for col, S in enumerate(basis.elements):
        if k in S:
            continue
        sign = -1 if sum(1 for s in S if s < k) % 2 else 1
        out.append((idx[tuple(sorted(S + (k,)))], col, sign))
    return tuple(out)


class ExtOp:
    """Sparse operator on the full exterior algebra with polynomial entries."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries: dict | None = None):
        self.n = n
        self.entries = {} if entries is None else {k: v for k, v in entries.items() if v}

    @classmethod
    def _raw(cls, n, entries):
        op = cls.__new__(cls)
        op.n = n
        op.entries = entries
        return op

    @classmethod
    def zero(cls, n: int) -> "ExtOp":
        return cls._raw(n, {})

    @classmethod
    def identity(cls, n: int) -> "ExtOp":
        one = Poly.const(1)
        return cls._raw(n, {(i, i): one for i in range(2**n)})

    @classmethod
    def scalar(cls, n: int, value) -> "ExtOp":
        return cls.identity(n) * value

    @property
    def dim(self) -> int:
        return 2**self.n

    def __getitem__(self, rc) -> Poly:
        return self.entries.get(rc, Poly())

    def is_zero(self) -> bool:
        return not self.entries

    def _check(self, other: "ExtOp"):
        if other.n != self.n:
            raise DimensionError(f"operator dimensions differ: {self.n} vs {other.n}")

    def __eq__(self, other):
        if not isinstance(other, ExtOp):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __add__(self, other):
        if not isinstance(other, ExtOp):
            return NotImplemented
        self._check(other)
        e = dict(self.entries)
        for k, v in other.entries.items():
            s = e.get(k)
            s = v if s is None else s + v
            if s:
                e[k] = s
            else:
                e.pop(k, None)
        return ExtOp._raw(self.n, e)

    def __neg__(self):
        return ExtOp._raw(self.n, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        if not isinstance(other, ExtOp):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        """Scalar (or polynomial) multiple; use ``@`` for composition."""
        if isinstance(c, ExtOp):
            raise TypeError("use @ to compose ExtOps")
        try:
            c = Poly.coerce(c)
        except TypeError:
            return NotImplemented
        if not c:
            return ExtOp.zero(self.n)
        return ExtOp._raw(self.n, {k: p for k, v in self.entries.items() if (p := v * c)})

    __rmul__ = __mul__

    def __matmul__(self, other: "ExtOp") -> "ExtOp":
        if not isinstance(other, ExtOp):
            return NotImplemented
        self._check(other)
        rows: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            rows.setdefault(r, []).append((c, v))
        out: dict = {}
        for (r, k), a in self.entries.items():
            for c, b in rows.get(k, ()):
                key = (r, c)
                s = out.get(key)
                out[key] = a * b if s is None else s + a * b
        return ExtOp._raw(self.n, {k: v for k, v in out.items() if v})

    def map_entries(self, fn) -> "ExtOp":
        return ExtOp(self.n, {k: fn(v) for k, v in self.entries.items()})

    def deriv(self, name: str) -> "ExtOp":
        return self.map_entries(lambda p: p.deriv(name))

    def subs(self, mapping) -> "ExtOp":
        return self.map_entries(lambda p: p.subs(mapping))

    def powers_of(self, name: str) -> dict[int, "ExtOp"]:
        out: dict[int, dict] = {}
        for k, v in self.entries.items():
            for e, c in v.powers_of(name).items():
                out.setdefault(e, {})[k] = c
        return {e: ExtOp._raw(self.n, d) for e, d in out.items()}

    def variables(self) -> set[str]:
        out: set[str] = set()
        for v in self.entries.values():
            out |= v.variables()
        return out

    def degree_in(self, names) -> set[int]:
        out: set[int] = set()
        for v in self.entries.values():
            out |= v.degree_in(names)
        return out

    def degree_shift(self) -> set[int]:
        """Form-degree changes (row degree minus column degree) present."""
        basis = form_basis(self.n)
        return {basis.degree(r) - basis.degree(c) for r, c in self.entries}

    def block(self, m: int) -> dict:
        rng = form_basis(self.n).block(m)
        return {(r, c): v for (r, c), v in self.entries.items() if r in rng and c in rng}

    def apply(self, vec: dict) -> dict:
        """Apply to a form given as ``{subset: coefficient}``."""
        basis = form_basis(self.n)
        x = {basis.index(S): Poly.coerce(v) for S, v in vec.items()}
        out: dict = {}
        for (r, c), a in self.entries.items():
            if c in x:
                out[r] = out.get(r, Poly()) + a * x[c]
        return {basis.elements[r]: v for r, v in out.items() if v}

    def __repr__(self):
        return f"ExtOp(n={self.n}, nnz={len(self.entries)})"


@dataclass(frozen=True)
class Covector:
    components: tuple[Poly, ...]

    def __init__(self, components: Sequence):
        object.__setattr__(self, "components", tuple(Poly.coerce(c) for c in components))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def normal(self) -> Poly:
        return self.components[-1]

    def tangential(self) -> "Covector":
        """The covector (xi', 0)."""
        return Covector(self.components[:-1] + (Poly(),))

    def dot(self, other: "Covector") -> Poly:
        if other.n != self.n:
            raise DimensionError(f"covector dimensions differ: {self.n} vs {other.n}")
        s = Poly()
        for a, b in zip(self.components, other.components):
            s = s + a * b
        return s

    def norm2(self) -> Poly:
        return self.dot(self)

    def __add__(self, other: "Covector") -> "Covector":
        return Covector([a + b for a, b in zip(self.components, other.components)])

    def scale(self, c) -> "Covector":
        return Covector([a * Poly.coerce(c) for a in self.components])


def formal_covector(prefix: str, n: int) -> Covector:
    return Covector([Poly.var(f"{prefix}{i}") for i in range(1, n + 1)])


def unit_covector(j: int, n: int) -> Covector:
    if not 1 <= j <= n:
        raise DimensionError(f"frame index {j} out of range 1..{n}")
    return Covector([1 if i == j else 0 for i in range(1, n + 1)])


def wedge_op(v: Covector, n: int | None = None) -> ExtOp:
    """eps(v): left exterior multiplication by v."""
    n = v.n if n is None else n
    if v.n != n:
        raise DimensionError(f"covector has {v.n} components, expected {n}")
    out: dict = {}
    for k, comp in enumerate(v.components, start=1):
        if not comp:
            continue
        for r, c, sign in _wedge_basis(n, k):
            term = comp * sign
            s = out.get((r, c))
            out[(r, c)] = term if s is None else s + term
    return ExtOp(n, out)


def contract_op(v: Covector, n: int | None = None) -> ExtOp:
    """iota(v): contraction with the Euclidean dual of v (adjoint of eps(v))."""
    w = wedge_op(v, n)
    return ExtOp._raw(w.n, {(c, r): p for (r, c), p in w.entries.items()})


def p_op(v: Covector) -> ExtOp:
    e, i = wedge_op(v), contract_op(v)
    return e @ i - i @ e


def clifford_op(j: int, n: int, kind: str = "plain") -> ExtOp:
    """c(e_j) = eps - iota (``plain``) or cbar(e_j) = eps + iota (``bar``)."""
    e = unit_covector(j, n)
    if kind == "plain":
        return wedge_op(e) - contract_op(e)
    if kind == "bar":
        return wedge_op(e) + contract_op(e)
    raise ValueError(f"unknown Clifford kind {kind!r}")


def graded_trace(op: ExtOp, m: int) -> Poly:
    if not 0 <= m <= op.n:
        raise DimensionError(f"degree {m} out of range 0..{op.n}")
    s = Poly()
    for i in form_basis(op.n).block(m):
        v = op.entries.get((i, i))
        if v is not None:
            s = s + v
    return s


def trace_of_product(a: ExtOp, b: ExtOp, m: int) -> Poly:
    """graded_trace(a @ b, m) without forming the full product."""
    a._check(b)
    rng = form_basis(a.n).block(m)
    brow: dict[int, list] = {}
    for (r, c), v in b.entries.items():
        if c in rng:
            brow.setdefault(r, []).append((c, v))
    s = Poly()
    for (r, k), x in a.entries.items():
        if r not in rng:
            continue
        for c, y in brow.get(k, ()):
            if c == r:
                s = s + x * y
    return s


def scalar_op(n: int, value: GaussRational | Poly | int) -> ExtOp:
    return ExtOp.scalar(n, value)
