"""Floating-point cross-check of the case integrals, independent of the exact engine.

Nothing here imports the exact machinery. Operators are rebuilt as numpy
arrays, x-jets come from forward-mode AD through an explicit metric model
``h(x_n) = 1 + h1 x_n``, the projection is a Cauchy integral on a circle
around ``-i``, the xi_n integral is adaptive (``scipy.integrate.quad_vec``)
and the sphere rule is Gauss-Legendre in ``cos theta`` times a trapezoid in
``phi``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod

import jax
import jax.numpy as jnp
import numpy as np
from scipy.integrate import quad_vec

jax.config.update("jax_enable_x64", True)

DIM = 4
TAN = DIM - 1


@dataclass(frozen=True)
class OracleConfig:
    h1: float = 1.0
    contour_points: int = 64
    contour_radius: float = 0.5
    sphere_theta: int = 8
    sphere_phi: int = 16
    epsrel: float = 1e-13
    epsabs: float = 1e-15
    chunk: int = 128


# ---------------------------------------------------------------- operators

def _subsets():
    return [s for k in range(DIM + 1) for s in itertools.combinations(range(DIM), k)]


@lru_cache(maxsize=None)
def _basic_ops() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """wedge and contraction by dx_k on a 2^4 basis, plus the degree-2 mask."""
    basis = _subsets()
    pos = {s: i for i, s in enumerate(basis)}
    size = len(basis)
    eps = np.zeros((DIM, size, size))
    for k in range(DIM):
        for s in basis:
            if k in s:
                continue
            t = tuple(sorted(s + (k,)))
            eps[k, pos[t], pos[s]] = (-1) ** sum(1 for x in s if x < k)
    iota = np.transpose(eps, (0, 2, 1)).copy()
    mask = np.array([len(s) == DIM // 2 for s in basis], dtype=float)
    return eps, iota, mask


def _ops():
    eps, iota, mask = _basic_ops()
    return jnp.asarray(eps, dtype=jnp.complex128), jnp.asarray(iota, dtype=jnp.complex128), jnp.asarray(mask)


def _wedge(xi):
    eps, _, _ = _ops()
    return jnp.tensordot(xi, eps, axes=1)


def _contract(xi):
    _, iota, _ = _ops()
    return jnp.tensordot(xi, iota, axes=1)


def _split(xi):
    return xi.at[DIM - 1].set(0.0), xi[DIM - 1]


# ---------------------------------------------------------------- metric model

def _iota_x(x, xi, h1):
    """Contraction with the metric h(x_n) g' + dx_n^2 at the point x."""
    _, iota, _ = _ops()
    tan, normal = _split(xi)
    return (1 + h1 * x[DIM - 1]) * _contract(tan) + normal * iota[DIM - 1]


def _norm2_x(x, xi, h1):
    tan, normal = _split(xi)
    return (1 + h1 * x[DIM - 1]) * jnp.dot(tan, tan) + normal**2


def sigma_leading(x, xi, h1):
    e, i = _wedge(xi), _iota_x(x, xi, h1)
    return (e @ i - i @ e) / _norm2_x(x, xi, h1)


def _clifford_pairs():
    eps, iota, _ = _ops()
    c = eps - iota
    cb = eps + iota
    n = DIM - 1
    return [cb[n] @ cb[i] - c[n] @ c[i] for i in range(n)]


def sigma_subleading(x, xi, h1):
    """Order -1 symbol at the base point (x is ignored)."""
    eps, iota, _ = _ops()
    pairs = _clifford_pairs()
    s0_d = 0.25 * h1 * sum(eps[i] @ pairs[i] for i in range(TAN))
    s0_delta = -0.25 * h1 * sum(iota[i] @ pairs[i] for i in range(TAN))
    tan, normal = _split(xi)
    e, i = _wedge(xi), _contract(xi)
    s1_ddelta = 1j * e @ s0_delta - 1j * s0_d @ i - 1j * h1 * eps[DIM - 1] @ _contract(tan)
    s1_deltad = -1j * i @ s0_d + 1j * s0_delta @ e
    s1_A = s1_ddelta - s1_deltad
    s1_lap = s1_ddelta + s1_deltad
    r2 = jnp.dot(xi, xi)
    t2 = jnp.dot(tan, tan)
    ident = jnp.eye(2**DIM, dtype=jnp.complex128)
    s_m3 = -s1_lap / r2**2 - 2j * h1 * t2 * normal / r2**3 * ident

    def p_of(v):
        ev, iv = _wedge(v), _contract(v)
        return ev @ iv - iv @ ev

    unit_n = jnp.zeros(DIM, dtype=xi.dtype).at[DIM - 1].set(1.0)
    dp = jax.jvp(p_of, (xi,), (unit_n,))[1]
    return s1_A / r2 + p_of(xi) @ s_m3 + 1j * h1 * t2 * dp / r2**2


SYMBOLS = {0: sigma_leading, -1: sigma_subleading}


def _derivative(f, x_orders, xi_orders):
    """Mixed partials of f(x, xi) via nested forward-mode jvp."""
    dirs = []
    for k, n in enumerate(x_orders):
        dirs += [("x", k)] * n
    for k, n in enumerate(xi_orders):
        dirs += [("xi", k)] * n
    g = f
    for kind, k in dirs:
        def g(x, xi, _prev=g, _kind=kind, _k=k):
            if _kind == "x":
                tx = jnp.zeros_like(x).at[_k].set(1.0)
                return jax.jvp(lambda y: _prev(y, xi), (x,), (tx,))[1]
            txi = jnp.zeros_like(xi).at[_k].set(1.0)
            return jax.jvp(lambda y: _prev(x, y), (xi,), (txi,))[1]
    return g


@lru_cache(maxsize=None)
def _compiled(order: int, x_orders: tuple, xi_orders: tuple, h1: float):
    f = _derivative(lambda x, xi: SYMBOLS[order](x, xi, h1), x_orders, xi_orders)
    x0 = jnp.zeros(DIM)

    def at_base(xi):
        return f(x0, xi)

    return jax.jit(jax.vmap(at_base))


# ---------------------------------------------------------------- quadrature

def sphere_rule(n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on S^2 and weights summing to 4 pi."""
    z, wz = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    zz, pp = np.meshgrid(z, phi, indexing="ij")
    r = np.sqrt(1 - zz**2)
    nodes = np.stack([r * np.cos(pp), r * np.sin(pp), zz], axis=-1).reshape(-1, 3)
    weights = (wz[:, None] * np.full(n_phi, 2 * np.pi / n_phi)[None, :]).reshape(-1)
    return nodes, weights


def _contour(cfg: OracleConfig):
    theta = 2 * np.pi * np.arange(cfg.contour_points) / cfg.contour_points
    z = -1j + cfg.contour_radius * np.exp(1j * theta)
    dz = 1j * cfg.contour_radius * np.exp(1j * theta) * (2 * np.pi / cfg.contour_points)
    return z, dz


def projection_kernel(t: float, cfg: OracleConfig, k_after: int = 0):
    """Contour points and weights w with ``d^k pi+ f (t) = sum w f(z)``."""
    z, dz = _contour(cfg)
    w = dz / (2j * np.pi) * (-1) ** k_after * factorial(k_after) / (t - z) ** (k_after + 1)
    return z, w


def _with_normal(nodes: np.ndarray, t) -> np.ndarray:
    t = np.broadcast_to(np.asarray(t, dtype=complex), nodes.shape[:1])
    return np.concatenate([nodes.astype(complex), t[:, None]], axis=1)


# ---------------------------------------------------------------- cases

CASES = {
    # label: (r, l, k, j, |alpha|)
    "aI": (-1, -1, 0, 0, 1),
    "aII": (-1, -1, 0, 1, 0),
    "aIII": (-1, -1, 1, 0, 0),
    "b": (-2, -1, 0, 0, 0),
    "c": (-1, -2, 0, 0, 0),
}


def _indices(order: int):
    return [m for m in itertools.product(range(order + 1), repeat=TAN) if sum(m) == order]


def _terms(label: str):
    """(slot, weight, first, second) for every summand of the case."""
    r, l, k, j, a = CASES[label]
    out = []
    for alpha in _indices(a):
        for nb in range(1, -r + 1):
            for beta in _indices(nb):
                for nd in range(1, -l + 1):
                    for delta in _indices(nd):
                        e = j + k + 1 + sum(alpha) + sum(beta) + sum(delta)
                        den = prod(map(factorial, alpha + beta + delta)) * factorial(j + k + 1)
                        pref = (-1j) ** e / den
                        ab = tuple(x + y for x, y in zip(alpha, beta))
                        first = (r + nb, (0,) * TAN + (j,), ab + (0,), k)
                        for gamma in itertools.product(*(range(x + 1) for x in alpha)):
                            w = pref * prod(comb(x, g) for x, g in zip(alpha, gamma))
                            second = (l + nd, tuple(gamma) + (k,), tuple(delta) + (j + 1,))
                            slot = (beta, tuple(d + x - g for d, x, g in zip(delta, alpha, gamma)))
                            out.append((slot, w, first, second))
    return out


def _chunk_integrals(label: str, nodes: np.ndarray, cfg: OracleConfig) -> dict:
    """Line integrals for every slot at the given sphere nodes."""
    terms = _terms(label)
    z, _ = _contour(cfg)
    _, _, mask = _basic_ops()
    rows = np.flatnonzero(mask)
    # projected factor is sampled on the contour once per distinct symbol
    contour_vals = {}
    for _, _, first, _ in terms:
        order, x_ord, xi_ord, _ = first
        key = (order, x_ord, xi_ord)
        if key in contour_vals:
            continue
        fn = _compiled(order, x_ord, xi_ord, cfg.h1)
        flat = np.concatenate([_with_normal(nodes, zm) for zm in z])
        vals = np.asarray(fn(flat))[:, rows, :].reshape(len(z), len(nodes), len(rows), -1)
        contour_vals[key] = np.ascontiguousarray(np.moveaxis(vals, 0, 3))  # (nodes, rows, 16, contour)
    slots = sorted({s for s, *_ in terms})
    slot_pos = {s: i for i, s in enumerate(slots)}
    n_nodes = len(nodes)

    def integrand(t):
        acc = np.zeros((len(slots), n_nodes), dtype=complex)
        projs, seconds = {}, {}
        for slot, w, first, second in terms:
            order, x_ord, xi_ord, k_after = first
            if first not in projs:
                _, kern = projection_kernel(t, cfg, k_after)
                vals = contour_vals[(order, x_ord, xi_ord)]
                projs[first] = vals @ kern
            if second not in seconds:
                o2, x2, xi2 = second
                g = np.asarray(_compiled(o2, x2, xi2, cfg.h1)(_with_normal(nodes, t)))
                seconds[second] = np.ascontiguousarray(np.swapaxes(g[:, :, rows], 1, 2))
            acc[slot_pos[slot]] += w * (projs[first] * seconds[second]).sum(axis=(1, 2))
        return np.concatenate([acc.real.ravel(), acc.imag.ravel()])

    res, _ = quad_vec(integrand, -np.inf, np.inf, epsabs=cfg.epsabs, epsrel=cfg.epsrel)
    half = len(res) // 2
    vals = (res[:half] + 1j * res[half:]).reshape(len(slots), n_nodes)
    return {s: vals[slot_pos[s]] for s in slots}


def case_slots(label: str, cfg: OracleConfig = OracleConfig()) -> dict:
    """Every derivative slot of a case, as complex numbers at ``h1 = cfg.h1``."""
    nodes, weights = sphere_rule(cfg.sphere_theta, cfg.sphere_phi)
    totals: dict = {}
    for start in range(0, len(nodes), cfg.chunk):
        part = _chunk_integrals(label, nodes[start:start + cfg.chunk], cfg)
        for s, v in part.items():
            totals[s] = totals.get(s, 0) + np.dot(weights[start:start + cfg.chunk], v)
    return totals


def case_matrix(label: str, cfg: OracleConfig = OracleConfig()) -> np.ndarray:
    """Coefficient matrix of d_i f1 d_j f2 (complex; the imaginary part should vanish)."""
    return gradient_matrix(case_slots(label, cfg))


def gradient_matrix(slots: dict) -> np.ndarray:
    out = np.zeros((TAN, TAN), dtype=complex)
    for (beta, delta), v in slots.items():
        if sum(beta) == 1 and sum(delta) == 1:
            out[beta.index(1), delta.index(1)] += v
    return out


def higher_slots(slots: dict) -> dict:
    return {s: v for s, v in slots.items() if not (sum(s[0]) == 1 and sum(s[1]) == 1)}


def relative_errors(exact: np.ndarray, approx: np.ndarray, scale: float) -> np.ndarray:
    """Entrywise |approx - exact| / max(|exact|, scale); ``scale`` guards zero entries."""
    return np.abs(approx - exact) / np.maximum(np.abs(exact), scale)
