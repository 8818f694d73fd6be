"""Truncated S-symmetric Fock space on a Gauss-Legendre rapidity grid.

Level n of a state is an array over grid^n (values at node tuples), optionally
followed by batch axes.  The inner product is the quadrature sum with product
weights.  Pointlike creators z^dagger(theta) at a node theta_a act through the
discrete delta e_a / w_a, so every Zamolodchikov relation holds exactly on the
grid, with delta(theta - eta) replaced by delta_ab / w_a.  Operators are only
ever applied in smeared form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import contractions as ctr
from .report import ConfigError
from .scattering import (ScatteringModel, all_permutations, grid_factor, pair_matrix,
                         transpose_axes)


# ------------------------------------------------------------------- grid


@dataclass
class FockGrid:
    model: ScatteringModel
    nodes: np.ndarray
    weights: np.ndarray
    cutoff: int = 3
    mu: float = 1.0
    theta_max: float = 5.0
    _perm_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if np.any(self.weights <= 0):
            raise ConfigError("quadrature weights must be positive")
        self.pm = pair_matrix(self.model, self.nodes)

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def perms(self, n: int) -> list:
        """(transpose axes, S^sigma factor) for every sigma on n letters."""
        if n not in self._perm_cache:
            out = []
            for sigma in all_permutations(n):
                out.append((tuple(transpose_axes(sigma)), grid_factor(self.pm, sigma)))
            self._perm_cache[n] = out
        return self._perm_cache[n]

    def weight_array(self, n: int) -> np.ndarray:
        w = np.ones((self.size,) * n)
        for ax in range(n):
            shape = [1] * n
            shape[ax] = self.size
            w = w * self.weights.reshape(shape)
        return w

    def node_array(self, n: int, axis: int) -> np.ndarray:
        shape = [1] * n
        shape[axis] = self.size
        return self.nodes.reshape(shape)

    def energy(self, n: int) -> np.ndarray:
        """E(theta) = sum_j cosh theta_j on level n (H / mu)."""
        e = np.zeros((self.size,) * n)
        for ax in range(n):
            e = e + np.cosh(self.node_array(n, ax))
        return e

    def momentum(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        p0 = np.zeros((self.size,) * n)
        p1 = np.zeros((self.size,) * n)
        for ax in range(n):
            t = self.node_array(n, ax)
            p0 = p0 + self.mu * np.cosh(t)
            p1 = p1 + self.mu * np.sinh(t)
        return p0, p1

    def describe(self) -> dict:
        return {"points": self.size, "theta": float(self.theta_max), "cutoff": int(self.cutoff),
                "mu": float(self.mu), "rule": "gauss-legendre"}


def make_grid(model: ScatteringModel, points: int = 24, theta: float = 5.0, cutoff: int = 3,
              mu: float = 1.0) -> FockGrid:
    x, w = np.polynomial.legendre.leggauss(points)
    return FockGrid(model, theta * x, theta * w, cutoff, mu, theta)


def _bshape(arr: np.ndarray, n: int) -> tuple:
    return arr.shape[n:]


def _expand(fac: np.ndarray, arr: np.ndarray, n: int) -> np.ndarray:
    return fac.reshape(fac.shape + (1,) * (arr.ndim - n))


def sym(grid: FockGrid, arr: np.ndarray, n: int) -> np.ndarray:
    """S-symmetrization projector on the first n axes."""
    if n <= 1:
        return np.asarray(arr, dtype=complex)
    acc = np.zeros(arr.shape, dtype=complex)
    rest = tuple(range(n, arr.ndim))
    for axes, fac in grid.perms(n):
        acc += _expand(fac, arr, n) * np.transpose(arr, axes + rest)
    return acc / math.factorial(n)


# ------------------------------------------------------------------ states


class FockState:
    """Finite collection of levels; missing levels are zero."""

    def __init__(self, grid: FockGrid, levels: dict | None = None, batch: tuple = ()):
        self.grid = grid
        self.batch = tuple(batch)
        self.levels: dict[int, np.ndarray] = {}
        for n, a in (levels or {}).items():
            a = np.asarray(a, dtype=complex)
            if a.shape != (grid.size,) * n + self.batch:
                raise ValueError(f"level {n} has shape {a.shape}")
            self.levels[int(n)] = a

    # construction helpers
    @classmethod
    def vacuum(cls, grid: FockGrid) -> "FockState":
        return cls(grid, {0: np.array(1.0 + 0j)})

    def copy(self) -> "FockState":
        return FockState(self.grid, {n: a.copy() for n, a in self.levels.items()}, self.batch)

    def level(self, n: int) -> np.ndarray:
        if n in self.levels:
            return self.levels[n]
        return np.zeros((self.grid.size,) * n + self.batch, dtype=complex)

    def max_level(self) -> int:
        return max(self.levels) if self.levels else -1

    def __add__(self, other: "FockState") -> "FockState":
        out = self.copy()
        for n, a in other.levels.items():
            out.levels[n] = out.level(n) + a
        return out

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scale(-1.0)

    def scale(self, c) -> "FockState":
        return FockState(self.grid, {n: c * a for n, a in self.levels.items()}, self.batch)

    def map_levels(self, fn: Callable[[int, np.ndarray], np.ndarray]) -> "FockState":
        return FockState(self.grid, {n: fn(n, a) for n, a in self.levels.items()}, self.batch)

    def norm(self) -> float:
        return math.sqrt(max(inner(self, self).real, 0.0))

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(a))) for a in self.levels.values() if a.size), default=0.0)


def inner(psi: FockState, chi: FockState) -> complex:
    """Quadrature inner product, antilinear in the first slot (unbatched states)."""
    tot = 0.0 + 0.0j
    for n, a in psi.levels.items():
        if n in chi.levels:
            tot += np.sum(psi.grid.weight_array(n) * np.conj(a) * chi.levels[n])
    return complex(tot)


def random_state(grid: FockGrid, rng: np.random.Generator, max_level: int | None = None,
                 decay: float = 0.5) -> FockState:
    """Random S-symmetric state with smooth-ish levels up to max_level."""
    top = grid.cutoff if max_level is None else max_level
    levels = {}
    for n in range(top + 1):
        raw = rng.normal(size=(grid.size,) * n) + 1j * rng.normal(size=(grid.size,) * n)
        if n:
            raw = raw * np.exp(-decay * grid.energy(n))
        levels[n] = sym(grid, raw, n)
    return FockState(grid, levels)


# ------------------------------------------------------------- ZF operators


def apply_z_dagger(g, psi: FockState, truncate: bool = False) -> FockState:
    """(z^dagger(g) psi)_{n+1} = sqrt(n+1) P_{n+1}(g (x) psi_n)."""
    grid = psi.grid
    g = np.asarray(g, dtype=complex)
    out = {}
    for n, a in psi.levels.items():
        if n + 1 > grid.cutoff:
            if truncate or not np.any(a):
                continue
            raise ConfigError(f"z^dagger would exceed the particle cutoff {grid.cutoff}")
        prod = np.multiply.outer(g, a)
        out[n + 1] = math.sqrt(n + 1) * sym(grid, prod, n + 1)
    return FockState(grid, out, psi.batch)


def apply_z(g, psi: FockState) -> FockState:
    """(z(g) psi)_n = sqrt(n+1) sum_a w_a g_a psi_{n+1}(theta_a, ...)."""
    grid = psi.grid
    gw = np.asarray(g, dtype=complex) * grid.weights
    out = {}
    for n, a in psi.levels.items():
        if n == 0:
            continue
        out[n - 1] = math.sqrt(n) * np.tensordot(gw, a, axes=([0], [0]))
    return FockState(grid, out, psi.batch)


def apply_monomial(f: np.ndarray, m: int, n: int, psi: FockState,
                   middle: Callable[[int], np.ndarray] | None = None,
                   truncate: bool = True) -> FockState:
    """z^dagger(theta_1)..z^dagger(theta_m) [middle] z(eta_1)..z(eta_n) smeared with f.

    f has m+n axes (theta first, eta second).  `middle(level)` returns a
    multiplication factor on the intermediate level (used for B operators).
    """
    grid = psi.grid
    f = np.asarray(f, dtype=complex)
    if f.ndim != m + n:
        raise ValueError(f"kernel arity {f.ndim} does not match m+n={m + n}")
    fw = f * _eta_weights(grid, m, n)
    out: dict[int, np.ndarray] = {}
    for q, a in psi.levels.items():
        if q < n:
            continue
        p = q - n + m
        if p > grid.cutoff:
            if truncate:
                continue
            raise ConfigError("monomial would exceed the particle cutoff")
        f_axes = [m + n - 1 - t for t in range(n)]
        y = np.tensordot(fw, a, axes=(f_axes, list(range(n)))) if n else np.multiply.outer(fw, a)
        y = y * math.sqrt(math.factorial(q) / math.factorial(q - n))
        if middle is not None:
            fac = middle(q - n)
            shape = (1,) * m + fac.shape + (1,) * len(psi.batch)
            y = y * fac.reshape(shape)
        if m:
            y = sym(grid, y, p) * math.sqrt(math.factorial(p) / math.factorial(q - n))
        out[p] = out.get(p, 0) + y
    return FockState(grid, out, psi.batch)


def _eta_weights(grid: FockGrid, m: int, n: int) -> np.ndarray:
    w = np.ones((1,) * (m + n))
    for j in range(n):
        shape = [1] * (m + n)
        shape[m + j] = grid.size
        w = w * grid.weights.reshape(shape)
    return w


def adjoint_kernel(f: np.ndarray, m: int, n: int) -> np.ndarray:
    """Kernel of (z^{dagger m} z^n(f))^* = z^{dagger n} z^m(f^*): conj f(rev b, rev a)."""
    f = np.asarray(f, dtype=complex)
    # new axes: a_1..a_n = eta_n..eta_1, b_1..b_m = theta_m..theta_1
    axes = [m + n - 1 - i for i in range(n)] + [m - 1 - i for i in range(m)]
    return np.conj(np.transpose(f, axes))


def apply_B(g_value: complex, xi: float, psi: FockState, adjoint: bool = False) -> FockState:
    """Multiplication by g(xi) prod_j S(xi - theta_j) on each level (or its adjoint)."""
    grid = psi.grid
    sv = grid.model(xi - grid.nodes)

    def fac(n, a):
        m = np.full((grid.size,) * n, complex(g_value))
        for ax in range(n):
            shape = [1] * n
            shape[ax] = grid.size
            m = m * sv.reshape(shape)
        if adjoint:
            m = np.conj(m)
        return _expand(m, a, n) * a

    return psi.map_levels(fac)


def b_factor(grid: FockGrid, g_value: complex, xi: float, adjoint: bool = False) -> Callable[[int], np.ndarray]:
    sv = grid.model(xi - grid.nodes)

    def middle(n: int) -> np.ndarray:
        m = np.full((grid.size,) * n, complex(g_value))
        for ax in range(n):
            shape = [1] * n
            shape[ax] = grid.size
            m = m * sv.reshape(shape)
        return np.conj(m) if adjoint else m

    return middle


# ----------------------------------------------------- symmetries and fields


def apply_J(psi: FockState) -> FockState:
    """(J psi)_n(theta) = conj psi_n(theta_n, ..., theta_1)."""
    def fn(n, a):
        axes = tuple(range(n - 1, -1, -1)) + tuple(range(n, a.ndim))
        return np.conj(np.transpose(a, axes))
    return psi.map_levels(fn)


def apply_U(x, lam: float, psi: FockState) -> FockState:
    """(U(x, lam) psi)_n(theta) = exp(i p(theta).x) psi_n(theta - lam).

    Boosts resample by cubic splines with zero extrapolation; the fraction of
    norm leaked past the grid edge is stored on the result as `leak`.
    """
    grid = psi.grid
    x0, x1 = float(x[0]), float(x[1])
    out = {}
    leak = 0.0
    for n, a in psi.levels.items():
        b = a
        if lam != 0.0 and n:
            b, lk = _boost_level(grid, a, n, lam)
            leak = max(leak, lk)
        if n:
            p0, p1 = grid.momentum(n)
            b = _expand(np.exp(1j * (p0 * x0 - p1 * x1)), b, n) * b
        out[n] = b
    res = FockState(grid, out, psi.batch)
    res.leak = leak
    return res


def _boost_level(grid: FockGrid, a: np.ndarray, n: int, lam: float):
    from scipy.interpolate import CubicSpline

    b = a
    for ax in range(n):
        spl = CubicSpline(grid.nodes, b, axis=ax, extrapolate=False)
        vals = spl(grid.nodes - lam)
        b = np.nan_to_num(vals, nan=0.0)
    # leakage estimate: mass within |lam| of the edge before the boost
    edge = np.abs(grid.nodes) > grid.theta_max - abs(lam)
    mask = np.zeros((grid.size,) * n, dtype=bool)
    for ax in range(n):
        shape = [1] * n
        shape[ax] = grid.size
        mask = mask | edge.reshape(shape)
    w = grid.weight_array(n)
    tot = np.sum(w * np.abs(a.reshape((grid.size,) * n + (-1,))[..., 0]) ** 2) if a.size else 0.0
    lk = np.sum((w * mask) * np.abs(a.reshape((grid.size,) * n + (-1,))[..., 0]) ** 2)
    return b, float(lk / tot) if tot > 0 else 0.0


def apply_phi(gp, gm, psi: FockState, truncate: bool = True) -> FockState:
    """phi(g) = z^dagger(g^+) + z(g^-), with g^+ and g^- sampled on the nodes."""
    return apply_z_dagger(gp, psi, truncate=truncate) + apply_z(gm, psi)


def apply_phi_prime(gp, gm, psi: FockState, truncate: bool = True) -> FockState:
    """phi'(g) = J phi(g^j) J with (g^j)^pm = conj(g^pm)."""
    return apply_J(apply_phi(np.conj(gp), np.conj(gm), apply_J(psi), truncate=truncate))


# ------------------------------------------------------------ kernel forms


@dataclass
class ContractedKernel:
    """f_{m,n} as a sum over contractions of delta_C times a smooth part.

    Each term stores the matrix element <psi_C, A chi_C> on the uncontracted
    variables (arity m+n-2|C|); the factor (-1)^|C| S_C and the deltas are
    applied when the kernel is densified.
    """

    m: int
    n: int
    terms: list = field(default_factory=list)

    def dense(self, grid: FockGrid) -> np.ndarray:
        k = self.m + self.n
        out = np.zeros((grid.size,) * k, dtype=complex)
        for C, vals in self.terms:
            pref = ((-1) ** len(C.pairs)) * ctr.s_c_grid(grid.model, C, grid.nodes)
            out = out + pref * ctr.delta_grid(C, grid.weights) * ctr.embed_uncontracted(C, vals, grid.size)
        return out

    def smooth_part(self) -> np.ndarray | None:
        for C, vals in self.terms:
            if not C.pairs:
                return vals
        return None


class FockKernelForm:
    """A = sum_{m,n} 1/(m! n!) z^{dagger m} z^n(f_{m,n}), kernels on the grid."""

    def __init__(self, grid: FockGrid, kernels: dict | None = None, meta: dict | None = None):
        self.grid = grid
        self.kernels: dict[tuple[int, int], np.ndarray] = {}
        for (m, n), f in (kernels or {}).items():
            if isinstance(f, ContractedKernel):
                f = f.dense(grid)
            f = np.asarray(f, dtype=complex)
            if f.shape != (grid.size,) * (m + n):
                raise ValueError(f"kernel ({m},{n}) has shape {f.shape}")
            self.kernels[(m, n)] = f
        self.meta = dict(meta or {})

    def orders(self) -> list:
        return sorted(self.kernels)

    def apply(self, psi: FockState) -> FockState:
        out = FockState(psi.grid, {}, psi.batch)
        for (m, n), f in sorted(self.kernels.items()):
            c = 1.0 / (math.factorial(m) * math.factorial(n))
            out = out + apply_monomial(f, m, n, psi).scale(c)
        return out

    def apply_adjoint(self, psi: FockState) -> FockState:
        out = FockState(psi.grid, {}, psi.batch)
        for (m, n), f in sorted(self.kernels.items()):
            c = 1.0 / (math.factorial(m) * math.factorial(n))
            out = out + apply_monomial(adjoint_kernel(f, m, n), n, m, psi).scale(c)
        return out

    def symmetrized(self) -> "FockKernelForm":
        """Project every kernel onto S-symmetric functions in each block."""
        ks = {}
        for (m, n), f in self.kernels.items():
            g = sym(self.grid, f, m) if m > 1 else f
            if n > 1:
                # symmetrize the eta block: move it to the front and back
                axes = list(range(m, m + n)) + list(range(m))
                g = np.transpose(g, axes)
                g = sym(self.grid, g, n)
                g = np.transpose(g, list(range(n, n + m)) + list(range(n)))
            ks[(m, n)] = g
        return FockKernelForm(self.grid, ks, self.meta)


class OperatorOracle:
    """Anything with apply/apply_adjoint acting on (batched) FockStates."""

    def __init__(self, apply: Callable, apply_adjoint: Callable):
        self.apply = apply
        self.apply_adjoint = apply_adjoint


def ja_star_j(A) -> OperatorOracle:
    """The reflected form J A^* J as an oracle."""
    return OperatorOracle(lambda s: apply_J(A.apply_adjoint(apply_J(s))),
                          lambda s: apply_J(A.apply(apply_J(s))))


def identity_oracle() -> OperatorOracle:
    return OperatorOracle(lambda s: s.copy(), lambda s: s.copy())


# ----------------------------------------------------- pointlike elements


def delta_basis(grid: FockGrid, q: int) -> FockState:
    """Batch of pointlike vectors z^dagger(y_1)..z^dagger(y_q) Omega for all node tuples y."""
    G = grid.size
    if q == 0:
        return FockState(grid, {0: np.array(1.0 + 0j)}, ())
    eye = np.eye(G ** q).reshape((G,) * q + (G,) * q)
    w = grid.weight_array(q)
    arr = eye / w.reshape((1,) * q + w.shape)
    arr = sym(grid, arr, q) * math.sqrt(math.factorial(q))
    return FockState(grid, {q: arr}, (G,) * q)


def pointlike_block(A, grid: FockGrid, p: int, q: int) -> np.ndarray:
    """M[x, y] = <z^dag(x_1)..z^dag(x_p) Omega, A z^dag(y_1)..z^dag(y_q) Omega>."""
    G = grid.size
    if q <= p:
        res = A.apply(delta_basis(grid, q)).level(p)
        res = res.reshape((G,) * p + (G,) * q)
        return res * math.sqrt(math.factorial(p))
    res = A.apply_adjoint(delta_basis(grid, p)).level(q)
    res = res.reshape((G,) * q + (G,) * p)
    res = np.conj(res) * math.sqrt(math.factorial(q))
    axes = list(range(q, q + p)) + list(range(q))
    return np.transpose(res, axes)


def extract_coefficients(A, grid: FockGrid, m: int, n: int, cache: dict | None = None) -> ContractedKernel:
    """Coefficient f_{m,n}[A] as a sum over contractions of pointlike matrix elements."""
    if m + n > 2 * grid.cutoff:
        raise ConfigError("order exceeds what the truncated space can represent")
    cache = {} if cache is None else cache
    out = ContractedKernel(m, n)
    for C in ctr.enumerate_contractions(m, n):
        c = len(C.pairs)
        mp, np_ = m - c, n - c
        if mp > grid.cutoff or np_ > grid.cutoff:
            raise ConfigError("pointlike vectors exceed the particle cutoff")
        key = (mp, np_)
        if key not in cache:
            cache[key] = pointlike_block(A, grid, mp, np_)
        blk = cache[key]
        # chi_C lists the remaining etas in reverse order
        if np_ > 1:
            blk = np.transpose(blk, list(range(mp)) + [mp + np_ - 1 - t for t in range(np_)])
        out.terms.append((C, blk))
    return out


def extract_form(A, grid: FockGrid, kmax: int) -> FockKernelForm:
    cache: dict = {}
    ks = {}
    for m in range(kmax + 1):
        for n in range(kmax + 1 - m):
            ks[(m, n)] = extract_coefficients(A, grid, m, n, cache).dense(grid)
    return FockKernelForm(grid, ks)


def reconstruct(form: FockKernelForm, psi: FockState, chi: FockState) -> complex:
    """<psi, A chi> from the kernel expansion."""
    return inner(psi, form.apply(chi))


def matrix_element(A, psi: FockState, chi: FockState) -> complex:
    return inner(psi, A.apply(chi))


# ------------------------------------------------------------ dense norms


def dense_matrix(A, grid: FockGrid, n: int, damp: Callable[[int], np.ndarray] | None = None,
                 damp_side: str = "right", max_dim: int = 6000) -> np.ndarray:
    """Matrix of P_n A P_n (optionally with a diagonal damping) in orthonormal coordinates."""
    G = grid.size
    dims = [G ** l for l in range(n + 1)]
    tot = sum(dims)
    if tot > max_dim:
        raise ConfigError(f"truncated space of dimension {tot} exceeds {max_dim}")
    offs = np.cumsum([0] + dims)
    M = np.zeros((tot, tot), dtype=complex)
    for q in range(n + 1):
        if q == 0:
            basis = FockState(grid, {0: np.ones((1,), dtype=complex)}, (1,))
        else:
            eye = np.eye(G ** q).reshape((G,) * q + (G ** q,))
            w = grid.weight_array(q)
            basis = FockState(grid, {q: sym(grid, eye / np.sqrt(w)[..., None], q)}, (G ** q,))
        if damp is not None and damp_side == "right":
            basis = basis.map_levels(lambda l, a: _expand(damp(l), a, l) * a)
        img = A.apply(basis)
        if damp is not None and damp_side == "left":
            img = img.map_levels(lambda l, a: _expand(damp(l), a, l) * a)
        for p in range(n + 1):
            blk = img.level(p) if p in img.levels else None
            if blk is None:
                continue
            blk = blk * np.sqrt(grid.weight_array(p)).reshape((G,) * p + (1,)) if p else blk
            M[offs[p]:offs[p + 1], offs[q]:offs[q + 1]] = blk.reshape(dims[p], dims[q])
    # restrict to the symmetric subspace from the left as well
    return M


def q_omega_norm(A, grid: FockGrid, ind, n: int) -> float:
    """1/2 ||P_n A e^{-omega(H/mu)} P_n|| + 1/2 ||P_n e^{-omega(H/mu)} A P_n||."""
    def damp(l):
        return np.exp(-ind.omega(grid.energy(l))) if l else np.full((), np.exp(-ind.omega(0.0)))
    right = np.linalg.norm(dense_matrix(A, grid, n, damp, "right"), 2)
    left = np.linalg.norm(dense_matrix(A, grid, n, damp, "left"), 2)
    return 0.5 * float(right) + 0.5 * float(left)


def omega_weighted_norm(grid: FockGrid, f: np.ndarray, ind) -> float:
    """||f||^omega_2 = || e^{omega(E)} f ||_2 for a one-particle function."""
    return float(np.sqrt(np.sum(grid.weights * np.abs(np.exp(ind.omega(np.cosh(grid.nodes))) * f) ** 2)))


def translate_form_kernels(form: FockKernelForm, s: float) -> FockKernelForm:
    """Kernels of U(0,s)-translate: multiply by exp(i s mu (sum sinh theta - sum sinh eta))."""
    grid = form.grid
    ks = {}
    for (m, n), f in form.kernels.items():
        ph = np.zeros((grid.size,) * (m + n))
        for ax in range(m + n):
            sgn = 1.0 if ax < m else -1.0
            shape = [1] * (m + n)
            shape[ax] = grid.size
            ph = ph + sgn * grid.mu * np.sinh(grid.nodes).reshape(shape)
        ks[(m, n)] = f * np.exp(1j * s * ph)
    return FockKernelForm(grid, ks)


def random_form(grid: FockGrid, rng: np.random.Generator, kmax: int = 3, decay: float = 0.7) -> FockKernelForm:
    """Random smooth kernels for all m+n <= kmax, S-symmetric in each block."""
    ks = {}
    for m in range(kmax + 1):
        for n in range(kmax + 1 - m):
            k = m + n
            shape = (grid.size,) * k
            raw = rng.normal(size=shape) + 1j * rng.normal(size=shape)
            env = np.ones(shape)
            for ax in range(k):
                env = env * np.exp(-decay * np.cosh(grid.node_array(k, ax)))
            ks[(m, n)] = raw * env if k else complex(raw) * np.ones(())
    return FockKernelForm(grid, ks).symmetrized()


def form_difference(a: FockKernelForm, b: FockKernelForm) -> float:
    worst = 0.0
    for key in set(a.kernels) | set(b.kernels):
        fa = a.kernels.get(key)
        fb = b.kernels.get(key)
        if fa is None:
            fa = np.zeros_like(fb)
        if fb is None:
            fb = np.zeros_like(fa)
        if fa.size:
            worst = max(worst, float(np.max(np.abs(fa - fb))))
    return worst


def iter_levels(psi: FockState) -> Iterable:
    return sorted(psi.levels.items())
