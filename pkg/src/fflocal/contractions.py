"""Contractions C = (m, n, {(l_j, r_j)}) and the factors delta_C, S_C, R_C.

Indices are 1-based as in the usual notation: 1 <= l <= m < r <= m+n.  Left
indices within one contraction are pairwise distinct, and so are the right
ones.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .scattering import ScatteringModel


@dataclass(frozen=True)
class Contraction:
    m: int
    n: int
    pairs: tuple = ()

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be nonnegative")
        ls = [l for l, _ in self.pairs]
        rs = [r for _, r in self.pairs]
        for l, r in self.pairs:
            if not (1 <= l <= self.m and self.m + 1 <= r <= self.m + self.n):
                raise ValueError(f"pair {(l, r)} out of range for m={self.m}, n={self.n}")
        if len(set(ls)) != len(ls) or len(set(rs)) != len(rs):
            raise ValueError(f"repeated index in contraction {self.pairs}")

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def left(self) -> tuple:
        return tuple(l for l, _ in self.pairs)

    @property
    def right(self) -> tuple:
        return tuple(r for _, r in self.pairs)

    def free_left(self) -> list:
        return [p for p in range(1, self.m + 1) if p not in self.left]

    def free_right(self) -> list:
        return [p for p in range(self.m + 1, self.m + self.n + 1) if p not in self.right]

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "pairs": [list(p) for p in self.pairs]}


def count(m: int, n: int) -> int:
    return sum(math.comb(m, k) * math.comb(n, k) * math.factorial(k) for k in range(min(m, n) + 1))


def enumerate_contractions(m: int, n: int) -> list[Contraction]:
    """All contractions with fixed m, n; sorted by size, then lexicographically."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    out = []
    for k in range(min(m, n) + 1):
        block = []
        for ls in itertools.combinations(range(1, m + 1), k):
            for rs in itertools.permutations(range(m + 1, m + n + 1), k):
                block.append(tuple(zip(ls, rs)))
        block.sort()
        out.extend(Contraction(m, n, p) for p in block)
    return out


# ------------------------------------------------------------------ factors


def s_m(model: ScatteringModel, m: int, xi: Sequence, p: int, q: int):
    """S^{(m)}_{p,q}(xi), with 1-based p, q."""
    same = (p <= m) == (q <= m)
    return model(xi[p - 1] - xi[q - 1]) if same else model(xi[q - 1] - xi[p - 1])


def _coords(C: Contraction, theta, eta) -> list:
    th = [np.asarray(t, dtype=complex) for t in theta]
    et = [np.asarray(e, dtype=complex) for e in eta]
    if len(th) != C.m or len(et) != C.n:
        raise ValueError(f"arity mismatch: contraction ({C.m},{C.n}), got ({len(th)},{len(et)})")
    return th + et


def s_c_xi(model: ScatteringModel, C: Contraction, xi: Sequence):
    out = np.asarray(1.0 + 0j)
    for l, r in C.pairs:
        for p in range(l + 1, r):
            out = out * s_m(model, C.m, xi, p, l)
    for (li, ri), (lj, rj) in itertools.product(C.pairs, C.pairs):
        if ri < rj and li < lj:
            out = out * s_m(model, C.m, xi, lj, ri)
    return out


def r_c_xi(model: ScatteringModel, C: Contraction, xi: Sequence):
    out = np.asarray(1.0 + 0j)
    for l, _ in C.pairs:
        prod = np.asarray(1.0 + 0j)
        for p in range(1, C.m + C.n + 1):
            prod = prod * s_m(model, C.m, xi, l, p)
        out = out * (1.0 - prod)
    return out


def _scalar(x):
    x = np.asarray(x)
    return complex(x) if x.ndim == 0 else x


def s_c(model: ScatteringModel, C: Contraction, theta, eta):
    """S_C(theta, eta); arguments may be arrays (broadcast elementwise)."""
    return _scalar(s_c_xi(model, C, _coords(C, theta, eta)))


def r_c(model: ScatteringModel, C: Contraction, theta, eta):
    return _scalar(r_c_xi(model, C, _coords(C, theta, eta)))


def on_support(C: Contraction, theta, eta) -> tuple[list, list]:
    """Copy theta_l into eta_{r-m} for every pair, so the arguments lie on supp delta_C."""
    th = list(theta)
    et = list(eta)
    for l, r in C.pairs:
        et[r - C.m - 1] = th[l - 1]
    return th, et


# ------------------------------------------------------------ tuple surgery


def hat_tuple(C: Contraction, theta, eta) -> tuple[tuple, tuple]:
    """Remove the contracted slots from theta and eta."""
    if len(theta) != C.m or len(eta) != C.n:
        raise ValueError("arity mismatch")
    th = tuple(theta[p - 1] for p in C.free_left())
    et = tuple(eta[p - C.m - 1] for p in C.free_right())
    return th, et


def check_tuple(C: Contraction, theta) -> tuple:
    """(theta_{m+1..k} without the r's, then theta_{1..m} without the l's)."""
    if len(theta) != C.m + C.n:
        raise ValueError("arity mismatch")
    right = tuple(theta[p - 1] for p in C.free_right())
    left = tuple(theta[p - 1] for p in C.free_left())
    return right + left


def split(C: Contraction, index: int = 0) -> tuple[Contraction, Contraction]:
    """C = C' u C1 with C1 the chosen pair relabelled inside the hatted tuples of C'."""
    if not C.pairs:
        raise ValueError("cannot split the empty contraction")
    l1, r1 = C.pairs[index]
    rest = tuple(p for i, p in enumerate(C.pairs) if i != index)
    Cp = Contraction(C.m, C.n, rest)
    mm = C.m - len(rest)
    nl = l1 - sum(1 for l, _ in rest if l < l1)
    nr = mm + (r1 - C.m) - sum(1 for _, r in rest if r < r1)
    return Cp, Contraction(mm, C.n - len(rest), ((nl, nr),))


# ----------------------------------------------------------- grid helpers


def _axis_nodes(nodes: np.ndarray, k: int, axis: int) -> np.ndarray:
    shape = [1] * k
    shape[axis] = nodes.size
    return nodes.reshape(shape)


def s_c_grid(model: ScatteringModel, C: Contraction, nodes: np.ndarray) -> np.ndarray:
    """S_C on the full product grid, read on supp delta_C (eta_{r-m} := theta_l)."""
    k = C.m + C.n
    xi = [_axis_nodes(nodes, k, a) for a in range(k)]
    for l, r in C.pairs:
        xi[r - 1] = xi[l - 1]
    return np.asarray(s_c_xi(model, C, xi))


def r_c_grid(model: ScatteringModel, C: Contraction, nodes: np.ndarray) -> np.ndarray:
    k = C.m + C.n
    xi = [_axis_nodes(nodes, k, a) for a in range(k)]
    for l, r in C.pairs:
        xi[r - 1] = xi[l - 1]
    return np.asarray(r_c_xi(model, C, xi))


def delta_grid(C: Contraction, weights: np.ndarray) -> np.ndarray:
    """Discrete delta_C: prod over pairs of delta_ab / w_a, broadcastable to grid^{m+n}."""
    k = C.m + C.n
    G = weights.size
    out = np.ones((1,) * k)
    d = np.diag(1.0 / weights)
    for l, r in C.pairs:
        shape = [1] * k
        shape[l - 1] = G
        shape[r - 1] = G
        out = out * d.reshape(shape)
    return out


def embed(arr: np.ndarray, positions: Sequence[int], total: int) -> np.ndarray:
    """Place the axes of arr at the given (0-based) positions of a total-dim array; others size 1."""
    positions = list(positions)
    if arr.ndim != len(positions):
        raise ValueError("arity mismatch while embedding")
    if not positions:
        return np.asarray(arr).reshape((1,) * total)
    order = np.argsort(positions)
    a = np.transpose(arr, order)
    shape = [1] * total
    for pos, size in zip(sorted(positions), a.shape):
        shape[pos] = size
    return a.reshape(shape)


def embed_uncontracted(C: Contraction, vals: np.ndarray, G: int | None = None) -> np.ndarray:
    """vals over (theta-hat, eta-hat) placed on the uncontracted axes of grid^{m+n}."""
    pos = [p - 1 for p in C.free_left()] + [p - 1 for p in C.free_right()]
    return embed(np.asarray(vals), pos, C.m + C.n)


# ----------------------------------------------------------- J A* J


def ja_star_coefficients(kernels: dict, model: ScatteringModel, nodes: np.ndarray,
                         weights: np.ndarray, orders=None) -> dict:
    """Coefficients of J A* J from those of A (dense grid kernels with discrete deltas).

    f'_{m,n}(theta, eta) = sum_C (-1)^|C| delta_C S_C R_C(theta, eta) f_{n-|C|, m-|C|}(eta-hat, theta-hat).
    """
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    G = nodes.size
    keys = sorted(kernels) if orders is None else sorted(orders)
    out = {}
    for m, n in keys:
        k = m + n
        acc = np.zeros((G,) * k, dtype=complex)
        for C in enumerate_contractions(m, n):
            c = len(C.pairs)
            src = (n - c, m - c)
            if src not in kernels:
                raise KeyError(f"missing kernel order {src} needed for ({m},{n})")
            f = np.asarray(kernels[src])
            fac = s_c_grid(model, C, nodes) * r_c_grid(model, C, nodes) if c else np.ones((1,) * k)
            if c and not np.any(fac):
                continue
            pos = [p - 1 for p in C.free_right()] + [p - 1 for p in C.free_left()]
            term = embed(f, pos, k)
            acc = acc + ((-1) ** c) * fac * delta_grid(C, weights) * term
        out[(m, n)] = acc
    return out
