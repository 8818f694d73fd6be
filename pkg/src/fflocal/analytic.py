"""Graphs in the imaginary directions, tube regions, numerical residues and boundary-value jumps.

A graph lives on the lattice pi Z^k of imaginary parts.  Kinds:

    plus   nodes (0..0, pi..pi) with j entries pi; edges between consecutive nodes
    minus  plus shifted by (-pi, ..., -pi)
    zero   plus union minus (they share the origin)
    one    zero + 2 pi Z (1, ..., 1)             (listed for shift 0 only)
    two    union over m < k of one + (-pi x m, 0 x (k-m))

Tube regions (open, convex) are given by linear inequalities, so the distance
to the complement is a minimum over facets.

Residues follow the convention res_{z.a = c} F = ((z.a - c) F)|_{z.a = c}; the
contour runs in the coordinate w = z.a, which makes the scaling rule
res_{(alpha a, alpha c)} = alpha res_{(a, c)} automatic.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Sequence

import numpy as np

from .report import CheckReport, ConfigError

PI = math.pi
GRAPH_KINDS = ("plus", "minus", "zero", "one", "two")
REGION_KINDS = ("I_plus", "I_minus", "I_1", "I_2", "I_3")
EPS_LADDER = (1e-2, 5e-3, 2.5e-3)
# smeared identities are cheap per level, so they take one more halving
SMEAR_LADDER = (1e-2, 5e-3, 2.5e-3, 1.25e-3)


class ExtrapolationError(RuntimeError):
    """The epsilon ladder did not settle; boundary values are unreliable."""


# ----------------------------------------------------------------- graphs


def node_plus(k: int, j: int) -> tuple:
    """lambda^{(k,j)}; negative j gives lambda^{(k,k+j)} - pi (the minus graph)."""
    if j >= 0:
        return tuple([0.0] * (k - j) + [PI] * j)
    jj = -j
    return tuple([-PI] * jj + [0.0] * (k - jj))


def _check_k(k: int) -> None:
    if int(k) != k or k < 1:
        raise ConfigError(f"dimension must be a positive integer, got {k}")


def graph_nodes(kind: str, k: int) -> list:
    """Nodes as tuples of floats (for periodic kinds: the window without 2 pi shifts)."""
    _check_k(k)
    if kind == "plus":
        return [node_plus(k, j) for j in range(k + 1)]
    if kind == "minus":
        return [node_plus(k, -j) for j in range(k, -1, -1)]
    if kind in ("zero", "one"):
        return [node_plus(k, -j) for j in range(k, 0, -1)] + [node_plus(k, j) for j in range(k + 1)]
    if kind == "two":
        out = []
        base = graph_nodes("zero", k)
        for m in range(k):
            shift = np.array([-PI] * m + [0.0] * (k - m))
            for nd in base:
                t = tuple(float(v) for v in np.array(nd) + shift)
                if t not in out:
                    out.append(t)
        return sorted(out)
    raise ConfigError(f"unknown graph kind {kind!r}; known: {GRAPH_KINDS}")


def graph_edges(kind: str, k: int) -> list:
    """Edges as (base node, axis): the segment from base to base + pi e_axis."""
    nodes = graph_nodes(kind, k)
    have = {tuple(np.round(np.array(n) / PI).astype(int)) for n in nodes}
    out = []
    for nd in nodes:
        key = tuple(np.round(np.array(nd) / PI).astype(int))
        for ax in range(k):
            nb = list(key)
            nb[ax] += 1
            if tuple(nb) in have and _edge_ok(kind, k, key, tuple(nb)):
                out.append((nd, ax))
    return out


def _edge_ok(kind: str, k: int, a: tuple, b: tuple) -> bool:
    # all conditions are convex, so testing both end points suffices
    pa, pb = np.array(a) * PI, np.array(b) * PI
    if kind in ("plus", "minus", "zero"):
        return bool(node_in_graph(kind, k, pa) and node_in_graph(kind, k, pb))
    if kind == "one":
        return all(_stair(p, PI) for p in (pa, pb))
    return all(_stair(p, 2 * PI) for p in (pa, pb))


def _stair(lam: np.ndarray, width: float) -> bool:
    tol = 1e-12
    return bool(np.all(np.diff(lam) >= -tol) and lam[-1] <= lam[0] + width + tol)


def node_in_graph(kind: str, k: int, lam) -> bool:
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (k,):
        raise ConfigError("lambda has the wrong dimension")
    if kind in ("plus", "minus", "zero"):
        return any(np.allclose(lam, n) for n in graph_nodes(kind, k))
    q = lam / PI
    if not np.allclose(q, np.round(q)):
        return False
    if kind == "one":
        # shift back into the window by the diagonal period
        s = 2 * PI * math.floor((lam[0] + PI) / (2 * PI) + 1e-12)
        return any(np.allclose(lam - s, n) for n in graph_nodes("zero", k))
    if kind == "two":
        return _stair(lam, 2 * PI)
    raise ConfigError(f"unknown graph kind {kind!r}")


def on_graph(kind: str, k: int, lam, tol: float = 1e-12) -> bool:
    """Is lambda on the closure of an edge of the graph?"""
    lam = np.asarray(lam, dtype=float)
    q = lam / PI
    off = [i for i in range(k) if abs(q[i] - round(q[i])) > tol]
    if not off:
        return node_in_graph(kind, k, np.round(q) * PI)
    if len(off) > 1:
        return False
    i = off[0]
    lo = np.round(q)
    lo[i] = math.floor(q[i])
    hi = lo.copy()
    hi[i] += 1
    return node_in_graph(kind, k, lo * PI) and node_in_graph(kind, k, hi * PI) and \
        _edge_ok(kind if kind in ("plus", "minus", "zero") else kind, k,
                 tuple(lo.astype(int)), tuple(hi.astype(int)))


def edge_points(kind: str, k: int, per_edge: int = 5) -> np.ndarray:
    """Sample points on every edge of the graph (end points included)."""
    pts = []
    t = np.linspace(0.0, PI, per_edge)
    for base, ax in graph_edges(kind, k):
        for s in t:
            p = np.array(base, dtype=float)
            p[ax] += s
            pts.append(p)
    uniq = np.unique(np.round(np.array(pts), 12), axis=0)
    return uniq


# ------------------------------------------------------------- tube regions


def region_inequalities(kind: str, k: int) -> tuple[np.ndarray, np.ndarray]:
    """(A, b) with region = {lam : A lam < b}."""
    _check_k(k)
    rows, rhs = [], []

    def ineq(coef: dict, b: float):
        r = np.zeros(k)
        for i, c in coef.items():
            r[i] += c
        rows.append(r)
        rhs.append(b)

    if kind in ("I_plus", "I_minus"):
        lo, hi = (0.0, PI) if kind == "I_plus" else (-PI, 0.0)
        ineq({0: -1.0}, -lo)
        for i in range(k - 1):
            ineq({i: 1.0, i + 1: -1.0}, 0.0)
        ineq({k - 1: 1.0}, hi)
    elif kind in ("I_1", "I_2"):
        width = PI if kind == "I_1" else 2 * PI
        for i in range(k - 1):
            ineq({i: 1.0, i + 1: -1.0}, 0.0)
        if k == 1:
            return np.zeros((0, 1)), np.zeros(0)
        ineq({k - 1: 1.0, 0: -1.0}, width)
    elif kind == "I_3":
        for i, j in itertools.permutations(range(k), 2):
            ineq({i: 1.0, j: -1.0}, 2 * PI)
    else:
        raise ConfigError(f"unknown region kind {kind!r}; known: {REGION_KINDS}")
    if not rows:
        return np.zeros((0, k)), np.zeros(0)
    return np.array(rows), np.array(rhs)


def region_contains(kind: str, k: int, lam) -> bool:
    A, b = region_inequalities(kind, k)
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (k,):
        raise ConfigError("lambda has the wrong dimension")
    return bool(np.all(A @ lam < b)) if A.size else True


def boundary_distance(kind: str, k: int, lam) -> float:
    """Euclidean distance from lambda to the complement of the open region (0 outside)."""
    A, b = region_inequalities(kind, k)
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (k,):
        raise ConfigError("lambda has the wrong dimension")
    if not A.size:
        return math.inf
    slack = (b - A @ lam) / np.linalg.norm(A, axis=1)
    return float(max(0.0, np.min(slack)))


def sample_region(kind: str, k: int, n: int, rng: np.random.Generator, min_dist: float = 0.0) -> np.ndarray:
    """Rejection samples from the region (bounded kinds; I_1, I_2, I_3 are cut to |lam| < 2 pi)."""
    out = []
    lo, hi = {"I_plus": (0.0, PI), "I_minus": (-PI, 0.0)}.get(kind, (-2 * PI, 2 * PI))
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > 10000 * n:
            raise ConfigError("could not sample the region")
        lam = rng.uniform(lo, hi, size=k)
        if kind in ("I_plus", "I_minus"):
            lam = np.sort(lam)
        if region_contains(kind, k, lam) and boundary_distance(kind, k, lam) > min_dist:
            out.append(lam)
    return np.array(out)


# ---------------------------------------------------------------- residues


def _hyperplane_point(a: np.ndarray, c: complex, basepoint) -> np.ndarray:
    base = np.asarray(basepoint, dtype=complex)
    k = a.size
    if base.size == k:
        return base - ((base @ a - c) / (a @ a)) * a
    if base.size == k - 1:
        j = int(np.argmax(np.abs(a)))
        z = np.insert(base, j, 0.0)
        z[j] = (c - z @ a) / a[j]
        return z
    raise ConfigError(f"basepoint must have {k} or {k - 1} entries")


def residue_numeric(F: Callable, a, c: complex = 0.0, basepoint=(), radius: float = 0.1,
                    points: int = 256, avoid: Sequence[tuple] = ()) -> complex:
    """(1/2 pi i) times the contour integral of F dw around w = c, with w = z.a.

    F takes an array of shape (..., k).  `avoid` lists other declared poles as
    (a', c') pairs; the contour must not come within 1e-9 of them.
    """
    a = np.asarray(a, dtype=float).ravel()
    if not np.any(a):
        raise ConfigError("residue direction must be nonzero")
    z0 = _hyperplane_point(a, complex(c), basepoint)
    d = a / (a @ a)
    phi = 2 * PI * np.arange(points) / points
    dw = radius * np.exp(1j * phi)
    z = z0[None, :] + dw[:, None] * d[None, :]
    for a2, c2 in avoid:
        a2 = np.asarray(a2, dtype=float)
        if np.min(np.abs(z @ a2 - c2)) < 1e-9:
            raise ConfigError("residue contour hits another declared pole")
    vals = np.asarray(F(z), dtype=complex)
    # (1/2 pi i) sum F dw, dw = i r e^{i phi} dphi
    return complex(np.mean(vals * dw))


def iterated_residue(F: Callable, dirs: Sequence, offsets: Sequence, basepoint, radius: float = 0.1,
                     points: int = 64) -> complex:
    """res_{z.a1=c1} ... res_{z.ap=cp} F by nested contours in the dual coordinates w_i = z.a_i."""
    A = np.array([np.asarray(x, dtype=float).ravel() for x in dirs])
    p, k = A.shape
    cs = np.asarray(offsets, dtype=complex)
    if np.linalg.matrix_rank(A) < p:
        raise ConfigError("pole directions must be linearly independent")
    D = A.T @ np.linalg.inv(A @ A.T)  # k x p, A D = 1
    base = np.asarray(basepoint, dtype=complex)
    if base.size != k:
        raise ConfigError(f"basepoint must have {k} entries")
    z0 = base + D @ (cs - A @ base)
    phi = 2 * PI * np.arange(points) / points
    ring = radius * np.exp(1j * phi)
    grids = np.meshgrid(*([ring] * p), indexing="ij")
    W = np.stack([g.ravel() for g in grids], axis=-1)
    z = z0[None, :] + W @ D.T
    vals = np.asarray(F(z), dtype=complex)
    return complex(np.mean(vals * np.prod(W, axis=-1)))


# -------------------------------------------------- smeared boundary values


def gaussian_smear(center=None, width: float = 1.0) -> Callable:
    def g(x):
        x = np.asarray(x, dtype=float)
        c = np.zeros(x.shape[-1]) if center is None else np.asarray(center, dtype=float)
        return np.exp(-np.sum((x - c) ** 2, axis=-1) / (2 * width ** 2))
    g.width = width
    g.center = center
    return g


def _extent(g: Callable, L: float | None) -> float:
    """Half-width of the integration box: explicit, or 7 widths past the Gaussian center."""
    if L is not None:
        return float(L)
    width = getattr(g, "width", 1.0)
    center = getattr(g, "center", None)
    off = float(np.max(np.abs(center))) if center is not None else 0.0
    return 7.0 * width + off


def _graded_rule(L: float, eps_min: float, panel: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss rule on [-L, L], geometrically refined toward 0 down to eps_min/8."""
    x, w = np.polynomial.legendre.leggauss(panel)
    edges = [0.0]
    h = eps_min / 8.0
    while h < L:
        edges.append(h)
        h *= 2.0
    edges.append(L)
    edges = np.array(edges)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes.append(mid + half * x)
        weights.append(half * w)
    pos = np.concatenate(nodes)
    pw = np.concatenate(weights)
    return np.concatenate([-pos[::-1], pos]), np.concatenate([pw[::-1], pw])


class _Coords:
    """x = D u + V v with u_i = x.a_i; graded nodes in u, plain Gauss nodes in v."""

    def __init__(self, dirs: np.ndarray, k: int, L: float, eps_min: float, v_points: int = 64):
        self.k = k
        A = np.atleast_2d(dirs) if len(dirs) else np.zeros((0, k))
        self.A = A
        p = A.shape[0]
        self.p = p
        if p:
            self.D = A.T @ np.linalg.inv(A @ A.T)
            _, _, vt = np.linalg.svd(A)
            self.V = vt[p:].T
        else:
            self.D = np.zeros((k, 0))
            self.V = np.eye(k)
        self.jac = abs(np.linalg.det(np.hstack([self.D, self.V]))) if k else 1.0
        # u = x.a must cover the image of the ball |x| <= L
        span = L * float(np.max(np.linalg.norm(A, axis=1))) if p else L
        self.u_rule = _graded_rule(span, eps_min)
        xv, wv = np.polynomial.legendre.leggauss(v_points)
        self.v_rule = (L * xv, L * wv)

    def points(self, drop: Sequence[int] = ()) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights for the full integral, with the u-coordinates in `drop` pinned to 0."""
        axes, ws = [], []
        for i in range(self.p):
            if i in drop:
                axes.append(np.zeros(1))
                ws.append(np.ones(1))
            else:
                axes.append(self.u_rule[0])
                ws.append(self.u_rule[1])
        for _ in range(self.k - self.p):
            axes.append(self.v_rule[0])
            ws.append(self.v_rule[1])
        grids = np.meshgrid(*axes, indexing="ij")
        wgrid = np.ones(grids[0].shape)
        for i, w in enumerate(ws):
            shape = [1] * len(ws)
            shape[i] = w.size
            wgrid = wgrid * w.reshape(shape)
        U = np.stack([g.ravel() for g in grids[:self.p]], axis=-1) if self.p else np.zeros((wgrid.size, 0))
        Vc = np.stack([g.ravel() for g in grids[self.p:]], axis=-1) if self.k > self.p else np.zeros((wgrid.size, 0))
        x = U @ self.D.T + Vc @ self.V.T
        return x, wgrid.ravel() * self.jac


def richardson(values: Sequence[complex]) -> tuple[complex, float]:
    """Extrapolate f(eps), f(eps/2), f(eps/4), ... to eps = 0; return value and spread.

    With n values the error terms eps^1 .. eps^(n-1) are removed.  The spread
    is the change made by the last elimination step.
    """
    row = [complex(v) for v in values]
    if len(row) < 2:
        raise ValueError("need at least two ladder values")
    prev_best = row[-1]
    j = 0
    while len(row) > 1:
        j += 1
        fac = 2.0 ** j
        prev_best = row[-1]
        row = [(fac * b - a) / (fac - 1.0) for a, b in zip(row[:-1], row[1:])]
    return row[0], float(abs(row[0] - prev_best))


def smeared_boundary(F: Callable, b, g: Callable, coords: _Coords, eps: Sequence[float] = SMEAR_LADDER,
                     drop: Sequence[int] = (), inner: Callable | None = None) -> tuple[complex, float]:
    """Richardson limit of int F(x + i eps b) g(x) dx (or with `inner` replacing F) over the coords."""
    x, w = coords.points(drop)
    b = np.asarray(b, dtype=float)
    gv = g(x) * w
    vals = []
    fn = F if inner is None else inner
    for e in eps:
        vals.append(complex(np.sum(np.asarray(fn(x + 1j * e * b[None, :]), dtype=complex) * gv)))
    val, spread = richardson(vals)
    if spread > 1e-2 * max(1.0, abs(val)):
        raise ExtrapolationError(f"epsilon ladder did not settle (spread {spread:.2e})")
    return val, spread


def _residue_field(F: Callable, dirs: list, radius: float, others: Sequence = ()) -> Callable:
    """z -> iterated residue of F along dirs at the point of the pole planes nearest z.

    The contour for each residue moves along the dual basis of dirs + others, so it
    never crosses the remaining pole planes.
    """
    A = np.array(dirs, dtype=float)
    p = A.shape[0]
    full = np.vstack([A] + [np.asarray(o, dtype=float)[None, :] for o in others])
    D = (full.T @ np.linalg.inv(full @ full.T))[:, :p]
    phi = 2 * PI * np.arange(48) / 48
    ring = radius * np.exp(1j * phi)
    grids = np.meshgrid(*([ring] * p), indexing="ij")
    W = np.stack([g.ravel() for g in grids], axis=-1)
    shift = W @ D.T
    prodw = np.prod(W, axis=-1)

    def field(z):
        z = np.asarray(z, dtype=complex)
        z0 = z - (z @ A.T) @ D.T  # onto the residue planes, keeping z.others fixed
        pts = z0[:, None, :] + shift[None, :, :]
        vals = np.asarray(F(pts.reshape(-1, z.shape[-1])), dtype=complex).reshape(pts.shape[:2])
        return np.mean(vals * prodw[None, :], axis=1)
    return field


def jump_check(F: Callable, a, b_plus, b_minus, b_perp, smear: Callable | None = None, k: int | None = None,
               tol: float = 1e-7, L: float | None = None, radius: float = 0.1,
               eps: Sequence[float] = SMEAR_LADDER) -> CheckReport:
    """<F(.+i0b-), g> = <F(.+i0b+), g> + 2 pi i <delta(x.a) res F(.+i0b_perp), g>."""
    a = np.asarray(a, dtype=float)
    k = a.size if k is None else k
    bp, bm, bo = (np.asarray(v, dtype=float) for v in (b_plus, b_minus, b_perp))
    if not (a @ bp > 0 and a @ bm < 0 and abs(a @ bo) < 1e-12):
        raise ConfigError("need a.b+ > 0, a.b- < 0 and a.b_perp = 0")
    g = smear or gaussian_smear(np.full(k, 0.3), 2.0)
    co = _Coords(a[None, :], k, _extent(g, L), min(eps))
    lhs, s1 = smeared_boundary(F, bm, g, co, eps)
    rp, s2 = smeared_boundary(F, bp, g, co, eps)
    res = _residue_field(F, [a], radius)
    rr, s3 = smeared_boundary(F, bo, g, co, eps, drop=(0,), inner=res)
    rhs = rp + 2j * PI * rr
    rep = CheckReport("jump", meta={"k": k, "a": a.tolist(), "eps": list(eps)})
    rep.add("onepole", abs(lhs - rhs), tol, 3 * len(eps), lhs=lhs, rhs=rhs,
            spread=max(s1, s2, s3))
    return rep


def multivarres_check(F: Callable, dirs: Sequence, c_dir, b_of: Callable[[frozenset], np.ndarray],
                      smear: Callable | None = None, tol: float = 1e-7, L: float | None = None,
                      radius: float = 0.1, eps: Sequence[float] = SMEAR_LADDER) -> CheckReport:
    """F(x+i0c) = sum_M (2 pi i)^|M| prod delta(x.a_m) res...res F(x+i0b^M), smeared.

    b_of(M) returns the approach direction for the subset M (0-based indices).
    """
    A = np.array([np.asarray(v, dtype=float) for v in dirs])
    p, k = A.shape
    c = np.asarray(c_dir, dtype=float)
    if np.any(A @ c >= 0):
        raise ConfigError("c must satisfy a_j.c < 0 for all j")
    g = smear or gaussian_smear(np.full(k, 0.3), 2.0)
    co = _Coords(A, k, _extent(g, L), min(eps))
    lhs, spread = smeared_boundary(F, c, g, co, eps)
    total = 0.0 + 0.0j
    terms = {}
    for size in range(p + 1):
        for M in itertools.combinations(range(p), size):
            b = np.asarray(b_of(frozenset(M)), dtype=float)
            for j in range(p):
                want = (j in M)
                if want and abs(A[j] @ b) > 1e-12 or (not want and A[j] @ b <= 0):
                    raise ConfigError(f"approach direction for M={M} violates the sign pattern")
            if M:
                inner = _residue_field(F, [A[m] for m in M], radius,
                                       [A[j] for j in range(p) if j not in M])
                val, s = smeared_boundary(F, b, g, co, eps, drop=M, inner=inner)
            else:
                val, s = smeared_boundary(F, b, g, co, eps)
            spread = max(spread, s)
            val *= (2j * PI) ** len(M)
            terms[str(list(M))] = val
            total += val
    rep = CheckReport("multivarres", meta={"p": p, "k": k, "eps": list(eps)})
    rep.add("sevdimres", abs(lhs - total), tol, 1, lhs=lhs, rhs=total, terms=terms, spread=spread)
    return rep


# ------------------------------------------------- max modulus and pointwise


def _cross_on_slice(F: Callable, lam: np.ndarray, nodes: np.ndarray, weights: np.ndarray) -> float:
    from .indicatrix import KernelSample, full_cross_norm

    k = lam.size
    grids = np.meshgrid(*([nodes] * k), indexing="ij")
    z = np.stack([g + 1j * l for g, l in zip(grids, lam)], axis=-1)
    vals = np.asarray(F(z.reshape(-1, k)), dtype=complex).reshape((nodes.size,) * k)
    return full_cross_norm(KernelSample(vals, nodes, weights, k, 0), restarts=2)


def slice_norms(F: Callable, lams: np.ndarray, theta: float = 4.0, points: int = 24) -> np.ndarray:
    x, w = np.polynomial.legendre.leggauss(points)
    nodes, weights = theta * x, theta * w
    return np.array([_cross_on_slice(F, np.asarray(l, dtype=float), nodes, weights) for l in lams])


def max_modulus_check(F: Callable, kind: str, k: int, interior: np.ndarray | None = None,
                      tol: float = 1e-8, theta: float = 4.0, points: int = 24, per_edge: int = 5,
                      seed: int = 0) -> CheckReport:
    """Sampled sup of the x-norm over interior slices is at most the sup over edge slices.

    The norms are computed on the rapidity window [-theta, theta]; F takes (..., k) arrays.
    """
    region = {"plus": "I_plus", "minus": "I_minus"}.get(kind)
    if region is None:
        raise ConfigError(f"max-modulus check supports the plus and minus graphs, not {kind!r}")
    edges = edge_points(kind, k, per_edge)
    if interior is None:
        interior = sample_region(region, k, 12, np.random.default_rng(seed), 1e-3)
    interior = np.atleast_2d(interior)
    for lam in interior:
        if not region_contains(region, k, lam):
            raise ConfigError(f"interior sample {lam} is not inside {region}")
    e = slice_norms(F, edges, theta, points)
    i = slice_norms(F, interior, theta, points)
    rep = CheckReport(f"max-modulus [{kind}, k={k}]",
                      meta={"theta": theta, "points": points, "sup": "sampled"})
    rep.add("maxmodcross", max(0.0, float(np.max(i) - np.max(e))), tol, len(e) + len(i),
            edge_sup=float(np.max(e)), interior_sup=float(np.max(i)))
    return rep


def pointwise_constant(k: int) -> float:
    return (4.0 / PI) ** k * k ** (k / 4.0)


def pointwise_bound_check(F: Callable, region: str, k: int, samples: np.ndarray | None = None,
                          theta: float = 4.0, points: int = 24, seed: int = 0,
                          sup_lams: np.ndarray | None = None) -> CheckReport:
    """|F(zeta)| <= (4/pi)^k k^{k/4} dist(Im zeta)^{-k/2} sup_lam ||F(.+i lam)||_x at every sample."""
    if region not in REGION_KINDS:
        raise ConfigError(f"unknown region {region!r}")
    rng = np.random.default_rng(seed)
    if samples is None:
        lam = sample_region(region, k, 16, rng, 1e-2)
        th = rng.uniform(-theta / 2, theta / 2, size=lam.shape)
        samples = th + 1j * lam
    samples = np.atleast_2d(np.asarray(samples, dtype=complex))
    if sup_lams is None:
        sup_lams = np.vstack([samples.imag, sample_region(region, k, 8, rng, 1e-3)])
    for z in samples:
        if not region_contains(region, k, z.imag):
            raise ConfigError(f"sample {z} is outside {region}")
    sup = float(np.max(slice_norms(F, sup_lams, theta, points)))
    vals = np.abs(np.asarray(F(samples), dtype=complex))
    dist = np.array([boundary_distance(region, k, z.imag) for z in samples])
    bound = pointwise_constant(k) * dist ** (-k / 2.0) * sup
    excess = float(np.max(vals / bound))
    rep = CheckReport(f"pointwise bound [{region}, k={k}]", meta={"theta": theta, "sup": "sampled"})
    rep.add("pointwise", max(0.0, excess - 1.0), 0.0, len(samples), ratio=excess, sup_norm=sup)
    return rep
