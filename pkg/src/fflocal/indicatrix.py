"""Indicatrix functions omega / varpi and the omega-weighted kernel norms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .report import CheckReport, ConfigError


@dataclass(frozen=True)
class Indicatrix:
    name: str
    omega_fn: Callable = field(repr=False, compare=False)
    varpi_fn: Callable | None = field(default=None, repr=False, compare=False)
    a_omega: float = 1.0
    b_omega: float = 0.0
    params: dict = field(default_factory=dict)

    def omega(self, p):
        p = np.asarray(p, dtype=float)
        if np.any(p < 0):
            raise ConfigError("omega is defined on [0, inf)")
        out = self.omega_fn(p)
        return float(out) if np.ndim(out) == 0 else out

    def varpi(self, z):
        if self.varpi_fn is None:
            raise ConfigError(f"indicatrix {self.name} is not analytic (no varpi)")
        z = np.asarray(z, dtype=complex)
        if np.any(z.imag < -1e-14):
            raise ConfigError("varpi is defined on the closed upper half plane")
        out = self.varpi_fn(z)
        return complex(out) if np.ndim(out) == 0 else out

    def describe(self) -> dict:
        return {"name": self.name, "params": {k: float(v) for k, v in sorted(self.params.items())},
                "a_omega": float(self.a_omega), "b_omega": float(self.b_omega)}


def log_family(beta: float = 1.0) -> Indicatrix:
    """omega = beta log(1+p), varpi = 2 beta (Log(i+z) + 1); a = 2, b = 2 beta."""
    if beta < 0:
        raise ConfigError("beta must be nonnegative")
    return Indicatrix("log", lambda p: beta * np.log1p(p),
                      lambda z: 2.0 * beta * (np.log(1j + z) + 1.0), 2.0, 2.0 * beta, {"beta": beta})


def power_family(alpha: float = 0.5) -> Indicatrix:
    """omega = p^alpha cos(alpha pi/2), varpi = i^-alpha (z+i)^alpha; a = 1/cos(alpha pi/2), b = 1."""
    if not 0.0 < alpha < 1.0:
        raise ConfigError("alpha must lie in (0,1)")
    c = math.cos(alpha * math.pi / 2)
    return Indicatrix("power", lambda p: p ** alpha * c,
                      lambda z: np.exp(-0.5j * math.pi * alpha) * (z + 1j) ** alpha, 1.0 / c, 1.0,
                      {"alpha": alpha})


def custom(name: str, omega: Callable, varpi: Callable | None = None, a: float = 1.0, b: float = 0.0) -> Indicatrix:
    return Indicatrix(name, omega, varpi, a, b)


def combine(terms: Sequence[tuple[float, Indicatrix]], name: str = "combined") -> Indicatrix:
    """sum_i c_i omega_i with c_i > 0; a = max a_i, b = sum c_i b_i."""
    terms = [(float(c), ind) for c, ind in terms]
    if any(c <= 0 for c, _ in terms):
        raise ConfigError("combination coefficients must be positive")

    def om(p):
        return sum(c * ind.omega_fn(p) for c, ind in terms)

    vp = None
    if all(ind.varpi_fn is not None for _, ind in terms):
        def vp(z):
            return sum(c * ind.varpi_fn(z) for c, ind in terms)

    a = max(ind.a_omega for _, ind in terms)
    b = sum(c * ind.b_omega for c, ind in terms)
    return Indicatrix(name, om, vp, a, b, {f"c{i}": c for i, (c, _) in enumerate(terms)})


def primed(ind: Indicatrix, c_prime: float, m: int, n: int) -> Indicatrix:
    """omega'(p) = (a+2)(c' omega(p) + (m+n+6)/2 log(1+p)), with a' = a+2."""
    a = ind.a_omega + 2.0
    base = [(a * max(c_prime, 1e-300), ind), (a * (m + n + 6) / 2.0, log_family(1.0))]
    out = combine(base, "primed")
    return Indicatrix("primed", out.omega_fn, out.varpi_fn, a, out.b_omega,
                      {"c_prime": c_prime, "m": m, "n": n, "a_base": ind.a_omega})


FAMILIES = {"log": lambda p: log_family(float(p.get("beta", 1.0))),
            "power": lambda p: power_family(float(p.get("alpha", 0.5)))}


def get_indicatrix(name: str, params: dict | None = None) -> Indicatrix:
    if name not in FAMILIES:
        raise ConfigError(f"unknown indicatrix family {name!r}; known: {sorted(FAMILIES)}")
    return FAMILIES[name](dict(params or {}))


# --------------------------------------------------------------- axioms


def decade_integrals(ind: Indicatrix, decades: int = 12, nodes: int = 64) -> np.ndarray:
    """int over [10^d, 10^{d+1}] of omega(p)/(1+p^2) dp, computed in u = log p."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    out = []
    ln10 = math.log(10.0)
    for d in range(decades):
        u = ln10 * (d + 0.5 + 0.5 * x)
        p = np.exp(u)
        out.append(float(np.sum(0.5 * ln10 * w * ind.omega(p) * p / (1.0 + p * p))))
    return np.array(out)


def check_indicatrix_axioms(ind: Indicatrix, grids: dict | None = None, tol: float = 1e-10) -> CheckReport:
    g = dict(grids or {})
    p = np.asarray(g.get("p", np.concatenate([np.linspace(0, 10, 201), np.geomspace(10, 1e8, 200)])), float)
    pq = np.asarray(g.get("pq", np.concatenate([np.linspace(0, 5, 26), np.geomspace(5, 1e6, 40)])), float)
    rep = CheckReport(f"indicatrix axioms [{ind.name}]", meta=ind.describe())
    w = ind.omega(p)
    rep.add("omega0_nonneg", max(0.0, -float(np.min(w))), tol, p.size)
    ps = np.sort(p)
    ws = ind.omega(ps)
    rep.add("omega1_monotone", max(0.0, -float(np.min(np.diff(ws)))) if ps.size > 1 else 0.0, tol, ps.size)
    P, Q = np.meshgrid(pq, pq)
    scale = 1.0 + ind.omega(P) + ind.omega(Q)
    sub = (ind.omega(P + Q) - ind.omega(P) - ind.omega(Q)) / scale
    rep.add("omega2_sublinear", max(0.0, float(np.max(sub))), tol, sub.size, note="relative to 1+omega(p)+omega(q)")
    # omega3 proxy: per-decade contributions must shrink geometrically and omega(p)/p must decrease
    dec = decade_integrals(ind)
    if np.max(np.abs(dec)) < 1e-300:
        ratio, slope_ok = 0.0, True
    else:
        ratio = float(dec[-1] / dec[-2]) if dec[-2] > 0 else float("inf")
        tail = np.geomspace(1e4, 1e12, 17)
        rel = ind.omega(tail) / tail
        slope_ok = bool(np.all(np.diff(rel) <= 0) and rel[-1] < 0.999 * rel[0])
    rep.add("omega3_carleman_proxy", ratio, 0.999, dec.size, passed=bool(ratio <= 0.999 and slope_ok),
            note="decay of per-decade integrals and of omega(p)/p on a log grid (necessary-condition proxy)")
    if ind.varpi_fn is not None:
        xr = np.asarray(g.get("real", np.concatenate([np.linspace(0, 20, 101), np.geomspace(20, 1e6, 50)])), float)
        vr = ind.varpi(xr).real
        ev = np.abs(vr - ind.varpi(-xr).real) / (1.0 + np.abs(vr))
        rep.add("omega4_even", float(np.max(ev)), tol, xr.size, note="relative to 1+|Re varpi|")
        if "half_plane" in g:
            z = np.asarray(g["half_plane"], complex)
        else:
            re = np.concatenate([-np.geomspace(1e4, 1e-2, 25), [0.0], np.geomspace(1e-2, 1e4, 25)])
            im = np.concatenate([[0.0], np.geomspace(1e-2, 1e4, 25)])
            R, I = np.meshgrid(re, im)
            z = (R + 1j * I).ravel()
        om = ind.omega(np.abs(z))
        rv = ind.varpi(z).real
        sc = 1.0 + np.abs(rv)
        lower = max(0.0, float(np.max((om - rv) / sc)))
        upper = max(0.0, float(np.max((rv - ind.a_omega * om - ind.b_omega) / sc)))
        rep.add("omega5_lower", lower, tol, z.size)
        rep.add("omega5_upper", upper, tol, z.size, a_omega=ind.a_omega, b_omega=ind.b_omega)
    return rep


# ---------------------------------------------------------------- kernels


@dataclass
class KernelSample:
    """Kernel values on a product grid; the first m axes are theta, the last n eta."""

    values: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    m: int
    n: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        k = self.m + self.n
        if self.values.shape != (self.nodes.size,) * k:
            raise ConfigError(f"kernel shape {self.values.shape} does not match grid^{k}")
        if np.any(self.weights <= 0):
            raise ConfigError("weights must be strictly positive")

    @property
    def k(self) -> int:
        return self.m + self.n


def default_grid(points: int = 48, theta: float = 6.0) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(points)
    return theta * x, theta * w


def sample_kernel(fn: Callable, m: int, n: int, points: int = 48, theta: float = 6.0) -> KernelSample:
    """Sample fn(*coords) (vectorized) on the default product grid."""
    nodes, weights = default_grid(points, theta)
    k = m + n
    coords = np.meshgrid(*([nodes] * k), indexing="ij") if k else []
    vals = fn(*coords) if k else np.asarray(fn())
    return KernelSample(np.broadcast_to(vals, (nodes.size,) * k).astype(complex), nodes, weights, m, n)


def _root_weights(nodes_w: np.ndarray, k: int) -> np.ndarray:
    out = np.ones((nodes_w.size,) * k)
    for ax in range(k):
        shape = [1] * k
        shape[ax] = nodes_w.size
        out = out * np.sqrt(nodes_w).reshape(shape)
    return out


def _energy(nodes: np.ndarray, k: int) -> np.ndarray:
    e = np.zeros((nodes.size,) * k)
    for ax in range(k):
        shape = [1] * k
        shape[ax] = nodes.size
        e = e + np.cosh(nodes).reshape(shape)
    return e


def _op_norm(vals: np.ndarray, s: KernelSample) -> float:
    G = s.nodes.size
    t = vals * _root_weights(s.weights, s.k)
    mat = t.reshape(G ** s.m, G ** s.n)
    if mat.size == 0:
        return 0.0
    if min(mat.shape) == 1:
        return float(np.linalg.norm(mat))
    return float(np.linalg.norm(mat, 2))


def cross_norm(s: KernelSample, ind: Indicatrix | None = None) -> float:
    """m x n operator norm of the discretized kernel, or its omega-damped version."""
    if s.values.size == 0:
        raise ConfigError("empty sample")
    if ind is None:
        return _op_norm(s.values, s)
    G = s.nodes.size
    e_th = _energy(s.nodes, s.m).reshape((G,) * s.m + (1,) * s.n) if s.m else np.zeros(())
    e_et = _energy(s.nodes, s.n).reshape((1,) * s.m + (G,) * s.n) if s.n else np.zeros(())
    left = _op_norm(np.exp(-ind.omega(e_th)) * s.values, s)
    right = _op_norm(s.values * np.exp(-ind.omega(e_et)), s)
    return 0.5 * left + 0.5 * right


def _contract_all_but(t: np.ndarray, us: list, skip: int) -> np.ndarray:
    out = t
    # contract from the last axis down so indices stay valid
    for ax in range(t.ndim - 1, -1, -1):
        if ax == skip:
            continue
        out = np.tensordot(out, us[ax], axes=([ax], [0]))
    return out


def full_cross_norm(s: KernelSample, seed: int = 0, restarts: int = 5, iters: int = 60,
                    tol: float = 1e-10) -> float:
    """Lower bound for the x-norm by alternating power iteration (best of several restarts)."""
    if s.values.size == 0 or s.k == 0:
        raise ConfigError("empty sample")
    t = s.values * _root_weights(s.weights, s.k)
    if s.k == 1:
        return float(np.linalg.norm(t))
    rng = np.random.default_rng(seed)
    best = 0.0
    G = s.nodes.size
    for rs in range(restarts):
        if rs == 0:
            us = []
            for ax in range(s.k):
                unf = np.moveaxis(t, ax, 0).reshape(G, -1)
                u, _, _ = np.linalg.svd(unf, full_matrices=False)
                us.append(np.conj(u[:, 0]))
        else:
            us = [rng.normal(size=G) + 1j * rng.normal(size=G) for _ in range(s.k)]
            us = [u / np.linalg.norm(u) for u in us]
        val = 0.0
        for _ in range(iters):
            for ax in range(s.k):
                v = np.conj(_contract_all_but(t, us, ax))
                nv = np.linalg.norm(v)
                if nv == 0:
                    break
                us[ax] = v / nv
            new = float(abs(_contract_all_but(t, us, 0) @ us[0]))
            if abs(new - val) <= tol * max(1.0, new):
                val = new
                break
            val = new
        best = max(best, val)
    return best


def omega_l2_norm(f: np.ndarray, nodes: np.ndarray, weights: np.ndarray, ind: Indicatrix) -> float:
    """||e^{omega(cosh theta)} f||_2 for a one-variable sample."""
    return float(np.sqrt(np.sum(weights * np.abs(np.exp(ind.omega(np.cosh(nodes))) * f) ** 2)))


def q_omega_norm(A, grid, ind: Indicatrix, n: int) -> float:
    """Dense-matrix evaluation of ||A||^omega_n on the truncated Fock space."""
    from .fock import q_omega_norm as _q

    return _q(A, grid, ind, n)
