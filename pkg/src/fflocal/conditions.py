"""Families of form factors F_k and numerical checks of the wedge and double-cone conditions.

A FormFactorFamily holds evaluators F_k on C^k together with their declared
pole hyperplanes.  The checkers sample each condition:

  FW1/FD1   Morera squares on random complex slices
  FW2/FD2   S-symmetry under adjacent transpositions
  FD3       S-periodicity under 2 pi i shifts
  FD4       numeric residue at zeta_n - zeta_m = i pi vs the recursion
  FW3/FD5   omega-damped cross norms at the graph nodes
  FW4/FD6   fitted pointwise bound (constants fitted on the low-energy half)

plus smeared node identities (TD3, TD4) and iterated residues for |C| >= 2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linprog

from . import analytic
from .analytic import EPS_LADDER, ExtrapolationError
from .contractions import Contraction, check_tuple, enumerate_contractions, hat_tuple, r_c, s_c
from .indicatrix import Indicatrix, KernelSample, cross_norm, log_family
from .report import CheckReport, ConfigError, PoleHit, UndeclaredPole
from .scattering import ScatteringModel

PI = math.pi
POLE_TOL = 1e-9
REGION_KINDS = ("wedge", "double_cone")


# ------------------------------------------------------------------ family


@dataclass(frozen=True)
class PolePlane:
    """Declared pole hyperplane z.a = c, repeated in Im with `period` when nonzero."""

    a: tuple
    c: complex
    period: float = 0.0

    def value(self, z) -> np.ndarray:
        v = np.asarray(z, dtype=complex) @ np.asarray(self.a, dtype=float) - self.c
        if self.period:
            im = np.mod(v.imag + self.period / 2, self.period) - self.period / 2
            v = v.real + 1j * im
        return v

    def distance(self, z) -> np.ndarray:
        return np.abs(self.value(z)) / float(np.linalg.norm(self.a))

    def shifted(self, delta) -> "PolePlane":
        """The plane seen by z -> F(z + delta)."""
        d = np.asarray(delta, dtype=complex)
        return PolePlane(self.a, complex(self.c - d @ np.asarray(self.a, dtype=float)), self.period)


def kinematic_planes(k: int, period: float = 2 * PI) -> list[PolePlane]:
    out = []
    for m, n in itertools.combinations(range(k), 2):
        a = np.zeros(k)
        a[n], a[m] = 1.0, -1.0
        out.append(PolePlane(tuple(a), 1j * PI, period))
    return out


@dataclass
class FormFactorFamily:
    """F_0 (a number) and evaluators F_k taking arrays of shape (..., k).

    Orders k <= kmax without an evaluator are identically zero.
    """

    name: str
    evals: dict
    kmax: int
    model: ScatteringModel
    region: tuple = ("double_cone", 0.0)
    indicatrix: Indicatrix = field(default_factory=log_family)
    poles: dict = field(default_factory=dict)
    mu: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        kind, r = self.region
        if kind not in REGION_KINDS:
            raise ConfigError(f"region kind must be one of {REGION_KINDS}, got {kind!r}")
        if r < 0:
            raise ConfigError("region radius must be nonnegative")
        if self.kmax < 0:
            raise ConfigError("kmax must be nonnegative")
        bad = [k for k in self.evals if k > self.kmax or k < 0]
        if bad:
            raise ConfigError(f"evaluators given for orders {bad} outside 0..{self.kmax}")
        if 0 in self.evals and callable(self.evals[0]):
            raise ConfigError("F_0 must be a number")

    @property
    def F0(self) -> complex:
        return complex(self.evals.get(0, 0.0))

    @property
    def r(self) -> float:
        return float(self.region[1])

    def nonzero_orders(self) -> list[int]:
        return sorted(k for k in self.evals if k >= 1)

    def planes(self, k: int) -> list:
        return list(self.poles.get(k, ()))

    def pole_distance(self, k: int, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        best = np.full(z.shape[:-1], np.inf)
        for p in self.planes(k):
            best = np.minimum(best, p.distance(z))
        return best

    def __call__(self, k: int, z, guard: bool = True) -> np.ndarray:
        if k > self.kmax:
            raise ConfigError(f"order {k} is beyond the truncation kmax={self.kmax}")
        z = np.asarray(z, dtype=complex)
        if k == 0:
            return np.full(z.shape[:-1] if z.ndim else (), self.F0, dtype=complex)
        if z.shape[-1] != k:
            raise ConfigError(f"F_{k} needs {k} arguments, got {z.shape[-1]}")
        if k not in self.evals:
            return np.zeros(z.shape[:-1], dtype=complex)
        if guard and self.planes(k) and np.any(self.pole_distance(k, z) < POLE_TOL):
            raise PoleHit(f"F_{k} evaluated on a declared pole")
        with np.errstate(all="ignore"):
            out = np.asarray(self.evals[k](z), dtype=complex)
        out = np.broadcast_to(out, z.shape[:-1])
        if not np.all(np.isfinite(out)):
            raise UndeclaredPole(f"F_{k} is not finite at a point away from the declared poles")
        return out

    # derived families
    def _derive(self, name: str, wrap: Callable, planes: Callable | None = None, **kw) -> "FormFactorFamily":
        evals = {k: wrap(k, f) if k else f for k, f in self.evals.items()}
        poles = {k: [planes(k, p) for p in v] for k, v in self.poles.items()} if planes else dict(self.poles)
        meta = dict(self.meta)
        meta["derived_from"] = self.name
        return replace(self, name=name, evals=evals, poles=poles, meta=meta, **kw)

    def shifted(self, delta: complex) -> "FormFactorFamily":
        """zeta -> F_k(zeta + delta (1, ..., 1))."""
        delta = complex(delta)
        return self._derive(f"{self.name}+shift", lambda k, f: (lambda z: f(np.asarray(z) + delta)),
                            lambda k, p: p.shifted(np.full(k, delta)))

    def translated(self, s: float) -> "FormFactorFamily":
        """Localization moved by (0, s): F_k times exp(-i s mu sum_j sinh zeta_j)."""
        mu = self.mu

        def wrap(k, f):
            return lambda z: np.exp(-1j * s * mu * np.sum(np.sinh(z), axis=-1)) * f(z)
        fam = self._derive(f"{self.name}@x1+{s:g}", wrap)
        if s != 0:
            fam.meta["translation"] = float(s)
        return fam

    def scaled(self, factors: dict) -> "FormFactorFamily":
        """F_k -> factors[k] F_k (deliberate normalization perturbations)."""
        ev = dict(self.evals)
        for k, c in factors.items():
            if k == 0:
                ev[0] = complex(c) * self.F0
            elif k in ev:
                f = ev[k]
                ev[k] = (lambda f, c: lambda z: c * f(z))(f, complex(c))
        meta = dict(self.meta)
        meta["scaled"] = {str(k): complex(v) for k, v in factors.items()}
        return replace(self, name=f"{self.name}*scaled", evals=ev, meta=meta)

    def with_region(self, kind: str, r: float) -> "FormFactorFamily":
        return replace(self, region=(kind, float(r)))

    def describe(self) -> dict:
        return {"name": self.name, "kmax": self.kmax, "model": self.model.describe(),
                "region": {"kind": self.region[0], "r": float(self.region[1])},
                "indicatrix": self.indicatrix.describe(), "mu": self.mu,
                "orders": self.nonzero_orders(), "F0": self.F0, "meta": self.meta}


# ------------------------------------------------------------ configuration


@dataclass(frozen=True)
class SamplingConfig:
    seed: int = 0
    theta: float = 3.0            # real parts are drawn from [-theta, theta]
    morera_squares: int = 200
    symmetry_samples: int = 40
    fd4_basepoints: int = 10
    fit_samples: int = 400
    fit_theta: float = 4.0
    grid_points: int = 16
    node_eps: float = 1e-3
    tol_alg: float = 1e-8
    tol_res: float = 1e-6
    tol_morera: float = 1e-8
    tol_td: float = 1e-6
    fit_slack: float = 0.05
    kmax: int | None = None

    def __post_init__(self):
        for name in ("tol_alg", "tol_res", "tol_morera", "tol_td", "fit_slack"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")

    def describe(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _orders(fam: FormFactorFamily, cfg: SamplingConfig) -> list[int]:
    top = fam.kmax if cfg.kmax is None else min(fam.kmax, cfg.kmax)
    return [k for k in fam.nonzero_orders() if k <= top]


def _rng(cfg: SamplingConfig, *salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, *salt])


def report_json(rep: CheckReport) -> dict:
    """ConditionReport layout: family_id, region and model lifted to the top level."""
    d = rep.to_dict()
    meta = d.get("meta", {})
    for key in ("family_id", "region", "model"):
        d[key] = meta.get(key)
    return d


def _new_report(title: str, fam: FormFactorFamily, cfg: SamplingConfig, region: tuple) -> CheckReport:
    return CheckReport(title, meta={"family_id": fam.name, "model": fam.model.describe(),
                                    "region": {"kind": region[0], "r": float(region[1])},
                                    "sampling": cfg.describe(), "seed": cfg.seed,
                                    "norms": "grid approximation", "sup": "sampled"})


# ------------------------------------------------------------ boundary values


def approach_vector(region: str, node) -> np.ndarray:
    """A direction b with node + eps b inside the open region for small eps > 0."""
    lam = np.asarray(node, dtype=float)
    k = lam.size
    idx = np.arange(1, k + 1, dtype=float)
    if region in ("I_plus", "I_minus"):
        mid = PI / 2 if region == "I_plus" else -PI / 2
        b = idx - (k + 1) * (lam >= mid)
    elif region == "I_1":
        low = lam <= lam.min() + 1e-12
        b = idx + k * (low if not low.all() else 1.0)
    else:
        raise ConfigError(f"no approach rule for region {region!r}")
    b = b / (2.0 * k)
    if not analytic.region_contains(region, k, lam + 1e-4 * b):
        raise ConfigError(f"node {lam.tolist()} cannot be approached inside {region}")
    return b


def boundary_values(fam: FormFactorFamily, k: int, theta: np.ndarray, lam, b,
                    eps: Sequence[float] = EPS_LADDER) -> tuple[np.ndarray, float]:
    """Pointwise F_k(theta + i lam + i0 b), by Richardson extrapolation when poles are declared."""
    theta = np.asarray(theta, dtype=float)
    z0 = theta + 1j * np.asarray(lam, dtype=float)
    if not fam.planes(k):
        return fam(k, z0), 0.0
    b = np.asarray(b, dtype=float)
    f1, f2, f3 = (fam(k, z0 + 1j * e * b) for e in eps)
    r1a, r1b = 2 * f2 - f1, 2 * f3 - f2
    r2 = (4 * r1b - r1a) / 3.0
    spread = np.abs(r2 - r1b)
    return r2, float(np.max(spread)) if spread.size else 0.0


# ------------------------------------------------------------ FW1 / FD1


def _gauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def morera_residual(fam: FormFactorFamily, k: int, region: str, n: int, rng: np.random.Generator,
                    theta: float, half_side: float = 0.1) -> tuple[float, int]:
    """max over random squares of |contour integral| / (perimeter * max|F|)."""
    lams = analytic.sample_region(region, k, n, rng, min_dist=0.02)
    x, w = _gauss(24)
    corners = np.array([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j])
    worst = 0.0
    for lam in lams:
        th = rng.uniform(-theta, theta, size=k)
        j = int(rng.integers(k))
        dist = analytic.boundary_distance(region, k, lam)
        h = min(half_side, 0.45 * dist)
        pts, dz = [], []
        for c0, c1 in zip(corners, np.roll(corners, -1)):
            pts.append(h * (0.5 * (c0 + c1) + 0.5 * (c1 - c0) * x))
            dz.append(h * 0.5 * (c1 - c0) * w)
        pts, dz = np.concatenate(pts), np.concatenate(dz)
        Z = np.repeat((th + 1j * lam)[None, :], pts.size, axis=0)
        Z[:, j] += pts
        vals = fam(k, Z)
        scale = 8 * h * float(np.max(np.abs(vals)))
        if scale > 0:
            worst = max(worst, abs(complex(np.sum(vals * dz))) / scale)
    return worst, len(lams)


# ------------------------------------------------------------ FW2 / FD2 / FD3


def _s_prod(model: ScatteringModel, vals):
    out = np.ones(np.shape(vals[0]) if vals else (), dtype=complex)
    for v in vals:
        out = out * model(v)
    return out


def _relres(a: np.ndarray, b: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(a))))


def symmetry_residual(fam: FormFactorFamily, k: int, z: np.ndarray) -> float:
    """max_i |F(z) - S(z_{i+1} - z_i) F(z with i, i+1 swapped)| (relative)."""
    if k < 2:
        return 0.0
    base = fam(k, z)
    worst = 0.0
    for i in range(k - 1):
        zt = z.copy()
        zt[:, [i, i + 1]] = zt[:, [i + 1, i]]
        keep = fam.pole_distance(k, zt) > 1e-6
        other = fam(k, zt[keep])
        worst = max(worst, _relres(base[keep], fam.model(z[keep, i + 1] - z[keep, i]) * other))
    return worst


def periodicity_residual(fam: FormFactorFamily, k: int, z: np.ndarray) -> float:
    """max_j |F(z + 2 pi i e_j) - prod_{i != j} S(z_i - z_j) F(z)| (relative)."""
    base = fam(k, z)
    worst = 0.0
    for j in range(k):
        zs = z.copy()
        zs[:, j] += 2j * PI
        fac = _s_prod(fam.model, [z[:, i] - z[:, j] for i in range(k) if i != j])
        worst = max(worst, _relres(fam(k, zs), fac * base))
    return worst


def _complex_samples(k: int, n: int, rng: np.random.Generator, theta: float, region: str) -> np.ndarray:
    lam = analytic.sample_region(region, k, n, rng, min_dist=0.02)
    return rng.uniform(-theta, theta, size=lam.shape) + 1j * lam


# ------------------------------------------------------------ FD4


def fd4_rhs(fam: FormFactorFamily, k: int, z0: np.ndarray, m: int, n: int) -> complex:
    """-(1/2 pi i) prod_{j=m}^n S(z_j - z_m) (1 - prod_p S(z_m - z_p)) F_{k-2}(z-hat); 0-based m < n."""
    S = fam.model
    p1 = _s_prod(S, [z0[j] - z0[m] for j in range(m, n + 1)])
    p2 = _s_prod(S, [z0[m] - z0[p] for p in range(k)])
    hat = np.delete(z0, [m, n])
    return complex(-(1.0 / (2j * PI)) * p1 * (1.0 - p2) * fam(k - 2, hat[None, :])[0])


def _safe_radius(fam: FormFactorFamily, k: int, z0: np.ndarray, a: np.ndarray, own: int,
                 cap: float = 0.1) -> float:
    d = a / (a @ a)
    r = cap
    for i, p in enumerate(fam.planes(k)):
        pa = np.asarray(p.a, dtype=float)
        if i == own:
            continue
        speed = abs(d @ pa)
        if speed > 1e-12:
            r = min(r, 0.4 * abs(complex(p.value(z0[None, :])[0])) / speed)
    return r


def fd4_point(fam: FormFactorFamily, k: int, m: int, n: int, base: np.ndarray,
              points: int = 256) -> tuple[complex, complex, float]:
    """(numeric residue, recursion right-hand side, radius) at the projection of base onto the plane."""
    a = np.zeros(k)
    a[n], a[m] = 1.0, -1.0
    z0 = analytic._hyperplane_point(a, 1j * PI, base)
    own = next((i for i, p in enumerate(fam.planes(k))
                if np.allclose(p.a, a) and abs(complex(p.value(z0[None, :])[0])) < 1e-9), -1)
    radius = _safe_radius(fam, k, z0, a, own)
    res = analytic.residue_numeric(lambda z: fam(k, z), a, 1j * PI, z0, radius=radius, points=points)
    return res, fd4_rhs(fam, k, z0, m, n), radius


def fd4_residual(fam: FormFactorFamily, k: int, n_points: int, rng: np.random.Generator,
                 theta: float) -> tuple[float, int, list]:
    pairs = list(itertools.combinations(range(k), 2))
    worst, used, rows = 0.0, 0, []
    tries = 0
    while used < n_points:
        tries += 1
        if tries > 50 * n_points:
            raise ConfigError("could not place FD4 basepoints away from the other poles")
        m, n = pairs[used % len(pairs)]
        base = rng.uniform(-theta / 2, theta / 2, size=k) + 1j * rng.uniform(-0.3, 0.3, size=k)
        a = np.zeros(k)
        a[n], a[m] = 1.0, -1.0
        z0 = analytic._hyperplane_point(a, 1j * PI, base)
        if any(abs(complex(p.value(z0[None, :])[0])) < 0.05 for p in fam.planes(k)
               if not np.allclose(p.a, a)):
            continue
        res, rhs, radius = fd4_point(fam, k, m, n, base)
        if radius < 1e-3:
            continue
        err = abs(res - rhs) / max(1.0, abs(rhs))
        worst = max(worst, err)
        rows.append({"pair": [m + 1, n + 1], "residue": res, "rhs": rhs})
        used += 1
    return worst, used, rows


# ------------------------------------------------------------ node norms


def node_norm(fam: FormFactorFamily, k: int, node, region: str, cfg: SamplingConfig) -> float:
    """omega-damped cross norm of theta -> F_k(theta + i node + i eps b) split at the node blocks."""
    node = np.asarray(node, dtype=float)
    b = approach_vector(region, node)
    x, w = _gauss(cfg.grid_points)
    nodes, weights = cfg.theta * x, cfg.theta * w
    grids = np.meshgrid(*([nodes] * k), indexing="ij")
    th = np.stack([g.ravel() for g in grids], axis=-1)
    vals = fam(k, th + 1j * (node + cfg.node_eps * b)).reshape((nodes.size,) * k)
    m = int(np.sum(node <= node.min() + 1e-12)) if not np.allclose(node, node[0]) else k
    return cross_norm(KernelSample(vals, nodes, weights, m, k - m), fam.indicatrix)


# ------------------------------------------------------------ FW4 / FD6


def _bound_terms(fam: FormFactorFamily, k: int, region: str, r: float, absolute: bool,
                 th: np.ndarray, lam: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(y, Omega): y = log|F| + (k/2) log dist - mu r sum (|)Im sinh(|), Omega = sum omega(mu cosh Re)."""
    vals = np.abs(fam(k, th + 1j * lam))
    dist = np.array([analytic.boundary_distance(region, k, l) for l in np.atleast_2d(lam)])
    ims = np.cosh(th) * np.sin(lam)
    env = fam.mu * r * np.sum(np.abs(ims) if absolute else ims, axis=-1)
    om = np.sum(fam.indicatrix.omega(fam.mu * np.cosh(th)), axis=-1)
    with np.errstate(divide="ignore"):
        y = np.log(vals) + 0.5 * k * np.log(dist) - env
    return y, om


def bound_fit(fam: FormFactorFamily, k: int, region: str, r: float, absolute: bool,
              cfg: SamplingConfig, rng: np.random.Generator, steps: int = 8) -> dict:
    """Fitted pointwise bound |F| <= c dist^{-k/2} prod_j exp(mu r (|)Im sinh zeta_j(|) + c' omega(mu cosh Re zeta_j)).

    The cloud consists of rays theta = t u (|u|_inf = 1, t = fit_theta * (1..steps)/steps) at a fixed
    random lambda.  log c and c' >= 0 are fitted (least-area envelope, linear program) on the inner
    halves of the rays and must cover the outer halves up to the slack on c.  Growth faster than
    the omega shape along a ray (a support radius larger than r, say) overshoots the extrapolation.
    """
    n_rays = max(1, cfg.fit_samples // steps)
    lam = analytic.sample_region(region, k, n_rays, rng, min_dist=0.01)
    u = rng.uniform(-1.0, 1.0, size=(n_rays, k))
    u /= np.max(np.abs(u), axis=-1, keepdims=True)
    t = cfg.fit_theta * np.arange(1, steps + 1) / steps
    th = (t[None, :, None] * u[:, None, :]).reshape(-1, k)
    lam_all = np.repeat(lam, steps, axis=0)
    inner = np.tile(t <= cfg.fit_theta / 2 + 1e-12, n_rays)
    y, om = _bound_terms(fam, k, region, r, absolute, th, lam_all)
    fit, val = inner & np.isfinite(y), ~inner & np.isfinite(y)
    if not np.any(fit):
        return {"violation": 0.0, "log_c": -np.inf, "c_prime": 0.0, "samples": int(y.size),
                "note": "F vanishes on the fit half"}
    lp = linprog(c=[1.0, float(np.mean(om[fit]))], A_ub=np.column_stack([-np.ones(fit.sum()), -om[fit]]),
                 b_ub=-y[fit], bounds=[(None, None), (0.0, None)], method="highs")
    if not lp.success:
        raise ConfigError(f"bound fit failed: {lp.message}")
    log_c, cp = float(lp.x[0]), float(lp.x[1])
    excess = float(np.max(y[val] - log_c - cp * om[val])) if np.any(val) else -np.inf
    return {"violation": max(0.0, excess - math.log1p(cfg.fit_slack)), "log_c": log_c,
            "c_prime": cp, "excess": excess, "samples": int(y.size), "rays": n_rays}


# ------------------------------------------------------------ checkers


def _catching(rep: CheckReport, id: str, tol: float, fn: Callable) -> None:
    """Run fn() -> (residual, samples, extra); declared pole hits become failed entries."""
    try:
        res, n, extra = fn()
    except UndeclaredPole:
        raise
    except PoleHit as exc:
        rep.add(id, math.inf, tol, 0, note=f"pole-hit: {exc}", passed=False)
        return
    except ExtrapolationError as exc:
        rep.add(id, math.inf, tol, 0, note=f"extrapolation: {exc}", passed=False)
        return
    rep.add(id, res, tol, n, **extra)


def check_fw(fam: FormFactorFamily, cfg: SamplingConfig | None = None, r: float | None = None) -> CheckReport:
    """Wedge conditions FW1-FW4 for a family localized in the left wedge shifted by r."""
    cfg = cfg or SamplingConfig()
    if r is None:
        if fam.region[0] != "wedge":
            raise ConfigError("check_fw needs region wedge(r); pass r= to check a double-cone family")
        r = fam.r
    rep = _new_report("FW", fam, cfg, ("wedge", r))
    rep.add("F0", 0.0, 0.0, 1, note="vacuum expectation value; no condition at k=0", value=fam.F0)
    for k in _orders(fam, cfg):
        rng = _rng(cfg, 1, k)
        _catching(rep, f"FW1.k{k}", cfg.tol_morera, lambda: (
            *morera_residual(fam, k, "I_plus", cfg.morera_squares, rng, cfg.theta), {}))

        def fw2():
            th = rng.uniform(-cfg.theta, cfg.theta, size=(cfg.symmetry_samples, k))
            b = np.arange(1, k + 1) / (2.0 * k)
            base, s0 = boundary_values(fam, k, th, np.zeros(k), b)
            worst = 0.0
            for i in range(k - 1):
                tt = th.copy()
                tt[:, [i, i + 1]] = tt[:, [i + 1, i]]
                other, s1 = boundary_values(fam, k, tt, np.zeros(k), b)
                worst = max(worst, _relres(base, fam.model(th[:, i + 1] - th[:, i]) * other))
            return worst, th.shape[0], {}
        _catching(rep, f"FW2.k{k}", cfg.tol_alg, fw2)

        def fw3():
            norms = {str(list(map(round, np.asarray(nd) / PI))): node_norm(fam, k, nd, "I_plus", cfg)
                     for nd in analytic.graph_nodes("plus", k)}
            vals = np.array(list(norms.values()))
            ok = bool(np.all(np.isfinite(vals)))
            return (0.0 if ok else math.inf), len(norms), {"node_norms": norms}
        _catching(rep, f"FW3.k{k}", 0.0, fw3)

        def fw4():
            fit = bound_fit(fam, k, "I_plus", r, False, cfg, rng)
            return fit.pop("violation"), fit.pop("samples"), fit
        _catching(rep, f"FW4.k{k}", 0.0, fw4)
    return rep


def check_fd(fam: FormFactorFamily, cfg: SamplingConfig | None = None, r: float | None = None) -> CheckReport:
    """Double-cone conditions FD1-FD6."""
    cfg = cfg or SamplingConfig()
    if r is None:
        if fam.region[0] != "double_cone":
            raise ConfigError("check_fd needs region double_cone(r)")
        r = fam.r
    rep = _new_report("FD", fam, cfg, ("double_cone", r))
    rep.add("F0", 0.0, 0.0, 1, note="vacuum expectation value; no condition at k=0", value=fam.F0)
    for k in _orders(fam, cfg):
        rng = _rng(cfg, 2, k)
        _catching(rep, f"FD1.k{k}", cfg.tol_morera, lambda: (
            *morera_residual(fam, k, "I_1", cfg.morera_squares, rng, cfg.theta), {}))
        z = _complex_samples(k, cfg.symmetry_samples, rng, cfg.theta, "I_1")
        _catching(rep, f"FD2.k{k}", cfg.tol_alg, lambda: (symmetry_residual(fam, k, z), len(z), {}))
        _catching(rep, f"FD3.k{k}", cfg.tol_alg, lambda: (periodicity_residual(fam, k, z), len(z), {}))
        if k >= 2:
            def fd4():
                worst, used, rows = fd4_residual(fam, k, cfg.fd4_basepoints, rng, cfg.theta)
                return worst, used, {"points": rows[:3]}
            _catching(rep, f"FD4.k{k}", cfg.tol_res, fd4)

        def fd5():
            norms = {str(list(map(round, np.asarray(nd) / PI))): node_norm(fam, k, nd, "I_1", cfg)
                     for nd in analytic.graph_nodes("zero", k)}
            ok = bool(np.all(np.isfinite(list(norms.values()))))
            return (0.0 if ok else math.inf), len(norms), {"node_norms": norms}
        _catching(rep, f"FD5.k{k}", 0.0, fd5)
        for region, tag in (("I_plus", "plus"), ("I_minus", "minus")):
            def fd6(region=region):
                fit = bound_fit(fam, k, region, r, True, cfg, rng)
                return fit.pop("violation"), fit.pop("samples"), fit
            _catching(rep, f"FD6.k{k}.{tag}", 0.0, fd6)
    return rep


# ------------------------------------------------------------ TD3 / TD4


def _node(k: int, low: int, low_val: float, high_val: float) -> np.ndarray:
    """(low_val x low, high_val x (k - low))."""
    return np.array([low_val] * low + [high_val] * (k - low), dtype=float)


def _smeared(fam: FormFactorFamily, k: int, x: np.ndarray, w: np.ndarray, lam, b) -> tuple[complex, float]:
    """sum F_k(x + i lam + i0 b) w over quadrature nodes x (weights w include the test function)."""
    vals, spread = boundary_values(fam, k, x, lam, b)
    return complex(np.sum(vals * w)), spread


def td3_residual(fam: FormFactorFamily, k: int, g: Callable, points: int = 32, L: float = 7.0) -> float:
    x1, w1 = _gauss(points)
    grids = np.meshgrid(*([L * x1] * k), indexing="ij")
    wgrids = np.meshgrid(*([L * w1] * k), indexing="ij")
    x = np.stack([gg.ravel() for gg in grids], axis=-1)
    w = np.prod(np.stack([gg.ravel() for gg in wgrids], axis=-1), axis=-1)
    w = w * g(x)
    lo = np.full(k, -PI)
    b = approach_vector("I_1", lo)
    a, _ = _smeared(fam, k, x, w, lo, b)
    c, _ = _smeared(fam, k, x, w, -lo, b)
    return abs(a - c) / max(1.0, abs(a))


def td4_terms(fam: FormFactorFamily, k: int, m: int, g: Callable, L: float = 6.0,
              v_points: int = 16) -> dict:
    """Smeared LHS T_k(theta + i lam^(k,-m)) and every contraction term of the TD4 sum."""
    pairs = [(l, r) for l in range(1, m + 1) for r in range(m + 1, k + 1)]
    dirs = []
    for l, r in pairs:
        a = np.zeros(k)
        a[r - 1], a[l - 1] = 1.0, -1.0
        dirs.append(a)
    A = np.array(dirs) if dirs else np.zeros((0, k))
    if A.shape[0] and np.linalg.matrix_rank(A) < A.shape[0]:
        raise ConfigError(f"TD4 smearing supports independent singular lines only (k={k}, m={m})")
    eps_min = min(EPS_LADDER) / (2.0 * k)
    co = analytic._Coords(A, k, L, eps_min, v_points)
    x, w = co.points()
    w = w * g(x)
    lhs_node = _node(k, m, -PI, 0.0)
    lhs, spread = _smeared(fam, k, x, w, lhs_node, approach_vector("I_1", lhs_node))
    terms = {}
    for C in enumerate_contractions(m, k - m):
        c = len(C.pairs)
        kk = k - 2 * c
        mm = m - c
        node = _node(kk, kk - mm, 0.0, PI) if kk else np.zeros(0)
        drop = tuple(pairs.index(p) for p in C.pairs)
        xc, wc = co.points(drop) if drop else (x, None)
        wc = w if not drop else wc * g(xc)
        th = [xc[:, i] for i in range(k)]
        order = [p - 1 for p in C.free_right()] + [p - 1 for p in C.free_left()]
        if kk:
            vals, s = boundary_values(fam, kk, xc[:, order], node, approach_vector("I_1", node))
            spread = max(spread, s)
        else:
            vals = np.full(xc.shape[0], fam.F0)
        if c:
            fac = s_c(fam.model, C, th[:m], th[m:]) * r_c(fam.model, C, th[:m], th[m:])
            vals = vals * fac
        terms[C] = ((-1) ** c) * complex(np.sum(vals * wc))
    return {"lhs": lhs, "terms": terms, "spread": spread}


def check_td_boundary(fam: FormFactorFamily, cfg: SamplingConfig | None = None, kmax: int = 3,
                      smear: Callable | None = None) -> CheckReport:
    """TD3 and TD4 (all contractions, k <= 3) as smeared identities between node boundary values."""
    cfg = cfg or SamplingConfig()
    rep = _new_report("TD", fam, cfg, fam.region)
    orders = [k for k in range(1, min(kmax, fam.kmax) + 1)]
    for k in orders:
        g = smear or analytic.gaussian_smear(np.linspace(-0.3, 0.4, k), 1.0)
        _catching(rep, f"TD3.k{k}", cfg.tol_td, lambda: (td3_residual(fam, k, g), 1, {}))
        for m in range(k + 1):
            def td4(m=m):
                out = td4_terms(fam, k, m, g)
                rhs = sum(out["terms"].values())
                res = abs(out["lhs"] - rhs) / max(1.0, abs(out["lhs"]))
                terms = {str([list(p) for p in C.pairs]): v for C, v in out["terms"].items()}
                return res, len(terms), {"lhs": out["lhs"], "rhs": rhs, "terms": terms,
                                         "spread": out["spread"]}
            _catching(rep, f"TD4.k{k}.m{m}", cfg.tol_td, td4)
    return rep


# ------------------------------------------------------------ higher residues


def higher_residue_values(fam: FormFactorFamily, C: Contraction, basepoint, radius: float = 0.1,
                          points: int = 64) -> tuple[complex, complex]:
    """(iterated residue of F_{m+n}(theta, eta + i pi) over the pairs of C, predicted value)."""
    m, n = C.m, C.n
    k = m + n
    base = np.asarray(basepoint, dtype=complex)
    if base.size != k:
        raise ConfigError(f"basepoint needs {k} entries")
    if not C.pairs:
        raise ConfigError("higher residues need a nonempty contraction")
    z = base.copy()
    z[m:] += 1j * PI
    dirs = []
    for l, r in C.pairs:
        a = np.zeros(k)
        a[r - 1], a[l - 1] = 1.0, -1.0
        dirs.append(a)
    A = np.array(dirs)
    D = A.T @ np.linalg.inv(A @ A.T)
    z0 = z + D @ (1j * PI * np.ones(len(dirs)) - A @ z)
    # every ring point must stay clear of the remaining declared planes
    ring = radius * np.exp(2j * PI * np.arange(points) / points)
    grids = np.meshgrid(*([ring] * len(dirs)), indexing="ij")
    W = np.stack([gg.ravel() for gg in grids], axis=-1)
    pts = z0[None, :] + W @ D.T
    for p in fam.planes(k):
        if any(np.allclose(p.a, a) for a in dirs):
            continue
        if np.min(np.abs(p.value(pts))) < 2 * radius * 0.25:
            raise ConfigError("contour collision with another declared pole plane")
    lhs = analytic.iterated_residue(lambda q: fam(k, q), dirs, [1j * PI] * len(dirs), z0,
                                    radius=radius, points=points)
    theta = z0[:m]
    eta = z0[m:] - 1j * PI
    th_hat, et_hat = hat_tuple(C, list(theta), list(eta))
    kk = k - 2 * len(C.pairs)
    arg = np.array(list(th_hat) + [e + 1j * PI for e in et_hat], dtype=complex)
    Fv = fam(kk, arg[None, :])[0] if kk else fam.F0
    c = len(C.pairs)
    rhs = ((-1) ** c / (2j * PI) ** c) * s_c(fam.model, C, theta, eta) * r_c(fam.model, C, theta, eta) * Fv
    return complex(lhs), complex(rhs)


def higher_residues_check(fam: FormFactorFamily, C: Contraction, basepoint, tol: float = 1e-6,
                          radius: float = 0.1, points: int = 64) -> CheckReport:
    lhs, rhs = higher_residue_values(fam, C, basepoint, radius, points)
    rep = CheckReport("higher residues", meta={"family_id": fam.name, "contraction": C.to_dict(),
                                                "basepoint": list(np.asarray(basepoint, dtype=complex))})
    rep.add(f"fres.C{len(C.pairs)}", abs(lhs - rhs) / max(1.0, abs(rhs)), tol, 1, lhs=lhs, rhs=rhs)
    return rep
