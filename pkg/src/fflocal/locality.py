"""Operational locality tests: the commutator [A, phi'(g)] and the contour shift.

The commutator is evaluated from the expansion coefficients of A.  For fixed
(m, n) and intermediate particle number p the matrix element of
z^{dagger m}(theta) B z^n(eta) between psi and chi is

    sum_kappa conj Psi_m(theta; kappa) B(kappa) X_n(eta; kappa)

with Psi_m(theta; kappa) = sqrt((m+p)!/p!) psi(theta_1..theta_m, kappa) and
X_n(eta; kappa) = sqrt((n+p)!/p!) chi(eta_n..eta_1, kappa).  Rapidities theta,
eta, kappa live on the Fock grid; the xi integral has its own rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import testfn
from .conditions import (FormFactorFamily, SamplingConfig, approach_vector, boundary_values,
                         check_fd, check_fw, report_json)
from .fock import (FockGrid, FockKernelForm, FockState, apply_phi_prime, extract_form, inner,
                   ja_star_j)
from .report import CheckReport, ConfigError

PI = math.pi


class MissingControl(ConfigError):
    """The test-function battery has no negative control."""


class SingularKernel(ConfigError):
    """A kernel needed by the commutator is singular on real rapidities (a distribution)."""


# ------------------------------------------------------------ xi rules


@dataclass
class XiRule:
    nodes: np.ndarray
    weights: np.ndarray
    label: str = ""
    on_grid: bool = False

    @property
    def size(self) -> int:
        return int(self.nodes.size)


def grid_rule(grid: FockGrid) -> XiRule:
    return XiRule(grid.nodes.copy(), grid.weights.copy(), "fock grid", on_grid=True)


def _reach(g: testfn.TestFunction) -> float:
    a0, b0, a1, b1 = g.support_box()
    return max(abs(a0), abs(b0)) + max(abs(a1), abs(b1))


def family_reach(fam: FormFactorFamily) -> float:
    """Support reach of the bump behind a free-field family (0 if there is none)."""
    g = fam.meta.get("g")
    if not isinstance(g, dict):
        return 0.0
    c0, c1 = g["center"]
    if g.get("reflected"):
        c0, c1 = -c0, -c1
    return abs(c0) + abs(c1) + 2 * g["radius"]


def fine_rule(functions: Sequence[testfn.TestFunction], xi_max: float = 8.0, max_phase: float = 15.0,
              order: int = 24, mu: float = 1.0, extra_reach: float = 0.0) -> XiRule:
    """Gauss-Legendre panels on [-xi_max, xi_max], each spanning at most max_phase radians of the
    combined oscillation mu * cosh(xi) * sum of support reaches."""
    reach = (sum(_reach(g) for g in functions) + extra_reach) or 1.0
    x, w = np.polynomial.legendre.leggauss(order)
    edges = [0.0]
    a = 0.0
    while a < xi_max:
        h = min(0.5, max_phase / (mu * reach * math.cosh(min(a + 0.5, xi_max))))
        # shrink until the phase bound holds at the far end of the panel
        while mu * reach * math.cosh(min(a + h, xi_max)) * h > max_phase and h > 1e-6:
            h *= 0.8
        a = min(a + h, xi_max)
        edges.append(a)
    e = np.array(edges)
    lo, hi = e[:-1], e[1:]
    half = 0.5 * (hi - lo)
    pos = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
    pw = half[:, None] * w[None, :]
    nodes = np.concatenate([-pos[::-1, ::-1].ravel(), pos.ravel()])
    weights = np.concatenate([pw[::-1, ::-1].ravel(), pw.ravel()])
    return XiRule(nodes, weights, f"panels xi_max={xi_max:g} phase={max_phase:g} order={order}")


def _transforms(g: testfn.TestFunction, rule: XiRule, shift: complex = 0.0):
    """(g^+, g^-) on rule.nodes + shift."""
    return testfn.transform_pair(g, rule.nodes + shift)


# ------------------------------------------------------------ kernel sources


class GridKernelSource:
    """Kernels of a FockKernelForm; xi must run over the grid nodes."""

    def __init__(self, form: FockKernelForm, kmax: int | None = None):
        self.form = form
        self.grid = form.grid
        self.model = form.grid.model
        # a kernel form is the finite sum of its kernels unless declared truncated
        self.kmax = kmax if kmax is not None else form.meta.get("kmax")
        self.label = form.meta.get("label", "kernel form")

    def has(self, a: int, b: int) -> bool:
        return (a, b) in self.form.kernels

    def slot_tensor(self, a: int, b: int, pos: int, rule: XiRule) -> np.ndarray:
        if not rule.on_grid:
            raise ConfigError("kernel forms are only known on the grid; use the grid xi rule")
        return self.form.kernels[(a, b)]


class FamilyKernelSource:
    """f_{m,n}(theta, eta) = F_{m+n}(theta + i0, eta + i pi - i0) from a family.

    reflected=True gives the coefficients of J A* J, F_{m+n}(theta - i pi + i0, eta + i0).
    """

    def __init__(self, fam: FormFactorFamily, grid: FockGrid, reflected: bool = False,
                 truncate: bool = False):
        if fam.model.name != grid.model.name:
            raise ConfigError("family and Fock grid use different scattering models")
        self.fam = fam
        self.grid = grid
        self.model = fam.model
        self.reflected = reflected
        self.complete = bool(fam.meta.get("complete", False))
        self.kmax = None if (self.complete or truncate) else fam.kmax
        self.truncated = truncate and not self.complete
        self.label = fam.name + ("^JA*J" if reflected else "")

    def has(self, a: int, b: int) -> bool:
        k = a + b
        if k > self.fam.kmax:
            return False
        return k == 0 and self.fam.F0 != 0 or k in self.fam.evals and k > 0

    def node(self, a: int, b: int) -> np.ndarray:
        if self.reflected:
            return np.array([-PI] * a + [0.0] * b)
        return np.array([0.0] * a + [PI] * b)

    def singular(self, a: int, b: int) -> bool:
        """True when a declared pole plane meets theta + i lam(a, b) for real theta."""
        lam = self.node(a, b)
        for p in self.fam.planes(a + b):
            if abs(p.value(1j * lam).imag) < 1e-12:
                return True
        return False

    def slot_tensor(self, a: int, b: int, pos: int, rule: XiRule) -> np.ndarray:
        k = a + b
        G = self.grid.size
        if self.singular(a, b):
            raise SingularKernel(f"f_{{{a},{b}}} of {self.fam.name} has kinematic singularities on real "
                                 "rapidities; choose states that avoid this order")
        axes = []
        for j in range(k):
            axes.append(rule.nodes if j == pos else self.grid.nodes)
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([mm.ravel() for mm in mesh], axis=-1)
        lam = self.node(a, b)
        region = "I_minus" if self.reflected else "I_plus"
        b_vec = approach_vector(region, lam) if k else np.zeros(0)
        vals, _ = boundary_values(self.fam, k, pts, lam, b_vec)
        shape = tuple(rule.size if j == pos else G for j in range(k))
        return np.asarray(vals).reshape(shape)


def kernel_source(A, grid: FockGrid | None = None, reflected: bool = False, truncate: bool = False):
    if isinstance(A, (GridKernelSource, FamilyKernelSource)):
        return A
    if isinstance(A, FockKernelForm):
        if reflected:
            kmax = max((m + n for m, n in A.kernels), default=0)
            form = extract_form(ja_star_j(A), A.grid, kmax)
            form.meta.update(A.meta)
            return GridKernelSource(form)
        return GridKernelSource(A)
    if isinstance(A, FormFactorFamily):
        if grid is None:
            raise ConfigError("a Fock grid is needed to evaluate a family's commutator")
        return FamilyKernelSource(A, grid, reflected, truncate)
    raise ConfigError(f"cannot build kernels from {type(A).__name__}")


# ------------------------------------------------------------ commutator


def _s_factor(model, xi: np.ndarray, nodes: np.ndarray, p: int) -> np.ndarray:
    """prod_j S(xi - kappa_j) as an (n_xi, G^p) array."""
    out = np.ones((xi.size, 1), dtype=complex)
    sv = model(xi[:, None] - nodes[None, :])
    for _ in range(p):
        out = (out[:, :, None] * sv[:, None, :]).reshape(xi.size, -1)
    return out


def _level_blocks(psi: FockState, chi: FockState):
    """(m, n, p) triples with psi on level m+p and chi on level n+p."""
    for lp in sorted(psi.levels):
        for lc in sorted(chi.levels):
            for p in range(min(lp, lc) + 1):
                yield lp - p, lc - p, p


def commutator_phi_prime(A, g: testfn.TestFunction | None, psi: FockState, chi: FockState,
                         rule: XiRule | None = None, gpm: tuple | None = None,
                         truncate: bool = False, chunk: int = 256, cache: dict | None = None) -> complex:
    """<psi, [A, phi'(g)] chi> from the commutator expansion.

    A is a FockKernelForm, a FormFactorFamily, or a prepared kernel source.  g^+ and g^- on
    the xi nodes are taken from `gpm` when given (otherwise transformed from g).
    """
    grid = psi.grid
    src = kernel_source(A, grid, truncate=truncate)
    if rule is None:
        if isinstance(src, GridKernelSource):
            rule = grid_rule(grid)
        else:
            rule = fine_rule([g], extra_reach=family_reach(src.fam))
    if gpm is None:
        if g is None:
            raise ConfigError("either g or its transforms must be given")
        gpm = _transforms(g, rule)
    gp, gm = (np.asarray(v, dtype=complex) for v in gpm)
    cache = {} if cache is None else cache

    def tensor(a, b, pos):
        key = (id(src), a, b, pos, id(rule))
        if key not in cache:
            cache[key] = src.slot_tensor(a, b, pos, rule)
        return cache[key]

    if psi.batch or chi.batch:
        raise ConfigError("commutator matrix elements need unbatched states")
    G = grid.size
    total = 0.0 + 0.0j
    for m, n, p in _level_blocks(psi, chi):
        k_up = m + n + 1
        if src.kmax is not None and k_up > src.kmax:
            raise ConfigError(f"kernel order {k_up} needed but only orders <= {src.kmax} are available")
        plus, minus = src.has(m, n + 1), src.has(m + 1, n)
        if not (plus or minus):
            continue
        a = psi.level(m + p).reshape(G ** m, G ** p) * math.sqrt(math.factorial(m + p) / math.factorial(p))
        xl = chi.level(n + p)
        if n > 1:
            xl = np.transpose(xl, list(range(n - 1, -1, -1)) + list(range(n, n + p)))
        x = xl.reshape(G ** n, G ** p) * math.sqrt(math.factorial(n + p) / math.factorial(p))
        wk = grid.weight_array(p).ravel()
        wth = grid.weight_array(m).ravel()
        weta = grid.weight_array(n).ravel()
        ca = np.conj(a) * wk[None, :]
        wab = wth[:, None, None] * weta[None, None, :]
        fp = tensor(m, n + 1, m).reshape(G ** m, rule.size, G ** n) * wab if plus else None
        fm = tensor(m + 1, n, m).reshape(G ** m, rule.size, G ** n) * wab if minus else None
        acc = 0.0 + 0.0j
        for s in range(0, rule.size, chunk):
            sl = slice(s, s + chunk)
            sf = _s_factor(src.model, rule.nodes[sl], grid.nodes, p)
            if plus:
                # M[x, a, b] = sum_k ca[a, k] conj(sf[x, k]) x[b, k]
                M = (ca[None, :, :] * np.conj(sf)[:, None, :]) @ x.T
                v = gp[sl] * rule.weights[sl]
                acc += np.sum(np.transpose(fp[:, sl, :], (1, 0, 2)) * M * v[:, None, None])
            if minus:
                M = (ca[None, :, :] * sf[:, None, :]) @ x.T
                v = gm[sl] * rule.weights[sl]
                acc -= np.sum(np.transpose(fm[:, sl, :], (1, 0, 2)) * M * v[:, None, None])
        total += acc / (math.factorial(m) * math.factorial(n))
    return complex(total)


def dense_commutator(A, g_plus: np.ndarray, g_minus: np.ndarray, psi: FockState, chi: FockState) -> complex:
    """<psi, (A phi'(g) - phi'(g) A) chi> computed directly on the truncated Fock space."""
    left = A.apply(apply_phi_prime(g_plus, g_minus, chi))
    right = apply_phi_prime(g_plus, g_minus, A.apply(chi))
    return inner(psi, left) - inner(psi, right)


# ------------------------------------------------------------ contour shift


def _k_values(fam: FormFactorFamily, m: int, n: int, f: Callable, nu, xi: np.ndarray, upper: bool,
              points: int = 12, L: float = 3.0) -> np.ndarray:
    """K(xi + i0) or K(xi + i pi - i0) by tensor Gauss-Legendre quadrature over theta, eta."""
    k = m + n + 1
    nu = np.asarray(nu, dtype=float)
    sfac = np.ones(xi.shape, dtype=complex)
    for v in nu:
        sfac = sfac * fam.model(xi + (1j * PI if upper else 0.0) - v)
    if m + n == 0:
        lam = np.array([PI if upper else 0.0])
        b = approach_vector("I_plus", lam)
        vals, _ = boundary_values(fam, 1, xi[:, None], lam, b)
        return sfac * vals * (1.0 if f is None else complex(f()))
    x, w = np.polynomial.legendre.leggauss(points)
    x, w = L * x, L * w
    grids = np.meshgrid(*([x] * (m + n)), indexing="ij")
    wgrids = np.meshgrid(*([w] * (m + n)), indexing="ij")
    te = np.stack([gg.ravel() for gg in grids], axis=-1)
    wt = np.prod(np.stack([gg.ravel() for gg in wgrids], axis=-1), axis=-1)
    fv = np.asarray(f(*[te[:, j] for j in range(m + n)]), dtype=complex) * wt
    lam = np.array([0.0] * m + [PI if upper else 0.0] + [PI] * n)
    b = approach_vector("I_plus", lam)
    out = np.empty(xi.shape, dtype=complex)
    for i, v in enumerate(xi):
        pts = np.concatenate([te[:, :m], np.full((te.shape[0], 1), v), te[:, m:]], axis=1)
        vals, _ = boundary_values(fam, k, pts, lam, b)
        out[i] = np.sum(vals * fv)
    return sfac * out


def omega_prime(fam: FormFactorFamily, m: int, n: int, c_prime: float):
    """omega'(p) = (a_omega + 2)(c' omega(p) + (m+n+6)/2 log(1+p)) with a_{omega'} = a_omega + 2."""
    from .indicatrix import primed

    return primed(fam.indicatrix, c_prime, m, n)


def contour_shift_check(fam: FormFactorFamily, m: int, n: int, f: Callable | None, nu, g: testfn.TestFunction,
                        tol: float = 1e-7, rule: XiRule | None = None, c_prime: float | None = None,
                        covariant: bool = True) -> CheckReport:
    """Compare int K(xi + i0) g^-(xi) dxi with int K(xi + i pi - i0) g^+(xi) dxi.

    For a family localized with r != 0 the family and g are first translated by (0, -r) so the
    tip sits at the origin (covariant=True); the report records the gap either way.
    """
    rep = CheckReport("contour shift", meta={"family_id": fam.name, "m": m, "n": n,
                                              "nu": [float(v) for v in np.atleast_1d(nu)],
                                              "g": g.describe(), "region": list(fam.region)})
    r = fam.r if fam.region[0] == "wedge" else 0.0
    F, gg = fam, g
    if covariant and r != 0.0:
        F, gg = fam.translated(-r), g.translated((0.0, -r))
        rep.meta["translated_by"] = -r
    if c_prime is not None:
        om = omega_prime(fam, m, n, c_prime)
        rep.meta["omega_prime"] = om.describe()
        if gg.smoothness != "gevrey":
            rep.meta["note"] = "g is not of Gevrey class; omega' membership not certified"
    if rule is None:
        rule = fine_rule([gg], extra_reach=family_reach(F))
    lower = _k_values(F, m, n, f, nu, rule.nodes, upper=False)
    upper = _k_values(F, m, n, f, nu, rule.nodes, upper=True)
    gp, gm = _transforms(gg, rule)
    left = complex(np.sum(lower * gm * rule.weights))
    right = complex(np.sum(upper * gp * rule.weights))
    scale = max(1.0, float(np.sum(np.abs(lower * gm) * rule.weights)))
    rep.add("shift.gap", abs(left - right) / scale, tol, rule.size, lower=left, upper=right,
            rule=rule.label, inside_wedge=gg.support_in(testfn.wedge((0.0, 0.0))))
    return rep


# ------------------------------------------------------------ verdicts


@dataclass
class LocalityVerdict:
    local: bool
    meaningful: bool
    max_commutator_residual: float
    negative_control_residual: float
    region: tuple
    tol: float
    test_function_set: list = field(default_factory=list)
    reflected: dict = field(default_factory=dict)
    refinement: list = field(default_factory=list)
    truncation: int | None = None
    prerequisites: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if not self.meaningful:
            return "inconclusive"
        return "local" if self.local else "non-local"

    def to_dict(self) -> dict:
        from .report import _clean

        return _clean({
            "status": self.status, "local": self.local, "meaningful": self.meaningful,
            "max_commutator_residual": self.max_commutator_residual,
            "negative_control_residual": self.negative_control_residual,
            "region": {"kind": self.region[0], "r": float(self.region[1])}, "tol": self.tol,
            "test_function_set": self.test_function_set, "reflected": self.reflected,
            "refinement": self.refinement, "truncation_order": self.truncation,
            "prerequisites": self.prerequisites, "meta": self.meta,
        })


def probe_wedge(region: tuple) -> testfn.Region:
    """The right wedge W_r whose fields phi'(g) must commute with A."""
    kind, r = region
    return testfn.wedge((0.0, float(r)))


def default_battery(region: tuple, mu: float = 1.0) -> list:
    """Six bumps inside W_r (two of Gevrey class) and two time-displaced controls outside it."""
    kind, r = region
    W = probe_wedge(region)
    pos = [((0.0, r + 0.7), 0.4, "standard", 2.0), ((0.3, r + 1.0), 0.4, "standard", 2.0),
           ((-0.2, r + 0.8), 0.3, "standard", 2.0), ((0.0, r + 1.5), 0.8, "standard", 2.0),
           ((0.0, r + 0.9), 0.5, "gevrey", 2.0), ((0.5, r + 1.4), 0.5, "gevrey", 3.0)]
    out = []
    for i, (c, rad, sm, s) in enumerate(pos):
        out.append(testfn.make_bump(W, c, rad, sm, s, mu=mu, label=f"pos{i}"))
    plane = testfn.plane()
    out.append(testfn.make_bump(plane, (0.5, 0.0), 0.2, mu=mu, label="ctl0"))
    out.append(testfn.make_bump(plane, (-0.5, 0.2), 0.2, mu=mu, label="ctl1"))
    return out


def default_states(grid: FockGrid, seed: int = 0, max_level: int = 1, regular_only: bool = False) -> list:
    """Vacuum pairs and random states up to max_level.

    regular_only keeps one side in the vacuum, so only kernels f_{0,n} and f_{1,n-1} with
    n <= max_level + 1 enter; these avoid the kinematic planes up to the first pole order.
    """
    from .fock import random_state

    rng = np.random.default_rng(seed)
    vac = FockState.vacuum(grid)
    one = random_state(grid, rng, max_level)
    two = random_state(grid, rng, max_level)
    if regular_only:
        return [(vac, vac), (vac, one), (two, vac)]
    return [(vac, vac), (one, two)]


def _norm(s: FockState) -> float:
    return max(s.norm(), 1e-300)


def _battery_run(src, battery, states, rule_for, roles, jobs: int = 1):
    def one(item):
        g, role = item
        rule = rule_for(g)
        gpm = _transforms(g, rule)
        cache: dict = {}
        worst = 0.0
        for psi, chi in states:
            c = commutator_phi_prime(src, g, psi, chi, rule=rule, gpm=gpm, cache=cache)
            worst = max(worst, abs(c) / (_norm(psi) * _norm(chi)))
        return {"label": g.label, "role": role, "g": g.describe(), "residual": worst,
                "xi_rule": rule.label, "xi_points": rule.size}

    items = list(zip(battery, roles))
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        # map keeps battery order, so the reduction below is deterministic
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(one, items))
    return [one(it) for it in items]


def verify_locality(A, region: tuple, battery: Sequence[testfn.TestFunction] | None = None,
                    states: Sequence | None = None, tol: float = 1e-6, grid: FockGrid | None = None,
                    xi_max: float = 8.0, max_phase: float = 15.0, truncate: bool = False,
                    prerequisites: Sequence[CheckReport] = (), refine: bool = False,
                    seed: int = 0, jobs: int = 1) -> LocalityVerdict:
    """Commutator test of A against phi'(g) for a battery of g.

    Positives (supp g inside W_r) must give residual <= tol; controls (supp g outside W_r) must
    exceed 10 tol for the verdict to be meaningful.  For double cones the reflected form
    J A* J is run against the same positives.
    """
    kind, r = region
    if kind not in ("wedge", "double_cone"):
        raise ConfigError(f"unknown region kind {kind!r}")
    if grid is None:
        if isinstance(A, FockKernelForm):
            grid = A.grid
        else:
            raise ConfigError("a Fock grid is needed for the state battery")
    battery = list(default_battery(region) if battery is None else battery)
    if not battery:
        raise ConfigError("empty test-function battery")
    W = probe_wedge(region)
    roles = ["positive" if g.support_in(W) else "control" for g in battery]
    if "positive" not in roles:
        raise ConfigError("battery has no test function inside the test wedge")
    if "control" not in roles:
        raise MissingControl("battery has no negative control outside the test wedge")
    has_poles = isinstance(A, FormFactorFamily) and any(A.planes(k) for k in A.nonzero_orders())
    states = list(default_states(grid, seed, regular_only=has_poles) if states is None else states)
    if not states:
        raise ConfigError("empty state battery")
    src = kernel_source(A, grid, truncate=truncate)
    grid_only = isinstance(src, GridKernelSource)
    extra = family_reach(A) if isinstance(A, FormFactorFamily) else 0.0

    def rule_for(g, xm=xi_max, ph=max_phase):
        if grid_only:
            return grid_rule(grid)
        return fine_rule([g], xm, ph, extra_reach=extra)

    rows = _battery_run(src, battery, states, rule_for, roles, jobs)
    pos = [row["residual"] for row in rows if row["role"] == "positive"]
    ctl = [row["residual"] for row in rows if row["role"] == "control"]
    max_pos = max(pos)
    min_ctl = min(ctl)
    reflected = {}
    if kind == "double_cone":
        rsrc = kernel_source(A, grid, reflected=True, truncate=truncate)
        rrows = _battery_run(rsrc, battery, states, rule_for, roles, jobs)
        rpos = max(row["residual"] for row in rrows if row["role"] == "positive")
        rctl = min(row["residual"] for row in rrows if row["role"] == "control")
        reflected = {"max_commutator_residual": rpos, "negative_control_residual": rctl, "rows": rrows}
        max_pos = max(max_pos, rpos)
    refinement = []
    if refine and not grid_only:
        # level 1 doubles the xi points
        for level, (xm, ph) in enumerate([(xi_max, max_phase), (xi_max, max_phase / 2)]):
            rr = rows if level == 0 else _battery_run(src, battery, states,
                                                      lambda g: rule_for(g, xm, ph), roles, jobs)
            refinement.append({"level": level, "xi_max": xm, "max_phase": ph,
                               "max_positive": max(row["residual"] for row in rr if row["role"] == "positive"),
                               "min_control": min(row["residual"] for row in rr if row["role"] == "control")})
    meaningful = min_ctl >= 10.0 * tol
    trunc = None
    if isinstance(src, FamilyKernelSource) and src.truncated:
        trunc = src.fam.kmax
    meta = {"kernel_source": src.label, "states": len(states), "seed": seed, "grid": grid.describe(),
            "state_sector": "regular (one side vacuum)" if has_poles else "general",
            "normalization": "|<psi,[A,phi'(g)]chi>| / (|psi| |chi|)"}
    return LocalityVerdict(bool(meaningful and max_pos <= tol), bool(meaningful), float(max_pos),
                           float(min_ctl), (kind, float(r)), float(tol), rows, reflected, refinement,
                           trunc, [report_json(p) for p in prerequisites], meta)


def family_prerequisites(fam: FormFactorFamily, cfg: SamplingConfig | None = None) -> CheckReport:
    """check_fd for double cones, check_fw for wedges."""
    return check_fd(fam, cfg) if fam.region[0] == "double_cone" else check_fw(fam, cfg)


# ------------------------------------------------------------ kernel dumps


def save_kernel_dump(form: FockKernelForm, path) -> None:
    arrays = {f"f_{m}_{n}": v for (m, n), v in form.kernels.items()}
    np.savez(path, nodes=form.grid.nodes, weights=form.grid.weights, model=np.array(form.grid.model.name),
             cutoff=np.array(form.grid.cutoff), **arrays)


def load_kernel_dump(path, model) -> FockKernelForm:
    """Kernel form from an .npz with nodes, weights, cutoff and arrays f_<m>_<n>."""
    with np.load(path) as data:
        if "nodes" not in data.files or "weights" not in data.files:
            raise ConfigError("kernel dump needs 'nodes' and 'weights'")
        if "model" in data.files and str(data["model"]) != model.name:
            raise ConfigError(f"kernel dump was written for model {str(data['model'])!r}")
        cutoff = int(data["cutoff"]) if "cutoff" in data.files else 3
        grid = FockGrid(model, data["nodes"], data["weights"], cutoff)
        kernels = {}
        for name in data.files:
            if name.startswith("f_"):
                _, m, n = name.split("_")
                kernels[(int(m), int(n))] = data[name]
    return FockKernelForm(grid, kernels, {"label": f"kernel dump {path}"})
