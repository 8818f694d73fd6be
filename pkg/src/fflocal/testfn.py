"""Compactly supported test functions on 2D Minkowski space and their rapidity transforms.

    g^pm(zeta) = (1/2pi) int g(x) exp(pm i p(zeta).x) d^2x,   p(zeta) = mu (cosh zeta, sinh zeta),

with p.x = p0 x0 - p1 x1.  For radial bumps b(|x - c|) the transform reduces
to a one-dimensional Hankel integral,

    g^pm(zeta) = exp(pm i p(zeta).c) int_0^R b(r) J0(mu sqrt(cosh 2 zeta) r) r dr,

because the Euclidean square of (p0, -p1) is mu^2 cosh 2 zeta.  J0 is even, so
the branch of the square root does not matter.
"""

from __future__ import annotations

import functools
import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .report import CheckReport, ConfigError


class QuadratureError(RuntimeError):
    """Two refinement levels of a quadrature disagreed beyond tolerance."""


# ---------------------------------------------------------------- regions


@dataclass(frozen=True)
class Region:
    """Open spacetime region: rectangle, wedge W_x, left wedge W'_y, double cone O_r, or the plane."""

    kind: str
    params: tuple = ()

    def margin(self, x0, x1):
        """Signed Euclidean distance to the boundary (positive inside)."""
        x0 = np.asarray(x0, dtype=float)
        x1 = np.asarray(x1, dtype=float)
        k, p = self.kind, self.params
        if k == "plane":
            return np.full(np.broadcast(x0, x1).shape, np.inf)
        if k == "rectangle":
            a0, b0, a1, b1 = p
            return np.minimum.reduce([x0 - a0, b0 - x0, x1 - a1, b1 - x1])
        if k == "wedge":
            d0, d1 = x0 - p[0], x1 - p[1]
            return (d1 - np.abs(d0)) / math.sqrt(2.0)
        if k == "left_wedge":
            d0, d1 = x0 - p[0], x1 - p[1]
            return (-d1 - np.abs(d0)) / math.sqrt(2.0)
        if k == "double_cone":
            r = p[0]
            return (r - np.abs(x0) - np.abs(x1)) / math.sqrt(2.0)
        raise ConfigError(f"unknown region kind {k!r}")

    def contains(self, x0, x1):
        return self.margin(x0, x1) > 0

    def describe(self) -> dict:
        return {"kind": self.kind, "params": [float(v) for v in self.params]}


def rectangle(a0, b0, a1, b1) -> Region:
    return Region("rectangle", (float(a0), float(b0), float(a1), float(b1)))


def wedge(x=(0.0, 0.0)) -> Region:
    """W_x = W + x with W = {x1 > |x0|}."""
    return Region("wedge", (float(x[0]), float(x[1])))


def left_wedge(y=(0.0, 0.0)) -> Region:
    """W'_y = W' + y with W' = {x1 < -|x0|}."""
    return Region("left_wedge", (float(y[0]), float(y[1])))


def double_cone(r: float) -> Region:
    """O_r = W_{-r} cap W'_r with r = (0, r), i.e. |x0| + |x1| < r."""
    if r <= 0:
        raise ConfigError("double cone radius must be positive")
    return Region("double_cone", (float(r),))


def plane() -> Region:
    return Region("plane", ())


def get_region(kind: str, r: float = 0.0) -> Region:
    kind = kind.replace("-", "_")
    if kind == "wedge":
        return wedge((0.0, r))
    if kind == "left_wedge":
        return left_wedge((0.0, r))
    if kind == "double_cone":
        return double_cone(r)
    raise ConfigError(f"unknown region kind {kind!r}")


# ---------------------------------------------------------------- profiles


def standard_profile(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


def gevrey_profile(s: float) -> Callable:
    if s <= 1.0:
        raise ConfigError("Gevrey exponent must exceed 1")

    def prof(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        inside = np.abs(t) < 1.0
        out[inside] = np.exp(-(1.0 - t[inside] ** 2) ** (-s))
        return out

    return prof


# ---------------------------------------------------------- test functions


@dataclass
class TestFunction:
    """g(x) = amplitude * b(|x - center| / radius) for radial bumps, or a user callable."""

    __test__ = False  # not a pytest class

    support: Region
    center: tuple = (0.0, 0.0)
    radius: float = 0.0
    smoothness: str = "standard"
    gevrey_s: float = 0.0
    amplitude: complex = 1.0
    mu: float = 1.0
    real: bool = True
    func: Callable | None = field(default=None, repr=False)
    box: tuple | None = None
    reflected_flag: bool = False
    label: str = ""

    # -------- evaluation
    @property
    def profile(self) -> Callable:
        return gevrey_profile(self.gevrey_s) if self.smoothness == "gevrey" else standard_profile

    @property
    def is_radial(self) -> bool:
        return self.func is None

    def eval(self, x0, x1):
        x0 = np.asarray(x0, dtype=float)
        x1 = np.asarray(x1, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(x0, x1), dtype=complex)
        if self.reflected_flag:
            x0, x1 = -x0, -x1
        d = np.hypot(x0 - self.center[0], x1 - self.center[1]) / self.radius
        val = self.amplitude * self.profile(d)
        return np.conj(val) if self.reflected_flag else val

    def support_box(self) -> tuple:
        if self.box is not None:
            return self.box
        c0, c1 = self.center
        if self.reflected_flag:
            c0, c1 = -c0, -c1
        R = self.radius
        return (c0 - R, c0 + R, c1 - R, c1 + R)

    def effective_center(self) -> tuple:
        return (-self.center[0], -self.center[1]) if self.reflected_flag else tuple(self.center)

    def support_in(self, region: Region) -> bool:
        """Closed Euclidean support ball inside the open region (radial bumps);
        box corners for callables (sufficient for convex regions)."""
        if self.is_radial:
            c0, c1 = self.effective_center()
            return bool(region.margin(c0, c1) > self.radius)
        a0, b0, a1, b1 = self.support_box()
        corners = np.array([[a0, a1], [a0, b1], [b0, a1], [b0, b1]])
        return bool(np.all(region.margin(corners[:, 0], corners[:, 1]) > 0))

    def key(self) -> str:
        h = hashlib.sha256(repr((self.support.describe(), self.center, self.radius, self.smoothness,
                                 self.gevrey_s, complex(self.amplitude), self.mu,
                                 self.reflected_flag, self.label)).encode())
        return h.hexdigest()[:16]

    def describe(self) -> dict:
        return {"support": self.support.describe(), "center": [float(c) for c in self.center],
                "radius": float(self.radius), "class": self.smoothness, "s": float(self.gevrey_s),
                "mu": float(self.mu), "reflected": self.reflected_flag, "label": self.label}

    # -------- derived functions
    def reflected(self) -> "TestFunction":
        """g^j(x) = conj g(-x)."""
        if self.func is not None:
            f = self.func
            a0, b0, a1, b1 = self.support_box()
            return TestFunction(self.support, mu=self.mu, real=self.real,
                                func=lambda x0, x1: np.conj(f(-x0, -x1)), box=(-b0, -a0, -b1, -a1),
                                label=self.label + "^j")
        out = TestFunction(**{**self.__dict__})
        out.reflected_flag = not self.reflected_flag
        out.label = self.label + "^j"
        return out

    def translated(self, y) -> "TestFunction":
        if self.func is not None:
            f = self.func
            a0, b0, a1, b1 = self.support_box()
            return TestFunction(self.support, mu=self.mu, real=self.real,
                                func=lambda x0, x1: f(x0 - y[0], x1 - y[1]),
                                box=(a0 + y[0], b0 + y[0], a1 + y[1], b1 + y[1]), label=self.label + "+y")
        out = TestFunction(**{**self.__dict__})
        s = -1.0 if self.reflected_flag else 1.0
        out.center = (self.center[0] + s * y[0], self.center[1] + s * y[1])
        return out

    def plus(self, zeta):
        return transform(self, +1, zeta)

    def minus(self, zeta):
        return transform(self, -1, zeta)


def _unit_mass(profile: Callable, radius: float) -> float:
    x, w = np.polynomial.legendre.leggauss(200)
    t = 0.5 * (x + 1.0)
    return float(2.0 * math.pi * radius ** 2 * np.sum(0.5 * w * profile(t) * t))


def make_bump(region: Region, center, radius: float, smoothness: str = "standard", s: float = 2.0,
              mu: float = 1.0, normalize: bool = True, amplitude: float = 1.0, label: str = "") -> TestFunction:
    """Radial bump whose closed support ball lies inside the region."""
    if radius <= 0:
        raise ConfigError("radius must be positive")
    if smoothness not in ("standard", "gevrey"):
        raise ConfigError(f"unknown smoothness class {smoothness!r}")
    g = TestFunction(region, (float(center[0]), float(center[1])), float(radius), smoothness,
                     float(s) if smoothness == "gevrey" else 0.0, 1.0, mu, True, label=label)
    if not g.support_in(region):
        raise ConfigError(f"ball of radius {radius} at {tuple(center)} is not inside {region.describe()}")
    if normalize:
        g.amplitude = amplitude / _unit_mass(g.profile, radius)
    else:
        g.amplitude = amplitude
    return g


def from_callable(fn: Callable, box: tuple, region: Region | None = None, mu: float = 1.0,
                  real: bool = False, label: str = "") -> TestFunction:
    """User test function given on its support box (evaluated vectorized in x0, x1)."""
    return TestFunction(region or plane(), mu=mu, real=real, func=fn, box=tuple(float(b) for b in box),
                        label=label)


# --------------------------------------------------------------- transforms


def momentum(mu: float, zeta):
    zeta = np.asarray(zeta, dtype=complex)
    return mu * np.cosh(zeta), mu * np.sinh(zeta)


@functools.lru_cache(maxsize=512)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    from scipy.special import roots_legendre

    x, w = roots_legendre(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


# quadrature orders for the radial integral, roughly geometric so the cache stays small
_ORDERS = tuple(sorted({min(4000, int(16 * math.ceil(96 * 1.25 ** j / 16))) for j in range(20)}))


def _order_for(kr: np.ndarray, extra: int) -> np.ndarray:
    need = np.minimum(4000, kr + extra)
    idx = np.searchsorted(np.asarray(_ORDERS), need)
    return np.asarray(_ORDERS)[np.minimum(idx, len(_ORDERS) - 1)]


def _radial_part(g: TestFunction, flat: np.ndarray, extra: int = 80) -> np.ndarray:
    """int b(rho) J0(kappa rho) rho drho with kappa = mu sqrt(cosh 2 zeta).

    Each point gets a Gauss-Legendre order matched to |kappa| R.
    """
    from scipy.special import j0, jv

    # meshgrids repeat rapidities, so integrate once per distinct kappa
    kappa, back = np.unique(g.mu * np.sqrt(np.cosh(2.0 * flat)), return_inverse=True)
    orders = _order_for(np.abs(kappa) * g.radius, extra)
    out = np.empty(kappa.shape, dtype=complex)
    for n in np.unique(orders):
        sel = np.nonzero(orders == n)[0]
        x, w = gauss_legendre(int(n))
        r = 0.5 * g.radius * (x + 1.0)
        prof = g.amplitude * g.profile(r / g.radius)
        if g.reflected_flag:
            prof = np.conj(prof)
        vec = 0.5 * g.radius * w * prof * r
        chunk = max(1, 200000 // r.size)
        for s in range(0, sel.size, chunk):
            ids = sel[s:s + chunk]
            kc = kappa[ids]
            if np.all(np.abs(kc.imag) <= 1e-14 * np.abs(kc)):
                # kappa is real on the lines Im zeta = 0 and Im zeta = pi
                out[ids] = j0(np.abs(kc)[:, None] * r[None, :]) @ vec
            else:
                out[ids] = jv(0, kc[:, None] * r[None, :]) @ vec
    return out[back.ravel()]


def transform_radial(g: TestFunction, sign: int, zeta, extra: int = 80) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=complex)
    flat = zeta.ravel()
    rad = _radial_part(g, flat, extra)
    c0, c1 = g.effective_center()
    p0, p1 = momentum(g.mu, flat)
    out = np.exp(sign * 1j * (p0 * c0 - p1 * c1)) * rad
    return out.reshape(zeta.shape)


def transform_pair(g: TestFunction, zeta) -> tuple[np.ndarray, np.ndarray]:
    """(g^+, g^-) at the same rapidities, sharing the radial integral for bumps."""
    zeta = np.asarray(zeta, dtype=complex)
    if not g.is_radial:
        return transform_quadrature(g, +1, zeta), transform_quadrature(g, -1, zeta)
    flat = zeta.ravel()
    rad = _radial_part(g, flat)
    c0, c1 = g.effective_center()
    p0, p1 = momentum(g.mu, flat)
    ph = p0 * c0 - p1 * c1
    return (np.exp(1j * ph) * rad).reshape(zeta.shape), (np.exp(-1j * ph) * rad).reshape(zeta.shape)


def transform_quadrature(g: TestFunction, sign: int, zeta, points: int | None = None) -> np.ndarray:
    """Tensor Gauss-Legendre quadrature over the support box."""
    zeta = np.asarray(zeta, dtype=complex)
    flat = zeta.ravel()
    a0, b0, a1, b1 = g.support_box()
    half = 0.5 * max(b0 - a0, b1 - a1)
    if points is None:
        kmax = float(np.max(np.abs(g.mu * np.cosh(flat)))) if flat.size else 1.0
        points = int(min(800, 3.0 * kmax * half + 100))
    x, w = gauss_legendre(int(points))
    X0 = 0.5 * (a0 + b0) + 0.5 * (b0 - a0) * x
    X1 = 0.5 * (a1 + b1) + 0.5 * (b1 - a1) * x
    W0 = 0.5 * (b0 - a0) * w
    W1 = 0.5 * (b1 - a1) * w
    G = g.eval(X0[:, None], X1[None, :]) * W0[:, None] * W1[None, :]
    out = np.empty(flat.shape, dtype=complex)
    for i, z in enumerate(flat):
        p0, p1 = momentum(g.mu, z)
        e0 = np.exp(sign * 1j * p0 * X0)
        e1 = np.exp(-sign * 1j * p1 * X1)
        out[i] = e0 @ G @ e1
    return out.reshape(zeta.shape) / (2.0 * math.pi)


def transform(g: TestFunction, sign: int, zeta, method: str = "auto"):
    """g^+ (sign=+1) or g^- (sign=-1) at complex rapidities."""
    if sign not in (1, -1):
        raise ConfigError("sign must be +1 or -1")
    scalar = np.ndim(zeta) == 0
    if method == "auto":
        method = "radial" if g.is_radial else "quadrature"
    if method == "radial":
        if not g.is_radial:
            raise ConfigError("radial transform needs a radial bump")
        out = transform_radial(g, sign, zeta)
    elif method == "quadrature":
        out = transform_quadrature(g, sign, zeta)
    else:
        raise ConfigError(f"unknown transform method {method!r}")
    return complex(out) if scalar else out


def transform_checked(g: TestFunction, sign: int, zeta, tol: float = 1e-10):
    """Transform with a refinement check; raises QuadratureError on disagreement."""
    zeta = np.asarray(zeta, dtype=complex)
    if g.is_radial:
        a = transform_radial(g, sign, zeta, extra=80)
        b = transform_radial(g, sign, zeta, extra=160)
    else:
        a0, b0, a1, b1 = g.support_box()
        kmax = float(np.max(np.abs(g.mu * np.cosh(zeta)))) if zeta.size else 1.0
        n = int(min(600, kmax * max(b0 - a0, b1 - a1) + 60))
        a = transform_quadrature(g, sign, zeta, n)
        b = transform_quadrature(g, sign, zeta, int(1.5 * n))
    err = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b)))) if a.size else 0.0
    if err > tol:
        raise QuadratureError(f"transform refinement mismatch {err:.3e} > {tol:.1e}")
    return b


class TransformCache:
    """In-memory cache of transforms keyed by (function key, sign, zeta grid); dumpable to .npz."""

    def __init__(self):
        self.table: dict = {}

    def _key(self, g, sign, zeta):
        z = np.ascontiguousarray(np.asarray(zeta, dtype=complex))
        return (g.key(), int(sign), hashlib.sha256(z.tobytes()).hexdigest()[:16])

    def get(self, g: TestFunction, sign: int, zeta):
        k = self._key(g, sign, zeta)
        if k not in self.table:
            self.table[k] = np.asarray(transform(g, sign, np.asarray(zeta, dtype=complex)))
        return self.table[k]

    def save(self, path):
        np.savez(path, **{"|".join(map(str, k)): v for k, v in self.table.items()})

    def load(self, path):
        with np.load(path) as data:
            for name in data.files:
                gk, s, zk = name.split("|")
                self.table[(gk, int(s), zk)] = data[name]


# ------------------------------------------------------------ derivatives


def cauchy_derivative(fn: Callable, zeta, order: int, radius=None, points: int = 32):
    """d^l fn / dzeta^l by the trapezoid rule on a circle of radius min(0.1, 1/cosh Re zeta)."""
    zeta = np.asarray(zeta, dtype=complex)
    if order == 0:
        return fn(zeta)
    if radius is None:
        radius = np.minimum(0.1, 1.0 / np.cosh(zeta.real))
    radius = np.asarray(radius, dtype=float)
    phi = 2.0 * math.pi * np.arange(points) / points
    ring = zeta[..., None] + radius[..., None] * np.exp(1j * phi)
    vals = fn(ring)
    coef = np.mean(vals * np.exp(-1j * order * phi), axis=-1)
    return math.factorial(order) * coef / radius ** order


# -------------------------------------------------------------- Paley-Wiener


def _pw_constant(g, ind, ell, theta_max, n_theta, n_lam):
    th = np.linspace(-theta_max, theta_max, n_theta)
    lam = np.linspace(0.0, math.pi, n_lam)
    T, L = np.meshgrid(th, lam, indexing="ij")
    z = T + 1j * L

    def gm(zz):
        return transform(g, -1, zz)

    d = np.abs(cauchy_derivative(gm, z, ell))
    env = np.cosh(T) ** ell * np.exp(-ind.omega(np.cosh(T)) / ind.a_omega)
    return float(np.max(d / env))


def check_paley_wiener(g: TestFunction, ind, ell: int = 0, theta_max: float = 5.0,
                       n_theta: int = 41, n_lam: int = 9, tol: float = 0.05,
                       strict: bool = True) -> CheckReport:
    """Fit c in |d^l g^-(theta + i lam)| <= c cosh(theta)^l exp(-omega(cosh theta)/a) on the strip.

    Passes iff c is finite and changes by at most `tol` (relative) under grid
    doubling and under extending the rapidity range by one unit.
    """
    W = wedge((0.0, 0.0))
    inside = g.support_in(W)
    if strict and not inside:
        raise ConfigError("test function is not supported in the right wedge")
    c0 = _pw_constant(g, ind, ell, theta_max, n_theta, n_lam)
    c_ref = _pw_constant(g, ind, ell, theta_max, 2 * n_theta - 1, 2 * n_lam - 1)
    c_ext = _pw_constant(g, ind, ell, theta_max + 1.0, n_theta + 8, n_lam)
    rep = CheckReport("paley-wiener", meta={"ell": ell, "indicatrix": ind.describe(),
                                            "theta_max": theta_max, "g": g.describe()})
    rep.add("support_in_wedge", 0.0 if inside else 1.0, 0.5, 1)
    fin = all(math.isfinite(c) and c > 0 for c in (c0, c_ref, c_ext))
    rel_ref = abs(c_ref - c0) / c0 if fin else float("inf")
    rel_ext = abs(c_ext - c_ref) / c_ref if fin else float("inf")
    rep.add("refinement", rel_ref, tol, n_theta * n_lam, constant=c_ref)
    rep.add("range_extension", rel_ext, tol, n_theta * n_lam, constant=c_ext)
    rep.meta["constant"] = c_ref
    return rep
