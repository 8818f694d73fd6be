"""Two-particle scattering functions and the permutation factors built from them.

A scattering function S is analytic on the strip 0 < Im z < pi and obeys

    S(t)^-1 = S(-t) = conj S(t) = S(t + i pi)      (t real).

It is continued to Im z in (-pi, 0) by S(z) := 1/S(z + i pi) and then
2 pi i-periodically.  The four built-in models have closed forms that are
already valid on all of C, so the continuation is automatic for them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .report import CheckReport, ConfigError, PoleHit

POLE_TOL = 1e-9
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ScatteringModel:
    name: str
    params: dict = field(default_factory=dict)
    func: Callable[[np.ndarray], np.ndarray] = field(default=None, repr=False, compare=False)
    # pole offsets in one period (complex numbers, repeated with period 2 pi i)
    poles: tuple = ()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.asarray(self.func(z), dtype=complex)

    def pole_distance(self, z) -> np.ndarray:
        """Distance from z to the nearest declared pole (inf if there are none)."""
        z = np.asarray(z, dtype=complex)
        if not self.poles:
            return np.full(z.shape, np.inf)
        best = np.full(z.shape, np.inf)
        for p in self.poles:
            d = z - p
            # reduce the imaginary part modulo 2 pi into (-pi, pi]
            im = np.mod(d.imag + math.pi, TWO_PI) - math.pi
            best = np.minimum(best, np.hypot(d.real, im))
        return best

    def describe(self) -> dict:
        return {"name": self.name, "params": {k: float(v) for k, v in sorted(self.params.items())}}


def _free(z):
    return np.ones_like(z)


def _ising(z):
    return -np.ones_like(z)


def free_field() -> ScatteringModel:
    return ScatteringModel("free", {}, _free)


def ising() -> ScatteringModel:
    return ScatteringModel("ising", {}, _ising)


def sinh_gordon(a: float) -> ScatteringModel:
    if not 0.0 < a < 1.0:
        raise ConfigError(f"sinh-Gordon coupling must lie in (0,1), got {a}")
    ia = 1j * a

    def f(z):
        s = np.sinh(z)
        return (s - ia) / (s + ia)

    # sinh z = -i a  <=>  z = -i asin(a)  or  z = -i pi + i asin(a)   (mod 2 pi i)
    b = math.asin(a)
    return ScatteringModel("sinh-gordon", {"a": a}, f, (complex(0, -b), complex(0, -math.pi + b)))


def exotic(a: float) -> ScatteringModel:
    if not a > 0.0:
        raise ConfigError(f"exotic coupling must be positive, got {a}")

    def f(z):
        return np.exp(1j * a * np.sinh(z))

    return ScatteringModel("exotic", {"a": a}, f)


BUILTIN = {
    "free": lambda p: free_field(),
    "ising": lambda p: ising(),
    "sinh-gordon": lambda p: sinh_gordon(float(p.get("a", 0.5))),
    "exotic": lambda p: exotic(float(p.get("a", 1.0))),
}


def get_model(name: str, params: dict | None = None) -> ScatteringModel:
    params = dict(params or {})
    key = name.lower().replace("_", "-")
    if key == "sinhgordon":
        key = "sinh-gordon"
    if key not in BUILTIN:
        raise ConfigError(f"unknown scattering model {name!r}; known: {sorted(BUILTIN)}")
    return BUILTIN[key](params)


def eval_s(model: ScatteringModel, z, tol: float = POLE_TOL):
    """S(z) with a pole guard; works on scalars and arrays."""
    arr = np.asarray(z, dtype=complex)
    if model.poles and np.any(model.pole_distance(arr) < tol):
        raise PoleHit(f"{model.name}: argument within {tol:g} of a pole")
    out = model(arr)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------- axioms


def check_s_axioms(model: ScatteringModel, grid: Sequence[float], tol: float = 1e-12) -> CheckReport:
    t = np.asarray(grid, dtype=float)
    if t.size == 0 or not np.all(np.isfinite(t)):
        raise ConfigError("grid must be nonempty and finite")
    s = eval_s(model, t)
    s_neg = eval_s(model, -t)
    s_ip = eval_s(model, t + 1j * math.pi)
    rep = CheckReport(f"scattering axioms [{model.name}]", meta={"model": model.describe(), "points": int(t.size)})
    n = int(t.size)
    rep.add("inverse", np.max(np.abs(s * s_neg - 1.0)), tol, n)
    rep.add("hermitian", np.max(np.abs(s_neg - np.conj(s))), tol, n)
    rep.add("crossing", np.max(np.abs(s_ip * s - 1.0)), tol, n)
    rep.add("unitarity_real", np.max(np.abs(np.abs(s) - 1.0)), tol, n)
    rep.add("unitarity_shifted", np.max(np.abs(np.abs(s_ip) - 1.0)), tol, n)
    per = 0.0
    for lam in (0.0, 0.5 * math.pi, math.pi):
        z = t + 1j * lam
        per = max(per, float(np.max(np.abs(eval_s(model, z + 2j * math.pi) - eval_s(model, z)))))
    rep.add("periodicity", per, tol, 3 * n)
    s0 = complex(eval_s(model, 0.0))
    rep.add("s0_sign", min(abs(s0 - 1.0), abs(s0 + 1.0)), tol, 1)
    return rep


def morera_check(model: ScatteringModel, centers: Sequence[complex], half_side: float = 0.05,
                 tol: float = 1e-10, nodes: int = 16) -> CheckReport:
    """Contour integral of S around small squares; zero for analytic S."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    worst = 0.0
    h = half_side
    corners = [(-h - 1j * h), (h - 1j * h), (h + 1j * h), (-h + 1j * h)]
    for c in centers:
        total = 0.0 + 0.0j
        for a, b in zip(corners, corners[1:] + corners[:1]):
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            total += np.sum(w * eval_s(model, c + mid + half * x)) * half
        worst = max(worst, abs(total) / (8 * h))
    rep = CheckReport(f"morera [{model.name}]")
    rep.add("morera", worst, tol, len(centers))
    return rep


# ------------------------------------------------------- permutation factors


@dataclass(frozen=True)
class Permutation:
    """sigma as a tuple of 0-based images: sigma[i] is the image of i."""

    images: tuple

    def __post_init__(self):
        k = len(self.images)
        if sorted(self.images) != list(range(k)):
            raise ValueError(f"not a permutation of 0..{k - 1}: {self.images}")

    @property
    def k(self) -> int:
        return len(self.images)

    def inversions(self) -> list[tuple[int, int]]:
        s = self.images
        return [(i, j) for i in range(self.k) for j in range(i + 1, self.k) if s[i] > s[j]]

    def inverse(self) -> "Permutation":
        inv = [0] * self.k
        for i, si in enumerate(self.images):
            inv[si] = i
        return Permutation(tuple(inv))

    @staticmethod
    def transposition(k: int, i: int) -> "Permutation":
        imgs = list(range(k))
        imgs[i], imgs[i + 1] = imgs[i + 1], imgs[i]
        return Permutation(tuple(imgs))


def s_perm(model: ScatteringModel, sigma: Permutation | Sequence[int], theta):
    """S^sigma(theta) = prod over i<j with sigma(i)>sigma(j) of S(theta_sigma(i) - theta_sigma(j)).

    theta may carry leading batch axes; the last axis has length k.
    """
    if not isinstance(sigma, Permutation):
        sigma = Permutation(tuple(sigma))
    th = np.asarray(theta, dtype=complex)
    if th.shape[-1] != sigma.k:
        raise ValueError(f"arity mismatch: permutation on {sigma.k} letters, {th.shape[-1]} arguments")
    out = np.ones(th.shape[:-1], dtype=complex)
    s = sigma.images
    for i, j in sigma.inversions():
        out = out * model(th[..., s[i]] - th[..., s[j]])
    return out if out.ndim else complex(out)


def permute_args(theta, sigma: Permutation):
    """theta^sigma = (theta_sigma(1), ..., theta_sigma(k)) along the last axis."""
    th = np.asarray(theta)
    return th[..., list(sigma.images)]


def all_permutations(k: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(k))]


# ----------------------------------------------------- grid-level symmetry


def pair_matrix(model: ScatteringModel, nodes: np.ndarray) -> np.ndarray:
    """M[a, b] = S(nodes[a] - nodes[b])."""
    nodes = np.asarray(nodes, dtype=float)
    return model(nodes[:, None] - nodes[None, :])


def grid_factor(pm: np.ndarray, sigma: Permutation) -> np.ndarray:
    """S^sigma evaluated on every node tuple of a product grid, shape (G,)*k."""
    k = sigma.k
    g = pm.shape[0]
    out = np.ones((g,) * k, dtype=complex)
    s = sigma.images
    for i, j in sigma.inversions():
        a, b = s[i], s[j]
        shape = [1] * k
        shape[a] = g
        shape[b] = g
        block = pm if a < b else pm.T
        out = out * block.reshape(shape)
    return out


def transpose_axes(sigma: Permutation) -> tuple:
    """Axes for np.transpose so that out[i_1..i_k] = f[i_sigma(1), ..., i_sigma(k)]."""
    return sigma.inverse().images


def twisted_action(values: np.ndarray, pm: np.ndarray, sigma: Permutation) -> np.ndarray:
    """(sigma . f)(theta) = S^sigma(theta) f(theta^sigma) on the first k axes."""
    k = sigma.k
    extra = values.ndim - k
    fac = grid_factor(pm, sigma).reshape(values.shape[:k] + (1,) * extra)
    axes = tuple(transpose_axes(sigma)) + tuple(range(k, values.ndim))
    return fac * np.transpose(values, axes)


def symmetrize(values: np.ndarray, pm: np.ndarray, k: int | None = None) -> np.ndarray:
    """The S-symmetrization projector on the first k axes of a grid array."""
    if k is None:
        k = values.ndim
    if k <= 1:
        return np.array(values, dtype=complex)
    acc = np.zeros(values.shape, dtype=complex)
    perms = all_permutations(k)
    for sigma in perms:
        acc += twisted_action(values, pm, sigma)
    return acc / len(perms)


def check_s_symmetry(values, nodes, model: ScatteringModel, tol: float = 1e-10) -> CheckReport:
    """Adjacent transpositions suffice: the twisted action is a group action."""
    f = np.asarray(values, dtype=complex)
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or any(d != nodes.size for d in f.shape):
        raise ConfigError("values must be sampled on a product grid over the given nodes")
    k = f.ndim
    pm = pair_matrix(model, nodes)
    worst = 0.0
    for i in range(k - 1):
        tau = Permutation.transposition(k, i)
        worst = max(worst, float(np.max(np.abs(f - twisted_action(f, pm, tau)))) if f.size else 0.0)
    rep = CheckReport(f"S-symmetry [{model.name}]")
    rep.add("s_symmetry", worst, tol, f.size * max(k - 1, 0))
    return rep
