"""Built-in candidate families: the free field and the Ising product ansatz.

The Ising ansatz uses F_min(z) = -i sinh(z/2).  Odd orders use the tanh
product c_k prod_{m<n} tanh((z_n - z_m)/2), which carries the kinematic
poles; even orders use the pole-free product c_k prod F_min(z_n - z_m).
The odd constants c_k are not typed in: they are solved from the kinematic
recursion at construction time by a numeric contour residue.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import analytic, testfn
from .conditions import FormFactorFamily, fd4_rhs, kinematic_planes
from .indicatrix import Indicatrix, log_family
from .report import ConfigError
from .scattering import ScatteringModel, free_field, ising

PI = math.pi


# ------------------------------------------------------------ minimal solutions


@dataclass(frozen=True)
class MinimalSolution:
    name: str
    model: ScatteringModel
    eval: Callable = field(repr=False, compare=False)

    def __call__(self, z):
        return np.asarray(self.eval(np.asarray(z, dtype=complex)), dtype=complex)


def ising_minimal() -> MinimalSolution:
    return MinimalSolution("ising", ising(), lambda z: -1j * np.sinh(z / 2))


MINIMAL_PLUGINS: dict[str, Callable[[ScatteringModel], MinimalSolution]] = {
    "ising": lambda model: ising_minimal(),
}


def register_minimal(model_name: str, factory: Callable[[ScatteringModel], MinimalSolution]) -> None:
    """Plug in a minimal solution (e.g. an integral representation) for a model name."""
    MINIMAL_PLUGINS[model_name] = factory


def minimal_solution(model: ScatteringModel) -> MinimalSolution:
    if model.name not in MINIMAL_PLUGINS:
        raise ConfigError(f"no minimal solution registered for model {model.name!r}")
    return MINIMAL_PLUGINS[model.name](model)


def pair_product(fn: Callable, z: np.ndarray) -> np.ndarray:
    """prod_{m<n} fn(z_n - z_m) over the last axis."""
    z = np.asarray(z, dtype=complex)
    out = np.ones(z.shape[:-1], dtype=complex)
    for m, n in itertools.combinations(range(z.shape[-1]), 2):
        out = out * fn(z[..., n] - z[..., m])
    return out


# ------------------------------------------------------------ compliant two-particle functions


def compliant_f2(model: ScatteringModel, even: Callable | None = None) -> Callable:
    """z -> f(z) with f(z) = S(z) f(-z) and f(z - 2 pi i) = S(z) f(z), valid near z = i pi.

    f = [F_min-like sign factor] * exp(-(z - i pi) Log(s S(z)) / (2 pi i)) * even(cosh z), where
    s = -S(0) makes s S close to 1 near the kinematic point.  The principal logarithm limits
    the identities to a neighbourhood of the real and i pi lines away from zeros of S.
    """
    s0 = complex(model(np.array(0.0 + 0j)))
    sign = -1.0 if abs(s0 + 1.0) < 1e-12 else 1.0
    if abs(abs(s0) - 1.0) > 1e-12 or abs(s0.imag) > 1e-12:
        raise ConfigError("S(0) must be +1 or -1")
    ev = even or (lambda c: np.ones_like(c))

    def f(z):
        z = np.asarray(z, dtype=complex)
        base = -1j * np.sinh(z / 2) if sign < 0 else np.ones_like(z)
        log_s = np.log(sign * model(z))
        return base * np.exp(-(z - 1j * PI) * log_s / (2j * PI)) * ev(np.cosh(z))
    return f


def two_particle_family(model: ScatteringModel, even: Callable | None = None,
                        region=("double_cone", 0.0)) -> FormFactorFamily:
    f = compliant_f2(model, even)
    return FormFactorFamily(f"f2[{model.name}]", {2: lambda z: f(z[..., 1] - z[..., 0])}, 2, model,
                            region=region, meta={"kind": "compliant two-particle function"})


# ------------------------------------------------------------ Ising ansatz


def _tanh_product(z):
    return pair_product(lambda x: np.tanh(x / 2), z)


def _sinh_product(z):
    return pair_product(lambda x: -1j * np.sinh(x / 2), z)


def _oracle_ratio(k: int, basepoint) -> complex:
    """c_k / c_{k-2} for the odd tanh preset from FD4 at one basepoint (pair (1, 2))."""
    probe = FormFactorFamily("probe", {k: _tanh_product, k - 2: _tanh_product}, k, ising(),
                             poles={k: kinematic_planes(k), k - 2: kinematic_planes(k - 2)})
    a = np.zeros(k)
    a[1], a[0] = 1.0, -1.0
    z0 = analytic._hyperplane_point(a, 1j * PI, np.asarray(basepoint, dtype=complex))
    res = analytic.residue_numeric(lambda z: _tanh_product(z), a, 1j * PI, z0, radius=0.1, points=256)
    return fd4_rhs(probe, k, z0, 0, 1) / res


def oracle_constants(kmax: int, c1: complex = 1.0, seed: int = 0) -> tuple[dict, dict]:
    """Odd-order constants c_3, c_5, ... from the recursion; returns (constants, provenance)."""
    rng = np.random.default_rng(seed)
    consts = {1: complex(c1)}
    prov = {}
    for k in range(3, kmax + 1, 2):
        base = np.sort(rng.uniform(-1.5, 1.5, size=k)) + 0j
        ratio = _oracle_ratio(k, base)
        consts[k] = consts[k - 2] * ratio
        prov[k] = {"ratio": complex(ratio), "basepoint": base.real.tolist(), "pair": [1, 2],
                   "method": "contour residue (256 points, radius 0.1) vs recursion right-hand side"}
    return consts, prov


def ising_family(kmax: int = 4, q_spec: str | dict = "tanh", c: dict | None = None,
                 region=("wedge", 0.0), indicatrix: Indicatrix | None = None,
                 seed: int = 0) -> FormFactorFamily:
    """Ising product ansatz.

    q_spec:
      "tanh"  odd k: c_k prod tanh((z_n-z_m)/2) with recursion-fixed c_k; even k: c_k prod F_min
      "sinh"  every k: c_k prod F_min (odd constants default to 0, as the recursion then demands)
      dict    {k: Q_k} symmetric callables of the exponentials e^{z_j}; F_k = c_k Q_k prod F_min
    c overrides constants (for even k, or deliberate perturbations of odd ones).
    """
    model = ising()
    ind = indicatrix or log_family(1.0)
    consts: dict = {}
    prov: dict = {}
    evals: dict = {}
    poles: dict = {}
    c = dict(c or {})
    if q_spec == "tanh":
        odd, prov = oracle_constants(kmax, c.get(1, 1.0), seed)
        consts.update(odd)
        for k in range(0, kmax + 1, 2):
            consts[k] = complex(c.get(k, 1.0))
        for k, v in c.items():
            if k % 2 == 1:
                consts[k] = complex(v)
        for k in range(1, kmax + 1):
            if k % 2:
                evals[k] = (lambda ck: lambda z: ck * _tanh_product(z))(consts[k])
                if k >= 2:
                    poles[k] = kinematic_planes(k)
            else:
                evals[k] = (lambda ck: lambda z: ck * _sinh_product(z))(consts[k])
    elif q_spec == "sinh":
        for k in range(0, kmax + 1):
            consts[k] = complex(c.get(k, 1.0 if k % 2 == 0 else 0.0))
            if k and consts[k] != 0:
                evals[k] = (lambda ck: lambda z: ck * _sinh_product(z))(consts[k])
    elif isinstance(q_spec, dict):
        for k, q in q_spec.items():
            if not callable(q) and k != 0:
                raise ConfigError(f"Q_{k} must be callable")
            if k > kmax:
                raise ConfigError(f"Q_{k} given beyond kmax={kmax}")
        for k in range(0, kmax + 1):
            consts[k] = complex(c.get(k, 1.0))
            q = q_spec.get(k)
            if k == 0:
                continue
            if q is not None:
                evals[k] = _q_eval(q, k, consts[k])
    else:
        raise ConfigError(f"unknown q_spec {q_spec!r}")
    evals[0] = consts.get(0, 1.0)
    meta = {"q_spec": q_spec if isinstance(q_spec, str) else "custom",
            "constants": {str(k): v for k, v in sorted(consts.items())},
            "provenance": {str(k): v for k, v in prov.items()}}
    return FormFactorFamily(f"ising-{q_spec if isinstance(q_spec, str) else 'custom'}", evals, kmax, model,
                            region=region, indicatrix=ind, poles=poles, meta=meta)


def _q_eval(q: Callable, k: int, ck: complex) -> Callable:
    def F(z):
        z = np.asarray(z, dtype=complex)
        x = np.exp(z)
        val = np.asarray(q(*[x[..., j] for j in range(k)]), dtype=complex)
        if val.shape not in ((), z.shape[:-1]):
            raise ConfigError(f"Q_{k} returned shape {val.shape}, expected {z.shape[:-1]}")
        return ck * val * _sinh_product(z)
    return F


# ------------------------------------------------------------ free field


def locality_region(kind: str, r: float) -> testfn.Region:
    """Spacetime region of a family: double_cone(r) = O_r, wedge(r) = left wedge with tip (0, r)."""
    if kind == "double_cone":
        return testfn.double_cone(r)
    if kind == "wedge":
        return testfn.left_wedge((0.0, r))
    raise ConfigError(f"unknown region kind {kind!r}")


def free_field_family(g: testfn.TestFunction, region=("double_cone", 0.5),
                      indicatrix: Indicatrix | None = None, check_support: bool = True) -> FormFactorFamily:
    """F_0 = 0, F_1 = g^+, nothing above: the family of the free field phi(g)."""
    kind, r = region
    if check_support and not g.support_in(locality_region(kind, r)):
        raise ConfigError(f"supp g is not inside {kind}({r})")
    return FormFactorFamily(f"free[{g.key()}]", {0: 0.0, 1: lambda z: g.plus(z[..., 0])}, 1, free_field(),
                            region=(kind, float(r)), indicatrix=indicatrix or log_family(1.0),
                            mu=g.mu, meta={"g": g.describe(), "complete": True})


# ------------------------------------------------------------ presets


def default_bump(kind: str = "double_cone", r: float = 0.5) -> testfn.TestFunction:
    """A bump filling most of the region: centered at the origin for O_r, at (0, r - 0.6) for wedges."""
    if kind == "double_cone":
        return testfn.make_bump(locality_region(kind, r), (0.0, 0.0), 0.85 * r / math.sqrt(2), label="g1")
    return testfn.make_bump(locality_region(kind, r), (0.0, r - 0.6), 0.4, label="g1")


def get_family(name: str, kmax: int = 4, region=("double_cone", 0.5), indicatrix=None,
               params: dict | None = None) -> FormFactorFamily:
    params = dict(params or {})
    if name in ("free", "free-field"):
        src = region if "bump_r" not in params else (region[0], float(params["bump_r"]))
        g = default_bump(*src)
        return free_field_family(g, region, indicatrix, check_support=False)
    if name in ("ising", "ising-tanh"):
        return ising_family(kmax, "tanh", region=region, indicatrix=indicatrix)
    if name == "ising-sinh":
        return ising_family(kmax, "sinh", region=region, indicatrix=indicatrix)
    raise ConfigError(f"unknown family preset {name!r}; known: free, ising-tanh, ising-sinh")


FAMILY_PRESETS = ("free", "ising-tanh", "ising-sinh")


# ------------------------------------------------------------ user families


def _plane_list(spec: str, k: int, period: float) -> list:
    from .conditions import PolePlane
    from .expr import ExprError, compile_expr, linear_form

    spec = spec.strip()
    if spec == "kinematic":
        return kinematic_planes(k)
    planes = []
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        if "=" not in part:
            raise ExprError(f"pole plane {part!r} needs the form <affine expression> = <constant>")
        lhs, rhs = part.split("=", 1)
        a, b = linear_form(lhs, k)
        c = complex(compile_expr(rhs, 0)(np.zeros((1, 0)))[0])
        planes.append(PolePlane(tuple(float(v) for v in a), c - b, period))
    return planes


def family_from_mapping(d: dict) -> FormFactorFamily:
    """Family from flat keys: name, model, model.<param>, kmax, region, r, F<k>, poles.<k>,
    poles.period, const.<c_name>, indicatrix, indicatrix.<param>."""
    from .expr import compile_expr
    from .indicatrix import get_indicatrix
    from .scattering import get_model

    d = {str(k).strip(): str(v).strip() for k, v in d.items()}
    if "kmax" not in d:
        raise ConfigError("family file needs kmax")
    kmax = int(d["kmax"])
    mparams = {k.split(".", 1)[1]: float(v) for k, v in d.items() if k.startswith("model.")}
    model = get_model(d.get("model", "ising"), mparams)
    consts = {k.split(".", 1)[1]: complex(compile_expr(v, 0)(np.zeros((1, 0)))[0])
              for k, v in d.items() if k.startswith("const.")}
    period = float(compile_expr(d.get("poles.period", "0"), 0)(np.zeros((1, 0)))[0].real)
    evals: dict = {}
    poles: dict = {}
    for key, val in d.items():
        if key.startswith("F") and key[1:].isdigit():
            k = int(key[1:])
            if k > kmax:
                raise ConfigError(f"{key} given beyond kmax={kmax}")
            if k == 0:
                evals[0] = complex(compile_expr(val, 0, consts)(np.zeros((1, 0)))[0])
            else:
                evals[k] = compile_expr(val, k, consts)
        elif key.startswith("poles.") and key[6:].isdigit():
            k = int(key[6:])
            poles[k] = _plane_list(val, k, period)
    iparams = {k.split(".", 1)[1]: float(v) for k, v in d.items() if k.startswith("indicatrix.")}
    ind = get_indicatrix(d.get("indicatrix", "log"), iparams)
    region = (d.get("region", "wedge").replace("-", "_"), float(d.get("r", "0")))
    meta = {"source": "user file", "expressions": {k: v for k, v in sorted(d.items()) if k.startswith("F")}}
    return FormFactorFamily(d.get("name", "user"), evals, kmax, model, region=region, indicatrix=ind,
                            poles=poles, meta=meta)
