"""Command line front end.

    fflocal check-s --model sinh-gordon --param a=0.5
    fflocal check-indicatrix --indicatrix log --param beta=2
    fflocal check-family --family free --region double-cone --r 0.5
    fflocal verify-locality --family free --region double-cone --r 0.5

Exit codes: 0 pass, 1 failed check or non-local verdict, 2 configuration
error, 3 evaluator returned a non-finite value away from declared poles,
4 negative control missing or not separating.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .report import ConfigError, UndeclaredPole

SCHEMA = 1

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_POLE, EXIT_CONTROL = 0, 1, 2, 3, 4

# flag name -> (type, default); also the keys accepted in a config file
OPTIONS = {
    "model": (str, "ising"),
    "indicatrix": (str, "log"),
    "region": (str, None),
    "r": (float, None),
    "grid_points": (int, None),
    "theta": (float, None),
    "cutoff": (int, 3),
    "kmax": (int, 4),
    "tol": (float, None),
    "tol_alg": (float, 1e-8),
    "tol_res": (float, 1e-6),
    "tol_morera": (float, 1e-8),
    "tol_td": (float, 1e-6),
    "tol_fit": (float, 0.05),
    "seed": (int, 0),
    "jobs": (int, 1),
    "out": (str, None),
    "plot_data": (str, None),
    "family": (str, "free"),
    "family_file": (str, None),
    "kernels": (str, None),
    "battery": (str, None),
    "xi_max": (float, 8.0),
    "refine": (bool, False),
    "td": (bool, False),
}


def parse_kv_text(text: str) -> dict:
    """Flat key = value lines; '#' starts a comment; later keys win."""
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _parse_params(items) -> dict:
    out = {}
    for it in items or []:
        if "=" not in it:
            raise ConfigError(f"--param expects k=v, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _coerce(name: str, value):
    typ = OPTIONS[name][0]
    if value is None:
        return None
    if typ is bool:
        if isinstance(value, bool):
            return value
        return str(value).lower() in ("1", "true", "yes", "on")
    try:
        return typ(value)
    except ValueError as e:
        raise ConfigError(f"{name}: cannot read {value!r} as {typ.__name__}") from e


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    cfg = {k: d for k, (_, d) in OPTIONS.items()}
    params: dict = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file {path} not found")
        for k, v in parse_kv_text(path.read_text()).items():
            key = k.replace("-", "_")
            if key.startswith("param."):
                params[key[6:]] = v
            elif key in OPTIONS:
                cfg[key] = _coerce(key, v)
            else:
                raise ConfigError(f"unknown config key {k!r}")
    for key in OPTIONS:
        v = getattr(args, key, None)
        if v is not None and v is not False:
            cfg[key] = _coerce(key, v)
    params.update(_parse_params(getattr(args, "param", None)))
    cfg["params"] = dict(sorted(params.items()))
    for key in ("tol", "tol_alg", "tol_res", "tol_morera", "tol_td", "tol_fit"):
        if cfg[key] is not None and not cfg[key] > 0:
            raise ConfigError(f"{key} must be positive")
    if cfg["jobs"] < 1:
        raise ConfigError("jobs must be at least 1")
    if cfg["region"] is not None:
        cfg["region"] = cfg["region"].replace("-", "_")
    if cfg["region"] not in (None, "wedge", "double_cone"):
        raise ConfigError("region must be wedge or double-cone")
    return cfg


def config_hash(cfg: dict) -> str:
    keep = {k: v for k, v in cfg.items() if k not in ("out", "plot_data", "jobs")}
    return hashlib.sha256(json.dumps(keep, sort_keys=True, default=str).encode()).hexdigest()


def envelope(command: str, cfg: dict, report: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "version": __version__, "config_hash": config_hash(cfg),
            "seed": cfg["seed"], "config": {k: v for k, v in cfg.items() if k not in ("out", "plot_data")},
            "report": report}


def dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(doc: dict, cfg: dict) -> None:
    text = dump(doc)
    if cfg.get("out"):
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["series", "k", "x", "y"])
        for r in rows:
            w.writerow([r[0], r[1], f"{r[2]:.12g}", f"{r[3]:.12g}"])


def _float_params(cfg: dict) -> dict:
    out = {}
    for k, v in cfg["params"].items():
        try:
            out[k] = float(v)
        except ValueError as e:
            raise ConfigError(f"parameter {k} must be numeric") from e
    return out


# ------------------------------------------------------------ commands


def cmd_check_s(cfg: dict) -> int:
    from .scattering import check_s_axioms, get_model

    model = get_model(cfg["model"], _float_params(cfg))
    n = cfg["grid_points"] or 256
    th = cfg["theta"] or 6.0
    rep = check_s_axioms(model, np.linspace(-th, th, n), cfg["tol"] or 1e-12)
    out = rep.to_dict()
    out["meta"]["model"] = model.describe()
    _emit(envelope("check-s", cfg, out), cfg)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_check_indicatrix(cfg: dict) -> int:
    from .indicatrix import check_indicatrix_axioms, get_indicatrix

    ind = get_indicatrix(cfg["indicatrix"], _float_params(cfg))
    rep = check_indicatrix_axioms(ind, tol=cfg["tol"] or 1e-10)
    _emit(envelope("check-indicatrix", cfg, rep.to_dict()), cfg)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _sampling(cfg: dict):
    from .conditions import SamplingConfig

    kw = dict(seed=cfg["seed"], tol_alg=cfg["tol_alg"], tol_res=cfg["tol_res"], tol_morera=cfg["tol_morera"],
              tol_td=cfg["tol_td"], fit_slack=cfg["tol_fit"])
    if cfg["theta"] is not None:
        kw["theta"] = cfg["theta"]
    if cfg["grid_points"] is not None:
        kw["grid_points"] = cfg["grid_points"]
    return SamplingConfig(**kw)


def _region(cfg: dict, fallback=("double_cone", 0.5)) -> tuple:
    kind = cfg["region"] or fallback[0]
    r = cfg["r"] if cfg["r"] is not None else fallback[1]
    return kind, float(r)


def load_family(cfg: dict):
    """Preset or user file; explicit --region/--r override the file's region."""
    from .indicatrix import get_indicatrix
    from .models import family_from_mapping, get_family

    if cfg["family_file"]:
        path = Path(cfg["family_file"])
        if not path.exists():
            raise ConfigError(f"family file {path} not found")
        fam = family_from_mapping(parse_kv_text(path.read_text()))
        return fam.with_region(*_region(cfg, fam.region))
    region = _region(cfg)
    iparams = {k[4:]: float(v) for k, v in cfg["params"].items() if k.startswith("ind.")}
    ind = get_indicatrix(cfg["indicatrix"], iparams)
    params = {k: v for k, v in cfg["params"].items() if not k.startswith("ind.")}
    return get_family(cfg["family"], cfg["kmax"], region, ind, params)


def _ray_rows(fam, points: int = 33, theta: float = 4.0) -> list:
    from .conditions import approach_vector, boundary_values

    rows = []
    t = np.linspace(-theta, theta, points)
    for k in fam.nonzero_orders():
        lam = np.array([np.pi * (j + 0.5) / (k + 1) for j in range(k)])
        b = approach_vector("I_plus", lam)
        u = np.linspace(1.0, 0.5, k)
        vals, _ = boundary_values(fam, k, t[:, None] * u[None, :], lam, b)
        for x, y in zip(t, np.abs(vals)):
            rows.append(("abs_F_ray", k, float(x), float(y)))
    return rows


def cmd_check_family(cfg: dict) -> int:
    from .conditions import check_fd, check_fw, check_td_boundary, report_json

    fam = load_family(cfg)
    scfg = _sampling(cfg)
    dc = fam.region[0] == "double_cone"
    rep = check_fd(fam, scfg) if dc else check_fw(fam, scfg)
    if cfg["td"] and dc:
        rep.merge(check_td_boundary(fam, scfg))
    out = report_json(rep)
    _emit(envelope("check-family", cfg, out), cfg)
    if cfg["plot_data"]:
        rows = _ray_rows(fam)
        rows += [("residual", i, float(i), e.max_residual) for i, e in enumerate(rep.entries)]
        _write_csv(cfg["plot_data"], rows)
    return EXIT_OK if rep.passed else EXIT_FAIL


def load_battery(path: str, cfg: dict) -> list:
    """One bump per line: x0 x1 radius [standard|gevrey] [s] [label]."""
    from .testfn import make_bump, plane

    p = Path(path)
    if not p.exists():
        raise ConfigError(f"battery file {p} not found")
    out = []
    for n, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) < 3:
            raise ConfigError(f"battery line {n}: need x0 x1 radius")
        try:
            x0, x1, rad = (float(v) for v in line[:3])
            sm = line[3] if len(line) > 3 else "standard"
            s = float(line[4]) if len(line) > 4 else 2.0
        except ValueError as e:
            raise ConfigError(f"battery line {n}: {e}") from e
        label = line[5] if len(line) > 5 else f"b{len(out)}"
        out.append(make_bump(plane(), (x0, x1), rad, sm, s, label=label))
    return out


def cmd_verify_locality(cfg: dict) -> int:
    from .fock import make_grid
    from .locality import family_prerequisites, load_kernel_dump, verify_locality
    from .scattering import get_model

    prereq = []
    if cfg["kernels"]:
        model = get_model(cfg["model"], _float_params(cfg))
        A = load_kernel_dump(cfg["kernels"], model)
        grid = A.grid
        region = _region(cfg)
    else:
        A = load_family(cfg)
        grid = make_grid(A.model, cfg["grid_points"] or 16, cfg["theta"] or 4.0, cfg["cutoff"], A.mu)
        prereq = [family_prerequisites(A, _sampling(cfg))]
        region = A.region
    battery = load_battery(cfg["battery"], cfg) if cfg["battery"] else None
    v = verify_locality(A, region, battery, tol=cfg["tol"] or 1e-6, grid=grid, xi_max=cfg["xi_max"],
                        prerequisites=prereq, refine=cfg["refine"] or bool(cfg["plot_data"]),
                        seed=cfg["seed"], jobs=cfg["jobs"])
    _emit(envelope("verify-locality", cfg, v.to_dict()), cfg)
    if cfg["plot_data"]:
        rows = []
        for lev in v.refinement:
            rows.append(("max_positive", 0, lev["level"], lev["max_positive"]))
            rows.append(("min_control", 0, lev["level"], lev["min_control"]))
        _write_csv(cfg["plot_data"], rows)
    if not v.meaningful:
        return EXIT_CONTROL
    return EXIT_OK if v.local else EXIT_FAIL


COMMANDS = {
    "check-s": cmd_check_s,
    "check-indicatrix": cmd_check_indicatrix,
    "check-family": cmd_check_family,
    "verify-locality": cmd_verify_locality,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fflocal", description="Locality checks for form factor families.")
    ap.add_argument("--version", action="version", version=f"fflocal {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="flat key=value file; flags override it")
        sp.add_argument("--param", action="append", metavar="K=V", help="model/indicatrix/family parameter")
        for key, (typ, _) in OPTIONS.items():
            flag = "--" + key.replace("_", "-")
            if typ is bool:
                sp.add_argument(flag, action="store_true", default=None)
            else:
                sp.add_argument(flag, type=str, default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_CONFIG
    from .locality import MissingControl

    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except MissingControl as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONTROL
    except UndeclaredPole as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_POLE
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
