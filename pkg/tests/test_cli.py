import csv
import json
from pathlib import Path

import numpy as np
import pytest

from fflocal import fock, locality as lc, scattering as sc
from fflocal.cli import main

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc


@pytest.mark.parametrize("argv", [
    ["--model", "ising"],
    ["--model", "free"],
    ["--model", "sinh-gordon", "--param", "a=0.5", "--tol", "1e-12"],
    ["--model", "exotic", "--param", "a=2.0"],
])
def test_check_s_passes(tmp_path, argv):
    code, doc = run(tmp_path, "check-s", *argv)
    assert code == 0
    assert doc["command"] == "check-s" and doc["schema"] == 1
    assert doc["report"]["pass"] is True


@pytest.mark.parametrize("argv", [
    ["check-s", "--model", "nope"],
    ["check-s", "--tol", "-1"],
    ["check-s", "--param", "a"],
    ["check-s", "--config", "/nonexistent/cfg"],
    ["check-s", "--no-such-flag"],
    ["check-family", "--region", "strip"],
    ["check-family", "--family", "nope"],
    ["check-s", "--jobs", "0"],
])
def test_configuration_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("model = ising\ncolour = blue\n")
    assert main(["check-s", "--config", str(cfg)]) == 2


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("# sinh-gordon at a = 0.3\nmodel = sinh-gordon\nparam.a = 0.3\ngrid-points = 64\n")
    code, doc = run(tmp_path, "check-s", "--config", str(cfg), "--param", "a=0.7")
    assert code == 0
    assert doc["config"]["model"] == "sinh-gordon"
    assert doc["config"]["grid_points"] == 64
    assert doc["config"]["params"] == {"a": "0.7"}


def test_check_indicatrix(tmp_path):
    code, doc = run(tmp_path, "check-indicatrix", "--indicatrix", "log")
    assert code == 0 and doc["report"]["pass"] is True


def test_check_family_free_field(tmp_path):
    code, doc = run(tmp_path, "check-family", "--family", "free", "--region", "double-cone", "--r", "0.5")
    assert code == 0
    assert doc["report"]["region"] == {"kind": "double_cone", "r": 0.5}


def test_check_family_support_violation(tmp_path):
    code, doc = run(tmp_path, "check-family", "--family", "free", "--region", "double-cone", "--r", "0.1",
                    "--param", "bump_r=0.5")
    assert code == 1
    failed = [e["id"] for e in doc["report"]["conditions"] if not e["pass"]]
    assert failed and all(i.startswith("FD6") for i in failed)


def test_check_family_ising_wedge(tmp_path):
    code, _ = run(tmp_path, "check-family", "--family", "ising", "--kmax", "4", "--region", "wedge", "--r", "0")
    assert code == 0


def test_user_family_file(tmp_path):
    code, doc = run(tmp_path, "check-family", "--family-file", str(CONFIGS / "ising_user_family.txt"))
    assert code == 0
    assert doc["report"]["family_id"] == "ising-user"


def test_non_finite_evaluator_exits_3(tmp_path):
    fam = tmp_path / "broken.txt"
    fam.write_text("name = broken\nmodel = ising\nkmax = 2\nregion = wedge\nr = 0\n"
                   "F1 = 1/(z1 - z1)\nF2 = -i*sinh((z2 - z1)/2)\n")
    assert main(["check-family", "--family-file", str(fam)]) == 3


def test_missing_control_exits_4(tmp_path):
    bat = tmp_path / "pos.txt"
    bat.write_text("0.0 1.2 0.4 standard 2 pos0\n")
    assert main(["verify-locality", "--family", "free", "--r", "0.5", "--battery", str(bat),
                 "--grid-points", "6", "--cutoff", "2"]) == 4


def _dump(tmp_path, kernels):
    grid = fock.make_grid(sc.ising(), 8, 4.0, 3)
    A = fock.FockKernelForm(grid, {k: v(grid) for k, v in kernels.items()})
    path = tmp_path / "form.npz"
    lc.save_kernel_dump(A, path)
    return str(path)


def test_kernel_dump_creation_operator_is_non_local(tmp_path):
    path = _dump(tmp_path, {(1, 0): lambda g: np.exp(-g.nodes ** 2)})
    code, doc = run(tmp_path, "verify-locality", "--kernels", path, "--model", "ising", "--region", "wedge",
                    "--r", "0")
    assert code == 1 and doc["report"]["status"] == "non-local"


def test_kernel_dump_identity_is_inconclusive(tmp_path):
    path = _dump(tmp_path, {(0, 0): lambda g: np.array(1.0 + 0j)})
    code, doc = run(tmp_path, "verify-locality", "--kernels", path, "--model", "ising", "--region", "wedge",
                    "--r", "0")
    assert code == 4 and doc["report"]["status"] == "inconclusive"


def test_kernel_dump_model_mismatch(tmp_path):
    path = _dump(tmp_path, {(1, 0): lambda g: np.exp(-g.nodes ** 2)})
    assert main(["verify-locality", "--kernels", path, "--model", "free", "--region", "wedge", "--r", "0"]) == 2


def test_free_field_overlap_is_non_local(tmp_path):
    code, doc = run(tmp_path, "verify-locality", "--family", "free", "--region", "double-cone", "--r", "0.1",
                    "--param", "bump_r=0.5", "--battery", str(CONFIGS / "overlap_battery.txt"),
                    "--grid-points", "8", "--cutoff", "2")
    assert code == 1
    rep = doc["report"]
    assert rep["meaningful"] and rep["max_commutator_residual"] > 1e3 * rep["tol"]


def test_output_is_byte_identical(tmp_path):
    argv = ["check-family", "--family", "ising", "--kmax", "3", "--region", "wedge", "--r", "0", "--seed", "3"]
    main([*argv, "--out", str(tmp_path / "a.json")])
    main([*argv, "--out", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_config_hash_ignores_output_paths(tmp_path):
    _, a = run(tmp_path, "check-s", "--model", "ising", name="a.json")
    _, b = run(tmp_path, "check-s", "--model", "ising", "--jobs", "2", name="b.json")
    _, c = run(tmp_path, "check-s", "--model", "ising", "--seed", "1", name="c.json")
    assert a["config_hash"] == b["config_hash"] != c["config_hash"]


def test_plot_data_csv(tmp_path):
    csv_path = tmp_path / "rays.csv"
    code, _ = run(tmp_path, "check-family", "--family", "ising", "--kmax", "3", "--region", "wedge", "--r", "0",
                  "--plot-data", str(csv_path))
    assert code == 0
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["series", "k", "x", "y"]
    assert {r[0] for r in rows[1:]} == {"abs_F_ray", "residual"}
