from pathlib import Path

import numpy as np
import pytest

from fflocal import conditions as cd
from fflocal import models as md
from fflocal import scattering as sc
from fflocal.cli import parse_kv_text
from fflocal.report import ConfigError

ROOT = Path(__file__).resolve().parents[1]
PI = np.pi


def test_oracle_constants_frozen():
    # oracle: contour residues; closed forms c3 = i/(2 pi), c5 = -1/(4 pi^2)
    consts, prov = md.oracle_constants(5)
    assert abs(consts[3] - 1j / (2 * PI)) < 1e-12
    assert abs(consts[5] + 1 / (4 * PI ** 2)) < 1e-12
    assert set(prov) == {3, 5}


def test_oracle_constants_do_not_depend_on_basepoint():
    a, _ = md.oracle_constants(5, seed=0)
    b, _ = md.oracle_constants(5, seed=9)
    assert abs(a[5] - b[5]) < 1e-12


@pytest.mark.parametrize("k", [3, 4, 5])
def test_ising_recursion(k):
    fam = md.ising_family(5)
    worst, used, _ = cd.fd4_residual(fam, k, 10, np.random.default_rng(k), 3.0)
    assert used == 10 and worst <= 1e-6


def test_ising_minimal_solution_relations():
    F = md.ising_minimal()
    z = np.array([0.3 + 0.2j, -1.1 + 2.0j])
    assert np.allclose(F(z), -F(-z))                  # F(z) = S(z) F(-z), S = -1
    assert np.allclose(F(z - 2j * PI), -F(z))


def test_presets_and_errors():
    assert md.get_family("ising-sinh", 3).name.startswith("ising")
    with pytest.raises(ConfigError):
        md.get_family("nope")
    with pytest.raises(ConfigError):
        md.ising_family(3, q_spec="cubic")
    with pytest.raises(ConfigError):
        md.minimal_solution(sc.exotic(1.0))


def test_family_file_matches_preset():
    fam = md.family_from_mapping(parse_kv_text((ROOT / "configs" / "ising_user_family.txt").read_text()))
    ref = md.ising_family(3)
    z = np.array([[0.1, -0.4 + 0.3j, 0.7 + 1.0j]])
    for k in (1, 2, 3):
        assert np.allclose(fam(k, z[:, :k]), ref(k, z[:, :k]), atol=1e-14)
    rep = cd.check_fd(fam)
    assert rep.passed, rep.summary()


def test_family_file_custom_planes():
    fam = md.family_from_mapping({"kmax": "2", "model": "ising", "F2": "1/(z2 - z1 - ipi)",
                                  "poles.2": "z2 - z1 = ipi", "poles.period": "2*ipi/i"})
    (plane,) = fam.planes(2)
    assert np.allclose(plane.a, [-1, 1]) and abs(plane.c - 1j * PI) < 1e-15


def test_family_file_errors():
    with pytest.raises(ConfigError):
        md.family_from_mapping({"F1": "1"})
    with pytest.raises(ConfigError):
        md.family_from_mapping({"kmax": "1", "F2": "1"})
    with pytest.raises(ConfigError):
        md.family_from_mapping({"kmax": "2", "F2": "z3"})
    with pytest.raises(ConfigError):
        md.family_from_mapping({"kmax": "2", "F2": "1", "poles.2": "z1*z2 = 0"})


def test_free_family_transform_is_the_bump():
    g = md.default_bump("double_cone", 0.5)
    fam = md.free_field_family(g, ("double_cone", 0.5))
    th = np.array([[-0.5], [0.7]])
    assert np.allclose(fam(1, th), g.plus(th[:, 0])) or np.allclose(fam(1, th), g.minus(th[:, 0]))
