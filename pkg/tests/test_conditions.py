import numpy as np
import pytest

from fflocal import analytic as an
from fflocal import conditions as cd
from fflocal import contractions as ct
from fflocal import models as md
from fflocal import scattering as sc
from fflocal.report import ConfigError, UndeclaredPole

from conftest import BUILTIN_MODELS

PI = np.pi

EVENS = {"one": None, "resolvent": lambda c: 1 / (c + 3), "gauss": lambda c: np.exp(-0.1 * c ** 2)}


@pytest.mark.parametrize("name,params", BUILTIN_MODELS)
@pytest.mark.parametrize("even", sorted(EVENS))
def test_compliant_f2_has_no_kinematic_pole(name, params, even):
    model = sc.get_model(name, params)
    fam = md.two_particle_family(model, EVENS[even])
    F = lambda z: fam(2, z)
    for base in ([0.3, 0.0], [-1.2, 0.4]):
        assert abs(an.residue_numeric(F, [-1, 1], 1j * PI, base)) <= 1e-10
    z = np.array([[0.3, 0.1 + 2.0j], [-0.4, 0.5 + 1.0j], [0.0, 0.2 + 3.0j]])
    assert cd.symmetry_residual(fam, 2, z) <= 1e-10
    assert cd.periodicity_residual(fam, 2, z) <= 1e-10


def test_noncompliant_f2_keeps_its_pole():
    # tanh(z/2) is odd but not 2 pi i antiperiodic; residue 2 at i pi
    fam = cd.FormFactorFamily("bad", {2: lambda z: np.tanh((z[..., 1] - z[..., 0]) / 2)}, 2, sc.ising(),
                              poles={2: cd.kinematic_planes(2)})
    res = an.residue_numeric(lambda z: fam(2, z), [-1, 1], 1j * PI, [0.3, 0.0])
    assert abs(res - 2) < 1e-10
    z = np.array([[0.3, 0.1 + 2.0j]])
    assert cd.periodicity_residual(fam, 2, z) > 1e-3


def test_free_family_double_cone():
    fam = md.get_family("free", region=("double_cone", 0.5))
    assert cd.check_fd(fam).passed
    small = md.get_family("free", region=("double_cone", 0.1), params={"bump_r": 0.5})
    rep = cd.check_fd(small)
    assert not rep.passed
    assert {e.id for e in rep.entries if not e.passed} <= {"FD6.k1.plus", "FD6.k1.minus"}


def test_free_family_wedge():
    fam = md.get_family("free", region=("wedge", 0.0))
    assert cd.check_fw(fam).passed


def test_ising_wedge_conditions():
    rep = cd.check_fw(md.ising_family(4))
    assert rep.passed, rep.summary()


def test_symmetry_violation_detected():
    fam = cd.FormFactorFamily("asym", {2: lambda z: np.exp(z[..., 0])}, 2, sc.ising(),
                              region=("wedge", 0.0))
    rep = cd.check_fw(fam)
    assert not rep.get("FW2.k2").passed


def test_recursion_detects_wrong_constant():
    good = md.ising_family(3)
    c3 = complex(good.meta["constants"]["3"])
    bad = md.ising_family(3, c={3: 1.1 * c3})
    rng = np.random.default_rng(0)
    assert cd.fd4_residual(good, 3, 5, rng, 3.0)[0] <= 1e-6
    assert cd.fd4_residual(bad, 3, 5, np.random.default_rng(0), 3.0)[0] > 1e-3


def test_higher_residue_two_pairs():
    fam = md.ising_family(5)
    rep = cd.higher_residues_check(fam, ct.Contraction(2, 3, ((1, 3), (2, 4))), [0.1, -0.3, 0.4, 0.2, -0.5])
    assert rep.passed, rep.summary()


def test_higher_residue_argument_checks():
    fam = md.ising_family(4)
    with pytest.raises(ConfigError):
        cd.higher_residues_check(fam, ct.Contraction(2, 2, ()), [0, 0, 0, 0])
    with pytest.raises(ConfigError):
        cd.higher_residues_check(fam, ct.Contraction(2, 2, ((1, 3),)), [0, 0, 0])


def test_undeclared_pole_is_an_error():
    fam = cd.FormFactorFamily("hidden", {2: lambda z: 1 / (z[..., 1] - z[..., 0] - 1j * PI)}, 2, sc.ising(),
                              region=("wedge", 0.0))
    with pytest.raises(UndeclaredPole):
        fam(2, np.array([[0.0, 1j * PI]]))


def test_approach_vector_points_inside():
    for k in (1, 2, 3):
        for node in an.graph_nodes("plus", k):
            b = cd.approach_vector("I_plus", node)
            assert an.region_contains("I_plus", k, np.array(node) + 1e-4 * b)
    with pytest.raises(ConfigError):
        cd.approach_vector("nowhere", [0.0])


def test_report_is_deterministic():
    import json

    fam = md.get_family("free", region=("double_cone", 0.5))
    a = json.dumps(cd.report_json(cd.check_fd(fam)), sort_keys=True)
    b = json.dumps(cd.report_json(cd.check_fd(fam)), sort_keys=True)
    assert a == b


def test_td_boundary_identities():
    fam = md.ising_family(3).with_region("double_cone", 0.5)
    rep = cd.check_td_boundary(fam, kmax=3)
    assert rep.passed, rep.summary()
    assert rep.get("TD4.k3.m1").max_residual <= 1e-6
