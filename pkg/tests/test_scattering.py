import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fflocal import scattering as sc
from fflocal.report import ConfigError, PoleHit

from conftest import BUILTIN_MODELS

GRID = np.linspace(-6, 6, 256)


@pytest.mark.parametrize("name,params", BUILTIN_MODELS)
def test_axioms_hold_for_builtin_models(name, params):
    rep = sc.check_s_axioms(sc.get_model(name, params), GRID, 1e-12)
    assert rep.passed, rep.summary()


def test_closed_forms():
    # free and Ising are the constants +1 and -1
    assert sc.eval_s(sc.free_field(), 0.3) == 1
    assert sc.eval_s(sc.ising(), 0.3) == -1
    s = sc.sinh_gordon(0.5)
    z = 0.4 + 0.2j
    want = (np.sinh(z) - 0.5j) / (np.sinh(z) + 0.5j)
    assert abs(sc.eval_s(s, z) - want) < 1e-14
    assert abs(sc.eval_s(sc.exotic(2.0), z) - np.exp(2j * np.sinh(z))) < 1e-14


def test_s0_is_plus_or_minus_one():
    for name, params in BUILTIN_MODELS:
        s0 = sc.eval_s(sc.get_model(name, params), 0.0)
        assert min(abs(s0 - 1), abs(s0 + 1)) < 1e-14


def test_broken_model_fails_crossing():
    bad = sc.ScatteringModel("bad", {}, lambda z: np.exp(1j * 0.3 * np.tanh(z)))
    rep = sc.check_s_axioms(bad, GRID)
    assert not rep.passed
    assert not rep.get("crossing").passed


def test_unknown_model():
    with pytest.raises(ConfigError):
        sc.get_model("nope")


def test_empty_grid_rejected():
    with pytest.raises(ConfigError):
        sc.check_s_axioms(sc.ising(), [])


def test_pole_guard():
    m = sc.sinh_gordon(0.5)
    if not m.poles:
        pytest.skip("no declared poles")
    z0 = m.poles[0]
    with pytest.raises(PoleHit):
        sc.eval_s(m, z0)


@given(st.floats(-5, 5), st.floats(0.05, math.pi - 0.05), st.sampled_from(BUILTIN_MODELS))
def test_inverse_and_periodicity_in_strip(x, y, model):
    m = sc.get_model(*model)
    z = complex(x, y)
    try:
        s = sc.eval_s(m, z)
        s_neg = sc.eval_s(m, -z)
    except PoleHit:
        return
    assert abs(s * s_neg - 1) < 1e-9 * max(1.0, abs(s))
    assert abs(sc.eval_s(m, z + 2j * math.pi) - s) < 1e-9 * max(1.0, abs(s))


@given(st.permutations(range(4)), st.permutations(range(4)), st.sampled_from(BUILTIN_MODELS))
def test_twist_factor_is_a_cocycle(s_img, t_img, model):
    # S^(s.t)(theta) = S^s(theta) S^t(theta^s)
    m = sc.get_model(*model)
    s, t = sc.Permutation(tuple(s_img)), sc.Permutation(tuple(t_img))
    st_ = sc.Permutation(tuple(s.images[t.images[i]] for i in range(4)))
    th = np.array([0.3, -0.7, 1.1, 0.2])
    lhs = sc.s_perm(m, st_, th)
    rhs = sc.s_perm(m, s, th) * sc.s_perm(m, t, sc.permute_args(th, s))
    assert abs(lhs - rhs) < 1e-12


def test_s_perm_of_transposition():
    m = sc.sinh_gordon(0.3)
    th = np.array([0.4, -0.2])
    assert abs(sc.s_perm(m, [1, 0], th) - sc.eval_s(m, th[1] - th[0])) < 1e-14


@pytest.mark.parametrize("name,params", BUILTIN_MODELS)
def test_symmetrize_is_a_projection(name, params, rng):
    m = sc.get_model(name, params)
    nodes = np.linspace(-2, 2, 5)
    pm = sc.pair_matrix(m, nodes)
    f = rng.normal(size=(5, 5, 5)) + 1j * rng.normal(size=(5, 5, 5))
    once = sc.symmetrize(f, pm, 3)
    twice = sc.symmetrize(once, pm, 3)
    assert np.max(np.abs(once - twice)) < 1e-12
    rep = sc.check_s_symmetry(once, nodes, m)
    assert rep.passed, rep.summary()
