import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fflocal import analytic as an
from fflocal.report import ConfigError

PI = np.pi

# oracle: scipy quad with Cauchy weight (principal value) plus -/+ i pi delta; frozen
JUMP_ORACLE = 1.2236568314160365 + 5.349990733092112j      # <1/(z1-z2 - i0), g>, g at (.5,.1), width 1
TWO_POLE_ORACLE = -5.227494468688729 + 1.3621062553215746j  # see two_pole_F below, g at (.3,.3)


def two_pole_F(z):
    return np.exp(-0.1 * z[..., 0] ** 2) / ((z[..., 0] - z[..., 1]) * (z[..., 0] + 0.5 * z[..., 1]))


def two_pole_b(M):
    return {frozenset(): [1, -0.5], frozenset([0]): [1, 1], frozenset([1]): [1, -2]}.get(M, [0, 0])


def test_graph_sizes():
    for k in range(1, 5):
        assert len(an.graph_nodes("plus", k)) == k + 1
        assert len(an.graph_nodes("zero", k)) == 2 * k + 1
        assert len(an.graph_edges("plus", k)) == k


def test_plus_graph_nodes_k2():
    assert an.graph_nodes("plus", 2) == [(0.0, 0.0), (0.0, PI), (PI, PI)]


def test_region_membership():
    assert an.region_contains("I_plus", 3, np.array([1, 2, 3]) * PI / 4)
    assert not an.region_contains("I_plus", 3, np.array([3, 2, 1]) * PI / 4)
    assert an.boundary_distance("I_plus", 3, np.array([1, 2, 3]) * PI / 4) > 0


@given(st.integers(1, 4), st.integers(0, 1000))
def test_sampled_points_are_inside(k, seed):
    pts = an.sample_region("I_plus", k, 5, np.random.default_rng(seed), 1e-3)
    assert all(an.region_contains("I_plus", k, p) for p in pts)


def test_simple_residues():
    assert abs(an.residue_numeric(lambda z: 1 / (z[..., 0] - 1j * PI), [1.0], 1j * PI, []) - 1) < 1e-12
    # tanh(z/2) has residue 2 at i pi
    assert abs(an.residue_numeric(lambda z: np.tanh(z[..., 0] / 2), [1.0], 1j * PI, [0j]) - 2) < 1e-10


def test_iterated_residue_of_a_product():
    F = lambda z: 1 / ((z[..., 1] - z[..., 0] - 1j * PI) * (z[..., 2] - z[..., 1] - 1j * PI))
    val = an.iterated_residue(F, [[-1, 1, 0], [0, -1, 1]], [1j * PI, 1j * PI], np.zeros(3))
    assert abs(val - 1) < 1e-12


def test_dependent_directions_rejected():
    with pytest.raises(ConfigError):
        an.iterated_residue(lambda z: z[..., 0], [[1, 0], [2, 0]], [0, 0], np.zeros(2))


def test_onepole_against_principal_value_oracle():
    g = an.gaussian_smear([0.5, 0.1], 1.0)
    rep = an.jump_check(lambda z: 1 / (z[..., 0] - z[..., 1]), [1, -1], [1, 0], [0, 1], [1, 1], smear=g)
    e = rep.get("onepole")
    assert e.passed and e.max_residual <= 1e-7
    assert abs(e.extra["lhs"] - JUMP_ORACLE) <= 1e-7
    assert abs(e.extra["rhs"] - JUMP_ORACLE) <= 1e-7


def test_onepole_needs_the_residue_term():
    g = an.gaussian_smear([0.5, 0.1], 1.0)
    rep = an.jump_check(lambda z: 1 / (z[..., 0] - z[..., 1]), [1, -1], [1, 0], [0, 1], [1, 1], smear=g)
    e = rep.get("onepole")
    # the two boundary values alone differ by 2 pi i G(0)
    assert abs(e.extra["lhs"] - np.conj(JUMP_ORACLE)) > 1.0


def test_two_pole_formula_against_oracle():
    g = an.gaussian_smear([0.3, 0.3], 1.0)
    rep = an.multivarres_check(two_pole_F, [[1, -1], [1, 0.5]], [-1, -0.2], two_pole_b, smear=g)
    e = rep.get("sevdimres")
    assert e.passed and e.max_residual <= 1e-7
    assert abs(e.extra["lhs"] - TWO_POLE_ORACLE) <= 1e-7


def test_single_pole_case_of_multivarres():
    F = lambda z: np.exp(-0.2 * z[..., 1] ** 2) / (z[..., 0] - 0.5 * z[..., 1])
    b = lambda M: [1, 0.0] if not M else [0.5, 1.0]
    rep = an.multivarres_check(F, [[1, -0.5]], [-1, 0.0], b)
    assert rep.passed, rep.summary()


def test_wrong_sign_pattern_rejected():
    with pytest.raises(ConfigError):
        an.multivarres_check(two_pole_F, [[1, -1], [1, 0.5]], [1, 0.2], two_pole_b)
    with pytest.raises(ConfigError):
        an.jump_check(lambda z: 1 / z[..., 0], [1, 0], [-1, 0], [1, 0], [0, 1])


def test_richardson_removes_polynomial_terms():
    f = lambda e: 3 + 2 * e + 5 * e ** 2 - 7 * e ** 3
    val, _ = an.richardson([f(1e-2), f(5e-3), f(2.5e-3), f(1.25e-3)])
    assert abs(val - 3) < 1e-12


def test_max_modulus_and_pointwise_bound():
    F = lambda z: np.exp(-np.sum(z ** 2, axis=-1))
    assert an.max_modulus_check(F, "plus", 2).passed
    assert an.pointwise_bound_check(F, "I_plus", 2).passed
