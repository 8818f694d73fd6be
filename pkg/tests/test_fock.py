import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fflocal import fock, scattering as sc
from fflocal.report import ConfigError

from conftest import BUILTIN_MODELS


def grid_for(name, params, points=8, cutoff=3):
    return fock.make_grid(sc.get_model(name, params), points, 4.0, cutoff)


def zf_residuals(grid, psi):
    """Max violation of the exchange relations on the delta basis at the grid nodes.

    z(a) z(b) = S(a-b) z(b) z(a),  z+(a) z+(b) = S(a-b) z+(b) z+(a),
    z(a) z+(b) = S(b-a) z+(b) z(a) + w_a delta_ab
    """
    E = np.eye(grid.size)
    low = fock.FockState(grid, {n: v for n, v in psi.levels.items() if n < grid.cutoff})
    zz = zd = dd = 0.0
    for a in range(grid.size):
        za = fock.apply_z(E[a], psi)
        for b in range(grid.size):
            s_ab = complex(grid.model(grid.nodes[a] - grid.nodes[b]))
            lhs = fock.apply_z(E[a], fock.apply_z(E[b], psi))
            rhs = fock.apply_z(E[b], za).scale(s_ab)
            zz = max(zz, (lhs - rhs).max_abs())
            lhs = fock.apply_z(E[a], fock.apply_z_dagger(E[b], low))
            rhs = fock.apply_z_dagger(E[b], fock.apply_z(E[a], low)).scale(1 / s_ab)
            rhs = rhs + low.scale(grid.weights[a] * (a == b))
            zd = max(zd, (lhs - rhs).max_abs())
            if a < b:
                low2 = fock.FockState(grid, {n: v for n, v in psi.levels.items() if n < grid.cutoff - 1})
                lhs = fock.apply_z_dagger(E[a], fock.apply_z_dagger(E[b], low2))
                rhs = fock.apply_z_dagger(E[b], fock.apply_z_dagger(E[a], low2)).scale(s_ab)
                dd = max(dd, (lhs - rhs).max_abs())
    return zz, zd, dd


@pytest.mark.parametrize("name,params", BUILTIN_MODELS)
def test_zamolodchikov_relations(name, params):
    grid = grid_for(name, params, points=6)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        psi = fock.random_state(grid, rng, 3)
        scale = max(1.0, psi.max_abs())
        worst = max(worst, max(zf_residuals(grid, psi)) / scale)
    assert worst <= 1e-10


def test_sinh_gordon_relation_is_not_the_free_one():
    grid = grid_for("sinh-gordon", {"a": 0.7}, points=5)
    psi = fock.random_state(grid, np.random.default_rng(1), 3)
    E = np.eye(grid.size)
    lhs = fock.apply_z(E[1], fock.apply_z(E[3], psi))
    rhs = fock.apply_z(E[3], fock.apply_z(E[1], psi))
    assert (lhs - rhs).max_abs() > 1e-3


@pytest.mark.parametrize("name,params", BUILTIN_MODELS[:4])
def test_random_states_are_s_symmetric(name, params, rng):
    grid = grid_for(name, params, points=5)
    psi = fock.random_state(grid, rng, 3)
    for n, a in psi.levels.items():
        if n >= 2:
            assert np.max(np.abs(fock.sym(grid, a, n) - a)) < 1e-12


@pytest.mark.parametrize("name,params", [("ising", {}), ("sinh-gordon", {"a": 0.7})])
def test_form_adjoint(name, params, rng):
    grid = grid_for(name, params, points=6)
    A = fock.random_form(grid, rng, kmax=3)
    psi, chi = fock.random_state(grid, rng, 3), fock.random_state(grid, rng, 3)
    lhs = fock.inner(psi, A.apply(chi))
    rhs = np.conj(fock.inner(chi, A.apply_adjoint(psi)))
    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs))


def test_J_is_antiunitary_involution(rng):
    grid = grid_for("sinh-gordon", {"a": 0.4}, points=6)
    psi, chi = fock.random_state(grid, rng, 3), fock.random_state(grid, rng, 3)
    Jpsi, Jchi = fock.apply_J(psi), fock.apply_J(chi)
    assert abs(fock.inner(Jpsi, Jchi) - np.conj(fock.inner(psi, chi))) < 1e-12
    assert (fock.apply_J(Jpsi) - psi).max_abs() < 1e-14


def test_translation_is_unitary(rng):
    grid = grid_for("ising", {}, points=6)
    psi = fock.random_state(grid, rng, 3)
    moved = fock.apply_U((0.3, -0.7), 0.0, psi)
    assert abs(moved.norm() - psi.norm()) < 1e-12


def test_phi_is_symmetric_for_real_g(rng):
    # <psi, phi(g) chi> = conj <chi, phi(g) psi> when g is real, g^- = conj g^+
    grid = grid_for("sinh-gordon", {"a": 0.5}, points=6, cutoff=3)
    gp = np.exp(-grid.nodes ** 2) * np.exp(0.4j * grid.nodes)
    gm = np.conj(gp)
    psi, chi = fock.random_state(grid, rng, 2), fock.random_state(grid, rng, 2)
    a = fock.inner(psi, fock.apply_phi(gp, gm, chi))
    b = np.conj(fock.inner(chi, fock.apply_phi(gp, gm, psi)))
    assert abs(a - b) < 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_expansion_round_trip_small(seed):
    rng = np.random.default_rng(seed)
    grid = fock.make_grid(sc.sinh_gordon(0.7), 8, 5.0, 3)
    A = fock.random_form(grid, rng, kmax=3)
    B = fock.extract_form(A, grid, 3)
    assert fock.form_difference(A, B) <= 1e-8
    for p in range(3):
        for q in range(3):
            d = fock.pointlike_block(A, grid, p, q) - fock.pointlike_block(B, grid, p, q)
            assert np.max(np.abs(d)) <= 1e-8


def test_extraction_of_a_product_oracle(rng):
    # A = phi(g1) phi(g2) is not given by kernels; its extracted form must reproduce it
    grid = fock.make_grid(sc.ising(), 6, 4.0, 4)
    g1 = np.exp(-grid.nodes ** 2 / 2)
    g2 = np.exp(-(grid.nodes - 0.5) ** 2) * (1 + 0.3j)
    apply = lambda s: fock.apply_phi(g1, g1, fock.apply_phi(g2, np.conj(g2), s))
    adj = lambda s: fock.apply_phi(g2, np.conj(g2), fock.apply_phi(g1, g1, s))
    A = fock.OperatorOracle(apply, adj)
    B = fock.extract_form(A, grid, 2)
    assert set(B.orders()) >= {(0, 0), (1, 1), (2, 0), (0, 2)}
    for _ in range(3):
        psi, chi = fock.random_state(grid, rng, 2), fock.random_state(grid, rng, 2)
        assert abs(fock.reconstruct(B, psi, chi) - fock.matrix_element(A, psi, chi)) < 1e-10


def test_cutoff_is_enforced():
    grid = fock.make_grid(sc.ising(), 4, 3.0, 1)
    psi = fock.random_state(grid, np.random.default_rng(0), 1)
    with pytest.raises(ConfigError):
        fock.apply_z_dagger(np.ones(4), psi)


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_inner_is_sesquilinear(re, im):
    grid = grid_for("ising", {}, points=4)
    rng = np.random.default_rng(3)
    psi, chi = fock.random_state(grid, rng, 2), fock.random_state(grid, rng, 2)
    c = complex(re, im)
    assert abs(fock.inner(psi.scale(c), chi) - np.conj(c) * fock.inner(psi, chi)) < 1e-12 * (1 + abs(c))
    assert abs(fock.inner(psi, chi.scale(c)) - c * fock.inner(psi, chi)) < 1e-12 * (1 + abs(c))
