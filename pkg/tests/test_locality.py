import json

import numpy as np
import pytest

from fflocal import fock, locality as lc, models as md, scattering as sc, testfn as tf
from fflocal.report import ConfigError


def small_grid(model, points=10, cutoff=4):
    return fock.make_grid(model, points, 4.0, cutoff)


def adjoint_form(A):
    return fock.FockKernelForm(A.grid, {(n, m): fock.adjoint_kernel(f, m, n) for (m, n), f in A.kernels.items()})


@pytest.mark.parametrize("model", [sc.free_field(), sc.ising(), sc.sinh_gordon(0.5)], ids=lambda m: m.name)
def test_commutator_matches_dense_oracle(model):
    rng = np.random.default_rng(1)
    grid = small_grid(model)
    g1 = md.default_bump("double_cone", 0.5)
    g = tf.make_bump(tf.plane(), (0.3, 0.4), 0.3)
    gp, gm = g.plus(grid.nodes), g.minus(grid.nodes)
    phi = fock.FockKernelForm(grid, {(1, 0): g1.plus(grid.nodes), (0, 1): g1.minus(grid.nodes)})
    for A in (phi, fock.random_form(grid, rng, kmax=3)):
        psi, chi = fock.random_state(grid, rng, 1), fock.random_state(grid, rng, 1)
        a = lc.commutator_phi_prime(A, None, psi, chi, gpm=(gp, gm))
        b = lc.dense_commutator(A, gp, gm, psi, chi)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


def test_vacuum_commutator_of_two_fields():
    grid = small_grid(sc.free_field())
    g1 = md.default_bump("double_cone", 0.5)
    g = tf.make_bump(tf.plane(), (0.3, 0.4), 0.3)
    gp, gm = g.plus(grid.nodes), g.minus(grid.nodes)
    A = fock.FockKernelForm(grid, {(1, 0): g1.plus(grid.nodes), (0, 1): g1.minus(grid.nodes)})
    vac = fock.FockState.vacuum(grid)
    got = lc.commutator_phi_prime(A, None, vac, vac, gpm=(gp, gm))
    want = np.sum(grid.weights * (g1.minus(grid.nodes) * gp - g1.plus(grid.nodes) * gm))
    assert abs(got - want) < 1e-14


def test_identity_commutes():
    grid = small_grid(sc.ising())
    rng = np.random.default_rng(2)
    I = fock.FockKernelForm(grid, {(0, 0): np.array(1.0 + 0j)})
    g = tf.make_bump(tf.plane(), (0.3, 0.4), 0.3)
    psi, chi = fock.random_state(grid, rng, 2), fock.random_state(grid, rng, 2)
    assert lc.commutator_phi_prime(I, g, psi, chi, rule=lc.grid_rule(grid)) == 0


@pytest.mark.parametrize("model", [sc.ising(), sc.sinh_gordon(0.3)], ids=lambda m: m.name)
def test_commutator_adjoint_consistency(model):
    # <psi,[A,phi'(g)]chi> = -conj <chi,[A*,phi'(g)*]psi>, phi'(g)* = phi'(conj g)
    rng = np.random.default_rng(4)
    grid = small_grid(model, points=8, cutoff=3)
    A = fock.random_form(grid, rng, kmax=3)
    gp = np.exp(-grid.nodes ** 2) * (1 + 0.5j)
    gm = np.exp(-(grid.nodes - 0.3) ** 2) * (0.2 - 1j)
    psi, chi = fock.random_state(grid, rng, 1), fock.random_state(grid, rng, 1)
    lhs = lc.commutator_phi_prime(A, None, psi, chi, gpm=(gp, gm))
    rhs = lc.commutator_phi_prime(adjoint_form(A), None, chi, psi, gpm=(np.conj(gm), np.conj(gp)))
    assert abs(lhs + np.conj(rhs)) < 1e-12 * max(1.0, abs(lhs))


def test_default_battery_roles():
    for region in (("wedge", 0.0), ("double_cone", 0.5), ("wedge", -0.3)):
        W = lc.probe_wedge(region)
        bat = lc.default_battery(region)
        pos = [g for g in bat if g.support_in(W)]
        assert len(bat) == 8 and len(pos) == 6


def test_missing_control_and_empty_battery():
    grid = small_grid(sc.free_field(), points=6, cutoff=2)
    fam = md.get_family("free", region=("double_cone", 0.5))
    only_pos = [g for g in lc.default_battery(("double_cone", 0.5)) if g.support_in(tf.wedge((0, 0.5)))]
    with pytest.raises(lc.MissingControl):
        lc.verify_locality(fam, ("double_cone", 0.5), only_pos, grid=grid)
    with pytest.raises(ConfigError):
        lc.verify_locality(fam, ("double_cone", 0.5), [], grid=grid)


def test_creation_operator_is_not_local():
    grid = fock.make_grid(sc.ising(), 8, 4.0, 3)
    A = fock.FockKernelForm(grid, {(1, 0): np.exp(-grid.nodes ** 2)})
    v = lc.verify_locality(A, ("wedge", 0.0), grid=grid)
    assert v.meaningful and v.status == "non-local"


def test_identity_verdict_is_inconclusive():
    grid = fock.make_grid(sc.ising(), 8, 4.0, 3)
    A = fock.FockKernelForm(grid, {(0, 0): np.array(1.0 + 0j)})
    v = lc.verify_locality(A, ("wedge", 0.0), grid=grid)
    assert v.status == "inconclusive" and not v.local


def test_pole_family_needs_regular_states():
    grid = fock.make_grid(sc.ising(), 8, 4.0, 3)
    fam = md.ising_family(4)
    g = tf.make_bump(tf.wedge((0, 0)), (0.0, 1.0), 0.4)
    states = lc.default_states(grid)
    with pytest.raises(lc.SingularKernel):
        lc.commutator_phi_prime(fam, g, states[1][0], states[1][1])


def test_ising_residual_decreases_with_xi_range():
    # refinement trend: the xi cutoff error drops fast, controls stay O(1)
    grid = fock.make_grid(sc.ising(), 16, 4.0, 3)
    fam = md.ising_family(4)
    coarse = lc.verify_locality(fam, ("wedge", 0.0), grid=grid, xi_max=4.0)
    fine = lc.verify_locality(fam, ("wedge", 0.0), grid=grid, xi_max=8.0)
    assert fine.max_commutator_residual < 1e-3 * coarse.max_commutator_residual
    assert fine.status == "local"
    assert fine.negative_control_residual > 0.1


def test_contour_shift_positive_and_control():
    fam = md.free_field_family(md.default_bump("wedge", 0.0), ("wedge", 0.0))
    W, LW = tf.wedge((0, 0)), tf.left_wedge((0, 0))
    g = tf.make_bump(W, (0.4, 1.3), 0.5, "gevrey", 3.0)
    assert lc.contour_shift_check(fam, 0, 0, None, [], g).passed
    # the control is shifted in x0 so that parity does not make the gap vanish
    ctl = tf.make_bump(LW, (0.2, -1.0), 0.4, "gevrey", 2.0)
    rep = lc.contour_shift_check(fam, 0, 0, None, [], ctl)
    assert not rep.passed and rep.entries[0].max_residual >= 1e-3


def test_contour_shift_covariance():
    fam = md.free_field_family(md.default_bump("wedge", 0.5), ("wedge", 0.5))
    g = tf.make_bump(tf.wedge((0, 0.5)), (0.3, 1.6), 0.5, "gevrey", 2.0)
    assert lc.contour_shift_check(fam, 0, 0, None, [], g).entries[0].max_residual <= 1e-7


def test_kernel_dump_round_trip(tmp_path):
    grid = fock.make_grid(sc.sinh_gordon(0.4), 6, 4.0, 3)
    A = fock.random_form(grid, np.random.default_rng(0), kmax=2)
    path = tmp_path / "k.npz"
    lc.save_kernel_dump(A, path)
    B = lc.load_kernel_dump(path, sc.sinh_gordon(0.4))
    assert fock.form_difference(A, B) == 0
    assert np.array_equal(B.grid.nodes, grid.nodes)


def test_verdict_json_is_stable():
    grid = fock.make_grid(sc.ising(), 8, 4.0, 3)
    A = fock.FockKernelForm(grid, {(1, 0): np.exp(-grid.nodes ** 2)})
    a = json.dumps(lc.verify_locality(A, ("wedge", 0.0), grid=grid).to_dict(), sort_keys=True)
    b = json.dumps(lc.verify_locality(A, ("wedge", 0.0), grid=grid).to_dict(), sort_keys=True)
    assert a == b
