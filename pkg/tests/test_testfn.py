import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fflocal import indicatrix as ix
from fflocal import testfn as tf
from fflocal.report import ConfigError

# oracle: scipy dblquad of g e^{i p.x}/(2 pi), p = (cosh .5, sinh .5); frozen
G_PLUS_HALF = 0.1498124651055334 - 0.04561625988449115j


def bump():
    return tf.make_bump(tf.wedge(), (0.2, 1.0), 0.4)


def test_transform_against_frozen_oracle():
    g = bump()
    assert abs(g.plus(np.array([0.5]))[0] - G_PLUS_HALF) < 1e-10
    assert abs(g.minus(np.array([0.5]))[0] - np.conj(G_PLUS_HALF)) < 1e-10


def test_radial_and_quadrature_agree_in_strip():
    g = tf.make_bump(tf.double_cone(0.5), (0.05, 0.1), 0.2)
    z = np.array([-1, 0, 2, 1 + 0.5j, 3 + 2j, -4.5 + 3j])
    a = tf.transform(g, 1, z, "radial")
    b = tf.transform(g, 1, z, "quadrature")
    assert np.max(np.abs(a - b)) < 1e-9 * max(1.0, np.max(np.abs(a)))


def test_crossing_of_transforms():
    # g^-(theta + i pi) = g^+(theta)
    g = bump()
    th = np.array([-1.0, 0.0, 2.0])
    assert np.max(np.abs(tf.transform(g, -1, th + 1j * np.pi) - tf.transform(g, 1, th))) < 1e-10


def test_reflection_conjugates_transform():
    g = bump()
    th = np.array([-1.0, 0.3, 2.0])
    assert np.max(np.abs(g.reflected().plus(th) - np.conj(g.plus(th)))) < 1e-10


def test_unit_mass():
    g = bump()
    x0, w0 = np.polynomial.legendre.leggauss(80)
    X0, X1 = np.meshgrid(0.2 + 0.4 * x0, 1.0 + 0.4 * x0, indexing="ij")
    W = np.outer(0.4 * w0, 0.4 * w0)
    assert abs(np.sum(W * g.eval(X0, X1)) - 1.0) < 1e-4


def test_support_checks():
    assert bump().support_in(tf.wedge())
    assert not bump().support_in(tf.left_wedge())
    with pytest.raises(ConfigError):
        tf.make_bump(tf.wedge(), (0.0, 0.2), 0.4)
    with pytest.raises(ConfigError):
        tf.make_bump(tf.wedge(), (0.0, 1.0), -1.0)
    with pytest.raises(ConfigError):
        tf.make_bump(tf.wedge(), (0.0, 1.0), 0.2, "analytic")


@given(st.floats(-0.4, 0.4), st.floats(0.8, 2.0), st.floats(-3, 3))
def test_translation_phase(dx0, x1, theta):
    # (g translated by y)^+(theta) = e^{i p(theta).y} g^+(theta)
    g = tf.make_bump(tf.plane(), (0.0, 1.0), 0.3)
    y = (dx0, x1 - 1.0)
    th = np.array([theta])
    p0, p1 = np.cosh(theta), np.sinh(theta)
    lhs = g.translated(y).plus(th)[0]
    rhs = np.exp(1j * (p0 * y[0] - p1 * y[1])) * g.plus(th)[0]
    assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("beta", [1.0, 2.0])
@pytest.mark.parametrize("ell", [0, 1])
def test_paley_wiener_constant_is_stable(beta, ell):
    g = tf.make_bump(tf.wedge(), (0.0, 1.0), 0.4)
    rep = tf.check_paley_wiener(g, ix.log_family(beta), ell)
    assert rep.passed, rep.summary()


def test_paley_wiener_rejects_left_wedge_support():
    g = tf.make_bump(tf.left_wedge(), (0.0, -1.0), 0.4)
    with pytest.raises(ConfigError):
        tf.check_paley_wiener(g, ix.log_family(1.0))


def test_cauchy_derivative_of_exp():
    d = tf.cauchy_derivative(np.exp, np.array([0.3 + 0.1j]), 2)
    assert abs(d[0] - np.exp(0.3 + 0.1j)) < 1e-10
