import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fflocal import indicatrix as ix
from fflocal.report import ConfigError


@pytest.mark.parametrize("ind", [ix.log_family(1.0), ix.log_family(2.0), ix.power_family(0.3),
                                 ix.power_family(0.7)])
def test_builtin_families_pass(ind):
    rep = ix.check_indicatrix_axioms(ind)
    assert rep.passed, rep.summary()


def test_linear_growth_is_not_an_indicatrix():
    lin = ix.custom("linear", lambda p: 1.0 * np.asarray(p, dtype=float))
    rep = ix.check_indicatrix_axioms(lin)
    assert not rep.get("omega3_carleman_proxy").passed


def test_decreasing_omega_fails_monotonicity():
    bad = ix.custom("dec", lambda p: 1.0 / (1.0 + np.asarray(p, dtype=float)))
    assert not ix.check_indicatrix_axioms(bad).get("omega1_monotone").passed


def test_parameter_validation():
    with pytest.raises(ConfigError):
        ix.power_family(1.0)
    with pytest.raises(ConfigError):
        ix.log_family(-1.0)
    with pytest.raises(ConfigError):
        ix.get_indicatrix("cubic")
    with pytest.raises(ConfigError):
        ix.log_family(1.0).omega(-1.0)


def test_log_varpi_closed_form():
    ind = ix.log_family(1.5)
    z = 0.7 + 0.4j
    assert abs(ind.varpi(z) - 3.0 * (np.log(1j + z) + 1.0)) < 1e-14


@given(st.floats(0, 1e6), st.floats(0, 1e6), st.sampled_from([0.5, 1.0, 2.0]))
def test_log_subadditivity(p, q, beta):
    ind = ix.log_family(beta)
    assert ind.omega(p + q) <= ind.omega(p) + ind.omega(q) + 1e-9 * (1 + ind.omega(p + q))


@given(st.floats(-50, 50), st.sampled_from([0.3, 0.5, 0.8]))
def test_power_varpi_real_part_is_even_on_real_axis(x, alpha):
    ind = ix.power_family(alpha)
    assert abs(ind.varpi(x).real - ind.varpi(-x).real) <= 1e-9 * (1 + abs(ind.varpi(x)))


def test_combine_and_primed():
    a, b = ix.log_family(1.0), ix.power_family(0.5)
    c = ix.combine([(2.0, a), (1.0, b)])
    p = np.array([0.0, 1.0, 10.0])
    assert np.allclose(c.omega(p), 2 * a.omega(p) + b.omega(p))
    pr = ix.primed(a, 1.0, 1, 1)
    assert pr.a_omega == a.a_omega + 2.0
    assert ix.check_indicatrix_axioms(pr).passed


def test_cross_norm_rank_one():
    # oracle: rank one kernel u(theta) v(eta): the norm is |u|_2 |v|_2 (quadrature)
    s = ix.sample_kernel(lambda t, e: np.exp(-t ** 2) * np.exp(-2 * e ** 2), 1, 1, points=64)
    want = math.sqrt(math.sqrt(math.pi / 2)) * math.sqrt(math.sqrt(math.pi / 4))
    assert abs(ix.cross_norm(s) - want) < 1e-10
    damped = ix.cross_norm(s, ix.log_family(1.0))
    assert 0 < damped < want
