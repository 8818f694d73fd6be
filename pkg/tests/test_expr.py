import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fflocal import expr
from fflocal.expr import ExprError


def ev(src, z=(), consts=None):
    z = np.atleast_2d(np.asarray(z, dtype=complex)) if len(z) else np.zeros((1, 0), dtype=complex)
    return complex(expr.compile_expr(src, z.shape[-1], consts)(z)[0])


def test_precedence_and_unary():
    assert ev("1 + 2*3") == 7
    assert ev("-2*3 + 8/4") == -4
    assert ev("2*(3 - 1)/4") == 1
    assert ev("--1") == 1


def test_constants_and_functions():
    assert abs(ev("ipi") - 1j * np.pi) < 1e-15
    assert abs(ev("iπ") - 1j * np.pi) < 1e-15
    assert abs(ev("exp(ipi) + 1")) < 1e-15
    assert abs(ev("cosh(0) + sinh(0) + tanh(0)") - 1) < 1e-15
    assert abs(ev("2 × 3 ÷ 4 − 1") - 0.5) < 1e-15


def test_variables_are_one_based():
    assert ev("z1 - 2*zeta2 + var_3", [1.0, 2.0, 4.0]) == 1
    with pytest.raises(ExprError):
        expr.compile_expr("z3", 2)
    with pytest.raises(ExprError):
        expr.parse("z0")


def test_bound_constants():
    assert ev("c_a * z1", [2.0], {"c_a": 1.5}) == 3
    with pytest.raises(ExprError):
        expr.compile_expr("c_b", 0)


@pytest.mark.parametrize("bad", ["", "1 +", "(1", "1)", "2ipi", "foo(1)", "z1 $ 2", "sinh 1", "c_"])
def test_malformed(bad):
    with pytest.raises(ExprError):
        expr.compile_expr(bad, 2)


def test_linear_form():
    a, b = expr.linear_form("z2 - z1 + ipi", 2)
    assert np.allclose(a, [-1, 1]) and abs(b - 1j * np.pi) < 1e-15
    with pytest.raises(ExprError):
        expr.linear_form("z1*z2", 2)
    with pytest.raises(ExprError):
        expr.linear_form("i*z1", 2)


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_matches_numpy(x, y):
    z = np.array([[complex(x, y), complex(y, -x)]])
    got = expr.compile_expr("sinh((z2 - z1)/2) * exp(-z1) - 3*cosh(z2)", 2)(z)[0]
    want = np.sinh((z[0, 1] - z[0, 0]) / 2) * np.exp(-z[0, 0]) - 3 * np.cosh(z[0, 1])
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


@given(st.integers(-50, 50), st.integers(1, 50))
def test_round_trip_through_str(p, q):
    node = expr.parse(f"({p})/({q}) + z1")
    again = expr.parse(str(node))
    z = np.array([[0.25 + 0.5j]])
    assert abs(expr.evaluate(node, z)[0] - expr.evaluate(again, z)[0]) < 1e-12
