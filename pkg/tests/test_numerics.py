import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from switchsim.errors import NoBracket, NoConvergence
from switchsim.numerics import find_root, integrate_interval, integrate_semi_infinite


def test_interval_polynomial_is_exact():
    res = integrate_interval(lambda x: 3 * x ** 2, 0.0, 2.0)
    assert res.value == pytest.approx(8.0, rel=1e-14)
    assert res.evaluations >= 21


@given(st.floats(0.1, 10.0))
def test_semi_infinite_exponential(rate):
    assert integrate_semi_infinite(lambda v: np.exp(-rate * v)).value == pytest.approx(1 / rate, rel=1e-9)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0, 3.0])
def test_semi_infinite_power_tail_with_map(alpha):
    power = int(min(40, math.ceil(2 / (alpha - 1))))
    value = integrate_semi_infinite(lambda v: (1 + v) ** -alpha, rel_tol=1e-10, power=power).value
    assert value == pytest.approx(1 / (alpha - 1), rel=1e-8)


def test_kinked_integrand():
    value = integrate_interval(lambda x: np.abs(x - 1 / 3), 0.0, 1.0, rel_tol=1e-12).value
    assert value == pytest.approx(5 / 18, rel=1e-10)


def test_budget_exhaustion_reports_partial_value():
    with pytest.raises(NoConvergence) as err:
        integrate_interval(lambda x: np.sin(1 / np.maximum(x, 1e-300)), 0.0, 1.0, rel_tol=1e-14,
                           max_evals=500)
    assert err.value.value is not None


def test_find_root():
    assert find_root(lambda x: x * x - 2, 0.0, 2.0) == pytest.approx(math.sqrt(2), rel=1e-12)


def test_find_root_without_bracket():
    with pytest.raises(NoBracket):
        find_root(lambda x: x * x + 1, -1.0, 1.0)
