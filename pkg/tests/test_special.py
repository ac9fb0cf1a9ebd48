import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, strategies as st

from alphaebt.special import EULER_GAMMA, digamma, log_gamma


def _digamma_series(x, terms=2_000_000):
    # psi(x) = -gamma + sum_{k>=0} (1/(k+1) - 1/(k+x)); truncated tail is (x-1)/terms + O(terms**-2)
    k = np.arange(terms, dtype=float)
    return -EULER_GAMMA + np.sum(1.0 / (k + 1.0) - 1.0 / (k + x)) + (x - 1.0) / terms


def test_digamma_one_is_minus_euler_gamma():
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-13)
    assert round(digamma(1.0), 10) == -0.5772156649


@pytest.mark.parametrize("x", [0.3, 2.0, 4.0, 7.5])
def test_digamma_against_series(x):
    assert digamma(x) == pytest.approx(_digamma_series(x), abs=1e-9)


def test_digamma_known_values():
    assert digamma(2.0) == pytest.approx(1 - EULER_GAMMA, rel=1e-14)
    assert digamma(4.0) == pytest.approx(11 / 6 - EULER_GAMMA, rel=1e-14)
    assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), rel=1e-14)


def test_log_gamma_known_values():
    assert log_gamma(5.0) == pytest.approx(math.log(24), rel=1e-15)
    assert round(log_gamma(5.0), 10) == 3.1780538303
    assert log_gamma(1.0) == 0.0
    assert log_gamma(2.0) == 0.0
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)


@given(st.floats(1e-3, 1e3))
def test_digamma_recurrence(x):
    assert digamma(x + 1) - digamma(x) == pytest.approx(1 / x, rel=1e-12, abs=1e-12)


@given(st.floats(1e-3, 1e3))
def test_log_gamma_recurrence(x):
    assert log_gamma(x + 1) - log_gamma(x) == pytest.approx(math.log(x), abs=1e-12 * max(1, log_gamma(x + 1)))


def test_against_scipy_grid():
    xs = np.concatenate([np.logspace(-6, 4, 400), np.linspace(0.5, 12, 200)])
    for x in xs:
        ref = sp.digamma(x)
        assert abs(digamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))
        ref = sp.gammaln(x)
        assert abs(log_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))
    assert math.lgamma(171.5) == pytest.approx(log_gamma(171.5), rel=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_domain_errors(bad):
    with pytest.raises(ValueError):
        digamma(bad)
    with pytest.raises(ValueError):
        log_gamma(bad)
