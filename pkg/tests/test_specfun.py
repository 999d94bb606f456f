import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fieldmodes.errors import ConvergenceError, DomainError
from fieldmodes.specfun import SeriesControl, angular_kernel, bessel_j, hyper_3f2, log_gamma


@pytest.mark.parametrize("args", [
    (0.5, 1.0, 1.5, 2.0, 2.5, 0.3),
    (-0.5, 2.5, 3.0, 4.5, 2.0, -0.8),
    (1.0, 1.5, 2.0, 3.0, 3.5, 0.95),
    (0.5, 2.5, 1.5, 3.0, 2.5, 1 / 6.25),
    (-1.5, 0.5, 4.0, 5.0, 6.5, 0.999),
])
def test_hyper_3f2_matches_mpmath(args):
    *p, x = args
    ref = float(mp.hyp3f2(*p, x))
    assert hyper_3f2(*p, x) == pytest.approx(ref, rel=1e-13)


def test_hyper_3f2_terminating_series():
    # a1 = -2 leaves a quadratic polynomial in x
    a2, a3, b1, b2, x = 1.5, 2.0, 3.0, 0.5, 0.4
    t1 = -2 * a2 * a3 / (b1 * b2) * x
    t2 = (-2) * (-1) * a2 * (a2 + 1) * a3 * (a3 + 1) / (b1 * (b1 + 1) * b2 * (b2 + 1)) * x * x / 2
    assert hyper_3f2(-2, a2, a3, b1, b2, x) == pytest.approx(1 + t1 + t2, rel=1e-15)


@pytest.mark.parametrize("x", [1.0, -1.0, 1.5])
def test_hyper_3f2_outside_disk(x):
    with pytest.raises(DomainError):
        hyper_3f2(0.5, 1.0, 1.5, 2.0, 2.5, x)


def test_hyper_3f2_bad_lower_parameter():
    with pytest.raises(DomainError):
        hyper_3f2(0.5, 1.0, 1.5, -2.0, 2.5, 0.5)


def test_hyper_3f2_term_cap():
    with pytest.raises(ConvergenceError):
        hyper_3f2(1.0, 1.5, 2.0, 2.5, 1.2, 0.9999, SeriesControl(max_terms=100))


@pytest.mark.parametrize("kw", [{"rel_tol": 0.0}, {"rel_tol": 0.1}, {"max_terms": 10}])
def test_series_control_validation(kw):
    with pytest.raises(DomainError):
        SeriesControl(**kw)


def test_log_gamma():
    xs = np.array([0.1, 1.0, 2.5, 40.0, 1e3])
    np.testing.assert_allclose(log_gamma(xs), [math.lgamma(v) for v in xs], rtol=1e-14)
    with pytest.raises(DomainError):
        log_gamma(0.0)


@pytest.mark.parametrize("nu", [0.0, 0.5, 2.5, 7.0])
def test_bessel_j_matches_mpmath(nu):
    xs = [0.01, 1.0, 7.3, 55.0]
    ref = [float(mp.besselj(nu, x)) for x in xs]
    np.testing.assert_allclose(bessel_j(nu, np.array(xs)), ref, rtol=1e-12, atol=1e-300)


def _kernel_ref(D, x):
    nu = mp.mpf(D) / 2 - 1
    return float(mp.gamma(mp.mpf(D) / 2) * (2 / mp.mpf(x)) ** nu * mp.besselj(nu, x))


@pytest.mark.parametrize("D", [1, 2, 3, 4, 5, 8])
def test_angular_kernel_matches_bessel_form(D):
    xs = np.array([1e-3, 0.4, 3.0, 17.5, 120.0])
    ref = [_kernel_ref(D, x) for x in xs]
    np.testing.assert_allclose(angular_kernel(D, xs), ref, rtol=1e-11, atol=1e-14)


@pytest.mark.parametrize("D", [1, 2, 3, 4, 7])
def test_angular_kernel_small_argument(D):
    assert angular_kernel(D, 0.0) == pytest.approx(1.0)
    x = 5e-5
    assert angular_kernel(D, x) == pytest.approx(1 - x * x / (2 * D), rel=1e-14)


def test_angular_kernel_low_dimensions_elementary():
    x = np.linspace(0.1, 30, 50)
    np.testing.assert_allclose(angular_kernel(1, x), np.cos(x), rtol=1e-14)
    np.testing.assert_allclose(angular_kernel(3, x), np.sin(x) / x, rtol=1e-12, atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(D=st.integers(1, 9), x=st.floats(0.0, 500.0))
def test_angular_kernel_bounded(D, x):
    assert abs(float(angular_kernel(D, x))) <= 1.0 + 1e-12
