import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from fieldmodes.correlators import CorrelatorKind, FieldParams, correlator
from fieldmodes.errors import DomainError, IRDivergenceError, UnsupportedConfigurationError
from fieldmodes.smearing import (Family, SmearingSpec, evaluate, fourier_transform, has_closed_transform,
                                 normalization, overlap, radial_transform, sobolev_norm_sq, sphere_area)

FAMILY_SAMPLES = [
    SmearingSpec.poly_bump(1.0, dim=3),
    SmearingSpec.poly_bump(2.5, radius=0.7, dim=2),
    SmearingSpec.cos_power(4, dim=3),
    SmearingSpec.exp_bump(dim=2),
    SmearingSpec.trapezoid(0.5, dim=3),
    SmearingSpec.poly_cap(3, dim=1),
    SmearingSpec.sinc(2, dim=3),
    SmearingSpec.shell_sin2(1.0, 0.5, dim=3),
    SmearingSpec.shell_sin2(0.8, 0.3, dim=4),
    SmearingSpec.ball_cos2(dim=3),
    SmearingSpec.ball_cos2(radius=0.6, dim=5),
]


def _radial_norm(spec):
    D = spec.dim
    A = normalization(spec).value
    lo, hi = spec.inner_radius, spec.outer_radius
    val, _ = integrate.quad(lambda r: r ** (D - 1) * evaluate(spec, [r] + [0.0] * (D - 1)) ** 2,
                            lo, hi, limit=200, epsrel=1e-12)
    return spec.scale_c * sphere_area(D) * val, A


@pytest.mark.parametrize("spec", FAMILY_SAMPLES, ids=lambda s: f"{s.family.value}-D{s.dim}")
def test_normalization_unit(spec):
    val, _ = _radial_norm(spec)
    assert val == pytest.approx(1.0, rel=1e-9)


def test_normalization_uses_c():
    a = SmearingSpec.poly_bump(1.0, dim=3, c=4.0)
    b = SmearingSpec.poly_bump(1.0, dim=3, c=1.0)
    assert normalization(a).value == pytest.approx(normalization(b).value / 2, rel=1e-14)
    # default c is the inverse radius
    assert SmearingSpec.poly_bump(1.0, radius=0.25, dim=3).scale_c == pytest.approx(4.0)


@pytest.mark.parametrize("spec", FAMILY_SAMPLES, ids=lambda s: f"{s.family.value}-D{s.dim}")
def test_transform_at_zero_is_integral(spec):
    D = spec.dim
    val, _ = integrate.quad(lambda r: r ** (D - 1) * evaluate(spec, [r] + [0.0] * (D - 1)),
                            spec.inner_radius, spec.outer_radius, limit=200, epsrel=1e-12)
    assert radial_transform(spec, 0.0) == pytest.approx(sphere_area(D) * val, rel=1e-9)


@pytest.mark.parametrize("spec", [s for s in FAMILY_SAMPLES if has_closed_transform(s)],
                         ids=lambda s: f"{s.family.value}-D{s.dim}")
def test_closed_transform_matches_quadrature(spec):
    k = np.concatenate([[0.0, 1e-6, 1e-3], np.linspace(0.05, 300.0, 700)])
    closed = radial_transform(spec, k, method="closed")
    quad = radial_transform(spec, k, method="quadrature")
    assert np.max(np.abs(closed - quad)) <= 1e-11 * np.max(np.abs(quad))


def test_closed_transform_unavailable():
    with pytest.raises(UnsupportedConfigurationError):
        radial_transform(SmearingSpec.exp_bump(dim=3), 1.0, method="closed")


def test_fourier_phase_from_center():
    a = SmearingSpec.poly_bump(1.0, dim=2)
    b = a.moved([0.7, -0.2])
    k = np.array([[1.3, 0.4], [-2.0, 5.0]])
    ratio = fourier_transform(b, k) / fourier_transform(a, k)
    np.testing.assert_allclose(ratio, np.exp(1j * k @ np.array([0.7, -0.2])), rtol=1e-13)


def test_fourier_by_direct_integration_d1():
    spec = SmearingSpec.poly_cap(2, center=[0.3], dim=1)
    for kv in (0.0, 1.7, 9.0):
        re, _ = integrate.quad(lambda x: math.cos(kv * x) * evaluate(spec, x), -0.7, 1.3, epsrel=1e-12)
        im, _ = integrate.quad(lambda x: math.sin(kv * x) * evaluate(spec, x), -0.7, 1.3, epsrel=1e-12)
        assert fourier_transform(spec, kv) == pytest.approx(re + 1j * im, rel=1e-10, abs=1e-13)


@pytest.mark.parametrize("D,delta", [(2, 1.0), (3, 1.0), (3, 2.0)])
def test_sobolev_minus_half_is_field_self_correlator(D, delta):
    spec = SmearingSpec.poly_bump(delta, dim=D)
    phi = correlator(spec, spec, FieldParams(D), CorrelatorKind.PHI_PHI)
    assert sobolev_norm_sq(spec, -0.5, 2000.0) == pytest.approx(phi, rel=1e-7)


def test_sobolev_plus_half_is_momentum_self_correlator():
    spec = SmearingSpec.poly_bump(2.0, dim=3)
    pi = correlator(spec, spec, FieldParams(3), CorrelatorKind.PI_PI)
    assert sobolev_norm_sq(spec, 0.5, 4000.0) * spec.scale_c ** 2 == pytest.approx(pi, rel=1e-7)


def test_sobolev_zero_is_l2_norm():
    spec = SmearingSpec.cos_power(2, dim=3)
    # c * ||f||^2 = 1 with c = 1 here
    assert sobolev_norm_sq(spec, 0.0, 400.0) == pytest.approx(1.0, rel=1e-8)


def test_sobolev_infrared_divergence():
    with pytest.raises(IRDivergenceError):
        sobolev_norm_sq(SmearingSpec.poly_bump(1.0, dim=1), -0.5, 100.0)


def test_overlap():
    a = SmearingSpec.poly_bump(1.0, dim=3)
    assert overlap(a, a) == pytest.approx(1.0 / a.scale_c, rel=1e-12)
    assert overlap(a, a.moved([2.0, 0, 0])) == 0.0
    assert overlap(a, SmearingSpec.shell_sin2(1.0, 0.5, dim=3)) == 0.0
    with pytest.raises(UnsupportedConfigurationError):
        overlap(a, a.moved([1.0, 0, 0]))


def test_sinc_orthogonality_on_ball():
    s1, s2 = SmearingSpec.sinc(1, dim=3), SmearingSpec.sinc(2, dim=3)
    assert abs(overlap(s1, s2)) < 1e-10


@pytest.mark.parametrize("kw", [
    dict(family=Family.POLY_BUMP, center=(0.0,), radius=1.0, dim=1, delta=0.5),
    dict(family=Family.POLY_BUMP, center=(0.0,), radius=-1.0, dim=1, delta=1.0),
    dict(family=Family.COS_POWER, center=(0.0, 0.0), radius=1.0, dim=2, n=1),
    dict(family=Family.SINC, center=(0.0,), radius=1.0, dim=2, n=1),
    dict(family=Family.TRAPEZOID, center=(0.0,), radius=1.0, dim=1, delta=0.0),
    dict(family=Family.SHELL_SIN2, center=(0.0,), radius=2.0, dim=1, inner=1.0, thickness=0.5),
])
def test_invalid_specs(kw):
    with pytest.raises(DomainError):
        SmearingSpec(**kw)


def test_regularity_flags():
    assert not SmearingSpec.poly_bump(0.0, dim=3).is_regular
    assert SmearingSpec.poly_bump(1.0, dim=3).is_regular
    assert not SmearingSpec.sinc(1, dim=3).is_non_negative
    assert SmearingSpec.trapezoid(0.5, dim=2).outer_radius == pytest.approx(1.5)


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(DomainError):
        SmearingSpec.from_dict({"family": "PolyBump", "delta": 1.0, "colour": "red"})
    with pytest.raises(DomainError):
        SmearingSpec.from_dict({"family": "Blob"})


@settings(max_examples=40, deadline=None)
@given(delta=st.sampled_from([0.0, 1.0, 1.5, 3.0]), dim=st.integers(1, 5),
       radius=st.floats(0.1, 5.0), shift=st.floats(-10, 10))
def test_dict_round_trip(delta, dim, radius, shift):
    spec = SmearingSpec.poly_bump(delta, center=[shift] * dim, radius=radius, dim=dim)
    assert SmearingSpec.from_dict(spec.to_dict()) == spec
