import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fxtbarrier import barrier
from fxtbarrier.barrier import ConstraintProfile
from fxtbarrier.checks import barrier_checks, v1_quadrature
from fxtbarrier.errors import DomainError, OutOfBarrier


@st.composite
def valid_triples(draw):
    kc = draw(st.floats(0.05, 1.0))
    xr = draw(st.floats(-0.99, 0.99)) * kc
    eta = draw(st.floats(-0.999, 0.999)) * kc
    return eta - xr, xr, kc


def test_v1_examples():
    assert barrier.v1_value(0.0, 0.2, 0.5) == 0.0
    # quadrature oracle: 0.005091169945939...
    assert barrier.v1_value(0.1, 0.0, 0.53) == pytest.approx(0.00509116994594, abs=1e-14)
    k2 = 0.53**2
    assert barrier.v1_value(0.1, 0.0, 0.53) == pytest.approx(0.5 * k2 * math.log(k2 / (k2 - 0.01)), rel=1e-14)


@given(valid_triples())
def test_v1_matches_quadrature(triple):
    z1, xr, kc = triple
    ref = v1_quadrature(z1, xr, kc)
    assert barrier.v1_value(z1, xr, kc) == pytest.approx(ref, rel=1e-9, abs=1e-300)


@given(valid_triples())
def test_v1_nonnegative_and_lemma2_bound(triple):
    z1, xr, kc = triple
    v = barrier.v1_value(z1, xr, kc)
    assert v >= 0.0
    eta = z1 + xr
    assert v <= kc * kc * z1 * z1 / (kc * kc - eta * eta) * (1 + 1e-12)


def test_v1_small_error_branch_is_continuous():
    xr, kc = 0.18, 0.53
    for z in (1e-6 * (1 - 1e-9), 1e-6 * (1 + 1e-9), -1e-6):
        assert barrier.v1_value(z, xr, kc) == pytest.approx(v1_quadrature(z, xr, kc), rel=1e-10)


def test_v1_diverges_toward_bound():
    xr, kc = 0.1, 0.5
    vals = [barrier.v1_value(kc * (1 - d) - xr, xr, kc) for d in np.geomspace(0.5, 1e-12, 40)]
    assert np.all(np.diff(vals) > 0)
    # logarithmic growth: about 2.66 at 1e-12 from the bound
    assert vals[-1] > 2.5


def test_out_of_barrier_and_domain_errors():
    with pytest.raises(OutOfBarrier):
        barrier.v1_value(0.4, 0.2, 0.5)
    with pytest.raises(OutOfBarrier):
        barrier.rho(0.0, 0.6, 0.5)
    with pytest.raises(DomainError):
        barrier.omega(0.0, 0.0, -1.0)


def test_rho_limit_example():
    assert barrier.rho(0.0, 0.18, 0.53) == pytest.approx(0.2809 / 0.2485, rel=1e-12)
    assert barrier.rho(0.0, 0.18, 0.53) == pytest.approx(1.13038, abs=5e-6)
    assert barrier.omega(0.0, 0.0, 0.7) == 0.0


def test_rho_continuity_across_branch():
    lim = barrier.rho(1e-10, 0.18, 0.53)
    assert abs(barrier.rho(1e-6, 0.18, 0.53) - lim) < 1e-4


@given(valid_triples())
def test_rho_from_reference_sensitivity(triple):
    # the alpha design relies on dV1/dxr (z1 fixed) = z1 * (kc^2 / (kc^2 - eta^2) - rho)
    z1, xr, kc = triple
    assume(abs(z1) > 1e-3 and abs(xr) < 0.9 * kc and abs(z1 + xr) < 0.99 * kc)
    eta, h = z1 + xr, 1e-7
    dv = (barrier.v1_value(z1, xr + h, kc) - barrier.v1_value(z1, xr - h, kc)) / (2 * h)
    expected = z1 * (kc * kc / (kc * kc - eta * eta) - barrier.rho(z1, xr, kc))
    assert dv == pytest.approx(expected, rel=1e-5, abs=1e-7)


def test_omega_limit_matches_printed_formula():
    xr, kc = 0.18, 0.53
    assert barrier.omega(0.0, xr, kc) == pytest.approx((xr * xr - 3 * xr * kc) / (kc * kc - xr * xr), rel=1e-14)
    assert abs(barrier.omega(2e-8, xr, kc) - barrier.omega(5e-9, xr, kc)) < 1e-4


def test_evaluate_bundles_terms():
    ev = barrier.evaluate(0.05, 0.1, 0.5)
    assert ev == (barrier.v1_value(0.05, 0.1, 0.5), barrier.rho(0.05, 0.1, 0.5), barrier.omega(0.05, 0.1, 0.5))
    assert barrier.v1_total([0.05, 0.0], [0.1, 0.2], [0.5, 0.5]) == ev.v1


def test_profile_defaults_and_range():
    prof = ConstraintProfile()
    np.testing.assert_allclose(prof.bound(0.0), [0.53, 0.48], atol=1e-15)
    t = np.linspace(0, 100, 20001)
    b = np.array([prof.bound(s) for s in t])
    assert b[:, 0].min() >= 0.38 - 1e-12 and b[:, 0].max() <= 0.58 + 1e-12
    assert prof.min_bound() == pytest.approx(0.38)


@given(st.floats(0.0, 100.0))
def test_profile_rate_matches_finite_difference(t):
    prof, h = ConstraintProfile(), 1e-6
    fd = (prof.bound(t + h) - prof.bound(t - h)) / (2 * h)
    np.testing.assert_allclose(prof.bound_rate(t), fd, atol=1e-6)


def test_profile_axis2_is_magnitude_of_sine_form():
    prof = ConstraintProfile()
    for t in (0.0, 3.0, 17.0, 40.0):
        assert prof.bound(t)[1] == pytest.approx(abs(-0.48 + 0.1 * math.sin(0.2 * t)), abs=1e-14)
        assert prof.bound(t)[0] == pytest.approx(0.48 + 0.1 * math.cos(0.2 * t - math.pi / 3), abs=1e-14)


def test_profile_frozen_and_validation():
    frozen = ConstraintProfile().frozen(0.0)
    np.testing.assert_allclose(frozen.bound(12.3), [0.53, 0.48])
    np.testing.assert_array_equal(frozen.bound_rate(12.3), [0.0, 0.0])
    with pytest.raises(ValueError):
        ConstraintProfile(offset=(0.1, 0.48), amplitude=(0.2, 0.1))
    with pytest.raises(ValueError):
        ConstraintProfile(offset=(0.5,), amplitude=(0.1, 0.1))


def test_barrier_check_bundle_passes():
    for r in barrier_checks(n=200, seed=5):
        assert r.passed, str(r)
