import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fxtbarrier import barrier, control, dynamics
from fxtbarrier.control import (
    ALL_VARIANTS,
    ControllerKind,
    ControllerVariant,
    ErrorState,
    FixedTimeGains,
    signed_power,
)
from fxtbarrier.errors import DomainError, OutOfBarrier

G = FixedTimeGains()
ROBOT = dynamics.RobotParams()
finite = st.floats(-50.0, 50.0, allow_nan=False)


def test_signed_power_examples():
    assert signed_power(-2.0, 3) == -8.0
    assert signed_power(0.0, Fraction(97, 101)) == 0.0
    assert signed_power(4.0, 0.5) == 2.0
    with pytest.raises(DomainError):
        signed_power(1.0, 0.0)


@given(finite, st.floats(0.01, 6.0))
def test_signed_power_is_odd_extension(x, r):
    assert signed_power(-x, r) == -signed_power(x, r)
    if x >= 0:
        assert signed_power(x, r) == pytest.approx(x**r, rel=1e-12)


def test_gain_defaults_and_validation():
    assert G.p == 3.0 and G.q_c == Fraction(99, 101)
    assert FixedTimeGains(q_c="99/101").q_c == Fraction(99, 101)
    with pytest.raises(ValueError):
        FixedTimeGains(p_c=1)
    with pytest.raises(ValueError):
        FixedTimeGains(q_c=Fraction(2, 3))
    with pytest.raises(ValueError):
        FixedTimeGains(q_c=Fraction(5, 3))
    with pytest.raises(ValueError):
        FixedTimeGains(k1=(0.5, 22.0))
    with pytest.raises(ValueError):
        FixedTimeGains(kappa1=(0.0, 1.0))
    with pytest.raises(ValueError):
        FixedTimeGains(k4=-1.0)


def test_variants():
    assert [v.label for v in ALL_VARIANTS] == ["IBLF", "TVIBLF", "FxTTVIBLF", "IBLF+NN", "TVIBLF+NN", "FxTTVIBLF+NN"]
    tv = ControllerVariant(ControllerKind.TVIBLF)
    g = tv.effective_gains(G)
    assert g.theta1 == g.theta2 == g.k2 == g.k3 == (0.0, 0.0)
    assert g.kappa1 == G.kappa1 and g.k1 == G.k1
    prof = barrier.ConstraintProfile()
    frozen = ControllerVariant("IBLF").controller_profile(prof)
    np.testing.assert_allclose(frozen.bound(20.0), prof.bound(0.0))
    assert ControllerVariant("FXT_TVIBLF").controller_profile(prof) is prof


KC, KDOT = np.array([0.53, 0.48]), np.array([0.01, -0.02])


def test_alpha_vanishes_without_drive():
    a = control.stabilizing_alpha(np.zeros(2), np.array([0.1, -0.2]), np.zeros(2), KC, np.zeros(2), G)
    np.testing.assert_array_equal(a, 0.0)


def test_alpha_reduces_to_tviblf_form():
    g = G.without_fixed_time()
    z1, xr, xrd = np.array([0.01, -0.02]), np.array([0.18, 0.05]), np.array([0.3, -0.1])
    a = control.stabilizing_alpha(z1, xr, xrd, KC, np.zeros(2), g)
    for i in range(2):
        gap = KC[i] ** 2 - (z1[i] + xr[i]) ** 2
        expect = barrier.rho(z1[i], xr[i], KC[i]) * xrd[i] * gap / KC[i] ** 2 - g.kappa1[i] * z1[i]
        assert a[i] == pytest.approx(expect, rel=1e-13)


def test_fixed_time_terms_are_restoring():
    z1, xr, xrd = np.array([0.02, 0.03]), np.array([0.1, 0.1]), np.array([0.2, 0.2])
    full = control.stabilizing_alpha(z1, xr, xrd, KC, KDOT, G)
    base = control.stabilizing_alpha(z1, xr, xrd, KC, KDOT, replace(G, theta1=(0.0, 0.0), theta2=(0.0, 0.0)))
    assert np.all(full - base < 0)


@given(st.floats(-0.3, 0.3), st.floats(-0.3, 0.3), st.floats(-1.0, 1.0))
def test_alpha_yields_fixed_time_barrier_decay(z1, xr, xrd):
    # With a frozen bound and x' = alpha, dV1/dt collapses to
    # -kappa1 s - theta1 s^p - theta2 s^q, s = kc^2 z1^2 / (kc^2 - eta^2).
    kc = 0.53
    eta = z1 + xr
    assume(abs(eta) < 0.95 * kc and abs(z1) > 1e-4)
    g = replace(G, kappa1=(5.0, 5.0), theta1=(10.0, 10.0), theta2=(20.0, 20.0))
    a = control.stabilizing_alpha([z1, 0.0], [xr, 0.0], [xrd, 0.0], [kc, kc], [0.0, 0.0], g)[0]
    h = 1e-7
    vdot = (
        barrier.v1_value(z1 + h * (a - xrd), xr + h * xrd, kc) - barrier.v1_value(z1 - h * (a - xrd), xr - h * xrd, kc)
    ) / (2 * h)
    s = kc * kc * z1 * z1 / (kc * kc - eta * eta)
    expect = -5.0 * s - 10.0 * s**g.p - 20.0 * s**g.q
    assert vdot == pytest.approx(expect, rel=1e-5, abs=1e-10)


def test_alpha_out_of_barrier():
    with pytest.raises(OutOfBarrier):
        control.stabilizing_alpha(np.array([0.5, 0.0]), np.array([0.1, 0.0]), np.zeros(2), KC, KDOT, G)


def test_alpha_derivative_examples():
    dt = 1e-3
    assert np.all(control.alpha_derivative([np.ones(2) * 3.0] * 2, dt) == 0.0)
    assert control.alpha_derivative([np.array([0.001]), np.array([0.002])], dt)[0] == 1.0
    t = np.arange(0.0, 1.0 + dt / 2, dt)
    est = np.array([control.alpha_derivative([[math.sin(a)], [math.sin(b)]], dt)[0] for a, b in zip(t[:-1], t[1:])])
    assert np.max(np.abs(est - np.cos(t[1:]))) < 1e-3
    with pytest.raises(DomainError):
        control.alpha_derivative([[0.0]], 0.0)


def test_differentiator_starts_at_zero():
    d = control.AlphaDifferentiator(0.01)
    np.testing.assert_array_equal(d.update([1.0, 2.0]), [0.0, 0.0])
    np.testing.assert_allclose(d.update([1.5, 1.0]), [50.0, -100.0])


def _coeffs(q=(0.5236, 2.0944), qd=(0.1, -0.2)):
    return dynamics.cartesian_coefficients(ROBOT, np.array(q), np.array(qd))


def test_model_based_zero_input():
    c = _coeffs()
    c = c._replace(Gx=np.zeros(2))
    u = control.control_model_based(c, ErrorState(np.zeros(2), np.zeros(2)), np.zeros(2), np.zeros(2),
                                    np.array([0.1, 0.2]), np.zeros(2), KC, G)
    np.testing.assert_array_equal(u, 0.0)


def test_velocity_feedback_isolation():
    c = _coeffs()._replace(Gx=np.zeros(2))
    z2 = np.array([0.3, -0.05])
    u = control.control_model_based(c, ErrorState(np.zeros(2), z2), np.zeros(2), np.zeros(2),
                                    np.zeros(2), np.zeros(2), KC, G)
    p, q = G.p, G.q
    expect = (
        -np.multiply(G.k1, z2)
        - np.multiply(G.k2, signed_power(z2, 2 * p - 1)) / 2**p
        - np.multiply(G.k3, signed_power(z2, 2 * q - 1)) / 2**q
    )
    np.testing.assert_allclose(u, expect, rtol=1e-14)


def test_force_feedforward_is_exact():
    c = _coeffs()
    err = ErrorState(np.array([0.01, -0.02]), np.array([0.05, 0.1]))
    args = (np.array([0.1, 0.2]), np.array([0.3, 0.4]), np.array([0.05, 0.2]))
    u0 = control.control_model_based(c, err, args[0], args[1], args[2], np.zeros(2), KC, G)
    u1 = control.control_model_based(c, err, args[0], args[1], args[2], np.array([2.0, 4.0]), KC, G)
    np.testing.assert_allclose(u1 - u0, [-2.0, -4.0], atol=1e-12)


def test_model_free_matches_model_based_with_ideal_network():
    c = _coeffs()
    alpha, alpha_dot = np.array([0.1, -0.3]), np.array([0.4, 0.2])
    err = ErrorState(np.array([0.01, -0.02]), np.array([0.05, 0.1]))
    eta, fe = np.array([0.05, 0.2]), np.array([1.0, 2.0])
    ideal = -(c.Gx + c.Fx + c.Mx @ alpha_dot + c.Cx @ alpha)
    u_free = control.control_model_free(ideal, err, eta, fe, KC, G)
    u_based = control.control_model_based(c, err, alpha, alpha_dot, eta, fe, KC, G, include_disturbance=True)
    np.testing.assert_allclose(u_free, u_based, rtol=0, atol=1e-12)
    np.testing.assert_array_equal(
        control.control_model_free(np.zeros(2), ErrorState(np.zeros(2), np.zeros(2)), eta, np.zeros(2), KC, G), 0.0
    )


@given(st.floats(-0.4, 0.4), st.floats(-0.4, 0.4), st.floats(-1, 1), st.floats(-1, 1), st.floats(-5, 5), st.floats(-5, 5))
def test_feedback_is_odd(z1a, z1b, z2a, z2b, fa, fb):
    z1, z2, fe = np.array([z1a, z1b]), np.array([z2a, z2b]), np.array([fa, fb])
    # xr = 0, so eta = z1
    u = control.control_model_free(np.zeros(2), ErrorState(z1, z2), z1, fe, KC, G)
    u_neg = control.control_model_free(np.zeros(2), ErrorState(-z1, -z2), -z1, -fe, KC, G)
    np.testing.assert_allclose(u_neg, -u, rtol=1e-14, atol=0)


def test_barrier_feedback_dominates_near_bound():
    mags = []
    for d in np.geomspace(1e-1, 1e-9, 9):
        eta = np.array([KC[0] * (1 - d), 0.0])
        u = control.control_model_free(np.zeros(2), ErrorState(eta - 0.1, np.zeros(2)), eta, np.zeros(2), KC, G)
        mags.append(np.linalg.norm(u))
    assert np.all(np.diff(mags) > 0) and mags[-1] > 1e7
    with pytest.raises(OutOfBarrier):
        control.barrier_feedback(np.zeros(2), np.array([0.53, 0.0]), KC)


def test_tmax_examples():
    q = Fraction(99, 101)
    assert control.tmax_bound(1, 1, 1, 3, q) == pytest.approx(51.0, rel=1e-14)
    assert control.tmax_bound(2, 2, 1, 3, q) == pytest.approx(25.5, rel=1e-14)
    assert control.tmax_bound(1, 1, 1, 3, 0.999999) > 1e5
    for bad in [(0, 1, 1, 3, q), (1, 1, 0, 3, q), (1, 1, 1.5, 3, q), (1, 1, 1, 1, q), (1, 1, 1, 3, 1.0)]:
        with pytest.raises(DomainError):
            control.tmax_bound(*bad)


def test_young_constants_positive_on_unit_interval():
    for q in np.linspace(0.01, 0.99, 50):
        n1, n2 = control.young_constants(q)
        assert n1 > 0 and n2 > 0


def test_model_based_bound_for_table_gains():
    c = control.fixed_time_coefficients(G, ROBOT, model_free=False)
    assert c.alpha == pytest.approx(0.25 * 0.0025, rel=1e-12)
    assert c.beta == pytest.approx(0.01, rel=1e-12)
    # 1/(alpha*2) + 1/(beta*2/101) = 800 + 5050
    assert control.convergence_bound(G, ROBOT, model_free=False) == pytest.approx(5850.0, rel=1e-12)


def test_model_free_bound_includes_weight_terms():
    c = control.fixed_time_coefficients(G, ROBOT, model_free=True)
    assert set(c.lambdas) == {f"lambda{i}" for i in range(1, 7)}
    assert c.lambdas["lambda5"] == pytest.approx(8 * 0.001 * 8.0**-2 * 2.0**-2, rel=1e-12)
    assert c.alpha == pytest.approx(3.0**-2 * min(c.lambdas["lambda1"], c.lambdas["lambda3"], c.lambdas["lambda5"]))
    assert control.convergence_bound(G, ROBOT, model_free=True) > control.convergence_bound(G, ROBOT, model_free=False)
