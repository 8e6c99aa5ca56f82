import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fxtbarrier.checks import dynamics_checks, integrator_order_check
from fxtbarrier.control import young_constants
from fxtbarrier.lemmas import LEMMAS, _Tally, lemma_suite, rational_power

odd = st.integers(0, 50).map(lambda k: 2 * k + 1)


def test_rational_power_parity():
    assert rational_power(-8.0, Fraction(1, 3)) == pytest.approx(-2.0)
    assert rational_power(-8.0, Fraction(2, 3)) == pytest.approx(4.0)
    assert rational_power(0.0, Fraction(5, 3)) == 0.0


def test_lemma4_equality_at_uniform_inputs():
    x, p = np.ones(2), 3.0
    assert 2 ** (1 - p) * x.sum() ** p == 2.0 == np.sum(x**p)


def test_young_equality_case():
    a = b = 2.0
    x = y = eps = 1.0
    assert x * y == eps**a / a * x**a + y**b / (b * eps**b)


def test_tally_reports_counterexample():
    tally = _Tally("probe")
    tally.check(1.0, 2.0, k=0)
    tally.check(3.0, 2.0, k=1)
    res = tally.finish()
    assert not res.passed and res.n_failures == 1 and res.counterexample["k"] == 1
    assert res.worst_excess == 1.0


@given(odd, odd, st.floats(-5, 5), st.floats(-5, 5))
def test_lemma3_property(a, b, W, W_hat):
    assume(a < b)
    q = Fraction(a, b)
    n1, n2 = young_constants(q)
    W_t = W - W_hat
    lhs = W_t * rational_power(W_hat, q)
    rhs = n1 * rational_power(W, q + 1) - n2 * rational_power(W_t, q + 1)
    assert lhs <= rhs + 1e-12 * (1 + abs(lhs) + abs(rhs))


@given(st.integers(1, 5), st.floats(1e-3, 5), st.floats(-20, 1))
def test_lemma5_property(k, a, frac):
    p = 2 * k + 1
    b = frac * a
    lhs = b * (a - b) ** p
    rhs = a ** (p + 1) - b ** (p + 1)
    assert lhs <= rhs + 1e-12 * (1 + abs(lhs) + abs(rhs))


@pytest.mark.parametrize("k", sorted(LEMMAS))
def test_each_lemma_small_suite(k):
    (res,) = lemma_suite(500, seed=3, lemmas=(k,), ode_samples=10)
    assert res.passed, str(res)


def test_dynamics_and_integrator_checks_pass():
    for r in dynamics_checks(n=200, seed=1) + [integrator_order_check()]:
        assert r.passed, str(r)


def test_suites_are_seeded():
    a = lemma_suite(200, seed=7, lemmas=(3, 7))
    b = lemma_suite(200, seed=7, lemmas=(3, 7))
    assert [r.worst_excess for r in a] == [r.worst_excess for r in b]
    assert all(math.isfinite(r.worst_excess) for r in a)
