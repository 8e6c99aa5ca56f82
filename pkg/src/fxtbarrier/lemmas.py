"""Randomized numeric checks of the auxiliary inequalities used by the stability analysis.

Each check samples instances inside the lemma's hypotheses and reports how
many violate the inequality, keeping the worst offender as a counterexample.
Fractional exponents are exact rationals: odd numerators use the odd
extension ``signed_power``, even numerators use ``|x|**r``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from . import barrier
from .control import signed_power, young_constants
from .dynamics import RobotParams, mass_matrix

REL_TOL = 1e-12
# solver-level slack for the sign check of Lemma 6
ODE_SLACK = 1e-9


@dataclass
class LemmaResult:
    name: str
    n_samples: int
    n_failures: int = 0
    counterexample: dict | None = None
    worst_excess: float = -math.inf

    @property
    def passed(self) -> bool:
        return self.n_failures == 0 and self.n_samples > 0

    def __str__(self):
        status = "ok" if self.passed else f"FAILED ({self.n_failures} counterexamples)"
        line = f"{self.name}: {self.n_samples} samples, {status}"
        if self.counterexample is not None:
            line += f"; worst: {self.counterexample}"
        return line


@dataclass
class _Tally:
    name: str
    n: int = 0
    results: list = field(default_factory=list)

    def check(self, lhs, rhs, **sample):
        """Record ``lhs <= rhs`` up to a relative tolerance."""
        self.n += 1
        excess = lhs - rhs
        slack = REL_TOL * (1.0 + abs(lhs) + abs(rhs))
        self.results.append((excess - slack, excess, dict(sample, lhs=lhs, rhs=rhs)))

    def finish(self, n_samples=None) -> LemmaResult:
        """Summarize; ``n_samples`` overrides the count when one sample yields several checks."""
        res = LemmaResult(self.name, self.n if n_samples is None else n_samples)
        for margin, excess, sample in self.results:
            if margin > 0:
                res.n_failures += 1
                if excess > res.worst_excess:
                    res.worst_excess, res.counterexample = excess, sample
        if res.n_failures == 0 and self.results:
            res.worst_excess = max(e for _, e, _ in self.results)
        return res


def rational_power(x, r: Fraction):
    """Real power with the sign convention fixed by the parity of the numerator."""
    r = Fraction(r)
    if r.numerator % 2:
        return signed_power(x, r)
    return np.abs(x) ** float(r)


def _odd_ratio(rng, below_one=True, max_den=101) -> Fraction:
    while True:
        a = 2 * int(rng.integers(0, max_den // 2 + 1)) + 1
        b = 2 * int(rng.integers(0, max_den // 2 + 1)) + 1
        if a != b and (a < b) == below_one:
            return Fraction(a, b)


def lemma2(n, rng) -> LemmaResult:
    """IBLF bound ``V1 <= kc^2 z1^2 / (kc^2 - eta^2)``."""
    tally = _Tally("Lemma 2")
    for _ in range(n):
        kc = rng.uniform(0.05, 1.0)
        xr = rng.uniform(-0.99, 0.99) * kc
        eta = rng.uniform(-0.999, 0.999) * kc
        z1 = eta - xr
        tally.check(barrier.v1_value(z1, xr, kc), kc * kc * z1 * z1 / (kc * kc - eta * eta), z1=z1, xr=xr, kc=kc)
    return tally.finish()


def lemma3(n, rng) -> LemmaResult:
    """``W~ W^^q <= n1 W^(q+1) - n2 W~^(q+1)`` with ``W~ = W - W^``."""
    tally = _Tally("Lemma 3")
    for _ in range(n):
        q = _odd_ratio(rng)
        n1, n2 = young_constants(q)
        W, W_hat = rng.uniform(-5.0, 5.0, size=2)
        W_t = W - W_hat
        lhs = W_t * rational_power(W_hat, q)
        rhs = n1 * rational_power(W, q + 1) - n2 * rational_power(W_t, q + 1)
        tally.check(float(lhs), float(rhs), q=str(q), W=W, W_hat=W_hat)
    return tally.finish()


def lemma4(n, rng) -> LemmaResult:
    """Power-sum inequalities for ``p > 1`` and ``0 < q < 1`` on nonnegative inputs."""
    tally = _Tally("Lemma 4")
    for _ in range(n):
        m = int(rng.integers(1, 9))
        x = rng.uniform(0.0, 10.0, size=m) * (rng.random(m) > 0.1)
        p = 1.0 + rng.uniform(1e-3, 4.0)
        q = rng.uniform(1e-3, 1.0 - 1e-3)
        s = x.sum()
        tally.check(m ** (1.0 - p) * s**p, float(np.sum(x**p)), which="p", p=p, x=x.tolist())
        tally.check(s**q, float(np.sum(x**q)), which="q", q=q, x=x.tolist())
    return tally.finish(n)


def lemma5(n, rng) -> LemmaResult:
    """``b (a - b)^p <= a^(p+1) - b^(p+1)`` for ``a > 0``, ``b < a``, odd ``p > 1``."""
    tally = _Tally("Lemma 5")
    for _ in range(n):
        p = 2 * int(rng.integers(1, 6)) + 1
        a = rng.uniform(1e-3, 5.0)
        b = rng.uniform(-5.0, a)
        tally.check(b * (a - b) ** p, a ** (p + 1) - b ** (p + 1), a=a, b=b, p=p)
    return tally.finish()


def lemma6(n, rng) -> LemmaResult:
    """Nonnegativity of ``x' = -c1 x^(2mu-1) - c2 x^(2v-1) + sigma(t)`` from ``x(t0) >= 0``.

    Each instance is integrated with a tight adaptive solver; the inequality
    checked is ``-x(t) <= ODE_SLACK`` at the worst sample.
    """
    tally = _Tally("Lemma 6")
    for _ in range(n):
        # keep the positive equilibrium away from underflow so the solver stays well conditioned
        while True:
            mu = _odd_ratio(rng, below_one=False, max_den=15)
            if mu <= 3:
                break
        while True:
            v = _odd_ratio(rng, max_den=15)
            if 2 * v - 1 >= Fraction(1, 5):
                break
        c1, c2 = rng.uniform(0.1, 2.0, size=2)
        s0, s1, w = rng.uniform(0.1, 1.0), rng.uniform(0.0, 0.5), rng.uniform(0.1, 5.0)
        x0 = rng.uniform(0.0, 1.5) * (rng.random() > 0.2)

        def rhs(t, y):
            sigma = s0 + s1 * (1.0 + math.sin(w * t))
            return -c1 * rational_power(y, 2 * mu - 1) - c2 * rational_power(y, 2 * v - 1) + sigma

        with warnings.catch_warnings():
            # the x^(2v-1) term has an unbounded Jacobian at 0; LSODA copes but complains
            warnings.simplefilter("ignore", UserWarning)
            sol = solve_ivp(rhs, (0.0, 5.0), [x0], method="LSODA", rtol=1e-9, atol=1e-12)
        tally.check(-float(sol.y[0].min()), ODE_SLACK, mu=str(mu), v=str(v), c1=c1, c2=c2, x0=x0)
    return tally.finish()


def lemma7(n, rng) -> LemmaResult:
    """Young's inequality with conjugate exponents and a free scale."""
    tally = _Tally("Lemma 7")
    for _ in range(n):
        a = rng.uniform(1.01, 6.0)
        b = a / (a - 1.0)
        eps = math.exp(rng.uniform(-2.0, 2.0))
        x, y = rng.uniform(-10.0, 10.0, size=2)
        rhs = eps**a / a * abs(x) ** a + abs(y) ** b / (b * eps**b)
        tally.check(x * y, rhs, a=a, eps=eps, x=x, y=y)
    return tally.finish()


def lemma8(n, rng, robot: RobotParams | None = None) -> LemmaResult:
    """Rayleigh bounds on the manipulator inertia at random configurations."""
    robot = robot or RobotParams()
    tally = _Tally("Lemma 8")
    for _ in range(n):
        q = rng.uniform(-math.pi, math.pi, size=2)
        M = mass_matrix(robot, q)
        lo, hi = np.linalg.eigvalsh(M)[[0, -1]]
        x = rng.normal(size=2) * math.exp(rng.uniform(-3.0, 3.0))
        quad, sq = float(x @ M @ x), float(x @ x)
        tally.check(lo * sq, quad, side="lower", q=q.tolist(), x=x.tolist())
        tally.check(quad, hi * sq, side="upper", q=q.tolist(), x=x.tolist())
    return tally.finish(n)


LEMMAS = {2: lemma2, 3: lemma3, 4: lemma4, 5: lemma5, 6: lemma6, 7: lemma7, 8: lemma8}


def lemma_suite(n_samples=10_000, seed=0, lemmas=(2, 3, 4, 5, 6, 7, 8), ode_samples=50) -> list:
    """Run the selected lemma checks; Lemma 6 uses ``ode_samples`` integrations."""
    out = []
    for k in lemmas:
        rng = np.random.default_rng([seed, k])
        n = min(n_samples, ode_samples) if k == 6 else n_samples
        out.append(LEMMAS[k](n, rng))
    return out
