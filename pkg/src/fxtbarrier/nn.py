"""Gaussian RBF networks that estimate the lumped unknown dynamics per axis."""

from __future__ import annotations

import enum

import numpy as np

from .control import FixedTimeGains, signed_power

DEFAULT_CENTERS = (-25.0, -15.0, -5.0, -1.0, 1.0, 5.0, 15.0, 25.0)
DEFAULT_WIDTH = 40.0


class UpdateLaw(str, enum.Enum):
    FIXED_TIME = "FIXED_TIME"
    TRADITIONAL = "TRADITIONAL"


class RbfNetwork:
    """One shared hidden layer, one weight vector per output axis.

    Parameters
    ----------
    centers : (l, r) array
        Hidden-node centers in input space.
    width : float
        Common Gaussian width ``B``.
    n_axes : int
        Number of outputs; each gets its own weight vector.
    """

    def __init__(self, centers, width=DEFAULT_WIDTH, n_axes=2, law=UpdateLaw.FIXED_TIME, weights=None):
        self.centers = np.atleast_2d(np.asarray(centers, dtype=float))
        if not width > 0:
            raise ValueError(f"width must be positive, got {width}")
        self.width = float(width)
        self.law = UpdateLaw(law)
        n_nodes = self.centers.shape[0]
        if weights is None:
            weights = np.zeros((n_axes, n_nodes))
        self.weights = np.array(weights, dtype=float)
        if self.weights.shape != (n_axes, n_nodes):
            raise ValueError(f"weights must have shape {(n_axes, n_nodes)}")

    @classmethod
    def from_scalar_centers(cls, values=DEFAULT_CENTERS, width=DEFAULT_WIDTH, n_inputs=8, n_axes=2, **kw):
        """Node j is centred at ``values[j]`` replicated across every input dimension."""
        centers = np.repeat(np.asarray(values, dtype=float)[:, None], n_inputs, axis=1)
        return cls(centers, width, n_axes, **kw)

    @property
    def n_nodes(self) -> int:
        return self.centers.shape[0]

    def basis(self, Z) -> np.ndarray:
        d = np.asarray(Z, dtype=float)[None, :] - self.centers
        return np.exp(-np.einsum("ij,ij->i", d, d) / self.width**2)

    def output(self, Z, S=None) -> np.ndarray:
        """Per-axis estimate ``W_i^T S(Z)``."""
        if S is None:
            S = self.basis(Z)
        return self.weights @ S

    def update_fixed_time(self, Z, z2, dt, gains: FixedTimeGains, S=None) -> np.ndarray:
        """Euler step of ``W' = S z2 - k4 W^(2p-1) - k5 W^(2q-1)`` (odd powers)."""
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        if S is None:
            S = self.basis(Z)
        W = self.weights
        rate = (
            np.outer(np.asarray(z2, dtype=float), S)
            - gains.k4 * signed_power(W, 2 * gains.p - 1)
            - gains.k5 * signed_power(W, 2 * gains.q - 1)
        )
        self.weights = W + dt * rate
        return self.weights

    def update_traditional(self, Z, z2, dt, sigma_mod, rate, S=None) -> np.ndarray:
        """Euler step of the sigma-modified gradient law ``W' = rate (S z2 - sigma W)``."""
        if dt <= 0 or rate <= 0 or sigma_mod < 0:
            raise ValueError("need dt > 0, rate > 0 and sigma_mod >= 0")
        if S is None:
            S = self.basis(Z)
        W = self.weights
        self.weights = W + dt * rate * (np.outer(np.asarray(z2, dtype=float), S) - sigma_mod * W)
        return self.weights
