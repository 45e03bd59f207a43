"""scikit-learn style wrappers around the localizers.

Each row of ``X`` holds the ``N + 1`` measured delays (s) of one fix,
monostatic first; ``predict`` returns an ``(n_samples, 3)`` array of
positions in meters.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .arce import arce_estimate
from .baselines import roce_estimate, u_tdoa_estimate
from .geometry import SPEED_OF_LIGHT, BeamCone, SensorNetwork
from .measurement import build_linear_model


class _DelayLocalizer(RegressorMixin, BaseEstimator):
    def __init__(self, receivers=None, bandwidth=2e6, range_bin_halfwidth=None, epsilon=1e-9):
        self.receivers = receivers
        self.bandwidth = bandwidth
        self.range_bin_halfwidth = range_bin_halfwidth
        self.epsilon = epsilon

    def fit(self, X=None, y=None):
        """Validate the receiver geometry; ``X`` and ``y`` are optional."""
        if self.receivers is None:
            raise ValueError("receivers must be given (N x 3 array in meters)")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        self.network_ = SensorNetwork(np.asarray(self.receivers, dtype=float))
        self.n_features_in_ = self.network_.n_receivers + 1
        if X is not None:
            self._check_X(X)
        return self

    def _check_X(self, X):
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_} delays")
        return X

    def _range_bin(self, tau0):
        half = self.range_bin_halfwidth
        if half is None:
            half = SPEED_OF_LIGHT / (4.0 * self.bandwidth)
        b0 = SPEED_OF_LIGHT * tau0 / 2.0
        return (b0 - half, b0 + half)

    def estimate(self, X) -> list:
        """Full :class:`~arceloc.arce.Estimate` objects, one per row."""
        check_is_fitted(self, "network_")
        return [self._estimate_row(row) for row in self._check_X(X)]

    def predict(self, X) -> np.ndarray:
        return np.array([e.position for e in self.estimate(X)]).reshape(-1, 3)


class ArceLocalizer(_DelayLocalizer):
    """Beam- and range-constrained least squares localizer.

    Parameters
    ----------
    receivers : array of shape (N, 3)
        Receiver positions in meters; the transmitter is at the origin.
    theta_bar, phi_bar : float
        Azimuth and elevation half-beamwidths in degrees.
    boresight : float
        Beam axis azimuth in degrees.
    bandwidth : float
        Signal bandwidth in Hz; sets the default range bin.
    range_bin_halfwidth : float, optional
        Half-width of the range bin around the measured range, meters.
    epsilon : float
        Bisection accuracy in normalized multiplier units.
    """

    def __init__(
        self,
        receivers=None,
        theta_bar=7.0,
        phi_bar=5.0,
        boresight=0.0,
        bandwidth=2e6,
        range_bin_halfwidth=None,
        epsilon=1e-9,
    ):
        super().__init__(receivers, bandwidth, range_bin_halfwidth, epsilon)
        self.theta_bar = theta_bar
        self.phi_bar = phi_bar
        self.boresight = boresight

    def fit(self, X=None, y=None):
        self.beam_ = BeamCone.from_degrees(self.theta_bar, self.phi_bar, self.boresight)
        return super().fit(X, y)

    def _estimate_row(self, tau):
        return arce_estimate(tau, self.network_, self.beam_, self._range_bin(tau[0]), self.epsilon)


class RoceLocalizer(_DelayLocalizer):
    """Least squares on the measured range sphere, without the beam constraint."""

    def _estimate_row(self, tau):
        model = build_linear_model(tau, self.network_, self._range_bin(tau[0]))
        return roce_estimate(model, self.epsilon)


class UTdoaLocalizer(_DelayLocalizer):
    """Unconstrained linear least squares."""

    def _estimate_row(self, tau):
        model = build_linear_model(tau, self.network_, self._range_bin(tau[0]))
        return u_tdoa_estimate(model)
