"""Delay noise model, SNR scaling and the linearized localization model."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import SPEED_OF_LIGHT, SensorNetwork, as_position, bistatic_delays


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def sigma_from_snr(bandwidth, snr):
    """Delay standard deviation (s) for a given bandwidth (Hz) and linear SNR."""
    bandwidth = np.asarray(bandwidth, dtype=float)
    snr = np.asarray(snr, dtype=float)
    if np.any(bandwidth <= 0) or np.any(snr <= 0):
        raise ValueError("bandwidth and snr must be positive")
    out = 1.0 / (bandwidth * np.sqrt(2.0 * snr))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class NoiseModel:
    bandwidth: float
    per_link_sigma: np.ndarray

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        s = np.array(self.per_link_sigma, dtype=float)
        # zero sigma is allowed for noise-free simulation
        if s.ndim != 1 or np.any(s < 0) or not np.all(np.isfinite(s)):
            raise ValueError("per_link_sigma must be a 1-D array of finite non-negative values")
        object.__setattr__(self, "per_link_sigma", s)


@dataclass(frozen=True)
class SnrScenario:
    """Link budget: reference SNR at ``nominal_point`` and per-link losses."""

    snr0_ref: float
    nominal_point: np.ndarray
    loss_factors: np.ndarray

    def __post_init__(self):
        if not self.snr0_ref > 0:
            raise ValueError("snr0_ref must be positive")
        q0 = as_position(self.nominal_point)
        if not np.linalg.norm(q0) > 0:
            raise ValueError("nominal_point must differ from the origin")
        L = np.array(self.loss_factors, dtype=float)
        if L.ndim != 1 or np.any(L < 1.0):
            raise ValueError("loss factors must be linear ratios >= 1")
        object.__setattr__(self, "nominal_point", q0)
        object.__setattr__(self, "loss_factors", L)


def link_snrs(scenario: SnrScenario, target, network: SensorNetwork) -> np.ndarray:
    """SNR of every link (monostatic first) for a target at ``target``."""
    p = as_position(target)
    if len(scenario.loss_factors) != network.n_receivers + 1:
        raise ValueError(
            f"expected {network.n_receivers + 1} loss factors, got {len(scenario.loss_factors)}"
        )
    d_tx = np.linalg.norm(p)
    d_rx = np.linalg.norm(p - network.nodes(), axis=1)
    if d_tx == 0 or np.any(d_rx == 0):
        raise ValueError("target coincides with the transmitter or a receiver")
    q2 = float(scenario.nominal_point @ scenario.nominal_point)
    return scenario.snr0_ref / scenario.loss_factors * (q2 / d_tx**2) * (q2 / d_rx**2)


def link_snr(scenario: SnrScenario, target, network: SensorNetwork, index: int) -> float:
    network.node(index)  # range check
    return float(link_snrs(scenario, target, network)[index])


def noise_model_for(
    scenario: SnrScenario, target, network: SensorNetwork, bandwidth: float
) -> NoiseModel:
    return NoiseModel(bandwidth, sigma_from_snr(bandwidth, link_snrs(scenario, target, network)))


@dataclass(frozen=True)
class DelaySet:
    delays: np.ndarray
    sigmas: np.ndarray

    def __post_init__(self):
        d = np.array(self.delays, dtype=float)
        s = np.array(self.sigmas, dtype=float)
        if d.ndim != 1 or d.shape != s.shape:
            raise ValueError("delays and sigmas must be 1-D arrays of equal length")
        if len(d) < 4:
            raise ValueError("need the monostatic delay plus at least 3 bistatic delays")
        object.__setattr__(self, "delays", d)
        object.__setattr__(self, "sigmas", s)


def simulate_delays(target, network: SensorNetwork, noise: NoiseModel, rng_seed) -> DelaySet:
    """Noisy delays ``tau_i = tau~_i + n_i`` with independent Gaussian ``n_i``.

    ``rng_seed`` is anything accepted by :func:`numpy.random.default_rng`
    (an int, a ``SeedSequence`` or a ``Generator``).
    """
    if len(noise.per_link_sigma) != network.n_receivers + 1:
        raise ValueError("noise model size does not match the network")
    clean = bistatic_delays(target, network)
    rng = np.random.default_rng(rng_seed)
    return DelaySet(clean + noise.per_link_sigma * rng.standard_normal(clean.shape), noise.per_link_sigma)


def project_range(b0: float, range_bin) -> float:
    r_lo, r_hi = range_bin
    if r_lo > r_hi:
        raise ValueError(f"inverted range bin ({r_lo}, {r_hi})")
    return float(max(min(b0, r_hi), r_lo))


def default_range_bin(b0: float, bandwidth: float) -> tuple[float, float]:
    """Bin of one monostatic range resolution ``c / (2B)`` centred on ``b0``."""
    half = SPEED_OF_LIGHT / (4.0 * bandwidth)
    return (b0 - half, b0 + half)


@dataclass(frozen=True)
class LinearModel:
    """``H p = g`` with ``||p|| = b0``; rows of ``H`` are ``-2 p_ri^T``."""

    H: np.ndarray
    g: np.ndarray
    b0: float
    b0_bar: float
    range_bin: tuple

    def objective(self, x) -> np.ndarray:
        """Squared residual ``||H x - g||^2`` for ``(3,)`` or ``(n, 3)`` inputs."""
        r = np.asarray(x, dtype=float) @ self.H.T - self.g
        return np.sum(r * r, axis=-1)


def build_linear_model(delays, network: SensorNetwork, range_bin=None, bandwidth=None) -> LinearModel:
    """Linearize the delay equations.

    ``delays`` is a :class:`DelaySet` or a plain array of ``N + 1`` delays.
    Without ``range_bin`` the default bin around the measured ``b0`` is used,
    which requires ``bandwidth``.
    """
    tau = np.asarray(delays.delays if isinstance(delays, DelaySet) else delays, dtype=float)
    if tau.shape != (network.n_receivers + 1,):
        raise ValueError(f"expected {network.n_receivers + 1} delays, got shape {tau.shape}")
    b0 = SPEED_OF_LIGHT * tau[0] / 2.0
    b = SPEED_OF_LIGHT * tau[1:] - b0
    R = network.receivers
    g = b**2 - b0**2 - np.sum(R * R, axis=1)
    if range_bin is None:
        if bandwidth is None:
            raise ValueError("either range_bin or bandwidth is required")
        range_bin = default_range_bin(b0, bandwidth)
    range_bin = (float(range_bin[0]), float(range_bin[1]))
    return LinearModel(-2.0 * R, g, float(b0), project_range(b0, range_bin), range_bin)
