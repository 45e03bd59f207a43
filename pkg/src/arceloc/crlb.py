"""Cramer-Rao bound for the Gaussian delay measurement model."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import SPEED_OF_LIGHT, SensorNetwork, as_position


@dataclass(frozen=True)
class FisherInfo:
    matrix: np.ndarray  # 3x3, 1/m^2


def delay_gradients(target, network: SensorNetwork) -> np.ndarray:
    """``(N + 1, 3)`` gradients of the noise-free delays w.r.t. the target (s/m)."""
    p = as_position(target)
    d = p - network.nodes()
    r_tx = np.linalg.norm(p)
    r_rx = np.linalg.norm(d, axis=1)
    if r_tx == 0 or np.any(r_rx == 0):
        raise ValueError("target coincides with the transmitter or a receiver")
    return (p / r_tx + d / r_rx[:, None]) / SPEED_OF_LIGHT


def delay_gradient(target, network: SensorNetwork, index: int) -> np.ndarray:
    network.node(index)
    return delay_gradients(target, network)[index]


def fisher_information(target, network: SensorNetwork, sigmas) -> FisherInfo:
    s = np.asarray(sigmas, dtype=float)
    if s.shape != (network.n_receivers + 1,):
        raise ValueError(f"expected {network.n_receivers + 1} sigmas, got shape {s.shape}")
    if np.any(s <= 0):
        raise ValueError("all sigmas must be positive")
    G = delay_gradients(target, network) / s[:, None]
    J = G.T @ G
    return FisherInfo(0.5 * (J + J.T))


def rcrlb(info: FisherInfo) -> float:
    """Root of the trace of the inverse FIM (m)."""
    J = np.asarray(info.matrix if isinstance(info, FisherInfo) else info, dtype=float)
    w, V = np.linalg.eigh(J)
    if w[0] <= 1e-12 * max(w[-1], np.finfo(float).tiny):
        raise np.linalg.LinAlgError(
            f"singular Fisher information; no information along direction {np.round(V[:, 0], 6).tolist()}"
        )
    return float(np.sqrt(np.sum(1.0 / w)))
