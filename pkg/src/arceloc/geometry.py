"""Coordinate conventions, bistatic delays and beam-cone membership.

The transmitter (and monostatic receiver) sits at the origin. Receivers are
stored as an ``(N, 3)`` array in meters. Azimuth is ``atan2(y, x)`` and
elevation is measured in the x-z plane as ``atan2(z, x)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


def as_position(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise ValueError(f"position must have shape (3,), got {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("position components must be finite")
    return p


@dataclass(frozen=True)
class SensorNetwork:
    """Transmitter at the origin plus ``N`` receive-only nodes."""

    receivers: np.ndarray

    def __post_init__(self):
        r = np.array(self.receivers, dtype=float)
        if r.ndim != 2 or r.shape[1] != 3:
            raise ValueError(f"receivers must have shape (N, 3), got {r.shape}")
        if r.shape[0] < 3:
            raise ValueError(f"at least 3 receivers are required, got {r.shape[0]}")
        if not np.all(np.isfinite(r)):
            raise ValueError("receiver coordinates must be finite")
        if np.any(np.linalg.norm(r, axis=1) == 0.0):
            raise ValueError("a receiver coincides with the transmitter at the origin")
        if np.linalg.matrix_rank(r) < 3:
            raise ValueError("receiver coordinate matrix is rank deficient")
        r.setflags(write=False)
        object.__setattr__(self, "receivers", r)

    @property
    def n_receivers(self) -> int:
        return self.receivers.shape[0]

    def node(self, index: int) -> np.ndarray:
        """Position of node ``index``; 0 is the monostatic node at the origin."""
        if not 0 <= index <= self.n_receivers:
            raise IndexError(f"node index {index} outside 0..{self.n_receivers}")
        if index == 0:
            return np.zeros(3)
        return self.receivers[index - 1]

    def nodes(self) -> np.ndarray:
        """All ``N + 1`` node positions, origin first."""
        return np.vstack([np.zeros(3), self.receivers])

    def rotated(self, angle: float) -> "SensorNetwork":
        return SensorNetwork(self.receivers @ rotation_z(angle).T)

    def with_receiver(self, position) -> "SensorNetwork":
        return SensorNetwork(np.vstack([self.receivers, as_position(position)]))


@dataclass(frozen=True)
class BeamCone:
    """Main-lobe cone of the monostatic antenna.

    ``theta_bar`` and ``phi_bar`` are the half-beamwidths (radians) in the
    x-y and x-z planes of the beam frame; ``boresight_azimuth`` rotates the
    beam axis about z.
    """

    theta_bar: float
    phi_bar: float
    boresight_azimuth: float = 0.0
    gamma_a: float = field(init=False)
    gamma_e: float = field(init=False)

    def __post_init__(self):
        for name in ("theta_bar", "phi_bar"):
            v = float(getattr(self, name))
            if not 0.0 <= v < np.pi / 2:
                raise ValueError(f"{name} must lie in [0, pi/2), got {v}")
            object.__setattr__(self, name, v)
        if not np.isfinite(self.boresight_azimuth):
            raise ValueError("boresight_azimuth must be finite")
        object.__setattr__(self, "boresight_azimuth", float(self.boresight_azimuth))
        object.__setattr__(self, "gamma_a", float(np.tan(self.theta_bar)))
        object.__setattr__(self, "gamma_e", float(np.tan(self.phi_bar)))

    @classmethod
    def from_degrees(cls, theta_bar, phi_bar, boresight_azimuth=0.0) -> "BeamCone":
        return cls(np.deg2rad(theta_bar), np.deg2rad(phi_bar), np.deg2rad(boresight_azimuth))

    def to_beam_frame(self, points) -> np.ndarray:
        """Rotate world coordinates (``(3,)`` or ``(n, 3)``) into the beam frame."""
        return np.asarray(points, dtype=float) @ rotation_z(-self.boresight_azimuth).T

    def to_world_frame(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ rotation_z(self.boresight_azimuth).T


def rotation_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def bistatic_delay(target, network: SensorNetwork, index: int) -> float:
    """Noise-free delay (s) of the transmitter -> target -> node ``index`` path."""
    p = as_position(target)
    r = network.node(index)
    return (np.linalg.norm(p) + np.linalg.norm(p - r)) / SPEED_OF_LIGHT


def bistatic_delays(target, network: SensorNetwork) -> np.ndarray:
    """All ``N + 1`` noise-free delays, monostatic first."""
    p = as_position(target)
    return (np.linalg.norm(p) + np.linalg.norm(p - network.nodes(), axis=1)) / SPEED_OF_LIGHT


def cone_margin(points, gamma_a: float, gamma_e: float) -> np.ndarray:
    """Smallest slack of the linear cone inequalities (negative when violated).

    Works on beam-frame coordinates of shape ``(3,)`` or ``(n, 3)``.
    """
    pts = np.asarray(points, dtype=float)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    return np.minimum.reduce([x, gamma_a * x - np.abs(y), gamma_e * x - np.abs(z)])


def in_beam(target, beam: BeamCone, tol: float = 0.0) -> bool:
    """Whether ``target`` (world frame) lies inside the beam cone.

    ``tol`` widens every inequality by an absolute amount in meters.
    """
    p = beam.to_beam_frame(as_position(target))
    return bool(cone_margin(p, beam.gamma_a, beam.gamma_e) >= -tol)


def place_target(range_m: float, azimuth: float, elevation: float) -> np.ndarray:
    """Cartesian position at ``range_m`` along the given azimuth/elevation."""
    if not range_m > 0:
        raise ValueError(f"range must be positive, got {range_m}")
    return range_m * np.array(
        [
            np.cos(azimuth) * np.cos(elevation),
            np.sin(azimuth) * np.cos(elevation),
            np.sin(elevation),
        ]
    )


def target_angles(p) -> tuple[float, float]:
    """(azimuth, elevation) with elevation taken in the x-z plane.

    This is the convention of the beam cone; it differs from the spherical
    elevation used by :func:`place_target` away from zero azimuth.
    """
    p = as_position(p)
    return float(np.arctan2(p[1], p[0])), float(np.arctan2(p[2], p[0]))


def spherical_coordinates(p) -> tuple[float, float, float]:
    """Inverse of :func:`place_target`: (range, azimuth, elevation)."""
    p = as_position(p)
    return (
        float(np.linalg.norm(p)),
        float(np.arctan2(p[1], p[0])),
        float(np.arctan2(p[2], np.hypot(p[0], p[1]))),
    )
