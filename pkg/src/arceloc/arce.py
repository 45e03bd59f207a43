"""Angular and range constrained estimator (ARCE).

Minimizes ``||H p - g||^2`` over the sphere ``||p|| = b0_bar`` intersected
with the beam cone ``|y| <= gamma_a x``, ``|z| <= gamma_e x``, ``x >= 0``.
The global optimum is picked among a finite candidate set: stationary points
on the open cone, on each of the four faces, and the four cone edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import logging

import numpy as np

from .geometry import BeamCone, SensorNetwork, cone_margin
from .measurement import LinearModel, build_linear_model
from .secular import normalize, secular_roots

logger = logging.getLogger(__name__)

FAMILIES = ("interior", "azimuth_face", "elevation_face", "corner")
MAX_CANDIDATES = 26

FEASIBILITY_RTOL = 1e-6  # sphere constraint, relative to b0_bar
CONE_TOL = 1e-9  # cone inequalities, relative to b0_bar
_SINGULAR_GAP = 1e-10  # normalized multiplier units
_DEDUP_RTOL = 1e-6


@dataclass(frozen=True)
class Candidate:
    position: np.ndarray
    family: str
    index: tuple = ()
    multiplier: float | None = None
    objective: float = np.nan
    certified: bool = True

    @property
    def order_key(self) -> int:
        """Position of the candidate's family in the enumeration order."""
        if self.family == "interior":
            return 0
        if self.family == "azimuth_face":
            return self.index[0]
        if self.family == "elevation_face":
            return 2 + self.index[0]
        if self.family == "corner":
            i, j = self.index
            return 4 + i + 2 * (j - 1)
        return 9


@dataclass
class Estimate:
    position: np.ndarray
    objective: float
    winning_family: str
    candidate_count: int
    multiplier: float | None = None
    candidates: list = field(default_factory=list, repr=False)


def stationary_points(C, y, b0_bar: float, epsilon: float = 1e-9):
    """Solutions of ``(C + mu I) x = y`` with ``||x|| = b0_bar``.

    Returns ``(mu, x, certified)`` triples. The multiplier is found on the
    trace-normalized problem so that ``epsilon`` is relative to the spectrum.
    Poles whose weight vanishes contribute the pseudo-inverse points
    ``x_p +/- t u_j`` when those reach the sphere.
    """
    C = np.asarray(C, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = float(np.trace(C))
    if not scale > 0:
        raise ValueError("C must be non-zero")
    prob = normalize(C / scale, y / scale, b0_bar)
    rs = secular_roots(prob, epsilon)
    lam, U = prob.eigenvalues, prob.eigenvectors
    z = prob.zbar * b0_bar
    ys = y / scale
    lam_max = max(lam[-1], 1.0)
    out = []
    for rho, cert in zip(rs.roots, rs.certified):
        shifted = rho + lam
        near = np.abs(shifted) < _SINGULAR_GAP
        coef = np.where(near, 0.0, z / np.where(near, 1.0, shifted))
        x = U @ coef
        if np.any(near):
            resid = np.linalg.norm((C / scale) @ x + rho * x - ys)
            if resid > 1e-8 * max(np.linalg.norm(ys), 1e-300):
                logger.debug("dropping multiplier %.3e: singular system has no solution", rho)
                continue
        out.append((rho * scale, x, cert))
    for j in rs.vanished_poles:
        same = np.abs(lam - lam[j]) <= 1e-12 * lam_max
        gap = lam - lam[j]
        coef = np.where(same, 0.0, z / np.where(same, 1.0, gap))
        xp = U @ coef
        t2 = b0_bar**2 - xp @ xp
        if t2 < 0:
            continue
        t = np.sqrt(t2)
        for sgn in (1.0, -1.0):
            out.append((-lam[j] * scale, xp + sgn * t * U[:, j], True))
    return out


def _on_sphere(x, b0_bar) -> bool:
    return abs(np.linalg.norm(x) - b0_bar) <= FEASIBILITY_RTOL * b0_bar


def interior_candidates(model: LinearModel, beam: BeamCone, epsilon: float = 1e-9) -> list:
    """Stationary points of the sphere-constrained problem strictly inside the cone."""
    b0 = model.b0_bar
    tol = CONE_TOL * b0
    C = model.H.T @ model.H
    y = model.H.T @ model.g
    out = []
    for mu, x, cert in stationary_points(C, y, b0, epsilon):
        if not _on_sphere(x, b0) or cone_margin(x, beam.gamma_a, beam.gamma_e) < -tol:
            continue
        out.append(Candidate(x, "interior", (), mu, float(model.objective(x)), cert))
    return out


def _face_candidates(model, beam, epsilon, family):
    b0 = model.b0_bar
    tol = CONE_TOL * b0
    C = model.H.T @ model.H
    y = model.H.T @ model.g
    ga, ge = beam.gamma_a, beam.gamma_e
    # slope of the active face and of the remaining free inequality
    slope, other = (ga, ge) if family == "azimuth_face" else (ge, ga)
    w = np.array([1.0 / np.sqrt(1.0 + slope**2), 1.0])
    out = []
    for i in (1, 2):
        s = 1.0 if i == 1 else -1.0
        T = np.zeros((3, 2))
        T[0, 0] = 1.0
        if family == "azimuth_face":
            T[1, 0], T[2, 1] = s * slope, 1.0
        else:
            T[2, 0], T[1, 1] = s * slope, 1.0
        C2 = T.T @ C @ T
        y2 = T.T @ y
        # whiten q^T B q = b0^2 into a plain sphere
        Cw = C2 * np.outer(w, w)
        yw = y2 * w
        for mu, u, cert in stationary_points(Cw, yw, b0, epsilon):
            q = w * u
            if q[0] < -tol or other * q[0] - abs(q[1]) < -tol:
                continue
            x = T @ q
            if not _on_sphere(x, b0):
                continue
            out.append(Candidate(x, family, (i,), mu, float(model.objective(x)), cert))
    return out


def azimuth_face_candidates(model: LinearModel, beam: BeamCone, epsilon: float = 1e-9) -> list:
    """Candidates on the faces ``y = +gamma_a x`` (index 1) and ``y = -gamma_a x`` (index 2)."""
    return _face_candidates(model, beam, epsilon, "azimuth_face")


def elevation_face_candidates(model: LinearModel, beam: BeamCone, epsilon: float = 1e-9) -> list:
    """Candidates on the faces ``z = +gamma_e x`` (index 1) and ``z = -gamma_e x`` (index 2)."""
    return _face_candidates(model, beam, epsilon, "elevation_face")


def corner_candidates(b0_bar: float, beam: BeamCone, model: LinearModel | None = None) -> list:
    """The four cone edges intersected with the sphere."""
    if not b0_bar > 0:
        raise ValueError("b0_bar must be positive")
    ga, ge = beam.gamma_a, beam.gamma_e
    alpha = b0_bar / np.sqrt(1.0 + ga**2 + ge**2)
    out = []
    for j in (1, 2):
        for i in (1, 2):
            x = alpha * np.array([1.0, (-1.0) ** (1 + i) * ga, (-1.0) ** (1 + j) * ge])
            obj = float(model.objective(x)) if model is not None else np.nan
            out.append(Candidate(x, "corner", (i, j), None, obj))
    return out


def select_optimum(candidates, model: LinearModel) -> Estimate:
    """Candidate with the smallest ``||H x - g||^2``; ties go to the earlier family."""
    if not candidates:
        raise ValueError("no candidates to select from")
    ranked = sorted(enumerate(candidates), key=lambda t: (t[1].order_key, t[0]))
    best, best_obj = None, np.inf
    for _, c in ranked:
        obj = float(model.objective(c.position))
        if obj < best_obj:
            best, best_obj = c, obj
    return Estimate(
        best.position.copy(), best_obj, best.family, len(candidates), best.multiplier,
        [c for _, c in ranked],
    )


def _deduplicate(candidates, b0_bar):
    kept = []
    for c in sorted(candidates, key=lambda c: c.order_key):
        for k, other in enumerate(kept):
            if np.linalg.norm(c.position - other.position) < _DEDUP_RTOL * b0_bar:
                if c.objective < other.objective:
                    kept[k] = c
                break
        else:
            kept.append(c)
    return kept


def arce_candidates(model: LinearModel, beam: BeamCone, epsilon: float = 1e-9) -> list:
    """Every candidate family, in enumeration order, before deduplication."""
    return (
        interior_candidates(model, beam, epsilon)
        + azimuth_face_candidates(model, beam, epsilon)
        + elevation_face_candidates(model, beam, epsilon)
        + corner_candidates(model.b0_bar, beam, model)
    )


def solve_model(model: LinearModel, beam: BeamCone, epsilon: float = 1e-9) -> Estimate:
    """ARCE on a model already expressed in the beam frame."""
    if not model.b0_bar > 0:
        raise ValueError("projected range must be positive")
    cands = arce_candidates(model, beam, epsilon)
    n_generated = len(cands)
    est = select_optimum(_deduplicate(cands, model.b0_bar), model)
    est.candidate_count = n_generated
    return est


def arce_estimate(
    delays,
    network: SensorNetwork,
    beam: BeamCone,
    range_bin=None,
    epsilon: float = 1e-9,
    bandwidth: float | None = None,
) -> Estimate:
    """Full pipeline from delays to a world-frame position estimate.

    Receivers are rotated into the beam frame (boresight along +x), the
    problem is solved there and the estimate is rotated back. Candidate
    positions stay in the beam frame.
    """
    local = network.rotated(-beam.boresight_azimuth) if beam.boresight_azimuth else network
    model = build_linear_model(delays, local, range_bin, bandwidth)
    est = solve_model(model, beam, epsilon)
    if beam.boresight_azimuth:
        est.position = beam.to_world_frame(est.position)
    return est
