"""Reference estimators: unconstrained linear LS and range-only constrained LS."""
from __future__ import annotations

import numpy as np

from .arce import Estimate, stationary_points
from .measurement import LinearModel


def _check_rank(H):
    if np.linalg.matrix_rank(H) < H.shape[1]:
        raise np.linalg.LinAlgError("H is not full column rank")


def u_tdoa_estimate(model: LinearModel) -> Estimate:
    """Unconstrained least squares ``argmin ||H p - g||``."""
    _check_rank(model.H)
    x = np.linalg.lstsq(model.H, model.g, rcond=None)[0]
    return Estimate(x, float(model.objective(x)), "u_tdoa", 1)


def roce_estimate(model: LinearModel, epsilon: float = 1e-9) -> Estimate:
    """Least squares on the sphere ``||p|| = b0_bar``, ignoring the beam.

    Candidates are the stationary points of the sphere-constrained problem;
    when ``H^T g`` vanishes they degenerate to ``+/- b0_bar`` times the
    eigenvectors, which the same routine returns.
    """
    _check_rank(model.H)
    if not model.b0_bar > 0:
        raise ValueError("projected range must be positive")
    C = model.H.T @ model.H
    y = model.H.T @ model.g
    points = stationary_points(C, y, model.b0_bar, epsilon)
    best, best_obj, best_mu = None, np.inf, None
    for mu, x, _ in points:
        obj = float(model.objective(x))
        if obj < best_obj:
            best, best_obj, best_mu = x, obj, mu
    if best is None:
        raise np.linalg.LinAlgError("no stationary point on the range sphere")
    return Estimate(best, best_obj, "roce", len(points), best_mu)
