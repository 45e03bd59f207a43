"""Real roots of the normalized secular equation

    f(lam) = sum_j zbar_j^2 / (lam + lambda_j)^2 - 1

by bracketed bisection on the pole-delimited intervals.

Between consecutive poles ``f`` is strictly convex, so each interior interval
holds zero, one or two roots; the two outer intervals hold exactly one each.
Interior intervals are searched with a combined bisection that tracks the
derivative sign at the bracket ends and stops as soon as a negative value of
``f`` is seen, which then splits the interval into two sign-change brackets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# |zbar_j| below this multiple of machine epsilon (relative to the problem
# scale) cannot move a root away from its pole in double precision.
_VANISHING_ZBAR = 64.0 * np.finfo(float).eps
_COINCIDENT_EIG = 1e-12
_POLISH_STEPS = 30


@dataclass(frozen=True)
class SecularProblem:
    """Eigen-data of ``C`` and the normalized coefficients ``zbar = U^T y / b0_bar``."""

    eigenvalues: np.ndarray
    zbar: np.ndarray
    eigenvectors: np.ndarray = None
    b0_bar: float = 1.0

    def __post_init__(self):
        lam = np.array(self.eigenvalues, dtype=float)
        zb = np.array(self.zbar, dtype=float)
        if lam.ndim != 1 or lam.shape != zb.shape:
            raise ValueError("eigenvalues and zbar must be 1-D arrays of equal length")
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "zbar", zb)

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    def f(self, lam):
        lam = np.asarray(lam, dtype=float)
        d = lam[..., None] + self.eigenvalues
        return np.sum(self.zbar**2 / d**2, axis=-1) - 1.0

    def fprime(self, lam):
        lam = np.asarray(lam, dtype=float)
        d = lam[..., None] + self.eigenvalues
        return -2.0 * np.sum(self.zbar**2 / d**3, axis=-1)


def normalize(C, y, b0_bar: float) -> SecularProblem:
    """Eigen-decompose the symmetric PSD matrix ``C`` and project ``y``."""
    C = np.asarray(C, dtype=float)
    y = np.asarray(y, dtype=float)
    if not b0_bar > 0:
        raise ValueError(f"b0_bar must be positive, got {b0_bar}")
    if C.ndim != 2 or C.shape[0] != C.shape[1] or y.shape != (C.shape[0],):
        raise ValueError("C must be square and y must match its size")
    scale = max(np.max(np.abs(C)), np.finfo(float).tiny)
    if np.max(np.abs(C - C.T)) > 1e-12 * scale:
        raise ValueError("C is not symmetric")
    lam, U = np.linalg.eigh(0.5 * (C + C.T))
    # PSD round-off can produce tiny negative eigenvalues
    lam = np.maximum(lam, 0.0)
    return SecularProblem(lam, (U.T @ y) / b0_bar, U, float(b0_bar))


def bisection_iterations_bound(initial_width: float, epsilon: float) -> int:
    """Halvings needed to shrink ``initial_width`` to at most ``epsilon``."""
    if not initial_width > 0 or not epsilon > 0:
        raise ValueError("initial_width and epsilon must be positive")
    return max(0, math.ceil(math.log2(initial_width / epsilon)))


@dataclass
class RootSet:
    """Roots in ascending order with the interval each one belongs to.

    ``interval_tags[k]`` is the 1-based index of the pole interval holding
    ``roots[k]`` (1 is left of every pole, ``d + 1`` right of every pole).
    ``certified[k]`` is False for the pair emitted near an unresolved
    interior minimum; those may not be roots at all.
    """

    roots: np.ndarray
    interval_tags: list
    certified: list
    iterations: list = field(default_factory=list)  # (initial_width, iterations) per bisection
    vanished_poles: list = field(default_factory=list)  # eigen-indices whose zbar vanished
    degenerate: bool = False

    def __len__(self):
        return len(self.roots)


def _interval_tag(lam_root: float, eigenvalues: np.ndarray) -> int:
    # singularities left of the root, so J_1 is the leftmost interval
    return 1 + int(np.sum(lam_root > -eigenvalues))


class _Search:
    def __init__(self, poles, weights, epsilon):
        self.poles = poles
        self.weights = weights
        self.eps = epsilon
        self.iterations = []

    def f(self, lam):
        return float(np.sum(self.weights / (lam + self.poles) ** 2) - 1.0)

    def fp(self, lam):
        return float(-2.0 * np.sum(self.weights / (lam + self.poles) ** 3))

    def bisect(self, lo, hi, increasing):
        """Sign-change bisection on ``[lo, hi]``; returns (root, lo, hi)."""
        width = hi - lo
        if width <= 0:
            return lo, lo, hi
        n = bisection_iterations_bound(width, self.eps)
        done = 0
        for _ in range(n):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            done += 1
            fm = self.f(mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm < 0.0) == increasing:
                lo = mid
            else:
                hi = mid
        self.iterations.append((width, done))
        return 0.5 * (lo + hi), lo, hi

    def polish(self, x, lo, hi, increasing):
        """Safeguarded Newton inside the final bisection bracket."""
        for _ in range(_POLISH_STEPS):
            fx = self.f(x)
            if fx == 0.0:
                return x
            if (fx < 0.0) == increasing:
                lo = x
            else:
                hi = x
            step = fx / self.fp(x)
            xn = x - step
            if not lo < xn < hi:
                xn = 0.5 * (lo + hi)
            if xn == x or abs(xn - x) <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
                return xn
            x = xn
        return x

    def root(self, lo, hi, increasing, polish):
        x, blo, bhi = self.bisect(lo, hi, increasing)
        return self.polish(x, blo, bhi, increasing) if polish else x

    def interior_combined(self, a, b):
        """Combined bisection: derivative signs at the ends, value at the centre."""
        lo, hi = a, b
        n = bisection_iterations_bound(b - a, self.eps)
        done = 0
        for _ in range(n):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            done += 1
            if self.f(mid) < 0.0:
                self.iterations.append((b - a, done))
                return lo, mid, hi
            if self.fp(mid) > 0.0:
                hi = mid
            else:
                lo = mid
        self.iterations.append((b - a, done))
        return lo, 0.5 * (lo + hi), hi

    def interior_two_stage(self, a, b):
        """Minimum of ``f`` by bisection on ``f'`` from the half-interval start."""
        c = 0.5 * (a + b)
        lo, hi = (a, c) if self.fp(c) > 0 else (c, b)
        width = hi - lo
        n = bisection_iterations_bound(width, self.eps) if width > 0 else 0
        done = 0
        for _ in range(n):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            done += 1
            if self.fp(mid) > 0.0:
                hi = mid
            else:
                lo = mid
        self.iterations.append((width, done))
        return a, 0.5 * (lo + hi), b


def _merge_poles(lam, zb, tol_zero):
    """Collapse coincident eigenvalues and drop poles whose weight vanishes."""
    lam_max = max(float(lam[-1]), 1.0)
    poles, weights, vanished = [], [], []
    groups = []
    for j, lj in enumerate(lam):
        if groups and lj - lam[groups[-1][0]] <= _COINCIDENT_EIG * lam_max:
            groups[-1].append(j)
        else:
            groups.append([j])
    for grp in groups:
        w = float(np.sum(zb[grp] ** 2))
        if math.sqrt(w) <= tol_zero:
            vanished.extend(grp)
            continue
        poles.append(float(np.mean(lam[grp])))
        weights.append(w)
    return np.array(poles), np.array(weights), vanished


def secular_roots(
    problem: SecularProblem,
    epsilon: float = 1e-9,
    method: str = "combined",
    polish: bool = True,
) -> RootSet:
    """All real roots of the secular function of ``problem``.

    ``method`` selects the interior search: ``"combined"`` (single
    bisection-like sweep) or ``"two_stage"`` (minimizer first, then roots).
    With ``polish`` each bracketed root is refined by safeguarded Newton
    steps after the bisection has reached ``epsilon``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if method not in ("combined", "two_stage"):
        raise ValueError(f"unknown method {method!r}")
    lam, zb = problem.eigenvalues, problem.zbar
    znorm = float(np.linalg.norm(zb))
    if znorm == 0.0:
        return RootSet(np.empty(0), [], [], degenerate=True, vanished_poles=list(range(len(lam))))

    tol_zero = _VANISHING_ZBAR * max(float(lam[-1]), znorm, 1.0)
    poles, weights, vanished = _merge_poles(lam, zb, tol_zero)
    if len(poles) == 0:
        return RootSet(np.empty(0), [], [], degenerate=True, vanished_poles=vanished)

    # poles are eigenvalues; the singular points of f sit at -poles
    search = _Search(poles, weights, epsilon)
    wnorm = math.sqrt(float(np.sum(weights)))
    found = []  # (root, certified)

    # left of every singularity: f increases from -1 to +inf
    lo, hi = -poles[-1] - wnorm, -poles[-1] - math.sqrt(weights[-1])
    found.append((search.root(lo, hi, True, polish), True))
    # right of every singularity: f decreases from +inf to -1
    lo, hi = -poles[0] + math.sqrt(weights[0]), -poles[0] + wnorm
    found.append((search.root(lo, hi, False, polish), True))

    for k in range(len(poles) - 1, 0, -1):
        a, b = -poles[k], -poles[k - 1]
        if method == "combined":
            lo, pivot, hi = search.interior_combined(a, b)
        else:
            lo, pivot, hi = search.interior_two_stage(a, b)
        v = search.f(pivot)
        if v < 0.0:
            found.append((search.root(lo, pivot, False, polish), True))
            found.append((search.root(pivot, hi, True, polish), True))
        elif v == 0.0:
            found.append((pivot, True))
        else:
            slope = search.fp(pivot)
            if v - abs(slope) * epsilon / 2.0 > 0.0:
                continue
            # cannot certify absence: keep both ends of the half-eps bracket
            # on the side where the true minimizer lies
            other = pivot - epsilon / 2.0 if slope > 0 else pivot + epsilon / 2.0
            found.append((min(pivot, other), False))
            found.append((max(pivot, other), False))

    found.sort(key=lambda t: t[0])
    roots, cert = [], []
    for r, c in found:
        if roots and cert[-1] and c and abs(r - roots[-1]) <= 10 * epsilon:
            continue
        roots.append(r)
        cert.append(c)
    roots = np.array(roots)
    tags = [_interval_tag(r, lam) for r in roots]
    return RootSet(roots, tags, cert, search.iterations, vanished)
