"""Brute-force reference computations used by the tests.

Nothing here calls into the code paths it is used to check.
"""
from __future__ import annotations

import mpmath
import numpy as np

C_LIGHT = 299_792_458


def secular_f(lam, eigenvalues, zbar):
    lam = np.asarray(lam, dtype=float)
    out = -np.ones_like(lam)
    for lj, zj in zip(eigenvalues, zbar):
        out += zj**2 / (lam + lj) ** 2
    return out


def dense_scan_roots(eigenvalues, zbar, n_points=1_000_000, dps=40, iters=90):
    """Sign changes of the secular function on a uniform grid, refined in mpmath.

    Returns ``(roots, tags)`` with the 1-based pole interval of each root.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    zb = np.asarray(zbar, dtype=float)
    zn = float(np.linalg.norm(zb))
    lo, hi = -lam[-1] - zn - 1.0, -lam[0] + zn + 1.0
    grid = np.linspace(lo, hi, n_points)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = secular_f(grid, lam, zb)
    ok = np.isfinite(vals)
    s = np.sign(vals)
    idx = np.nonzero(ok[:-1] & ok[1:] & (s[:-1] * s[1:] < 0))[0]

    mpmath.mp.dps = dps
    lam_mp = [mpmath.mpf(float(v)) for v in lam]
    z2_mp = [mpmath.mpf(float(v)) ** 2 for v in zb]

    def f_mp(x):
        return mpmath.fsum(z / (x + l) ** 2 for z, l in zip(z2_mp, lam_mp)) - 1

    roots = []
    for k in idx:
        a, b = mpmath.mpf(float(grid[k])), mpmath.mpf(float(grid[k + 1]))
        fa = f_mp(a)
        for _ in range(iters):
            m = (a + b) / 2
            fm = f_mp(m)
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b = m
        roots.append(float((a + b) / 2))
    tags = [1 + int(np.sum(r > -lam)) for r in roots]
    return np.array(roots), tags


def random_secular_problem(rng, d):
    lam = np.sort(rng.uniform(0.0, 1.0, d))
    zbar = rng.standard_normal(d) * 10 ** rng.uniform(-1.7, 0.3, d)
    return lam, zbar


def cone_cap_grid(b0, gamma_a, gamma_e, n_side=1000):
    """Points of the sphere ``||x|| = b0`` inside the cone, on a slope grid.

    Returns ``(points, delta)`` where ``delta`` bounds the distance from any
    feasible point to its nearest grid point.
    """
    u = np.linspace(-gamma_a, gamma_a, n_side)
    v = np.linspace(-gamma_e, gamma_e, n_side)
    U, V = np.meshgrid(u, v, indexing="ij")
    D = np.stack([np.ones_like(U), U, V], axis=-1).reshape(-1, 3)
    pts = b0 * D / np.linalg.norm(D, axis=1, keepdims=True)
    du = 2 * gamma_a / (n_side - 1)
    dv = 2 * gamma_e / (n_side - 1)
    # the slope-to-sphere map is b0-Lipschitz
    delta = 0.5 * b0 * np.hypot(du, dv)
    return pts, delta


def fibonacci_sphere(b0, n=1_000_000):
    """Near-uniform sphere points and a bound on the covering radius."""
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    r = np.sqrt(1 - z * z)
    phi = np.pi * (1 + 5**0.5) * k
    pts = b0 * np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    # generous covering radius for the Fibonacci lattice
    delta = 2.0 * b0 * np.sqrt(4 * np.pi / n)
    return pts, delta


def grid_minimum(H, g, pts, delta):
    """Minimum objective over the grid and a Lipschitz slack for the continuum."""
    R = pts @ H.T - g
    obj = np.einsum("ij,ij->i", R, R)
    grad = 2.0 * (R @ H)
    lip = np.max(np.linalg.norm(grad, axis=1)) + 2.0 * np.linalg.norm(H.T @ H, 2) * delta
    k = int(np.argmin(obj))
    return float(obj[k]), pts[k], float(lip * delta)


def delay_mp(p, r, dps=50):
    """Delay with ``p`` given as floats or mpf values (no float64 rounding)."""
    mpmath.mp.dps = dps
    p = [mpmath.mpf(v) for v in p]
    r = [mpmath.mpf(float(v)) for v in r]
    d1 = mpmath.sqrt(mpmath.fsum(v * v for v in p))
    d2 = mpmath.sqrt(mpmath.fsum((a - b) ** 2 for a, b in zip(p, r)))
    return (d1 + d2) / C_LIGHT


def _shifted(p, steps):
    # the step is added in extended precision; p + h in float64 loses ~1e-9
    return [mpmath.mpf(float(v)) + s for v, s in zip(p, steps)]


def delay_gradient_fd(p, r, h=1e-3):
    """Central differences of the delay, evaluated in extended precision."""
    mpmath.mp.dps = 50
    hm = mpmath.mpf(h)
    out = []
    for k in range(3):
        e = [hm if j == k else 0 for j in range(3)]
        me = [-v for v in e]
        out.append(float((delay_mp(_shifted(p, e), r) - delay_mp(_shifted(p, me), r)) / (2 * hm)))
    return np.array(out)


def expected_nll_hessian(p, nodes, sigmas, h=1.0):
    """Hessian of the expected negative log-likelihood at the true position.

    ``Q(q) = sum_i (tau_i(q) - tau_i(p))^2 / (2 sigma_i^2)`` has Hessian equal
    to the Fisher information at ``q = p``; it is differentiated numerically
    in extended precision.
    """
    mpmath.mp.dps = 60
    base = [delay_mp(p, r, 60) for r in nodes]
    s2 = [mpmath.mpf(float(s)) ** 2 for s in sigmas]

    def Q(q):
        return mpmath.fsum((delay_mp(q, r, 60) - t) ** 2 / (2 * s) for r, t, s in zip(nodes, base, s2))

    Hm = np.zeros((3, 3))
    hm = mpmath.mpf(h)
    for a in range(3):
        for b in range(3):
            def at(sa, sb):
                steps = [mpmath.mpf(0)] * 3
                steps[a] += sa * hm
                steps[b] += sb * hm
                return Q(_shifted(p, steps))

            val = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * hm * hm)
            Hm[a, b] = float(val)
    return Hm
