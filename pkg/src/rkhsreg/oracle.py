"""Brute-force reference minimizer used to validate every production solver.

Procedure: evaluate the objective on a uniform grid over a box, refine the
best grid points plus random starts (32 starts in total) with a coarse
Nelder-Mead run each, then polish the winner with tight Nelder-Mead runs
from shrinking simplices.
Constraints enter through an optional projection (applied row-wise to
arrays of points): the oracle minimizes
``fn(project(x)) + ||x - project(x)||^2`` and reports ``project(x)``.  That
function agrees with ``fn`` on the feasible set and is never smaller
outside it, so it has the same minimum; the distance term keeps simplices
from stalling in directions where ``fn(project(x))`` is flat.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize

from .rng import substream

GRID_CHUNK = 1 << 18


@dataclass
class OracleResult:
    x: np.ndarray
    value: float
    converged: bool
    evaluations: int


def grid_search(batch_fn: Callable[[np.ndarray], np.ndarray], dim: int,
                bounds: tuple[float, float], step: float) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive evaluation on ``arange(lo, hi + step/2, step)`` per axis.

    Returns the grid points sorted by objective value (best first, at most 64).
    """
    axis = np.arange(bounds[0], bounds[1] + step / 2, step)
    total = axis.size ** dim
    best_x = np.zeros((0, dim))
    best_v = np.zeros(0)
    for start in range(0, total, GRID_CHUNK):
        idx = np.arange(start, min(total, start + GRID_CHUNK))
        pts = np.stack([axis[(idx // axis.size ** k) % axis.size] for k in range(dim)], axis=1)
        vals = np.asarray(batch_fn(pts), dtype=float)
        vals = np.where(np.isnan(vals), math.inf, vals)
        best_x = np.vstack([best_x, pts])
        best_v = np.concatenate([best_v, vals])
        order = np.argsort(best_v, kind="stable")[:64]
        best_x, best_v = best_x[order], best_v[order]
    return best_x, best_v


def brute_force_minimize(fn: Callable[[np.ndarray], float], dim: int,
                         bounds: tuple[float, float] = (-3.0, 3.0),
                         step: Optional[float] = None,
                         batch_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                         starts: int = 32, seed: int = 0,
                         project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                         xatol: float = 1e-12) -> OracleResult:
    proj = project or (lambda x: x)

    def g(x):
        x = np.asarray(x, dtype=float)
        px = proj(x)
        v = float(fn(px)) + float(np.sum((x - px) ** 2))
        return math.inf if math.isnan(v) else v

    if batch_fn is None:
        def batch(X):
            return np.array([g(x) for x in X])
    elif project is None:
        batch = batch_fn
    else:
        def batch(X):
            PX = proj(X)
            return batch_fn(PX) + np.sum((X - PX) ** 2, axis=1)

    if step is None:
        per_axis = {1: 401, 2: 61, 3: 21}.get(dim, 7)
        step = (bounds[1] - bounds[0]) / (per_axis - 1)
    gx, gv = grid_search(batch, dim, bounds, step)

    rng = substream(seed, "oracle")
    n_grid = min(8, gx.shape[0])
    inits = [gx[i] for i in range(n_grid)]
    inits += list(rng.uniform(bounds[0], bounds[1], size=(max(0, starts - n_grid), dim)))

    evals = 0
    best = (gx[0].copy(), float(gv[0]))
    coarse = dict(xatol=1e-7, fatol=1e-13, maxiter=4000 * dim, adaptive=dim > 2)
    for x0 in inits:
        res = minimize(g, x0, method="Nelder-Mead", options=coarse)
        evals += res.nfev
        if res.fun < best[1]:
            best = (res.x.copy(), float(res.fun))
    # polish the winner from shrinking simplices around it
    x = best[0]
    converged = False
    for scale in (1e-3, 1e-5, 1e-7):
        simplex = np.vstack([x] + [x + scale * e for e in np.eye(dim)])
        fine = dict(xatol=xatol, fatol=1e-15, maxiter=20000 * dim, adaptive=dim > 2,
                    initial_simplex=simplex)
        res = minimize(g, x, method="Nelder-Mead", options=fine)
        evals += res.nfev
        converged = bool(res.success)
        if res.fun <= best[1]:
            best = (res.x.copy(), float(res.fun))
            x = res.x
    return OracleResult(proj(best[0]), best[1], converged, evals)

