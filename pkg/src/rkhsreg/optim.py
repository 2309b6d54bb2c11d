"""Small numerical building blocks shared by the solvers and the probes."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.optimize import brentq

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class NumericalError(RuntimeError):
    """A solver could not produce a trustworthy answer."""

    def __init__(self, message: str, **report):
        super().__init__(message)
        self.report = report


class InfeasibleError(NumericalError):
    pass


def _pick(grid: np.ndarray, values: np.ndarray) -> int:
    # ties: smallest nonnegative abscissa, else the negative one closest to 0
    best = np.flatnonzero(values == values.min())
    nonneg = best[grid[best] >= 0]
    return int(nonneg[0]) if nonneg.size else int(best[-1])


def golden_section(F: Callable[[float], float], a: float, b: float,
                   xtol: float = 1e-14, maxiter: int = 200) -> float:
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = F(c), F(d)
    for _ in range(maxiter):
        if abs(b - a) <= xtol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = F(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = F(d)
    return c if fc <= fd else d


def _polish(F, lo: float, hi: float, h: float) -> float | None:
    """Bisection on the sign of ``F(m + h) - F(m - h)``.

    Exact for quadratics whatever ``h``; resolves the minimizer well below the
    ``sqrt(eps)`` floor of value comparisons.
    """
    def slope(m):
        return F(m + h) - F(m - h)

    s_lo, s_hi = slope(lo), slope(hi)
    if not (np.isfinite(s_lo) and np.isfinite(s_hi)) or not (s_lo < 0 < s_hi):
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s = slope(mid)
        if not np.isfinite(s):
            return None
        if s < 0:
            lo = mid
        elif s > 0:
            hi = mid
        else:
            return mid
    return 0.5 * (lo + hi)


def minimize_1d(F: Callable, lo: float, hi: float, grid: int = 4001) -> float:
    """Global-ish minimizer of a scalar function on ``[lo, hi]``.

    ``F`` must accept numpy arrays.  A dense grid picks the basin, golden
    section refines it, and a symmetric-difference bisection polishes smooth
    minima.  Ties prefer the smallest nonnegative point.
    """
    xs = np.linspace(lo, hi, grid)
    vals = np.asarray(F(xs), dtype=float)
    vals = np.where(np.isnan(vals), math.inf, vals)
    i = _pick(xs, vals)
    if not np.isfinite(vals[i]):
        raise NumericalError("objective is +inf on the whole bracket", lo=lo, hi=hi)
    step = xs[1] - xs[0]
    a, b = max(lo, xs[i] - step), min(hi, xs[i] + step)

    def f(t):
        v = float(np.asarray(F(np.asarray([t])))[0])
        return math.inf if math.isnan(v) else v

    cands = [float(xs[i])]
    g = golden_section(f, a, b)
    cands.append(g)
    p = _polish(f, a, b, 1e-4 * max(1.0, abs(g)))
    if p is not None:
        cands.append(p)
    values = [f(t) for t in cands]
    best = min(values)
    # prefer later (more refined) candidates within rounding of the best value
    slack = 4 * np.finfo(float).eps * max(1.0, abs(best))
    for t, v in reversed(list(zip(cands, values))):
        if v <= best + slack:
            return float(t)
    return float(cands[int(np.argmin(values))])


def psd_eig(G: np.ndarray):
    G = np.asarray(G, dtype=float)
    lam, Q = np.linalg.eigh(0.5 * (G + G.T))
    return np.clip(lam, 0.0, None), Q


def rank_tol(lam: np.ndarray) -> float:
    return max(lam.size, 1) * np.finfo(float).eps * max(float(lam.max(initial=0.0)), 1e-300) * 10


def canonical_coefficients(G: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Minimum-Euclidean-norm coefficients with the same ``G c``.

    Only numerically exact null directions are removed, so full-rank Gram
    matrices leave ``c`` untouched.
    """
    lam, Q = psd_eig(G)
    null = lam <= rank_tol(lam)
    if not null.any():
        return c
    Qn = Q[:, null]
    return c - Qn @ (Qn.T @ c)


def project_ellipsoid(v: np.ndarray, G: np.ndarray, r: float) -> np.ndarray:
    """Euclidean projection of ``v`` onto ``{c : c^T G c <= r^2}``.

    The projection is ``(I + mu G)^{-1} v`` with the multiplier ``mu`` found by
    scalar root finding on ``c(mu)^T G c(mu) = r^2``.
    """
    v = np.asarray(v, dtype=float)
    if v @ G @ v <= r * r:
        return v.copy()
    lam, Q = psd_eig(G)
    w = Q.T @ v

    def excess(mu):
        return float(np.sum(lam * (w / (1.0 + mu * lam)) ** 2) - r * r)

    hi = 1.0
    while excess(hi) > 0:
        hi *= 2.0
        if hi > 1e300:
            raise NumericalError("ellipsoid projection multiplier diverged")
    mu = brentq(excess, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    c = Q @ (w / (1.0 + mu * lam))
    q = c @ G @ c
    if q > r * r:
        c *= r / math.sqrt(q)
    return c
