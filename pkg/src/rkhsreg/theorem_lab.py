"""Numerical experiments on finite-dimensional models R^n of a Hilbert space.

* the rotation path that carries a point ``y`` of the ball onto the ray of
  ``x`` through steps orthogonal to the current point,
* chain checks of a regularizer along such a path,
* sublevel-set geometry (ball-like, star-shaped),
* representer-span experiments with a brute-force minimizer,
* the necessity probe along ``w = lam * x`` with ``p = x / ||x||^2``.

Every probe here demonstrates a property on finitely many samples; none of
them proves anything.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .optim import minimize_1d
from .oracle import brute_force_minimize
from .reduction import ScalarLoss, data_term
from .regularizers import (TOL_CHECK, Radial, Regularizer, ShiftedNorm, lt, sample_vectors)
from .rng import substream

TOL_RADIUS = 1e-3
GAMMA_SCHEDULE = tuple(2.0 ** k for k in range(41))


# --------------------------------------------------------------------------
# rotation path

def _angle(x: np.ndarray, y: np.ndarray) -> float:
    cos = float(x @ y) / (np.linalg.norm(x) * np.linalg.norm(y))
    return math.acos(min(1.0, max(-1.0, cos)))


def lambda_squared(ratio: float, theta: float, n: int) -> float:
    """``ratio^2 (1 + tan^2(theta/n))^n``; +inf when no ``n``-step path exists."""
    if n < 1 or theta / n >= math.pi / 2:
        return math.inf
    t = math.tan(theta / n)
    return ratio * ratio * math.exp(n * math.log1p(t * t))


@dataclass
class RotationPath:
    x: np.ndarray
    y: np.ndarray
    n: int
    theta: float
    points: np.ndarray   # (n + 1, dim): x_0 = y, ..., x_n
    steps: np.ndarray    # (n,): a_k = ||x_k|| tan(theta / n)
    units: np.ndarray    # (n, dim): u_k

    @property
    def lam(self) -> float:
        """Signed ratio ``<x_n, x> / ||x||^2``; ``x_n = lam * x`` up to rounding."""
        return float(self.points[-1] @ self.x / (self.x @ self.x))

    @property
    def lam_squared_formula(self) -> float:
        return lambda_squared(np.linalg.norm(self.y) / np.linalg.norm(self.x), self.theta, self.n)

    def invariant_errors(self) -> dict[str, float]:
        """Largest relative violation of each defining property."""
        P, U, x = self.points, self.units, self.x
        q = math.tan(self.theta / self.n) ** 2
        sq = np.sum(P * P, axis=1)
        e1 = x / np.linalg.norm(x)
        plane = P[0] - (P[0] @ e1) * e1
        e2 = plane / np.linalg.norm(plane)
        out_of_plane = U - np.outer(U @ e1, e1) - np.outer(U @ e2, e2)
        xn = P[-1]
        lam = self.lam
        return {
            "recursion": float(np.max(np.abs(sq[1:] - sq[:-1] * (1 + q)) / sq[1:])),
            "orthogonality": float(np.max(np.abs(np.sum(U * P[:-1], axis=1))
                                          / np.linalg.norm(P[:-1], axis=1))),
            "unit_norm": float(np.max(np.abs(np.linalg.norm(U, axis=1) - 1.0))),
            "in_plane": float(np.max(np.linalg.norm(out_of_plane, axis=1))),
            "min_toward_x": float(np.min(U @ e1)),
            "terminal_alignment": float(np.linalg.norm(xn - lam * x) / np.linalg.norm(xn)),
            "terminal_lambda": abs(lam * lam - self.lam_squared_formula) / self.lam_squared_formula,
        }

    def rows(self):
        for k, p in enumerate(self.points):
            row = {"k": k, "point": p.tolist(), "norm": float(np.linalg.norm(p)),
                   "angle_to_x": _angle(self.x, p) if np.any(p) else 0.0}
            if k < self.n:
                row["step"] = float(self.steps[k])
            yield row

    def to_dict(self):
        return {"x": self.x.tolist(), "y": self.y.tolist(), "n": self.n, "theta": self.theta,
                "lambda": self.lam, "lambda_squared_formula": self.lam_squared_formula,
                "invariant_errors": self.invariant_errors()}


def build_rotation_path(x, y, n: int) -> RotationPath:
    """Rotate ``y`` onto the ray of ``x`` in ``n`` equal angular steps.

    ``x_{k+1} = x_k + a_k u_k`` where ``u_k`` is the unit vector of
    ``span{x, y}`` orthogonal to ``x_k`` with ``<u_k, x> > 0``.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.size < 2 or x.size != y.size:
        raise ValueError("x and y must share a dimension of at least 2")
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if not 0 < ny < nx:
        raise ValueError("need 0 < ||y|| < ||x||")
    if n < 1:
        raise ValueError("n must be a positive integer")
    e1 = x / nx
    perp = y - (y @ e1) * e1
    if np.linalg.norm(perp) <= 1e-12 * ny:
        raise ValueError("y is aligned with x; use the ray-monotonicity check "
                         "(closure argument) instead of a rotation path")
    e2 = perp / np.linalg.norm(perp)
    theta = _angle(x, y)
    if theta / n >= math.pi / 2:
        raise ValueError(f"{n} steps cannot turn an angle of {theta:.6g} rad")
    tan = math.tan(theta / n)
    points = [y]
    steps, units = [], []
    xk = y
    for _ in range(n):
        p, q = xk @ e1, xk @ e2
        r = math.hypot(p, q)
        u = (q * e1 - p * e2) / r
        a = np.linalg.norm(xk) * tan
        xk = xk + a * u
        points.append(xk)
        steps.append(a)
        units.append(u)
    return RotationPath(x, y, n, theta, np.array(points), np.array(steps), np.array(units))


def min_n_for_contraction(x, y) -> int:
    """Smallest ``n`` with ``lambda(n) <= 1`` (doubling, then bisection)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    ratio = float(np.linalg.norm(y) / np.linalg.norm(x))
    if not 0 < ratio < 1:
        raise ValueError("need 0 < ||y|| < ||x||")
    theta = _angle(x, y)

    def ok(n):
        return lambda_squared(ratio, theta, n) <= 1.0

    hi = 1
    while not ok(hi):
        hi *= 2
    lo = hi // 2  # ok(lo) is False, or lo == 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


# --------------------------------------------------------------------------
# chain check along a path

@dataclass
class ChainReport:
    regularizer: str
    holds: bool
    values: list[float]
    failures: list[int]
    terminal_holds: bool

    def to_dict(self):
        return {k: v for k, v in self.__dict__.items()}

    def rows(self):
        for k, v in enumerate(self.values):
            yield {"k": k, "omega": v, "failure": k in self.failures}


def monotone_chain_check(R: Regularizer, path: RotationPath, tol: float = TOL_CHECK) -> ChainReport:
    """Check ``R(x_{k+1}) >= R(x_k)`` along the path and ``R(lam x) >= R(y)``."""
    vals = np.asarray(R(path.points), dtype=float)
    fails = np.flatnonzero(lt(vals[1:], vals[:-1], tol)).tolist()
    terminal = not bool(lt(float(R(path.lam * path.x)), vals[0], tol))
    return ChainReport(R.label, not fails and terminal, vals.tolist(), [k + 1 for k in fails], terminal)


# --------------------------------------------------------------------------
# sublevel geometry

@dataclass
class SublevelReport:
    regularizer: str
    level: float
    samples: int
    seed: int
    r_in: float
    r_out: float
    ball_like: bool
    star_shaped: bool
    empty: bool
    whole_space: bool
    star_violations: list = field(default_factory=list)

    def to_dict(self):
        return {k: v for k, v in self.__dict__.items()}


def sublevel_geometry_probe(R: Regularizer, n: Optional[int], level: float, samples: int = 20_000,
                            seed: int = 0, tol_radius: float = TOL_RADIUS,
                            segment_points: int = 33, max_star_points: int = 2000) -> SublevelReport:
    """Sample ``S_c = {x : R(x) <= c}`` and test whether it looks like a centered ball.

    ``r_in`` is the largest sampled norm inside ``S_c``, ``r_out`` the smallest
    sampled norm outside; a centered ball has ``r_in <= r_out``.  Star shape
    is probed on segments from sampled members to the origin.
    """
    dim = getattr(R, "n", None) or n
    if dim is None or dim < 2:
        raise ValueError("sublevel probe needs dimension >= 2")
    rng = substream(seed, f"sublevel:{R.label}")
    X = sample_vectors(rng, samples, dim)
    vals = np.asarray(R(X), dtype=float)
    norms = np.linalg.norm(X, axis=1)
    inside = vals <= level + TOL_CHECK
    r_in = float(norms[inside].max()) if inside.any() else 0.0
    r_out = float(norms[~inside].min()) if (~inside).any() else math.inf
    ball_like = r_in <= r_out * (1.0 + tol_radius)

    members = X[inside][:max_star_points]
    ts = np.linspace(0.0, 1.0, segment_points)
    violations = []
    if members.size:
        seg = ts[None, :, None] * members[:, None, :]
        bad = np.asarray(R(seg), dtype=float) > level + TOL_CHECK
        for i, j in zip(*np.nonzero(bad)):
            if len(violations) >= 10:
                break
            violations.append({"x": members[i].tolist(), "t": float(ts[j])})
        star = not bad.any()
    else:
        star = True
    return SublevelReport(R.label, float(level), samples, seed, r_in, r_out, ball_like, star,
                          not inside.any(), not (~inside).any(), violations)


# --------------------------------------------------------------------------
# representer-span experiment

def _objective(R: Regularizer, W: np.ndarray, loss, gamma: float):
    def batch(X):
        X = np.atleast_2d(X)
        return data_term(loss, gamma, X @ W.T) + np.asarray(R(X), dtype=float)

    def single(x):
        return float(batch(np.asarray(x, dtype=float)[None, :])[0])

    return single, batch


def _ball_projection(R: Regularizer):
    if isinstance(R, Radial) and math.isfinite(R.profile.finite_radius):
        r = R.profile.finite_radius

        def project(X):
            X = np.asarray(X, dtype=float)
            nx = np.linalg.norm(X, axis=-1, keepdims=True)
            return np.where(nx <= r, X, X * (r / np.maximum(nx, 1e-300)))
        return project
    return None


def span_projection(W: np.ndarray, w: np.ndarray) -> np.ndarray:
    coef, *_ = np.linalg.lstsq(W.T, w, rcond=None)
    proj = W.T @ coef
    # a projection never lengthens a vector; undo rounding that would
    nw, npj = np.linalg.norm(w), np.linalg.norm(proj)
    return proj * (nw / npj) if npj > nw else proj


@dataclass
class SpanReport:
    regularizer: str
    span_distance: float
    J_at_min: float
    J_at_projection: float
    minimizer: list
    converged: bool
    seed: int

    @property
    def projection_not_worse(self) -> bool:
        if not math.isfinite(self.J_at_projection):
            return not math.isfinite(self.J_at_min)
        return self.J_at_projection <= self.J_at_min + 1e-9 * max(1.0, abs(self.J_at_min))

    def to_dict(self):
        d = {k: v for k, v in self.__dict__.items()}
        d["projection_not_worse"] = self.projection_not_worse
        return d


def representer_span_experiment(R: Regularizer, W, loss, gamma: float, seed: int = 0,
                                bounds: tuple[float, float] = (-3.0, 3.0)) -> SpanReport:
    """Brute-force minimizer of ``gamma * loss(W w) + R(w)`` over R^n and its
    distance to ``span{rows of W}``, divided by ``max(1, ||w||)``."""
    W = np.atleast_2d(np.asarray(W, dtype=float))
    ell, dim = W.shape
    if ell >= dim:
        raise ValueError("need fewer functionals than dimensions so the span is proper")
    single, batch = _objective(R, W, loss, gamma)
    res = brute_force_minimize(single, dim, bounds=bounds, batch_fn=batch, seed=seed,
                               project=_ball_projection(R))
    w = res.x
    nw = float(np.linalg.norm(w))
    proj = span_projection(W, w)
    # relative for large minimizers, absolute near the origin where the ratio is noise
    dist = float(np.linalg.norm(w - proj) / max(1.0, nw))
    return SpanReport(R.label, dist, res.value, single(proj), w.tolist(), res.converged, seed)


# --------------------------------------------------------------------------
# necessity probe

@dataclass
class NecessityReport:
    regularizer: str
    gammas: list
    lambdas: list
    a_values: list
    omega_x_plus_y: float
    omega_zero: float
    omega_on_ray: list
    case: str
    bound_holds: bool
    eq6_holds: bool
    converges_to_one: Optional[bool]
    liminf: float
    liminf_holds: bool
    note: str = ("finitely many (p, gamma) pairs are sampled: this demonstrates the "
                 "necessity argument on one instance, it does not prove it")

    def to_dict(self):
        return {k: v for k, v in self.__dict__.items()}

    def rows(self):
        for g, lam, a, om in zip(self.gammas, self.lambdas, self.a_values, self.omega_on_ray):
            yield {"gamma": g, "lambda": lam, "a": a, "omega_lambda_x": om}


def _default_bracket(R: Regularizer, x: np.ndarray) -> tuple[float, float]:
    b = 4.0
    if isinstance(R, ShiftedNorm):
        b = max(b, abs(float(R.center @ x / (x @ x))) + 2.0)
    return -b, b


def necessity_probe(R: Regularizer, x, y, gammas: Sequence[float] = GAMMA_SCHEDULE,
                    loss: Optional[ScalarLoss] = None, tol: float = TOL_CHECK,
                    bracket: Optional[tuple[float, float]] = None) -> NecessityReport:
    """Follow ``lam(gamma)``, the minimizer of ``gamma f(lam) + R(lam x)``, as
    ``gamma`` grows, and test the bounds used in the necessity argument."""
    loss = loss or ScalarLoss("squared_at_one")
    f = loss.f
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if not np.any(x):
        raise ValueError("x must be nonzero")
    if abs(float(x @ y)) > 1e-12 * np.linalg.norm(x) * max(np.linalg.norm(y), 1e-300):
        raise ValueError("y must be orthogonal to x")
    lo, hi = bracket or _default_bracket(R, x)
    f1 = float(f(np.array([1.0]))[0])

    lambdas, a_vals, on_ray = [], [], []
    for g in gammas:
        def F(lam, g=g):
            lam = np.asarray(lam, dtype=float)
            return g * f(lam) + np.asarray(R(lam[..., None] * x), dtype=float)
        lam = minimize_1d(F, lo, hi)
        lambdas.append(lam)
        a_vals.append(g * (float(f(np.array([lam]))[0]) - f1))
        on_ray.append(float(R(lam * x)))

    oxy = float(R(x + y))
    o0 = float(R(np.zeros_like(x)))
    tail = on_ray[-max(1, len(on_ray) // 4):]
    liminf = min(tail)
    if not math.isfinite(oxy):
        case = "infinite"
        bound_holds = eq6 = liminf_ok = True
        conv = None
    else:
        case = "finite"
        bound = oxy - o0
        bound_holds = all(-tol <= a <= bound + tol for a in a_vals)
        eq6 = not any(bool(lt(oxy, om, tol)) for om in on_ray)
        liminf_ok = not bool(lt(oxy, liminf, tol))
        conv = abs(lambdas[-1] - 1.0) <= 1e-3 if R.is_radial else None
    return NecessityReport(R.label, list(gammas), lambdas, a_vals, oxy, o0, on_ray, case,
                           bound_holds, eq6, conv, liminf, liminf_ok)


__all__ = [
    "RotationPath", "build_rotation_path", "lambda_squared", "min_n_for_contraction",
    "ChainReport", "monotone_chain_check", "SublevelReport", "sublevel_geometry_probe",
    "SpanReport", "representer_span_experiment", "span_projection",
    "NecessityReport", "necessity_probe", "GAMMA_SCHEDULE",
]
