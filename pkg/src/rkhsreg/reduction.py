"""Reduction of ``J(w) = gamma * loss(L_1 w, ..., L_l w) + h(||w||)`` to the
coefficients of ``w = sum_i c_i K_{L_i}``, and solvers for the standard
instances: regularized least squares, hinge-loss SVM, kernel PCA, Ivanov
(norm-ball constrained) problems and the one-functional scalar family.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import linprog

from . import functionals as fn
from .kernels import Kernel, KernelExpansion, is_psd, norm
from .optim import (InfeasibleError, NumericalError, canonical_coefficients, minimize_1d,
                    project_ellipsoid, psd_eig)
from .regularizers import IndicatorBall, RadialProfile, Square, profile_value

HINGE_TOL = 1e-9


# --------------------------------------------------------------------------
# losses

@dataclass(frozen=True, eq=False)
class SquaredLoss:
    targets: np.ndarray

    kind = "squared"

    def __post_init__(self):
        object.__setattr__(self, "targets", np.asarray(self.targets, dtype=float).reshape(-1))

    def __call__(self, z):
        return np.sum((self.targets - np.asarray(z, dtype=float)) ** 2, axis=-1)

    def attains_minimum(self, z, tol=1e-9):
        r = np.abs(self.targets - np.asarray(z, dtype=float))
        return np.all(r <= tol * np.maximum(1.0, np.abs(self.targets)), axis=-1)

    def to_dict(self):
        return {"type": "squared", "targets": self.targets.tolist()}


@dataclass(frozen=True, eq=False)
class HingeLoss:
    labels: np.ndarray

    kind = "hinge"

    def __post_init__(self):
        y = np.asarray(self.labels, dtype=float).reshape(-1)
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("hinge labels must be +1 or -1")
        object.__setattr__(self, "labels", y)

    def __call__(self, z):
        return np.sum(np.maximum(0.0, 1.0 - self.labels * np.asarray(z, dtype=float)), axis=-1)

    def attains_minimum(self, z, tol=HINGE_TOL):
        return np.all(self.labels * np.asarray(z, dtype=float) >= 1.0 - tol, axis=-1)

    def to_dict(self):
        return {"type": "hinge", "labels": self.labels.tolist()}


@dataclass(frozen=True)
class KPCAConstraint:
    """Unit empirical variance of ``(L_i w)``: 0 when met, +inf otherwise."""

    tol: float = 1e-8

    kind = "kpca"

    def variance(self, z):
        z = np.asarray(z, dtype=float)
        return np.mean((z - z.mean(axis=-1, keepdims=True)) ** 2, axis=-1)

    def __call__(self, z):
        return np.where(np.abs(self.variance(z) - 1.0) <= self.tol, 0.0, math.inf)

    def to_dict(self):
        return {"type": "kpca"}


def _squared_at_one(z):
    return (np.asarray(z, dtype=float) - 1.0) ** 2


def _svm_pair(z):
    # hinge pair (y, w) = (1, p), (-1, p/2)
    z = np.asarray(z, dtype=float)
    return np.maximum(0.0, 1.0 - z) + np.maximum(0.0, 1.0 + z / 2.0)


def _absolute_at_one(z):
    return np.abs(np.asarray(z, dtype=float) - 1.0)


SCALAR_LOSSES: dict[str, Callable] = {
    "squared_at_one": _squared_at_one,
    "svm_pair": _svm_pair,
    "absolute_at_one": _absolute_at_one,
}


def unique_minimizer_at_one(f: Callable, lo: float = -10.0, hi: float = 10.0,
                            step: float = 1e-4) -> bool:
    """Scan ``[lo, hi]`` and confirm ``f(1) < f(z)`` for every scanned ``z != 1``."""
    n = int(round((hi - lo) / step))
    z = lo + step * np.arange(n + 1)
    z = z[np.abs(z - 1.0) > step / 2]
    return bool(np.all(np.asarray(f(z)) > float(np.asarray(f(np.array([1.0])))[0])))


@dataclass(frozen=True)
class ScalarLoss:
    """``f(<w, p>)`` for a single functional, ``f`` uniquely minimized at 1."""

    name: str = "squared_at_one"
    f: Optional[Callable] = field(default=None, compare=False)

    kind = "scalar_f"

    def __post_init__(self):
        if self.f is None:
            if self.name not in SCALAR_LOSSES:
                raise ValueError(f"unknown scalar loss {self.name!r}")
            object.__setattr__(self, "f", SCALAR_LOSSES[self.name])
        if not unique_minimizer_at_one(self.f):
            raise ValueError(f"scalar loss {self.name!r} is not uniquely minimized at 1")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        return np.sum(self.f(z), axis=-1)

    def attains_minimum(self, z, tol=1e-9):
        return np.all(np.abs(np.asarray(z, dtype=float) - 1.0) <= tol, axis=-1)

    def to_dict(self):
        return {"type": "scalar_f", "name": self.name}


Loss = Union[SquaredLoss, HingeLoss, KPCAConstraint, ScalarLoss]


def loss_from_dict(d: dict[str, Any]) -> Loss:
    kind = d.get("type")
    if kind == "squared":
        return SquaredLoss(d["targets"])
    if kind == "hinge":
        return HingeLoss(d["labels"])
    if kind == "kpca":
        return KPCAConstraint()
    if kind == "scalar_f":
        return ScalarLoss(d.get("name", "squared_at_one"))
    raise ValueError(f"unknown loss type {kind!r}")


def data_term(loss: Loss, gamma: float, z) -> np.ndarray:
    """``gamma * loss(z)`` on extended reals; ``gamma = inf`` is a hard constraint."""
    if isinstance(loss, KPCAConstraint):
        return loss(z)
    if gamma == math.inf:
        return np.where(loss.attains_minimum(z), 0.0, math.inf)
    if gamma == 0:
        return np.zeros(np.shape(z)[:-1])
    return gamma * loss(z)


# --------------------------------------------------------------------------
# the reduced problem

@dataclass(frozen=True, eq=False)
class ReducedProblem:
    """``J^(c) = gamma * loss(G c) + h(sqrt(c^T G c))``."""

    gram: np.ndarray
    loss: Loss
    profile: RadialProfile
    gamma: float = 1.0
    functionals: tuple = ()
    kernel: Optional[Kernel] = None

    @property
    def size(self) -> int:
        return self.gram.shape[0]

    def objective(self, c) -> float:
        c = np.asarray(c, dtype=float).reshape(-1)
        z = self.gram @ c
        sq = max(0.0, float(c @ self.gram @ c))
        return float(data_term(self.loss, self.gamma, z)) + profile_value(self.profile, math.sqrt(sq))

    def objective_batch(self, C: np.ndarray) -> np.ndarray:
        C = np.atleast_2d(np.asarray(C, dtype=float))
        Z = C @ self.gram
        sq = np.maximum(0.0, np.sum(Z * C, axis=1))
        return data_term(self.loss, self.gamma, Z) + self.profile(np.sqrt(sq))

    def reconstruct(self, c) -> KernelExpansion:
        """``w = sum_i c_i K_{L_i}``."""
        if not self.functionals or self.kernel is None:
            raise ValueError("problem was built without functionals")
        w = KernelExpansion.zero(self.kernel)
        for ci, L in zip(np.asarray(c, dtype=float).reshape(-1), self.functionals):
            w = w + ci * fn.representer(L, self.kernel)
        return w

    def full_objective(self, w: KernelExpansion) -> float:
        """``J(w)`` evaluated on an arbitrary expansion."""
        if not self.functionals:
            raise ValueError("problem was built without functionals")
        z = np.array([fn.apply(L, w) for L in self.functionals])
        return float(data_term(self.loss, self.gamma, z)) + profile_value(self.profile, norm(w))


def reduce(Ls: Sequence, kernel: Kernel, loss: Loss, profile: RadialProfile,
           gamma: float = 1.0) -> ReducedProblem:
    if len(Ls) == 0:
        raise ValueError("at least one functional is required")
    for L in Ls:
        if L.dim != kernel.input_dim:
            raise ValueError(f"functional acts on R^{L.dim}, kernel on R^{kernel.input_dim}")
    if not gamma >= 0:
        raise ValueError("gamma must be nonnegative")
    ell = len(Ls)
    if isinstance(loss, SquaredLoss) and loss.targets.size != ell:
        raise ValueError(f"{loss.targets.size} targets for {ell} functionals")
    if isinstance(loss, HingeLoss) and loss.labels.size != ell:
        raise ValueError(f"{loss.labels.size} labels for {ell} functionals")
    if isinstance(loss, ScalarLoss) and ell != 1:
        raise ValueError("the scalar family uses exactly one functional")
    G = fn.gram_matrix(Ls, kernel)
    if not is_psd(G):
        raise NumericalError("Gram matrix is not positive semidefinite",
                             min_eigenvalue=float(np.linalg.eigvalsh(G)[0]))
    return ReducedProblem(G, loss, profile, float(gamma), tuple(Ls), kernel)


def project_onto_span(Ls: Sequence, kernel: Kernel, w: KernelExpansion) -> tuple[np.ndarray, KernelExpansion]:
    """Orthogonal projection of ``w`` onto ``span{K_{L_i}}``.

    Solves ``G c = (L_i w)_i`` in the least-squares sense.
    """
    G = fn.gram_matrix(Ls, kernel)
    b = np.array([fn.apply(L, w) for L in Ls])
    lam, Q = psd_eig(G)
    keep = lam > lam.max(initial=0.0) * 1e-13
    c = Q[:, keep] @ ((Q[:, keep].T @ b) / lam[keep])
    u = KernelExpansion.zero(kernel)
    for ci, L in zip(c, Ls):
        u = u + ci * fn.representer(L, kernel)
    return c, u


# --------------------------------------------------------------------------
# solvers

@dataclass
class SolverResult:
    coefficients: np.ndarray
    objective: float
    method: str
    iterations: int = 0
    residual: float = 0.0
    jitter: float = 0.0
    feasibility: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "coefficients": [float(x) for x in self.coefficients],
            "objective": self.objective,
            "method": self.method,
            "iterations": self.iterations,
            "residual": self.residual,
            "jitter": self.jitter,
            "feasibility": self.feasibility,
            **self.extra,
        }


def _require(rp: ReducedProblem, loss_type, profile_type=None):
    if not isinstance(rp.loss, loss_type):
        raise TypeError(f"solver needs a {loss_type.__name__}, got {type(rp.loss).__name__}")
    if profile_type is not None and not isinstance(rp.profile, profile_type):
        raise TypeError(f"solver needs a {profile_type.__name__} profile")


def _jitter(G):
    ell = G.shape[0]
    return 1e-10 * float(np.trace(G)) / ell if ell else 0.0


def solve_rls(rp: ReducedProblem) -> SolverResult:
    """Regularized least squares: ``(G + I / gamma) c = y``.

    ``gamma = inf`` gives minimum-norm interpolation ``G c = y``.
    """
    _require(rp, SquaredLoss, Square)
    G, y, gamma = rp.gram, rp.loss.targets, rp.gamma
    ell = rp.size
    if gamma == 0 or not np.any(y):
        c = np.zeros(ell)
        return SolverResult(c, rp.objective(c), "rls")
    if gamma == math.inf:
        c, *_ = np.linalg.lstsq(G, y, rcond=None)
        residual = float(np.linalg.norm(G @ c - y) / np.linalg.norm(y))
        if residual > 1e-10:
            raise InfeasibleError("targets are not interpolable (y outside range of G)",
                                  residual=residual)
        return SolverResult(c, rp.objective(c), "interpolation", residual=residual)

    A = G + np.eye(ell) / gamma
    jitter = 0.0
    for attempt in range(2):
        try:
            c = np.linalg.solve(A, y)
        except np.linalg.LinAlgError:
            c = None
        if c is not None:
            residual = float(np.linalg.norm(A @ c - y) / np.linalg.norm(y))
            if residual <= 1e-10:
                c = canonical_coefficients(G, c)
                return SolverResult(c, rp.objective(c), "rls", residual=residual, jitter=jitter)
        jitter = _jitter(G)
        A = A + jitter * np.eye(ell)
    raise NumericalError("RLS system is singular beyond jitter", condition=float(np.linalg.cond(A)),
                         jitter=jitter)


def _svm_dual(G, y, C, tol=1e-12, max_iter=None):
    """Exact primal active-set method on the SVM dual.

    Maximizes ``sum(a) - a^T Y G Y a / 4`` over ``0 <= a <= C``, i.e. minimizes
    ``f(a) = a^T Q a / 2 - sum(a)`` with ``Q = Y G Y / 2``.  Each iteration
    minimizes ``f`` over the current face (pseudo-inverse on the free block,
    or a null-space descent ray when the face problem is unbounded), stops at
    the first bound hit, and frees the bound with the worst multiplier once the
    face is optimal.
    """
    ell = G.shape[0]
    Q = 0.5 * (y[:, None] * y[None, :]) * G
    Q = 0.5 * (Q + Q.T)
    a = np.zeros(ell)
    fixed = np.ones(ell, dtype=bool)
    max_iter = max_iter or 100 * ell + 100
    scale = max(1.0, float(np.max(np.abs(Q))))
    it = 0
    for it in range(1, max_iter + 1):
        g = Q @ a - 1.0
        free = ~fixed
        if free.any():
            F = np.flatnonzero(free)
            lam, V = np.linalg.eigh(Q[np.ix_(F, F)])
            null = lam <= ell * np.finfo(float).eps * scale * 10
            rhs = V.T @ (-g[F])
            ray = bool(null.any()) and np.linalg.norm(rhs[null]) > tol * max(1.0, np.linalg.norm(rhs))
            if ray:
                p = V[:, null] @ rhs[null]  # f decreases linearly along p
            else:
                p = V[:, ~null] @ (rhs[~null] / lam[~null])
            with np.errstate(divide="ignore", invalid="ignore"):
                room = np.where(p < 0, a[F] / -p, np.where(p > 0, (C - a[F]) / p, math.inf))
            j = int(np.argmin(room))
            t_max = float(room[j])
            t = t_max if ray else min(1.0, t_max)
            if t == math.inf:
                raise NumericalError("hard-margin dual is unbounded (data not separable)")
            if t > 0:
                a[F] = np.clip(a[F] + t * p, 0.0, C)
            if ray or t_max < 1.0:
                a[F[j]] = 0.0 if p[j] < 0 else C
                fixed[F[j]] = True
                if t > 0:
                    continue
        g = Q @ a - 1.0
        # multipliers of the fixed bounds: need g >= 0 at 0 and g <= 0 at C
        wrong = np.where(fixed & (a <= 0), -g, np.where(fixed & (a >= C), g, -math.inf))
        i = int(np.argmax(wrong))
        if wrong[i] <= tol * scale:
            return a, it
        fixed[i] = False
    raise NumericalError("SVM dual active-set method did not terminate", iterations=it)


def _svm_subgradient(G, y, gamma, iterations=100_000):
    """Primal subgradient descent with averaging over the last half."""
    ell = G.shape[0]
    eta0 = 1.0 / (gamma * np.linalg.norm(G, 2) + 1.0)
    c = np.zeros(ell)
    avg = np.zeros(ell)
    count = 0
    for k in range(iterations):
        z = G @ c
        active = (y * z < 1.0).astype(float)
        g = -gamma * (G @ (active * y)) + 2.0 * z
        c = c - eta0 / math.sqrt(k + 1) * g
        if k >= iterations // 2:
            avg += c
            count += 1
    return avg / count


def _separable(G, y) -> bool:
    """LP feasibility of ``y_i (G c)_i >= 1``."""
    res = linprog(np.zeros(G.shape[0]), A_ub=-(y[:, None] * G), b_ub=-np.ones(G.shape[0]),
                  bounds=[(None, None)] * G.shape[0], method="highs")
    return res.status == 0


def solve_svm(rp: ReducedProblem, method: str = "dual") -> SolverResult:
    """Hinge-loss SVM ``gamma * sum max(0, 1 - y_i (G c)_i) + c^T G c``.

    ``method="dual"`` (default) runs exact coordinate ascent on the box-constrained
    dual, with ``c = Y alpha / 2``.  ``method="subgradient"`` runs the primal
    subgradient method with step ``eta0 / sqrt(k + 1)``.  ``gamma = inf`` gives
    the hard-margin machine.
    """
    _require(rp, HingeLoss, Square)
    G, y, gamma = rp.gram, rp.loss.labels, rp.gamma
    if gamma == 0:
        c = np.zeros(rp.size)
        return SolverResult(c, rp.objective(c), method)
    if method == "subgradient":
        if gamma == math.inf:
            raise ValueError("the subgradient method needs finite gamma")
        c = _svm_subgradient(G, y, gamma)
        return SolverResult(c, rp.objective(c), "subgradient", iterations=100_000)
    if method != "dual":
        raise ValueError(f"unknown SVM method {method!r}")
    if gamma == math.inf and not _separable(G, y):
        raise InfeasibleError("hard margin is infeasible: no c has y_i (G c)_i >= 1 for all i")
    a, sweeps = _svm_dual(G, y, gamma)
    c = canonical_coefficients(G, 0.5 * y * a)
    if gamma == math.inf and np.any(y * (G @ c) < 1.0 - 1e-8):
        raise NumericalError("hard-margin dual did not reach the margins",
                             min_margin=float(np.min(y * (G @ c))))
    primal = rp.objective(c)
    dual = float(a.sum() - 0.25 * (y * a) @ G @ (y * a))
    return SolverResult(c, primal, "dual", iterations=sweeps,
                        extra={"duality_gap": primal - dual, "alpha": a.tolist()})


def solve_kpca(rp: ReducedProblem) -> SolverResult:
    """Minimum-norm ``w`` in the span with unit empirical variance of ``(G c)``.

    With ``G^{1/2}`` the PSD square root and ``H`` the centering matrix, the
    optimum is the top eigenvector of ``G^{1/2} H G^{1/2} / l`` rescaled to unit
    variance; the squared RKHS norm is ``1 / mu_max``.  The sign is fixed so
    that the first nonzero coefficient is negative.
    """
    _require(rp, KPCAConstraint)
    ell = rp.size
    if ell < 2:
        raise ValueError("kernel PCA needs at least two functionals")
    lam, Q = psd_eig(rp.gram)
    keep = lam > lam.max(initial=0.0) * 1e-13
    if not keep.any():
        raise InfeasibleError("Gram matrix is zero: unit variance is unreachable")
    Qk, sk = Q[:, keep], np.sqrt(lam[keep])
    root = (Qk * sk) @ Qk.T
    H = np.eye(ell) - 1.0 / ell
    M = root @ H @ root / ell
    mu, V = np.linalg.eigh(0.5 * (M + M.T))
    if mu[-1] <= 1e-13 * max(1.0, float(lam.max())):
        raise InfeasibleError("centered Gram matrix vanishes: every c has zero variance",
                              top_eigenvalue=float(mu[-1]))
    z = V[:, -1] / math.sqrt(mu[-1])
    c = (Qk / sk) @ (Qk.T @ z)
    c = c / math.sqrt(float(rp.loss.variance(rp.gram @ c)))
    nz = np.flatnonzero(np.abs(c) > 1e-12 * np.max(np.abs(c)))
    if nz.size and c[nz[0]] > 0:
        c = -c
    residual = abs(float(rp.loss.variance(rp.gram @ c)) - 1.0)
    return SolverResult(c, rp.objective(c), "kpca", residual=residual,
                        extra={"norm_squared": float(c @ rp.gram @ c),
                               "top_eigenvalue": float(mu[-1])})


def _ivanov_squared(rp: ReducedProblem, r: float, max_iter: int = 200_000):
    """Accelerated projected gradient on ``gamma * ||y - G c||^2`` over the G-ellipsoid."""
    G, y, gamma = rp.gram, rp.loss.targets, max(rp.gamma, 1e-300)
    lmax = float(np.linalg.eigvalsh(G)[-1])
    step = 1.0 / (2.0 * gamma * lmax ** 2)
    x = project_ellipsoid(np.zeros(rp.size), G, r)
    v, t = x.copy(), 1.0

    def F(c):
        return gamma * float(np.sum((y - G @ c) ** 2))

    fx = F(x)
    it = 0
    for it in range(1, max_iter + 1):
        grad = -2.0 * gamma * (G @ (y - G @ v))
        x_new = project_ellipsoid(v - step * grad, G, r)
        f_new = F(x_new)
        if f_new > fx:
            if t == 1.0:  # a plain projected step no longer decreases F
                break
            t, v = 1.0, x.copy()  # restart momentum
            continue
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        v = x_new + ((t - 1.0) / t_new) * (x_new - x)
        moved = float(np.linalg.norm(x_new - x))
        x, fx, t = x_new, f_new, t_new
        if moved <= 1e-14 * max(1.0, float(np.linalg.norm(x))):
            break
    return x, it


def _ivanov_hinge(rp: ReducedProblem, r: float):
    """Bisection on the multiplier ``nu`` of ``c^T G c <= r^2``.

    For fixed ``nu`` the Lagrangian is an SVM with weight ``gamma / nu``, solved
    exactly by the dual; its norm decreases with ``nu``.
    """
    G, y, gamma = rp.gram, rp.loss.labels, rp.gamma

    def svm(C):
        a, _ = _svm_dual(G, y, C)
        c = canonical_coefficients(G, 0.5 * y * a)
        return c, math.sqrt(max(0.0, float(c @ G @ c)))

    if gamma == 0:
        return np.zeros(rp.size), 0
    if _separable(G, y):
        c_hard, n_hard = svm(math.inf)
        if n_hard <= r:
            return c_hard, 0
    lo, hi = -12.0, 16.0  # log10(nu), SVM weight is 10**-log10(nu)
    c_lo, n_lo = svm(10.0 ** -lo)
    if n_lo <= r:
        return c_lo, 0
    it = 0
    best = None
    for it in range(1, 200):
        mid = 0.5 * (lo + hi)
        c, n = svm(10.0 ** -mid)
        if n > r:
            lo = mid
        else:
            hi, best = mid, c
        if hi - lo < 1e-13:
            break
    if best is None:
        best, _ = svm(10.0 ** -hi)
    return best, it


def solve_ivanov(rp: ReducedProblem) -> SolverResult:
    """Minimize ``gamma * loss(G c)`` subject to ``c^T G c <= r^2``."""
    if not isinstance(rp.profile, IndicatorBall):
        raise TypeError("Ivanov solver needs an indicator_ball profile")
    r = rp.profile.radius
    if not r > 0:
        raise ValueError("radius must be positive")
    G = rp.gram
    if isinstance(rp.loss, SquaredLoss):
        c0, *_ = np.linalg.lstsq(G, rp.loss.targets, rcond=None)
        c0 = canonical_coefficients(G, c0)
        if c0 @ G @ c0 <= r * r:
            c, it, method = c0, 0, "unconstrained"
        else:
            c, it = _ivanov_squared(rp, r)
            method = "projected_gradient"
    elif isinstance(rp.loss, HingeLoss):
        c, it = _ivanov_hinge(rp, r)
        method = "multiplier_bisection"
    else:
        raise TypeError("Ivanov solver supports squared and hinge losses")
    sq = float(c @ G @ c)
    value = float(data_term(rp.loss, rp.gamma, G @ c))
    return SolverResult(c, value, method, iterations=it,
                        feasibility=max(0.0, sq - r * r), extra={"norm_squared": sq})


@dataclass
class ScalarFamilyResult:
    lam: float
    objective: float
    x_norm: float
    origin_case: bool = False

    def to_dict(self):
        return dict(self.__dict__)


def solve_scalar_family(p, loss: ScalarLoss, profile: RadialProfile, gamma: float) -> ScalarFamilyResult:
    """Minimize ``gamma * f(<w, p>) + h(||w||)`` over the ray ``w = lam * x``,
    ``x = p / ||p||^2``, so that ``<lam x, p> = lam``.

    Any ``lam`` outside ``[-1, 1]`` is beaten by ``lam = 1``, which fixes the bracket.
    """
    p_norm = norm(p) if isinstance(p, KernelExpansion) else float(np.linalg.norm(p))
    if p_norm == 0:
        return ScalarFamilyResult(0.0, gamma * float(loss.f(np.array([0.0]))[0])
                                  + profile_value(profile, 0.0), 0.0, origin_case=True)
    x_norm = 1.0 / p_norm
    f = loss.f

    def F(lam):
        lam = np.asarray(lam, dtype=float)
        data = gamma * f(lam) if gamma > 0 else np.zeros_like(lam)
        return data + profile(np.abs(lam) * x_norm)

    if gamma == 0:
        lam = 0.0
    else:
        lam = minimize_1d(F, -1.0, 1.0)
    return ScalarFamilyResult(float(lam), float(F(np.array([lam]))[0]), x_norm)
