"""Regularizers: radial profiles h(||w||), Ivanov indicators and non-radial
counterexamples on R^n, plus sampling checkers for the orthogonal
monotonicity condition, ray monotonicity and radiality.

Values are extended reals encoded as floats with ``math.inf`` for +infinity.
Comparisons that involve +inf are exact; finite comparisons use
``TOL_CHECK + REL_CHECK * |value|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

from .kernels import KernelExpansion, _frozen, norm
from .rng import BLOCK, blocks, substream

TOL_CHECK = 1e-9
# relative slack on top of TOL_CHECK; values reach 1e6 on the sampled radii
REL_CHECK = 1e-12
RADIUS_RANGE = (1e-2, 1e2)


# --------------------------------------------------------------------------
# radial profiles

@dataclass(frozen=True)
class Square:
    name = "square"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return t * t

    @property
    def finite_radius(self) -> float:
        return math.inf

    def to_dict(self):
        return {"profile": "square"}


@dataclass(frozen=True)
class Power:
    p: float

    name = "power"

    def __post_init__(self):
        if not self.p >= 0:
            raise ValueError("power profile needs p >= 0")

    def __call__(self, t):
        return np.power(np.asarray(t, dtype=float), self.p)

    @property
    def finite_radius(self) -> float:
        return math.inf

    def to_dict(self):
        return {"profile": "power", "p": float(self.p)}


@dataclass(frozen=True, eq=False)
class MonotoneTable:
    """Piecewise-linear nondecreasing profile through ``(knots, values)``.

    Constant before the first knot and after the last one.  On a segment
    ending at a ``+inf`` value the profile is ``+inf`` strictly after the left
    knot, which keeps it lower semicontinuous.
    """

    knots: np.ndarray
    values: np.ndarray

    name = "monotone_table"

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float).reshape(-1)
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if knots.size == 0 or knots.size != values.size:
            raise ValueError("knots and values must be nonempty and of equal length")
        if np.any(knots < 0) or np.any(np.diff(knots) <= 0):
            raise ValueError("knots must be nonnegative and strictly increasing")
        if np.any(np.isnan(values)) or np.any(values == -math.inf):
            raise ValueError("values must be reals or +inf")
        if not math.isfinite(values[0]):
            raise ValueError("first value must be finite")
        if not np.all(values[1:] >= values[:-1]):
            raise ValueError("values must be nondecreasing (and stay +inf once infinite)")
        object.__setattr__(self, "knots", _frozen(knots))
        object.__setattr__(self, "values", _frozen(values))

    def __call__(self, t):
        t0 = np.asarray(t, dtype=float)
        t = np.atleast_1d(t0)
        k, v = self.knots, self.values
        idx = np.searchsorted(k, t, side="left")
        out = np.empty(t.shape)
        before = idx == 0
        after = idx >= k.size
        mid = ~(before | after)
        out[before] = v[0]
        out[after] = v[-1]
        i = idx[mid]
        lo_v, hi_v = v[i - 1], v[i]
        lo_k, hi_k = k[i - 1], k[i]
        with np.errstate(invalid="ignore"):
            frac = (t[mid] - lo_k) / (hi_k - lo_k)
            lin = lo_v + frac * (hi_v - lo_v)
        out[mid] = np.where(np.isinf(hi_v), math.inf, lin)
        return out.reshape(t0.shape)

    @property
    def finite_radius(self) -> float:
        inf = ~np.isfinite(self.values)
        return math.inf if not inf.any() else float(self.knots[np.argmax(inf) - 1])

    def to_dict(self):
        return {"profile": "monotone_table",
                "knots": self.knots.tolist(),
                "values": [float(x) if math.isfinite(x) else "inf" for x in self.values]}


@dataclass(frozen=True)
class IndicatorBall:
    """``h = 0`` on ``[0, radius]`` and ``+inf`` beyond (Ivanov constraint)."""

    radius: float

    name = "indicator_ball"

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("indicator_ball radius must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= self.radius, 0.0, math.inf)

    @property
    def finite_radius(self) -> float:
        return float(self.radius)

    def to_dict(self):
        return {"profile": "indicator_ball", "radius": float(self.radius)}


RadialProfile = Union[Square, Power, MonotoneTable, IndicatorBall]


def profile_value(h: RadialProfile, t: float) -> float:
    return float(h(np.asarray([t]))[0])


# --------------------------------------------------------------------------
# regularizers on R^n (and, for radial ones, on expansions)

@dataclass(frozen=True)
class Radial:
    profile: RadialProfile

    kind = "radial"
    n: Optional[int] = None

    @property
    def is_radial(self) -> bool:
        return True

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        return self.profile(np.linalg.norm(X, axis=-1))

    def to_dict(self):
        return {"kind": "radial", **self.profile.to_dict()}

    @property
    def label(self) -> str:
        extra = {"power": lambda h: f"({h.p:g})", "indicator_ball": lambda h: f"({h.radius:g})"}
        tail = extra.get(self.profile.name, lambda h: "")(self.profile)
        return f"radial:{self.profile.name}{tail}"


@dataclass(frozen=True, eq=False)
class AnisotropicQuadratic:
    """``sum_i weights_i x_i^2`` with weights not all equal."""

    weights: np.ndarray

    kind = "anisotropic_quadratic"

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.size < 1 or np.any(w <= 0):
            raise ValueError("anisotropic weights must be positive")
        if np.all(w == w[0]):
            raise ValueError("anisotropic weights must not all be equal")
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self) -> int:
        return self.weights.size

    @property
    def is_radial(self) -> bool:
        return False

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        return np.sum(self.weights * X * X, axis=-1)

    def to_dict(self):
        return {"kind": "anisotropic_quadratic", "weights": self.weights.tolist()}

    @property
    def label(self) -> str:
        return "anisotropic_quadratic(" + ",".join(f"{w:g}" for w in self.weights) + ")"


@dataclass(frozen=True, eq=False)
class ShiftedNorm:
    """``||x - center||`` with a nonzero center."""

    center: np.ndarray

    kind = "shifted_norm"

    def __post_init__(self):
        z = np.asarray(self.center, dtype=float).reshape(-1)
        if not np.any(z != 0):
            raise ValueError("shifted_norm center must be nonzero")
        object.__setattr__(self, "center", _frozen(z))

    @property
    def n(self) -> int:
        return self.center.size

    @property
    def is_radial(self) -> bool:
        return False

    def __call__(self, X):
        return np.linalg.norm(np.asarray(X, dtype=float) - self.center, axis=-1)

    def to_dict(self):
        return {"kind": "shifted_norm", "center": self.center.tolist()}

    @property
    def label(self) -> str:
        return "shifted_norm(" + ",".join(f"{z:g}" for z in self.center) + ")"


@dataclass(frozen=True, eq=False)
class Custom:
    """Arbitrary function on R^n; ``fn`` maps one vector to an extended real."""

    fn: Callable[[np.ndarray], float]
    n: int
    name: str = "custom"
    radial: bool = field(default=False)

    kind = "custom"

    @property
    def is_radial(self) -> bool:
        return self.radial

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            return float(self.fn(X))
        return np.array([self.fn(x) for x in X.reshape(-1, X.shape[-1])]).reshape(X.shape[:-1])

    def to_dict(self):
        raise TypeError("custom regularizers are not serializable")

    @property
    def label(self) -> str:
        return self.name


Regularizer = Union[Radial, AnisotropicQuadratic, ShiftedNorm, Custom]


def omega_value(R: Regularizer, w) -> float:
    """Value of the regularizer at an expansion (radial only) or a vector."""
    if isinstance(w, KernelExpansion):
        if not isinstance(R, Radial):
            raise TypeError(f"{R.label} is defined on R^n, not on kernel expansions")
        return profile_value(R.profile, norm(w))
    w = np.asarray(w, dtype=float).reshape(-1)
    n = getattr(R, "n", None)
    if n is not None and w.size != n:
        raise ValueError(f"{R.label} lives on R^{n}, got a vector of length {w.size}")
    return float(R(w))


def profile_from_dict(d: dict[str, Any]) -> RadialProfile:
    name = d.get("profile")
    if name == "square":
        return Square()
    if name == "power":
        return Power(float(d["p"]))
    if name == "indicator_ball":
        return IndicatorBall(float(d["radius"]))
    if name == "monotone_table":
        return MonotoneTable(d["knots"], [float(v) for v in d["values"]])
    raise ValueError(f"unknown radial profile {name!r}")


def regularizer_from_dict(d: dict[str, Any]) -> Regularizer:
    kind = d.get("kind")
    if kind == "radial":
        return Radial(profile_from_dict(d))
    if kind == "anisotropic_quadratic":
        return AnisotropicQuadratic(d["weights"])
    if kind == "shifted_norm":
        return ShiftedNorm(d["center"])
    raise ValueError(f"unknown regularizer kind {kind!r}")


# --------------------------------------------------------------------------
# sampling checkers

def lt(a, b, tol: float = TOL_CHECK):
    """``a < b - slack`` on extended reals; exact whenever +inf is involved."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    finite = np.isfinite(a) & np.isfinite(b)
    with np.errstate(invalid="ignore"):
        slack = tol + REL_CHECK * np.abs(b)
        return np.where(finite, a < b - slack, np.isfinite(a) & ~np.isfinite(b))


def differ(a, b, tol: float = TOL_CHECK):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    finite = np.isfinite(a) & np.isfinite(b)
    with np.errstate(invalid="ignore"):
        slack = tol + REL_CHECK * np.maximum(np.abs(a), np.abs(b))
        return np.where(finite, np.abs(a - b) > slack, np.isfinite(a) != np.isfinite(b))


def sample_vectors(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    """Gaussian directions with log-uniform radii in ``RADIUS_RANGE``."""
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    lo, hi = np.log(RADIUS_RANGE[0]), np.log(RADIUS_RANGE[1])
    return g * np.exp(rng.uniform(lo, hi, size=(m, 1)))


@dataclass
class CheckReport:
    name: str
    regularizer: str
    holds: bool
    trials: int
    seed: int
    violations: int = 0
    witness: Optional[dict[str, list[float]]] = None

    def to_dict(self):
        return {k: v for k, v in self.__dict__.items()}


def _dimension(R: Regularizer, n: Optional[int]) -> int:
    dim = getattr(R, "n", None)
    if dim is None:
        if n is None:
            raise ValueError("a dimension is needed for a radial regularizer")
        return int(n)
    if n is not None and n != dim:
        raise ValueError(f"{R.label} lives on R^{dim}, not R^{n}")
    return dim


def _run(name, R, n, trials, seed, draw, records=None):
    violations = 0
    witness = None
    for b, size in blocks(trials):
        rng = substream(seed, f"{name}:{R.label}", b)
        bad, pairs = draw(rng, size)
        violations += int(bad.sum())
        if witness is None and bad.any():
            i = int(np.argmax(bad))
            witness = {k: v[i].tolist() for k, v in pairs.items()}
        if records is not None:
            for i in range(size):
                row = {"trial": b * BLOCK + i}
                row.update({k: np.ravel(v[i]).tolist() for k, v in pairs.items()})
                row["violated"] = bool(bad[i])
                records.append(row)
    return CheckReport(name, R.label, violations == 0, trials, seed, violations, witness)


def check_orthogonal_monotonicity(R: Regularizer, n: Optional[int] = None, trials: int = 10_000,
                                  seed: int = 0, tol: float = TOL_CHECK,
                                  records: Optional[list] = None) -> CheckReport:
    """Sample orthogonal pairs and test ``R(x + y) >= max(R(x), R(y))``."""
    dim = _dimension(R, n)
    if dim < 2:
        raise ValueError("orthogonal monotonicity needs dimension >= 2")

    def draw(rng, m):
        x = sample_vectors(rng, m, dim)
        y = sample_vectors(rng, m, dim)
        d = rng.standard_normal((m, dim))
        d -= np.sum(d * x, axis=1, keepdims=True) / np.sum(x * x, axis=1, keepdims=True) * x
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        # signed, independently scaled orthogonal partner
        sign = np.where(rng.random((m, 1)) < 0.5, -1.0, 1.0)
        y = sign * d * np.linalg.norm(y, axis=1, keepdims=True)
        bad = lt(R(x + y), np.maximum(R(x), R(y)), tol)
        return bad, {"x": x, "y": y}

    return _run("orthogonal_monotonicity", R, dim, trials, seed, draw, records)


def check_ray_monotonicity(R: Regularizer, n: Optional[int] = None, trials: int = 10_000,
                           seed: int = 0, tol: float = TOL_CHECK,
                           records: Optional[list] = None) -> CheckReport:
    """Test ``R(x) >= R(lam x)`` for ``lam`` in [0, 1]."""
    dim = _dimension(R, n)

    def draw(rng, m):
        x = sample_vectors(rng, m, dim)
        lam = rng.random((m, 1))
        bad = lt(R(x), R(lam * x), tol)
        return bad, {"x": x, "lam": lam}

    return _run("ray_monotonicity", R, dim, trials, seed, draw, records)


def check_equal_norm(R: Regularizer, n: Optional[int] = None, trials: int = 10_000,
                     seed: int = 0, tol: float = TOL_CHECK,
                     records: Optional[list] = None) -> CheckReport:
    """Test ``R(x) == R(y)`` for pairs related by a random reflection."""
    dim = _dimension(R, n)

    def draw(rng, m):
        x = sample_vectors(rng, m, dim)
        v = rng.standard_normal((m, dim))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        y = x - 2.0 * np.sum(x * v, axis=1, keepdims=True) * v
        bad = differ(R(x), R(y), tol)
        return bad, {"x": x, "y": y}

    return _run("equal_norm", R, dim, trials, seed, draw, records)


@dataclass
class EquivalenceReport:
    regularizer: str
    orthogonal: CheckReport
    ray: CheckReport
    equal_norm: CheckReport

    @property
    def radial_verdict(self) -> bool:
        return self.ray.holds and self.equal_norm.holds

    @property
    def orthogonal_verdict(self) -> bool:
        return self.orthogonal.holds

    @property
    def agree(self) -> bool:
        return self.radial_verdict == self.orthogonal_verdict

    def to_dict(self):
        return {
            "regularizer": self.regularizer,
            "orthogonal_verdict": self.orthogonal_verdict,
            "radial_verdict": self.radial_verdict,
            "agree": self.agree,
            "checks": [self.orthogonal.to_dict(), self.ray.to_dict(), self.equal_norm.to_dict()],
        }


def characterization_check(R: Regularizer, n: Optional[int] = None, trials: int = 10_000,
                           seed: int = 0) -> EquivalenceReport:
    """Compare the orthogonal-monotonicity verdict with the radial-nondecreasing one."""
    return EquivalenceReport(
        R.label,
        check_orthogonal_monotonicity(R, n, trials, seed),
        check_ray_monotonicity(R, n, trials, seed),
        check_equal_norm(R, n, trials, seed),
    )


def catalogue() -> list[tuple[Regularizer, int]]:
    """Regularizers exercised by the characterization harness, with their dimension."""
    return [
        (Radial(Square()), 3),
        (Radial(Power(0.5)), 3),
        (Radial(Power(3.0)), 2),
        (Radial(MonotoneTable([0.0, 1.0, 2.0, 5.0], [0.0, 0.5, 3.0, math.inf])), 3),
        (Radial(IndicatorBall(1.0)), 4),
        (AnisotropicQuadratic([1.0, 4.0]), 2),
        (AnisotropicQuadratic([1.0, 4.0, 9.0]), 3),
        (ShiftedNorm([1.0, 0.0]), 2),
    ]


# x and y are orthogonal and R(x + y) = 3.25 < max(R(x), R(y)) = 5
ANISOTROPIC_WITNESS = {
    "weights": (1.0, 4.0),
    "x": (1.0, 1.0),
    "y": (0.5, -0.5),
}
