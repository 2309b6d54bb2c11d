"""Bounded linear functionals on an RKHS and their representers.

The representer of ``L`` is built from ``K_L(x) = L K_x``, which for the three
supported functionals is again a finite expansion, so the whole pipeline stays
inside the span of kernel sections.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence, Union

import numpy as np

from .kernels import Kernel, KernelExpansion, _frozen


def _point(x) -> np.ndarray:
    return _frozen(np.asarray(x, dtype=float).reshape(-1))


def _point_set(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return _frozen(X)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = _point_set(self.atoms)
        weights = _frozen(np.asarray(self.weights, dtype=float).reshape(-1))
        if atoms.shape[0] != weights.shape[0] or atoms.shape[0] == 0:
            raise ValueError("a discrete measure needs as many weights as atoms (at least one)")
        if np.any(weights < 0):
            raise ValueError("measure weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"measure weights must sum to 1, got {weights.sum()!r}")
        if np.unique(atoms, axis=0).shape[0] != atoms.shape[0]:
            raise ValueError("measure atoms must be distinct")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True, eq=False)
class PointEval:
    """``L w = w(x)``."""

    point: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", _point(self.point))

    @property
    def dim(self) -> int:
        return self.point.size

    def to_dict(self) -> dict[str, Any]:
        return {"type": "point_eval", "point": self.point.tolist()}


@dataclass(frozen=True, eq=False)
class Expectation:
    """``L w = E_P[w]`` for a discrete probability measure ``P``."""

    measure: DiscreteMeasure

    @property
    def dim(self) -> int:
        return self.measure.atoms.shape[1]

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "expectation",
            "atoms": self.measure.atoms.tolist(),
            "weights": self.measure.weights.tolist(),
        }


def _cell_volume(grid: np.ndarray) -> float:
    vol = 1.0
    for axis in range(grid.shape[1]):
        coords = np.unique(grid[:, axis])
        if coords.size < 2:
            raise ValueError("convolution grid needs at least two nodes per axis")
        gaps = np.diff(coords)
        if not np.allclose(gaps, gaps[0], rtol=1e-9, atol=0.0):
            raise ValueError("convolution grid must be uniform")
        vol *= gaps[0]
    return float(vol)


@dataclass(frozen=True, eq=False)
class Convolution:
    """``L w = (u * w)(x)`` by the rectangle rule on a uniform grid.

    ``L w = sum_k u(s_k) w(x - s_k) ds`` where ``ds`` is the grid cell volume.
    """

    signal_grid: np.ndarray
    signal_values: np.ndarray
    eval_point: np.ndarray

    def __post_init__(self):
        grid = _point_set(self.signal_grid)
        values = _frozen(np.asarray(self.signal_values, dtype=float).reshape(-1))
        if values.shape[0] != grid.shape[0]:
            raise ValueError("signal_values must match signal_grid in length")
        x = _point(self.eval_point)
        if x.size != grid.shape[1]:
            raise ValueError("eval_point and signal_grid differ in dimension")
        object.__setattr__(self, "signal_grid", grid)
        object.__setattr__(self, "signal_values", values)
        object.__setattr__(self, "eval_point", x)
        object.__setattr__(self, "spacing", _cell_volume(grid))

    @property
    def dim(self) -> int:
        return self.eval_point.size

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "convolution",
            "signal_grid": self.signal_grid.tolist(),
            "signal_values": self.signal_values.tolist(),
            "eval_point": self.eval_point.tolist(),
        }


LinearFunctional = Union[PointEval, Expectation, Convolution]


def _nodes(L: LinearFunctional) -> tuple[np.ndarray, np.ndarray]:
    """Points and weights such that ``L w = sum_j weights_j w(points_j)``."""
    if isinstance(L, PointEval):
        return L.point[None, :], np.ones(1)
    if isinstance(L, Expectation):
        return L.measure.atoms, L.measure.weights
    if isinstance(L, Convolution):
        return L.eval_point[None, :] - L.signal_grid, L.signal_values * L.spacing
    raise TypeError(f"not a linear functional: {type(L).__name__}")


def apply(L: LinearFunctional, w: KernelExpansion) -> float:
    if L.dim != w.kernel.input_dim:
        raise ValueError(f"functional acts on R^{L.dim}, expansion lives on R^{w.kernel.input_dim}")
    points, weights = _nodes(L)
    return float(weights @ w.evaluate(points))


def representer(L: LinearFunctional, kernel: Kernel) -> KernelExpansion:
    """Riesz representer ``K_L`` with ``<w, K_L> = L w``."""
    if L.dim != kernel.input_dim:
        raise ValueError(f"functional acts on R^{L.dim}, kernel on R^{kernel.input_dim}")
    points, weights = _nodes(L)
    return KernelExpansion(kernel, points, weights)


def gram_matrix(Ls: Sequence[LinearFunctional], kernel: Kernel) -> np.ndarray:
    """``G_ij = <K_{L_i}, K_{L_j}>``."""
    if len(Ls) == 0:
        return np.zeros((0, 0))
    reps = [representer(L, kernel) for L in Ls]
    points = np.vstack([r.centers for r in reps])
    C = np.zeros((points.shape[0], len(reps)))
    start = 0
    for j, r in enumerate(reps):
        C[start:start + len(r), j] = r.coefficients
        start += len(r)
    G = C.T @ kernel.matrix(points) @ C
    return 0.5 * (G + G.T)


def functional_from_dict(d: dict[str, Any]) -> LinearFunctional:
    kind = d.get("type")
    if kind == "point_eval":
        return PointEval(d["point"])
    if kind == "expectation":
        return Expectation(DiscreteMeasure(d["atoms"], d["weights"]))
    if kind == "convolution":
        return Convolution(d["signal_grid"], d["signal_values"], d["eval_point"])
    raise ValueError(f"unknown functional type {kind!r}")
