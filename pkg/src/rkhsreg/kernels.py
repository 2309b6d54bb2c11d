"""Kernels, kernel sections and finite kernel expansions.

Every element of the RKHS that this package touches is a finite expansion
``w = sum_i c_i K(z_i, .)``.  Inner products and norms are computed exactly
from the kernel matrix between centers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

FAMILIES = ("gaussian", "polynomial", "linear")

# tol_psd is scaled by the matrix dimension at the call site
TOL_PSD = 1e-8
TOL_EVAL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Kernel:
    """Reproducing kernel on R^input_dim.

    gaussian:   exp(-||x - y||^2 / (2 width^2))
    polynomial: (<x, y> + offset)^degree
    linear:     <x, y>
    """

    family: str
    input_dim: int
    width: float = 1.0
    degree: int = 2
    offset: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if int(self.input_dim) != self.input_dim or self.input_dim < 1:
            raise ValueError("input_dim must be a positive integer")
        if self.family == "gaussian" and not self.width > 0:
            raise ValueError("gaussian width must be positive")
        if self.family == "polynomial":
            if int(self.degree) != self.degree or self.degree < 1:
                raise ValueError("polynomial degree must be a positive integer")
            if not self.offset >= 0:
                raise ValueError("polynomial offset must be nonnegative")

    def _points(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :] if self.input_dim > 1 or X.size == 1 else X[:, None]
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise ValueError(
                f"points must have dimension {self.input_dim}, got shape {np.shape(X)}")
        return X

    def matrix(self, X, Y=None) -> np.ndarray:
        """Kernel matrix ``[K(x_i, y_j)]`` between two point sets."""
        X = self._points(X)
        Y = X if Y is None else self._points(Y)
        if self.family == "gaussian":
            sq = np.sum((X[:, None, :] - Y[None, :, :]) ** 2, axis=-1)
            return np.exp(-sq / (2.0 * self.width ** 2))
        dot = X @ Y.T
        if self.family == "polynomial":
            return (dot + self.offset) ** self.degree
        return dot

    def __call__(self, x, y) -> float:
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        if x.size != self.input_dim or y.size != self.input_dim:
            raise ValueError(
                f"points must have dimension {self.input_dim}, got {x.size} and {y.size}")
        return float(self.matrix(x[None, :], y[None, :])[0, 0])

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"family": self.family, "input_dim": int(self.input_dim)}
        if self.family == "gaussian":
            d["width"] = float(self.width)
        elif self.family == "polynomial":
            d["degree"] = int(self.degree)
            d["offset"] = float(self.offset)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Kernel":
        return cls(**d)


def kernel_eval(k: Kernel, x, y) -> float:
    return k(x, y)


@dataclass(frozen=True, eq=False)
class KernelExpansion:
    """Finite expansion ``w = sum_i c_i K(z_i, .)``.

    Instances are immutable; arithmetic concatenates center lists and never
    merges duplicates (see :meth:`compact`).
    """

    kernel: Kernel
    centers: np.ndarray = field(default=None)
    coefficients: np.ndarray = field(default=None)

    def __post_init__(self):
        d = self.kernel.input_dim
        centers = np.zeros((0, d)) if self.centers is None else np.asarray(self.centers, float)
        if centers.size == 0:
            centers = np.zeros((0, d))
        if centers.ndim == 1 and centers.size % d == 0:
            centers = centers.reshape(-1, d)
        if centers.ndim != 2 or centers.shape[1] != d:
            raise ValueError(f"centers must have shape (m, {d})")
        coef = np.zeros(0) if self.coefficients is None else np.asarray(self.coefficients, float)
        coef = coef.reshape(-1)
        if coef.shape[0] != centers.shape[0]:
            raise ValueError("centers and coefficients differ in length")
        object.__setattr__(self, "centers", _frozen(centers))
        object.__setattr__(self, "coefficients", _frozen(coef))

    @classmethod
    def zero(cls, kernel: Kernel) -> "KernelExpansion":
        return cls(kernel)

    def __len__(self) -> int:
        return self.coefficients.shape[0]

    def __call__(self, x) -> float:
        return expansion_eval(self, x)

    def evaluate(self, X) -> np.ndarray:
        """Vectorised evaluation at the rows of ``X``."""
        X = self.kernel._points(X)
        if len(self) == 0:
            return np.zeros(X.shape[0])
        return self.kernel.matrix(X, self.centers) @ self.coefficients

    def _check(self, other: "KernelExpansion"):
        if not isinstance(other, KernelExpansion):
            return NotImplemented
        if other.kernel != self.kernel:
            raise ValueError("expansions live in different RKHSs (kernel mismatch)")
        return None

    def __add__(self, other: "KernelExpansion") -> "KernelExpansion":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return KernelExpansion(
            self.kernel,
            np.vstack([self.centers, other.centers]),
            np.concatenate([self.coefficients, other.coefficients]),
        )

    def __mul__(self, a: float) -> "KernelExpansion":
        return KernelExpansion(self.kernel, self.centers, float(a) * self.coefficients)

    __rmul__ = __mul__

    def __neg__(self) -> "KernelExpansion":
        return self * -1.0

    def __sub__(self, other: "KernelExpansion") -> "KernelExpansion":
        return self + (-other)

    def compact(self, decimals: int | None = None) -> "KernelExpansion":
        """Merge coefficients of identical centers and drop zero terms."""
        if len(self) == 0:
            return self
        keys = self.centers if decimals is None else np.round(self.centers, decimals)
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        coef = np.zeros(uniq.shape[0])
        np.add.at(coef, inverse.reshape(-1), self.coefficients)
        keep = coef != 0.0
        return KernelExpansion(self.kernel, uniq[keep], coef[keep])


def section(kernel: Kernel, x) -> KernelExpansion:
    """Kernel section ``K_x = K(x, .)``."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    return KernelExpansion(kernel, x, np.ones(1))


def expansion_eval(w: KernelExpansion, x) -> float:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != w.kernel.input_dim:
        raise ValueError(f"point has dimension {x.size}, kernel expects {w.kernel.input_dim}")
    return float(w.evaluate(x[None, :])[0])


def inner_product(u: KernelExpansion, v: KernelExpansion) -> float:
    if u.kernel != v.kernel:
        raise ValueError("kernel mismatch in inner product")
    if len(u) == 0 or len(v) == 0:
        return 0.0
    return float(u.coefficients @ u.kernel.matrix(u.centers, v.centers) @ v.coefficients)


def norm(w: KernelExpansion) -> float:
    return float(np.sqrt(max(0.0, inner_product(w, w))))


def min_eigenvalue(G: np.ndarray) -> float:
    G = np.asarray(G, dtype=float)
    if G.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(0.5 * (G + G.T))[0])


def is_psd(G: np.ndarray, tol: float = TOL_PSD) -> bool:
    """PSD test with floor ``-tol * dim * max(1, max|G_ij|)``."""
    G = np.asarray(G, dtype=float)
    scale = max(1.0, float(np.max(np.abs(G)))) if G.size else 1.0
    return min_eigenvalue(G) >= -tol * max(1, G.shape[0]) * scale
