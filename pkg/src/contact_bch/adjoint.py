"""Adjoint action of the CHA as matrices.

Coordinates are ordered ``(z, a_1..a_n, b_1..b_n, c)``. In that order every
adjoint matrix is upper triangular, and ``exp(ad_X)`` has the sparsity
pattern::

    [ t    M12^T  M13^T  M14 ]
    [ 0    t*I    0      M24 ]
    [ 0    0      u*I    0   ]
    [ 0    0      0      u   ]

with ``t = e^m``, ``u = 1``. The pattern is closed under products and
powers, so the step-by-step closed forms act on five blocks instead of a
dense matrix. Dense matrices (plain ``numpy`` arrays) are kept for checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import ChaElement, check_same_n, commutator
from .errors import DimensionError, NumericError
from .kernels import (
    DEFAULT_KERNELS,
    ScalarKernelSet,
    chi,
    geometric_sum,
    h1,
    h2,
    phi,
    psi,
    rho,
    weighted_geometric_sum,
)

__all__ = [
    "StructuredMatrix",
    "StructuredExpMatrix",
    "ad_matrix",
    "exp_ad_apply",
    "exp_ad_matrix",
    "product_matrix",
    "matrix_pow_closed",
    "series_sum_closed",
    "matrix_exp",
    "dense_to_dict",
    "dense_from_dict",
]


def _embed(n, top, bottom, M12, M13, M24, M14):
    d = 2 * n + 2
    A = np.zeros((d, d))
    A[0, 0] = top
    A[1:n + 1, 1:n + 1] = top * np.eye(n)
    A[n + 1:2 * n + 1, n + 1:2 * n + 1] = bottom * np.eye(n)
    A[-1, -1] = bottom
    A[0, 1:n + 1] = M12
    A[0, n + 1:2 * n + 1] = M13
    A[0, -1] = M14
    A[1:n + 1, -1] = M24
    return A


def _vec(v):
    arr = np.array(v, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


class _PatternMixin:
    """Shared dense embedding / application for both pattern types."""

    def to_dense(self) -> np.ndarray:
        return _embed(self.n, self.top, self.bottom, self.M12, self.M13, self.M24, self.M14)

    def apply(self, Y: ChaElement) -> ChaElement:
        """Apply the matrix to Y's coordinate vector without forming it."""
        if Y.n != self.n:
            raise DimensionError(f"matrix has n={self.n}, element has n={Y.n}")
        z = (self.top * Y.z + float(np.dot(self.M12, Y.a)) + float(np.dot(self.M13, Y.b))
             + self.M14 * Y.c)
        a = self.top * Y.a + self.M24 * Y.c
        return ChaElement(z, a, self.bottom * Y.b, self.bottom * Y.c)

    def _check(self):
        for name in ("M12", "M13", "M24"):
            v = _vec(getattr(self, name))
            if v.size != self.n:
                raise DimensionError(f"{name} must have length n={self.n}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "M14", float(self.M14))
        vals = np.concatenate((self.M12, self.M13, self.M24, [self.M14, self.top]))
        if not np.all(np.isfinite(vals)):
            raise NumericError("non-finite entry in structured matrix")


@dataclass(frozen=True, eq=False)
class StructuredExpMatrix(_PatternMixin):
    """A matrix of the exponential pattern: diagonal ``(e^m I_{1+n}, I_{n+1})``."""

    n: int
    m: float
    M12: np.ndarray
    M13: np.ndarray
    M24: np.ndarray
    M14: float

    def __post_init__(self):
        object.__setattr__(self, "m", float(self.m))
        self._check()

    @property
    def top(self) -> float:
        return math.exp(self.m)

    @property
    def bottom(self) -> float:
        return 1.0

    @classmethod
    def identity(cls, n: int = 1) -> "StructuredExpMatrix":
        z = np.zeros(n)
        return cls(n, 0.0, z, z, z, 0.0)

    def __matmul__(self, other):
        """Product of two exp-pattern matrices, staying on the pattern."""
        if not isinstance(other, StructuredExpMatrix):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError("pattern matrices with different n")
        t, to = self.top, other.top
        return StructuredExpMatrix(
            self.n,
            self.m + other.m,
            t * other.M12 + to * self.M12,
            t * other.M13 + self.M13,
            t * other.M24 + self.M24,
            t * other.M14 + float(np.dot(self.M12, other.M24)) + self.M14,
        )

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "M12": self.M12.tolist(),
                "M13": self.M13.tolist(), "M24": self.M24.tolist(), "M14": self.M14}


@dataclass(frozen=True, eq=False)
class StructuredMatrix(_PatternMixin):
    """Same sparsity, arbitrary diagonal values ``top`` and ``bottom``.

    This is what sums of powers of exp-pattern matrices look like, e.g. the
    series ``sum_n (I - M)^n / (n(n+1))`` has ``bottom = 0``.
    """

    n: int
    top: float
    bottom: float
    M12: np.ndarray
    M13: np.ndarray
    M24: np.ndarray
    M14: float

    def __post_init__(self):
        object.__setattr__(self, "top", float(self.top))
        object.__setattr__(self, "bottom", float(self.bottom))
        self._check()

    def to_dict(self) -> dict:
        return {"n": self.n, "top": self.top, "bottom": self.bottom,
                "M12": self.M12.tolist(), "M13": self.M13.tolist(),
                "M24": self.M24.tolist(), "M14": self.M14}


def ad_matrix(X: ChaElement) -> np.ndarray:
    """Matrix of ``Y -> [X, Y]`` in coordinates.

    Columns: ``[X, X_1] = -c X_1``, ``[X, X_qj] = b_j X_1 - c X_qj``,
    ``[X, -X_pj] = -a_j X_1``, ``[X, X_S] = z X_1 + a_i X_qi``.
    """
    n = X.n
    d = 2 * n + 2
    A = np.zeros((d, d))
    A[0, 0] = -X.c
    A[0, 1:n + 1] = X.b
    A[1:n + 1, 1:n + 1] = -X.c * np.eye(n)
    A[0, n + 1:2 * n + 1] = -X.a
    A[0, -1] = X.z
    A[1:n + 1, -1] = X.a
    return A


def exp_ad_matrix(X: ChaElement, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> StructuredExpMatrix:
    """``exp(ad_X)`` in closed form."""
    k1 = h1(X.c, kernels)
    k2 = h2(X.c, kernels)
    return StructuredExpMatrix(
        X.n,
        -X.c,
        X.b * math.exp(-X.c),
        -X.a * k1,
        X.a * k1,
        X.z * k1 + float(np.dot(X.a, X.b)) * k2,
    )


def exp_ad_apply(X: ChaElement, Y: ChaElement,
                 kernels: ScalarKernelSet = DEFAULT_KERNELS) -> ChaElement:
    """``exp(ad_X) Y`` summed in closed form.

    Only the X_1 and X_q components change; ``b`` and ``c`` of Y pass through.
    """
    check_same_n(X, Y)
    e = math.exp(-X.c)
    k1 = h1(X.c, kernels)
    k2 = h2(X.c, kernels)
    z_inf = (Y.z * e + float(np.dot(Y.a, X.b)) * e - float(np.dot(X.a, Y.b)) * k1
             + Y.c * (X.z * k1 + float(np.dot(X.a, X.b)) * k2))
    a_inf = Y.a * e + Y.c * k1 * X.a
    return ChaElement(z_inf, a_inf, Y.b, Y.c)


def product_matrix(X: ChaElement, Y: ChaElement, t: float = 1.0,
                   kernels: ScalarKernelSet = DEFAULT_KERNELS) -> StructuredExpMatrix:
    """``exp(ad_X) exp(t ad_Y)`` with each block written out explicitly."""
    check_same_n(X, Y)
    t = float(t)
    c, cb = X.c, Y.c
    e = math.exp(-c)
    m = -c - t * cb
    k1, k2 = h1(c, kernels), h2(c, kernels)
    # t-scaled kernels of the second factor: (1 - e^{-t cb})/cb = t h1(t cb), etc.
    tk1 = t * h1(t * cb, kernels)
    tk2 = t * t * h2(t * cb, kernels)
    M12 = math.exp(m) * (X.b + t * Y.b)
    M13 = -X.a * k1 - Y.a * e * tk1
    M24 = X.a * k1 + Y.a * e * tk1
    M14 = (Y.z * e * tk1 + X.z * k1 + float(np.dot(Y.a, Y.b)) * e * tk2
           + float(np.dot(Y.a, X.b)) * e * tk1 + float(np.dot(X.a, X.b)) * k2)
    return StructuredExpMatrix(X.n, m, M12, M13, M24, M14)


def matrix_pow_closed(M: StructuredExpMatrix, k: int,
                      kernels: ScalarKernelSet = DEFAULT_KERNELS) -> StructuredExpMatrix:
    """``M^k`` for an exp-pattern matrix, without repeated multiplication."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return StructuredExpMatrix.identity(M.n)
    m = M.m
    geo = geometric_sum(m, k, kernels)
    wgeo = weighted_geometric_sum(m, k, kernels)
    return StructuredExpMatrix(
        M.n,
        k * m,
        k * math.exp((k - 1) * m) * M.M12,
        geo * M.M13,
        geo * M.M24,
        geo * M.M14 + wgeo * float(np.dot(M.M12, M.M24)),
    )


def series_sum_closed(M: StructuredExpMatrix,
                      kernels: ScalarKernelSet = DEFAULT_KERNELS) -> StructuredMatrix:
    """``sum_{n>=1} (I - M)^n / (n(n+1))`` in closed form.

    Defined by analytic continuation for every real m; it coincides with the
    series wherever ``|1 - e^m| < 1``.
    """
    m = M.m
    r = rho(m, kernels)
    return StructuredMatrix(
        M.n,
        phi(m, kernels),
        0.0,
        psi(m, kernels) * M.M12,
        -r * M.M13,
        -r * M.M24,
        -r * M.M14 - chi(m, kernels) * float(np.dot(M.M12, M.M24)),
    )


_TAYLOR_ORDER = 18
_SCALE_TARGET = 0.5


def matrix_exp(A) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a degree-18 Taylor kernel.

    Accepts a single square matrix or a stack ``(..., d, d)``. Each matrix is
    scaled by ``2^-s`` so its 1-norm is at most 0.5, where the truncated
    Taylor remainder is ~1e-23, then squared back ``s`` times.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ValueError("matrix_exp needs square matrices")
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix_exp input has non-finite entries")
    norms = np.abs(A).sum(axis=-2).max(axis=-1)
    s = np.maximum(0, np.ceil(np.log2(np.maximum(norms, 1e-300) / _SCALE_TARGET))).astype(int)
    scaled = A * np.ldexp(1.0, -s)[..., None, None]
    eye = np.broadcast_to(np.eye(A.shape[-1]), A.shape)
    E = eye.copy()
    for j in range(_TAYLOR_ORDER, 0, -1):
        E = eye + (scaled @ E) / j
    for step in range(int(s.max(initial=0))):
        squared = E @ E
        E = np.where((s > step)[..., None, None], squared, E)
    if not np.all(np.isfinite(E)):
        raise NumericError("matrix_exp overflowed")
    return E


def dense_to_dict(A) -> dict:
    A = np.asarray(A, dtype=float)
    return {"dim": int(A.shape[0]), "entries": A.tolist()}


def dense_from_dict(data: dict) -> np.ndarray:
    A = np.array(data["entries"], dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != data["dim"]:
        raise DimensionError("entries must be a dim x dim array")
    if not np.all(np.isfinite(A)):
        raise NumericError("non-finite entries")
    return A
