"""The contact Heisenberg algebra (CHA).

An element is the linear function ``z*1 + a_i q^i + b^i p_i + c S`` on a
(2n+1)-dimensional contact manifold, stored by its components with respect
to the basis ``(X_1, X_q1..X_qn, -X_p1..-X_pn, X_S)``.

Note the sign convention: ``b`` multiplies ``-X_p``, so the generator
``X_p`` itself has ``b = -1``.

The only non-vanishing brackets of basis elements are::

    [X_1, X_S] = X_1,   [X_qi, X_S] = X_qi,   [X_qi, X_pj] = delta_ij X_1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionError, NumericError

__all__ = [
    "ChaElement",
    "BasisIndex",
    "basis_element",
    "coordinate_basis",
    "add",
    "scale",
    "commutator",
    "ad_pow",
    "is_central",
    "in_heisenberg_ideal",
    "check_same_n",
]


def _frozen_vector(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ChaElement:
    """Immutable element ``(z, a, b, c)`` of the CHA.

    ``a`` and ``b`` are length-n vectors (n >= 1); ``z`` and ``c`` scalars.
    All entries must be finite.
    """

    z: float
    a: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        a = _frozen_vector(self.a)
        b = _frozen_vector(self.b)
        if a.size == 0:
            raise DimensionError("a and b must have length n >= 1")
        if a.shape != b.shape:
            raise DimensionError(
                f"a and b must have the same length, got {a.size} and {b.size}"
            )
        z = float(self.z)
        c = float(self.c)
        if not (math.isfinite(z) and math.isfinite(c)
                and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise NumericError("ChaElement entries must be finite")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.size

    @property
    def dim(self) -> int:
        """Dimension ``2n + 2`` of the algebra this element lives in."""
        return 2 * self.n + 2

    @classmethod
    def zero(cls, n: int = 1) -> "ChaElement":
        return cls(0.0, np.zeros(n), np.zeros(n), 0.0)

    @classmethod
    def from_coords(cls, coords) -> "ChaElement":
        """Inverse of :meth:`coords`."""
        v = np.asarray(coords, dtype=float).reshape(-1)
        if v.size < 4 or v.size % 2:
            raise DimensionError(f"coordinate vector of length {v.size} is not 2n+2")
        n = (v.size - 2) // 2
        return cls(v[0], v[1:n + 1], v[n + 1:2 * n + 1], v[-1])

    def coords(self) -> np.ndarray:
        """Coordinate vector ``(z, a_1..a_n, b_1..b_n, c)``."""
        return np.concatenate(([self.z], self.a, self.b, [self.c]))

    def norm(self) -> float:
        """Max norm of the coordinate vector."""
        return float(np.max(np.abs(self.coords())))

    def replace(self, **changes) -> "ChaElement":
        fields = {"z": self.z, "a": self.a, "b": self.b, "c": self.c}
        fields.update(changes)
        return ChaElement(**fields)

    # JSON form: {"n": 1, "z": 0.0, "a": [1.0], "b": [0.0], "c": 0.0};
    # "b" is the coefficient of -X_p.
    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "z": self.z,
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "c": self.c,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChaElement":
        if not isinstance(data, dict):
            raise ValueError("ChaElement JSON must be an object")
        missing = {"z", "a", "b", "c"} - set(data)
        if missing:
            raise ValueError(f"ChaElement JSON missing fields: {sorted(missing)}")
        a, b = data["a"], data["b"]
        if not isinstance(a, list) or not isinstance(b, list):
            raise ValueError('"a" and "b" must be JSON arrays')
        elem = cls(data["z"], a, b, data["c"])
        if "n" in data and data["n"] != elem.n:
            raise DimensionError(
                f'"n" is {data["n"]} but "a" and "b" have length {elem.n}'
            )
        return elem

    def __eq__(self, other):
        if not isinstance(other, ChaElement):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.coords(), other.coords())

    __hash__ = None

    def __repr__(self):
        return (f"ChaElement(z={self.z!r}, a={self.a.tolist()!r}, "
                f"b={self.b.tolist()!r}, c={self.c!r})")

    def __add__(self, other):
        if not isinstance(other, ChaElement):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, ChaElement):
            return NotImplemented
        return add(self, scale(-1.0, other))

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, lam):
        if isinstance(lam, ChaElement):
            return NotImplemented
        return scale(lam, self)

    __rmul__ = __mul__


@dataclass(frozen=True)
class BasisIndex:
    """Names one generator: ``One``, ``Q`` (with i), ``P`` (with i) or ``S``.

    Indices ``i`` are 1-based, as in ``q^1 .. q^n``.
    """

    tag: str
    i: int = 0

    def __post_init__(self):
        if self.tag not in ("One", "Q", "P", "S"):
            raise ValueError(f"unknown basis tag {self.tag!r}")
        if self.tag in ("Q", "P") and self.i < 1:
            raise ValueError(f"{self.tag} needs an index i >= 1")

    @classmethod
    def parse(cls, text: str) -> "BasisIndex":
        """Parse ``"1"``, ``"S"``, ``"q2"``, ``"p1"`` (case-insensitive)."""
        t = text.strip()
        if t in ("1", "One", "one"):
            return cls("One")
        if t.upper() == "S":
            return cls("S")
        if t[:1].upper() in ("Q", "P") and t[1:].isdigit():
            return cls(t[:1].upper(), int(t[1:]))
        raise ValueError(f"cannot parse basis index {text!r}")


def basis_element(index: Union[BasisIndex, str], n: int = 1) -> ChaElement:
    """The generator named by ``index``, e.g. ``basis_element("p1")``.

    ``P(i)`` gives ``X_{p_i}`` itself, whose ``b`` component is ``-1``.
    """
    if isinstance(index, str):
        index = BasisIndex.parse(index)
    if index.tag in ("Q", "P") and index.i > n:
        raise DimensionError(f"index {index.i} out of range for n={n}")
    z, c = 0.0, 0.0
    a, b = np.zeros(n), np.zeros(n)
    if index.tag == "One":
        z = 1.0
    elif index.tag == "S":
        c = 1.0
    elif index.tag == "Q":
        a[index.i - 1] = 1.0
    else:
        b[index.i - 1] = -1.0
    return ChaElement(z, a, b, c)


def coordinate_basis(n: int) -> list:
    """The 2n+2 unit coordinate vectors as elements (``-X_p`` for the b slots)."""
    eye = np.eye(2 * n + 2)
    return [ChaElement.from_coords(row) for row in eye]


def check_same_n(*elements: ChaElement) -> int:
    n = elements[0].n
    for e in elements[1:]:
        if e.n != n:
            raise DimensionError(f"dimension mismatch: n={n} vs n={e.n}")
    return n


def add(X: ChaElement, Y: ChaElement) -> ChaElement:
    check_same_n(X, Y)
    return ChaElement(X.z + Y.z, X.a + Y.a, X.b + Y.b, X.c + Y.c)


def scale(lam: float, X: ChaElement) -> ChaElement:
    lam = float(lam)
    return ChaElement(lam * X.z, lam * X.a, lam * X.b, lam * X.c)


def commutator(X: ChaElement, Y: ChaElement) -> ChaElement:
    """Lie bracket ``[X, Y]``.

    The result always lies in ``span(X_1, X_q)``; its b and c slots are
    literal zeros, so predicates downstream may test them exactly.
    """
    n = check_same_n(X, Y)
    # grouped as P(X,Y) - P(Y,X) so that [Y,X] == -[X,Y] bit for bit
    p_xy = X.z * Y.c + float(np.dot(X.b, Y.a))
    p_yx = Y.z * X.c + float(np.dot(Y.b, X.a))
    z1 = p_xy - p_yx
    a1 = X.a * Y.c - X.c * Y.a
    return ChaElement(z1, a1, np.zeros(n), 0.0)


def ad_pow(X: ChaElement, Y: ChaElement, k: int) -> ChaElement:
    """``(ad_X)^k Y`` in closed form.

    With ``(z1, a1) = [X, Y]``::

        a_k = (-c)^(k-1) a1
        z_k = (-c)^(k-1) z1 + (k-1) (-c)^(k-2) (a1 . b)
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        check_same_n(X, Y)
        return Y
    first = commutator(X, Y)
    if k == 1:
        return first
    mc = -X.c
    a_k = mc ** (k - 1) * first.a
    z_k = mc ** (k - 1) * first.z + (k - 1) * mc ** (k - 2) * float(np.dot(first.a, X.b))
    return ChaElement(z_k, a_k, np.zeros(X.n), 0.0)


def is_central(X: ChaElement, tol: float = 0.0) -> bool:
    """True iff ``[X, B]`` is within ``tol`` (max norm) of zero for every basis B.

    The CHA has trivial center, so this only holds for ``|X| <~ tol``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return all(commutator(X, B).norm() <= tol for B in coordinate_basis(X.n))


def in_heisenberg_ideal(X: ChaElement) -> bool:
    """Membership in ``span{X_(z,a,b,0)}``, the copy of the Heisenberg algebra."""
    return X.c == 0.0

