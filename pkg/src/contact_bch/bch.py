"""Exact BCH product ``Z = log(e^X e^Y)`` on the contact Heisenberg algebra.

With ``s = c + cbar`` the closed form reads::

    Z = X + Y - f [X, Y]
        + (abar c - a cbar) . ((f - g1)/c * b + (f + g2)/cbar * bbar) X_1

Only the X_1 and X_q components pick up corrections, so ``b_Z = b + bbar``
and ``c_Z = c + cbar`` exactly. In terms of divided differences of ``exp``::

    f  = -exp[0, cbar, s] / exp[0, s]
    g1 = -exp[0, cbar] exp[0, s, s] / exp[0, s]^2
    g2 =  exp[cbar, s] exp[0, 0, s] / exp[0, s]^2

and the two combinations in the X_1 term are

    (f - g1)/c    = (exp[0,s] exp[0,cbar,s,s] - exp[0,cbar,s] exp[0,s,s]) / exp[0,s]^2
    (f + g2)/cbar = (exp[0,cbar,s] exp[0,0,s] - exp[0,s] exp[0,0,cbar,s]) / exp[0,s]^2

``exp[0, s] > 0`` for every real s, so none of these ever divides by
a small number: the apparent poles at c = 0, cbar = 0 and s = 0 are gone.
"""

from __future__ import annotations

import math

import numpy as np

from .algebra import ChaElement, add, check_same_n, commutator, scale
from .errors import NumericError
from .kernels import DEFAULT_KERNELS, ScalarKernelSet, exp_divdiff

__all__ = [
    "f_coeff",
    "g1_coeff",
    "g2_coeff",
    "x1_coeffs",
    "bch",
    "bch_heisenberg",
    "bch_first_order",
]


def _check_finite(c, cbar):
    if not (math.isfinite(c) and math.isfinite(cbar)):
        raise NumericError(f"non-finite kernel argument ({c}, {cbar})")


def f_coeff(c: float, cbar: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """Coefficient of ``-[X, Y]``; ``f(0, 0) = -1/2``."""
    _check_finite(c, cbar)
    s = c + cbar
    return -exp_divdiff(0.0, cbar, s, kernels=kernels) / exp_divdiff(0.0, s, kernels=kernels)


def g1_coeff(c: float, cbar: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    _check_finite(c, cbar)
    s = c + cbar
    u = exp_divdiff(0.0, s, kernels=kernels)
    return (-exp_divdiff(0.0, cbar, kernels=kernels)
            * exp_divdiff(0.0, s, s, kernels=kernels) / (u * u))


def g2_coeff(c: float, cbar: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    _check_finite(c, cbar)
    s = c + cbar
    u = exp_divdiff(0.0, s, kernels=kernels)
    return (exp_divdiff(cbar, s, kernels=kernels)
            * exp_divdiff(0.0, 0.0, s, kernels=kernels) / (u * u))


def _coeffs(c, cbar, kernels):
    s = c + cbar

    def dd(*x):
        return exp_divdiff(*x, kernels=kernels)

    u = dd(0.0, s)
    u_cb = dd(0.0, cbar, s)
    f = -u_cb / u
    kb = (u * dd(0.0, cbar, s, s) - u_cb * dd(0.0, s, s)) / (u * u)
    kbb = (u_cb * dd(0.0, 0.0, s) - u * dd(0.0, 0.0, cbar, s)) / (u * u)
    return f, kb, kbb


def x1_coeffs(c: float, cbar: float, kernels: ScalarKernelSet = DEFAULT_KERNELS):
    """``((f - g1)/c, (f + g2)/cbar)``, both finite everywhere.

    They tend to ``(-1/12, 1/12)`` at the origin.
    """
    _check_finite(c, cbar)
    _, kb, kbb = _coeffs(c, cbar, kernels)
    return kb, kbb


def bch(X: ChaElement, Y: ChaElement, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> ChaElement:
    """``log(exp(X) exp(Y))`` in closed form, for any finite X and Y."""
    check_same_n(X, Y)
    f, kb, kbb = _coeffs(X.c, Y.c, kernels)
    br = commutator(X, Y)
    w = Y.a * X.c - X.a * Y.c
    extra = float(np.dot(w, kb * X.b + kbb * Y.b))
    z = X.z + Y.z - f * br.z + extra
    a = X.a + Y.a - f * br.a
    if not (math.isfinite(z) and np.all(np.isfinite(a))):
        raise NumericError("bch overflowed")
    return ChaElement(z, a, X.b + Y.b, X.c + Y.c)


def bch_heisenberg(X: ChaElement, Y: ChaElement) -> ChaElement:
    """``X + Y + [X, Y]/2``, the BCH product of the Heisenberg group.

    Exact when ``c = cbar = 0``.
    """
    return add(add(X, Y), scale(0.5, commutator(X, Y)))


def bch_first_order(X: ChaElement, Y: ChaElement) -> ChaElement:
    """Heisenberg product plus the first-order correction in ``c, cbar``::

        Z_H - (c - cbar)/12 [X, Y] - ((abar c - a cbar) . (b - bbar))/12 X_1
    """
    check_same_n(X, Y)
    br = commutator(X, Y)
    zh = bch_heisenberg(X, Y)
    w = Y.a * X.c - X.a * Y.c
    shift = float(np.dot(w, X.b - Y.b)) / 12.0
    out = add(zh, scale(-(X.c - Y.c) / 12.0, br))
    return out.replace(z=out.z - shift)
