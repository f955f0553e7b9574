"""Reference implementations used to check the closed forms.

Nothing here calls the closed-form kernels: exponentials come from
truncated commutator series or from :func:`matrix_exp` of adjoint matrices,
and the BCH integral is done by brute force::

    Z = X + Y - int_0^1 dt sum_{n>=1} (I - e^{ad X} e^{t ad Y})^n / (n(n+1)) Y

(fixed-order Gauss-Legendre in t, the series summed term by term).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .adjoint import ad_matrix, matrix_exp
from .algebra import ChaElement, check_same_n, commutator
from .errors import ConvergenceError

__all__ = [
    "OracleOptions",
    "BchDiagnostics",
    "DEFAULT_ORACLE",
    "exp_ad_series",
    "bch_series",
    "spectral_margin",
    "verify_group_law",
    "group_law_residual",
]


@dataclass(frozen=True)
class OracleOptions:
    max_terms: int = 4000
    quad_nodes: int = 32
    term_tol: float = 1e-15
    exp_trunc_tol: float = 1e-16
    # largest admissible |1 - e^{m(t)}|; the series diverges at 1
    max_margin: float = 0.98

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.quad_nodes < 2:
            raise ValueError("quad_nodes must be >= 2")
        if not (self.term_tol > 0 and self.exp_trunc_tol > 0):
            raise ValueError("tolerances must be positive")
        if not (0 < self.max_margin < 1):
            raise ValueError("max_margin must lie in (0, 1)")


DEFAULT_ORACLE = OracleOptions()


@dataclass(frozen=True)
class BchDiagnostics:
    terms_used: int
    last_term_norm: float
    spectral_margin: float
    quad_nodes: int = 0

    def to_dict(self) -> dict:
        return {
            "terms_used": self.terms_used,
            "last_term_norm": self.last_term_norm,
            "spectral_margin": self.spectral_margin,
            "quad_nodes": self.quad_nodes,
        }


def exp_ad_series(X: ChaElement, Y: ChaElement,
                  opts: OracleOptions = DEFAULT_ORACLE) -> ChaElement:
    """``Y + [X,Y] + [X,[X,Y]]/2! + ...`` summed until the terms are negligible."""
    check_same_n(X, Y)
    terms = [Y.coords()]
    term = Y
    scale = Y.norm()
    for k in range(1, 10 * opts.max_terms):
        term = commutator(X, term) * (1.0 / k)
        tn = term.norm()
        if tn == 0.0:
            break
        terms.append(term.coords())
        scale = max(scale, tn)
        if tn < opts.exp_trunc_tol * scale:
            break
    else:
        raise ConvergenceError("exponential series did not settle")
    stacked = np.array(terms)
    return ChaElement.from_coords([math.fsum(col) for col in stacked.T])


def _gauss_legendre_01(q):
    x, w = np.polynomial.legendre.leggauss(q)
    return 0.5 * (x + 1.0), 0.5 * w


def spectral_margin(X: ChaElement, Y: ChaElement, ts=()) -> float:
    """``max |1 - e^{m(t)}|`` over t in {0, 1} and ``ts``.

    ``e^{m(t)}`` is the non-unit eigenvalue of ``e^{ad X} e^{t ad Y}``, read
    off the diagonals of the (upper triangular) adjoint matrices.
    """
    m0 = ad_matrix(X)[0, 0]
    dm = ad_matrix(Y)[0, 0]
    t = np.concatenate(([0.0, 1.0], np.asarray(ts, dtype=float)))
    return float(np.max(np.abs(-np.expm1(m0 + t * dm))))


def bch_series(X: ChaElement, Y: ChaElement, opts: OracleOptions = DEFAULT_ORACLE):
    """Brute-force BCH product; returns ``(Z, BchDiagnostics)``.

    Raises ConvergenceError when the series diverges (or would converge too
    slowly) somewhere on ``t in [0, 1]``: that happens once
    ``|1 - e^{-c - t cbar}|`` exceeds ``opts.max_margin``.
    """
    check_same_n(X, Y)
    t, w = _gauss_legendre_01(opts.quad_nodes)
    margin = spectral_margin(X, Y, t)
    if margin > opts.max_margin:
        diag = BchDiagnostics(0, math.nan, margin, opts.quad_nodes)
        raise ConvergenceError(
            f"BCH series diverges: spectral margin {margin:.17g} > {opts.max_margin}",
            diag,
        )
    A = ad_matrix(X)
    B = ad_matrix(Y)
    d = A.shape[0]
    prod = matrix_exp(A) @ matrix_exp(t[:, None, None] * B)
    N = np.eye(d) - prod
    v = np.broadcast_to(Y.coords(), (t.size, d)).copy()
    acc = np.zeros_like(v)
    comp = np.zeros_like(v)
    tn = 0.0
    converged = False
    n = 0
    for n in range(1, opts.max_terms + 1):
        v = np.einsum("qij,qj->qi", N, v)
        term = v / (n * (n + 1))
        # Kahan summation over n, one running sum per quadrature node
        y = term - comp
        s = acc + y
        comp = (s - acc) - y
        acc = s
        tn = float(np.max(np.abs(term)))
        if tn <= opts.term_tol * max(1.0, float(np.max(np.abs(acc)))):
            converged = True
            break
    diag = BchDiagnostics(n, tn, margin, opts.quad_nodes)
    if not converged:
        raise ConvergenceError(
            f"BCH series not converged after {opts.max_terms} terms "
            f"(last term {tn:.3e}, spectral margin {margin:.17g})",
            diag,
        )
    integral = np.array([math.fsum(w * acc[:, i]) for i in range(d)])
    Z = ChaElement.from_coords(X.coords() + Y.coords() - integral)
    return Z, diag


def group_law_residual(X: ChaElement, Y: ChaElement, Z: ChaElement) -> float:
    """Frobenius norm of ``e^{ad Z} - e^{ad X} e^{ad Y}``."""
    check_same_n(X, Y, Z)
    EX, EY, EZ = matrix_exp(np.stack([ad_matrix(X), ad_matrix(Y), ad_matrix(Z)]))
    return float(np.linalg.norm(EZ - EX @ EY))


def verify_group_law(X: ChaElement, Y: ChaElement, Z: ChaElement, tol: float):
    """Check ``e^Z = e^X e^Y`` through the adjoint representation.

    The center is trivial, so ``ad`` is faithful and equal adjoint
    exponentials certify the group identity. Returns ``(ok, residual)``.
    """
    residual = group_law_residual(X, Y, Z)
    return residual <= tol, residual
