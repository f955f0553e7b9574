"""Randomized invariant checks, seeded and deterministic.

Each property draws its own random inputs from one shared generator, so a
given ``(n, cases, seed)`` always produces the same report.
"""

from __future__ import annotations

import numpy as np

from .algebra import ChaElement, ad_pow, commutator, is_central
from .bch import bch, bch_heisenberg
from .errors import ChaError
from .kernels import DEFAULT_KERNELS
from .oracle import DEFAULT_ORACLE, bch_series, group_law_residual

__all__ = ["random_element", "run_selftest", "PROPERTIES"]


def random_element(rng, n=1, lo=-1.0, hi=1.0, c_range=None) -> ChaElement:
    v = rng.uniform(lo, hi, 2 * n + 2)
    if c_range is not None:
        v[-1] = rng.uniform(*c_range)
    return ChaElement.from_coords(v)


# Each check returns (residual, tolerance, inputs); it passes iff residual <= tolerance.

def _antisymmetry(rng, n, kernels, oracle):
    X, Y = random_element(rng, n), random_element(rng, n)
    diff = commutator(X, Y).coords() + commutator(Y, X).coords()
    return float(np.max(np.abs(diff))), 0.0, (X, Y)


def _jacobi(rng, n, kernels, oracle):
    X, Y, W = (random_element(rng, n) for _ in range(3))
    total = (commutator(X, commutator(Y, W)) + commutator(Y, commutator(W, X))
             + commutator(W, commutator(X, Y)))
    scale = max(1.0, X.norm(), Y.norm(), W.norm()) ** 3
    return total.norm(), 1e-12 * scale, (X, Y, W)


def _ad_pow(rng, n, kernels, oracle):
    X = random_element(rng, n, c_range=(-3.0, 3.0))
    Y = random_element(rng, n)
    worst = 0.0
    it = Y
    for k in range(1, 13):
        it = commutator(X, it)
        closed = ad_pow(X, Y, k)
        worst = max(worst, (closed - it).norm() / max(1.0, it.norm()))
    return worst, 1e-12, (X, Y)


def _center(rng, n, kernels, oracle):
    X = random_element(rng, n)
    # 1.0 marks failure: a nonzero X must not be reported central
    return float(is_central(X, 1e-9 * X.norm())), 0.0, (X,)


def _additivity(rng, n, kernels, oracle):
    X, Y = random_element(rng, n), random_element(rng, n)
    Z = bch(X, Y, kernels)
    exact = np.array_equal(Z.b, X.b + Y.b) and Z.c == X.c + Y.c
    return 0.0 if exact else 1.0, 0.0, (X, Y)


def _inverse(rng, n, kernels, oracle):
    X = random_element(rng, n, -3.0, 3.0)
    return bch(X, -X, kernels).norm(), 1e-12, (X,)


def _heisenberg(rng, n, kernels, oracle):
    X = random_element(rng, n).replace(c=0.0)
    Y = random_element(rng, n).replace(c=0.0)
    return (bch(X, Y, kernels) - bch_heisenberg(X, Y)).norm(), 1e-14, (X, Y)


def _group_law(rng, n, kernels, oracle):
    X, Y = random_element(rng, n, -3.0, 3.0), random_element(rng, n, -3.0, 3.0)
    res = group_law_residual(X, Y, bch(X, Y, kernels))
    return res, 1e-10 * max(1.0, X.norm(), Y.norm()), (X, Y)


def _associativity(rng, n, kernels, oracle):
    X, Y, W = (random_element(rng, n) for _ in range(3))
    left = bch(bch(X, Y, kernels), W, kernels)
    right = bch(X, bch(Y, W, kernels), kernels)
    return (left - right).norm(), 1e-8, (X, Y, W)


def _oracle(rng, n, kernels, oracle):
    X = random_element(rng, n, c_range=(-0.3, 1.5))
    Y = random_element(rng, n, c_range=(-0.3, 1.5))
    Zs, _ = bch_series(X, Y, oracle)
    return (bch(X, Y, kernels) - Zs).norm(), 1e-8, (X, Y)


PROPERTIES = {
    "antisymmetry": _antisymmetry,
    "jacobi": _jacobi,
    "ad_pow_closed_form": _ad_pow,
    "center_trivial": _center,
    "bc_additivity": _additivity,
    "inverse": _inverse,
    "heisenberg_restriction": _heisenberg,
    "group_law": _group_law,
    "associativity": _associativity,
    "oracle_equivalence": _oracle,
}


def run_selftest(n=1, cases=50, seed=0, kernels=DEFAULT_KERNELS, oracle=DEFAULT_ORACLE) -> dict:
    """Run every property ``cases`` times; returns a JSON-ready report."""
    if cases < 1:
        raise ValueError("cases must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    report = {}
    for name, check in PROPERTIES.items():
        passed = failed = 0
        worst = 0.0
        repro = None
        for _ in range(cases):
            try:
                residual, tol, inputs = check(rng, n, kernels, oracle)
                ok = residual <= tol
            except ChaError as exc:
                failed += 1
                repro = repro or {"error": str(exc)}
                continue
            worst = max(worst, residual)
            if ok:
                passed += 1
            else:
                failed += 1
                if repro is None:
                    repro = {"inputs": [e.to_dict() for e in inputs],
                             "residual": residual, "tolerance": tol}
        report[name] = {"passed": passed, "failed": failed, "worst": worst, "repro": repro}
    return {
        "n": n,
        "cases": cases,
        "seed": seed,
        "ok": all(p["failed"] == 0 for p in report.values()),
        "properties": report,
    }

