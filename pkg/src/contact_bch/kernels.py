"""Scalar kernels with removable singularities.

Every kernel the closed forms need (``(1 - e^-c)/c``, the ``f, g1, g2``
coefficients of the BCH product, the series-sum entries...) is a ratio of
divided differences of ``exp`` at a handful of nodes. Divided differences of
``exp`` are smooth in their nodes, so evaluating through them removes the
0/0 points by construction:

* nodes closer together than ``switch_radius`` -> Taylor series about the
  midpoint (``taylor_degree`` terms);
* otherwise -> the recursive definition, always dividing by the widest gap.

The two-node case uses ``expm1`` directly and never needs the series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ScalarKernelSet",
    "DEFAULT_KERNELS",
    "exp_divdiff",
    "h1",
    "h2",
    "phi",
    "psi",
    "chi",
    "rho",
    "geometric_sum",
    "weighted_geometric_sum",
]

_INV_FACT = [1.0 / math.factorial(j) for j in range(80)]


@dataclass(frozen=True)
class ScalarKernelSet:
    """Evaluation policy near removable singularities.

    ``switch_radius`` is the node spread below which the Taylor series is
    used; ``taylor_degree`` is its truncation degree. The pair is rejected
    unless the truncation error at the radius is below 1e-15 (relative).
    """

    switch_radius: float = 1.0
    taylor_degree: int = 20

    def __post_init__(self):
        r, d = self.switch_radius, self.taylor_degree
        if not (0.0 < r <= 2.0):
            raise ValueError("switch_radius must lie in (0, 2]")
        if int(d) != d or d < 4 or d > 60:
            raise ValueError("taylor_degree must be an integer in [4, 60]")
        if self.truncation_bound() >= 1e-15:
            raise ValueError(
                f"taylor_degree={d} too low for switch_radius={r}: "
                f"truncation bound {self.truncation_bound():.2e}"
            )

    def truncation_bound(self) -> float:
        # Nodes lie within r/2 of the midpoint; the dropped tail is at most
        # (r/2)^(d+1)/(d+1)! * e^(r/2) against a value of at least e^(-r/2).
        half = 0.5 * self.switch_radius
        d = self.taylor_degree
        return half ** (d + 1) * _INV_FACT[d + 1] * math.exp(2 * half)


DEFAULT_KERNELS = ScalarKernelSet()


def _divdiff_series(x, kernels):
    k = len(x) - 1
    d = kernels.taylor_degree
    mu = 0.5 * (x[0] + x[-1])
    # complete homogeneous symmetric polynomials h_j of the shifted nodes
    H = [1.0] + [0.0] * d
    for xi in x:
        y = xi - mu
        for j in range(1, d + 1):
            H[j] += y * H[j - 1]
    total = 0.0
    for j in range(d, -1, -1):
        total += H[j] * _INV_FACT[j + k]
    return math.exp(mu) * total


def _divdiff_sorted(x, kernels):
    k = len(x) - 1
    if k == 0:
        return math.exp(x[0])
    spread = x[-1] - x[0]
    if spread < kernels.switch_radius:
        return _divdiff_series(x, kernels)
    if k == 1:
        return math.exp(x[0]) * (math.expm1(spread) / spread)
    return (_divdiff_sorted(x[1:], kernels) - _divdiff_sorted(x[:-1], kernels)) / spread


def exp_divdiff(*nodes: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """Divided difference ``exp[x_0, ..., x_k]``; nodes may coincide.

    ``exp[x] = e^x``, ``exp[x, y] = (e^x - e^y)/(x - y)``, and confluent
    nodes give derivatives, e.g. ``exp[x, x, x] = e^x / 2``.
    """
    if not nodes:
        raise ValueError("need at least one node")
    x = sorted(float(v) for v in nodes)
    return _divdiff_sorted(x, kernels)


def h1(c: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """``(1 - e^-c)/c``, equal to 1 at c = 0."""
    return exp_divdiff(0.0, -c, kernels=kernels)


def h2(c: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """``(1 - c e^-c - e^-c)/c^2``, equal to 1/2 at c = 0."""
    return exp_divdiff(-c, -c, 0.0, kernels=kernels)


def phi(m: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """``(1 - e^m + m e^m)/(1 - e^m)``; 0 at m = 0."""
    return -m * exp_divdiff(0.0, m, m, kernels=kernels) / exp_divdiff(0.0, m, kernels=kernels)


def rho(m: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """``phi(m)/(1 - e^m) = (1 - e^m + m e^m)/(1 - e^m)^2``; 1/2 at m = 0."""
    return exp_divdiff(0.0, m, m, kernels=kernels) / exp_divdiff(0.0, m, kernels=kernels) ** 2


def psi(m: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """``(1 + m - e^m)/(1 - e^m)^2``; -1/2 at m = 0."""
    return -exp_divdiff(0.0, 0.0, m, kernels=kernels) / exp_divdiff(0.0, m, kernels=kernels) ** 2


def chi(m: float, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """``(2(1 - e^m) + m(1 + e^m))/(1 - e^m)^3``; -1/6 at m = 0."""
    return (-exp_divdiff(0.0, 0.0, m, m, kernels=kernels)
            / exp_divdiff(0.0, m, kernels=kernels) ** 3)


def geometric_sum(m: float, k: int, kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """``(1 - e^(km))/(1 - e^m) = sum_{j<k} e^(jm)``; k at m = 0."""
    if k == 0:
        return 0.0
    return k * exp_divdiff(0.0, k * m, kernels=kernels) / exp_divdiff(0.0, m, kernels=kernels)


def weighted_geometric_sum(m: float, k: int,
                           kernels: ScalarKernelSet = DEFAULT_KERNELS) -> float:
    """``(1 - k e^((k-1)m) + (k-1) e^(km))/(1 - e^m)^2 = sum_{j=1}^{k-1} j e^((j-1)m)``.

    Equals ``k(k-1)/2`` at m = 0.
    """
    if k < 2:
        return 0.0
    if abs(m) < kernels.switch_radius:
        return math.fsum(j * math.exp((j - 1) * m) for j in range(1, k))
    q = math.exp(m)
    return (1.0 - k * q ** (k - 1) + (k - 1) * q ** k) / (1.0 - q) ** 2
