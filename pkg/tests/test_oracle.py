import math

import numpy as np
import pytest

from contact_bch import (
    ChaElement,
    ConvergenceError,
    DimensionError,
    basis_element,
    bch,
    commutator,
)
from contact_bch.oracle import (
    OracleOptions,
    bch_series,
    exp_ad_series,
    group_law_residual,
    spectral_margin,
    verify_group_law,
)

from conftest import assert_elem_close

E = ChaElement
XQ, XP, XS, X1 = (basis_element(k) for k in ("q1", "p1", "S", "1"))


def in_domain_pair(rng, rand, n=1):
    return (rand(rng, n, c_range=(-0.3, 1.5)), rand(rng, n, c_range=(-0.3, 1.5)))


def test_exp_ad_series_examples():
    assert exp_ad_series(E.zero(), XQ) == XQ
    # nilpotent direction: e^{ad X_q} X_p = X_p + X_1
    assert_elem_close(exp_ad_series(XQ, XP), XP + X1, 0.0)
    assert_elem_close(exp_ad_series(XS, XQ), E(0, [math.exp(-1)], [0], 0), 2e-16)


def test_exp_ad_series_dimension_check():
    with pytest.raises(DimensionError):
        exp_ad_series(E.zero(1), E.zero(2))


def test_bch_series_identity():
    X = E(0.3, [1.0], [0.5], 0.7)
    Z, diag = bch_series(X, E.zero())
    assert_elem_close(Z, X, 1e-15)
    assert diag.terms_used >= 1


def test_bch_series_heisenberg_pair():
    Z, _ = bch_series(XQ, XP)
    assert_elem_close(Z, E(0.5, [1], [-1], 0), 1e-14)


def test_divergent_request_raises_with_diagnostics():
    X = E(0, [1], [0], -1.0)  # |1 - e^{1}| > 1
    with pytest.raises(ConvergenceError) as info:
        bch_series(X, E.zero())
    diag = info.value.diagnostics
    assert diag.spectral_margin > 1.0
    assert diag.quad_nodes == 32
    assert math.isnan(diag.last_term_norm)


def test_margin_guard_and_domain_edge():
    # -c slightly below ln 2 is in domain, slightly above is rejected
    ok = E(0, [0.5], [0.3], -math.log(2) * 0.98)
    bad = E(0, [0.5], [0.3], -math.log(2) * 1.02)
    bch_series(ok, E.zero())
    with pytest.raises(ConvergenceError):
        bch_series(bad, E.zero())


def test_too_few_terms_raises(rng, rand):
    X, Y = E(0.3, [1.0], [0.5], 0.7), E(-0.2, [0.4], [-1.1], 0.25)
    with pytest.raises(ConvergenceError) as info:
        bch_series(X, Y, OracleOptions(max_terms=5))
    assert info.value.diagnostics.terms_used == 5
    assert info.value.diagnostics.last_term_norm > 0


def test_spectral_margin_endpoints():
    X = E(0, [0], [0], 0.5)
    Y = E(0, [0], [0], -1.5)
    # m(t) = -c - t cbar ranges over [-0.5, 1.0]
    assert spectral_margin(X, Y) == pytest.approx(math.e - 1, rel=1e-15)


def test_quadrature_converged(rng, rand):
    o64 = OracleOptions(quad_nodes=64)
    for _ in range(30):
        X, Y = in_domain_pair(rng, rand)
        a, _ = bch_series(X, Y)
        b, _ = bch_series(X, Y, o64)
        assert (a - b).norm() <= 1e-12


def test_truncation_diagnostics(rng, rand):
    opts = OracleOptions()
    for _ in range(50):
        X, Y = in_domain_pair(rng, rand)
        _, diag = bch_series(X, Y)
        assert diag.terms_used < opts.max_terms
        assert diag.last_term_norm < 1e-13
        assert diag.spectral_margin <= opts.max_margin


def test_series_identity_used_in_the_derivation():
    # sum_{n>=2} (n-1) a^n / n! = 1 + a e^a - e^a
    for alpha in np.linspace(-5, 5, 41):
        lhs = math.fsum((n - 1) * alpha ** n / math.factorial(n) for n in range(2, 61))
        rhs = 1 + alpha * math.exp(alpha) - math.exp(alpha)
        assert lhs == pytest.approx(rhs, abs=1e-13)


def test_oracle_self_consistency(rng, rand):
    for _ in range(30):
        X, Y = in_domain_pair(rng, rand)
        Z, _ = bch_series(X, Y)
        ok, res = verify_group_law(X, Y, Z, 1e-9)
        assert ok, res


def test_verify_group_law_examples(rng, rand):
    z = E.zero()
    assert verify_group_law(z, z, z, 0.0) == (True, 0.0)
    X, Y = rand(rng, 1, -3, 3), rand(rng, 1, -3, 3)
    Z = bch(X, Y)
    ok, res = verify_group_law(X, Y, Z + E(0.1, [0], [0], 0), 1e-10)
    assert not ok and res >= 1e-3


def test_group_law_residual_dimension_check():
    with pytest.raises(DimensionError):
        group_law_residual(E.zero(1), E.zero(1), E.zero(2))


def test_bch_series_agrees_with_closed_form_n2(rng, rand):
    for _ in range(20):
        X, Y = in_domain_pair(rng, rand, 2)
        assert_elem_close(bch_series(X, Y)[0], bch(X, Y), 1e-8)


def test_bch_series_second_order_for_small_inputs(rng, rand):
    # Z = X + Y + [X,Y]/2 + O(|X|^3), here |X| ~ 1e-3
    X, Y = rand(rng, 1) * 1e-3, rand(rng, 1) * 1e-3
    Z, _ = bch_series(X, Y)
    assert_elem_close(Z, X + Y + 0.5 * commutator(X, Y), 1e-9)


@pytest.mark.parametrize("kwargs", [
    {"max_terms": 0}, {"quad_nodes": 1}, {"term_tol": 0.0}, {"exp_trunc_tol": -1.0},
    {"max_margin": 1.0}, {"max_margin": 0.0},
])
def test_options_validation(kwargs):
    with pytest.raises(ValueError):
        OracleOptions(**kwargs)


def test_diagnostics_to_dict():
    _, diag = bch_series(XQ, XP)
    d = diag.to_dict()
    assert set(d) == {"terms_used", "last_term_norm", "spectral_margin", "quad_nodes"}
