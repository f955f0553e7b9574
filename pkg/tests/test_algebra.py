import json

import numpy as np
import pytest
from hypothesis import given, settings

from contact_bch import (
    BasisIndex,
    ChaElement,
    DimensionError,
    NumericError,
    ad_pow,
    add,
    basis_element,
    commutator,
    in_heisenberg_ideal,
    is_central,
    scale,
)
from contact_bch.algebra import coordinate_basis

from conftest import elements

E = ChaElement
X1 = basis_element("1")
XQ = basis_element("q1")
XP = basis_element("p1")
XS = basis_element("S")


def test_add_and_scale_examples():
    assert add(E(1, [0], [0], 0), E(0, [1], [0], 0)) == E(1, [1], [0], 0)
    X = E(1, [2], [3], 4)
    assert scale(0, X) == E.zero()
    assert scale(-1, X) == E(-1, [-2], [-3], -4)
    assert X + X == 2 * X
    assert X - X == E.zero()


def test_basis_conventions():
    assert XP == E(0, [0], [-1], 0)
    assert basis_element(BasisIndex("Q", 2), n=2) == E(0, [0, 1], [0, 0], 0)
    with pytest.raises(DimensionError):
        basis_element("q3", n=2)
    with pytest.raises(ValueError):
        BasisIndex("Q", 0)
    assert len(coordinate_basis(3)) == 8


def test_commutator_table():
    assert commutator(XQ, XP) == X1
    assert commutator(X1, XS) == X1
    assert commutator(XQ, XS) == XQ
    assert commutator(XP, XS) == E.zero()
    assert commutator(X1, XQ) == E.zero()


def test_commutator_with_self_vanishes():
    X = E(0.3, [-1.2], [2.5], 0.7)
    assert commutator(X, X) == E.zero()


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        commutator(E.zero(1), E.zero(2))
    with pytest.raises(DimensionError):
        add(E.zero(1), E.zero(2))
    with pytest.raises(DimensionError):
        ad_pow(E.zero(1), E.zero(3), 2)
    with pytest.raises(DimensionError):
        E(0, [1, 2], [3], 0)
    with pytest.raises(DimensionError):
        E(0, [], [], 0)


def test_non_finite_rejected():
    with pytest.raises(NumericError):
        E(np.nan, [0], [0], 0)
    with pytest.raises(NumericError):
        E(0, [np.inf], [0], 0)


def test_immutable():
    X = E(1, [2], [3], 4)
    with pytest.raises(ValueError):
        X.a[0] = 5.0
    with pytest.raises(AttributeError):
        X.z = 2.0


def test_json_round_trip():
    X = E(0.1, [1.5, -2.0], [0.25, 3.0], -0.75)
    data = json.loads(json.dumps(X.to_dict()))
    assert data == {"n": 2, "z": 0.1, "a": [1.5, -2.0], "b": [0.25, 3.0], "c": -0.75}
    assert E.from_dict(data) == X
    with pytest.raises(DimensionError):
        E.from_dict({"n": 3, "z": 0, "a": [1], "b": [0], "c": 0})
    with pytest.raises(ValueError):
        E.from_dict({"z": 0, "a": [1], "b": [0]})


def test_coords_round_trip():
    X = E(0.1, [1.5, -2.0], [0.25, 3.0], -0.75)
    assert np.array_equal(X.coords(), [0.1, 1.5, -2.0, 0.25, 3.0, -0.75])
    assert E.from_coords(X.coords()) == X


def test_ad_pow_small_k():
    X = E(0.4, [1.1], [-0.3], 0.9)
    Y = E(-1.0, [0.2], [0.7], -0.4)
    assert ad_pow(X, Y, 0) == Y
    assert ad_pow(X, Y, 1) == commutator(X, Y)
    with pytest.raises(ValueError):
        ad_pow(X, Y, -1)


def test_ad_pow_matches_iterated_commutator_example():
    X = E(0, [0], [0], 2)
    Y = XQ
    iterated = commutator(X, commutator(X, commutator(X, Y)))
    # [2 X_S, .] multiplies X_q by -2 each time
    assert iterated == E(0, [-8], [0], 0)
    assert ad_pow(X, Y, 3) == iterated


def test_is_central_examples():
    assert is_central(E.zero())
    assert not is_central(X1)
    assert not is_central(XS)
    with pytest.raises(ValueError):
        is_central(X1, -1.0)


def test_heisenberg_ideal_examples():
    assert in_heisenberg_ideal(E(1, [2], [3], 0))
    assert not in_heisenberg_ideal(XS)
    assert in_heisenberg_ideal(commutator(E(1, [2], [3], 4), E(-1, [0.5], [2], 3)))


@settings(max_examples=300)
@given(elements(), elements())
def test_antisymmetry_exact(X, Y):
    assert commutator(X, Y) == -commutator(Y, X)


@settings(max_examples=300)
@given(elements(n=2), elements(n=2))
def test_bracket_lands_in_ideal_with_exact_zeros(X, Y):
    br = commutator(X, Y)
    assert br.c == 0.0
    assert np.all(br.b == 0.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_jacobi_identity(rng, rand, n):
    for _ in range(1000):
        X, Y, W = (rand(rng, n) for _ in range(3))
        total = (commutator(X, commutator(Y, W)) + commutator(Y, commutator(W, X))
                 + commutator(W, commutator(X, Y)))
        assert total.norm() <= 1e-12


@pytest.mark.parametrize("n", [1, 3])
def test_ad_pow_closed_form_matches_iteration(rng, rand, n):
    for _ in range(200):
        X = rand(rng, n, c_range=(-3, 3))
        Y = rand(rng, n)
        it = Y
        for k in range(1, 13):
            it = commutator(X, it)
            assert (ad_pow(X, Y, k) - it).norm() <= 1e-12 * max(1.0, it.norm())


def test_center_is_trivial(rng, rand):
    for _ in range(1000):
        X = rand(rng, 2)
        assert not is_central(X, 1e-9 * X.norm())
