import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import hadamard

from conftest import brute_dct3
from nlcast.transforms import dct3_forward, dct3_inverse, signed_power, wht_block


def test_dct_constant_block():
    c = dct3_forward(np.ones((2, 2, 2)))
    assert c[0, 0, 0] == pytest.approx(np.sqrt(8), abs=1e-12)
    c[0, 0, 0] = 0
    assert np.max(np.abs(c)) < 1e-12


def test_idct_dc_only():
    c = np.zeros((2, 2, 2))
    c[0, 0, 0] = np.sqrt(8)
    np.testing.assert_allclose(dct3_inverse(c), np.ones((2, 2, 2)), atol=1e-12)
    np.testing.assert_array_equal(dct3_inverse(np.zeros((3, 4, 5))), 0.0)


@pytest.mark.parametrize("shape", [(1, 1, 1), (2, 3, 5), (4, 8, 8), (3, 8, 4)])
def test_dct_matches_basis_matrix(shape, rng):
    x = rng.normal(size=shape)
    ref = brute_dct3(x)
    got = dct3_forward(x)
    assert np.linalg.norm(got - ref) <= 1e-9 * np.linalg.norm(ref)


def test_dct_parseval_and_round_trip(rng):
    x = rng.normal(size=(4, 8, 8)) * 50 + 100
    c = dct3_forward(x)
    assert abs(np.sum(c ** 2) - np.sum(x ** 2)) <= 1e-9 * np.sum(x ** 2)
    assert np.linalg.norm(dct3_inverse(c) - x) <= 1e-9 * np.linalg.norm(x)


def test_dct_rejects_bad_shape():
    with pytest.raises(ValueError):
        dct3_forward(np.zeros((4, 4)))


def test_wht_examples():
    np.testing.assert_allclose(wht_block([1, 1, 1, 1]), [2, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(wht_block(wht_block([3, -1, 2, 0])), [3, -1, 2, 0], atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 8, 64, 256])
def test_wht_matches_hadamard_matrix(n, rng):
    x = rng.normal(size=n)
    ref = hadamard(n) @ x / np.sqrt(n)
    got = wht_block(x)
    assert np.linalg.norm(got - ref) <= 1e-9 * np.linalg.norm(ref)
    assert abs(np.sum(got ** 2) - np.sum(x ** 2)) <= 1e-9 * np.sum(x ** 2)


def test_wht_batched_rows(rng):
    x = rng.normal(size=(5, 16))
    np.testing.assert_allclose(wht_block(x), x @ hadamard(16).T / 4, atol=1e-12)


@pytest.mark.parametrize("n", [0, 3, 6, 100])
def test_wht_rejects_non_power_of_two(n):
    with pytest.raises(ValueError):
        wht_block(np.zeros(n))


def test_signed_power_examples():
    assert signed_power(-8, 1 / 3) == pytest.approx(-2.0, abs=1e-12)
    assert signed_power(-3.5, 1) == -3.5
    for p in (0.1, 1.0, 2.5):
        assert signed_power(0.0, p) == 0.0


@pytest.mark.parametrize("p", [0, -1.0])
def test_signed_power_rejects_nonpositive(p):
    with pytest.raises(ValueError):
        signed_power(1.0, p)


finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(finite, st.floats(1.0, 2.0))
def test_signed_power_odd_and_invertible(x, a):
    assert signed_power(-x, 1 / a) == -signed_power(x, 1 / a)
    back = signed_power(signed_power(x, 1 / a), a)
    assert back == pytest.approx(x, rel=1e-9, abs=1e-12)


@given(finite, finite, st.floats(0.2, 3.0))
def test_signed_power_increasing(x, y, p):
    if x < y:
        assert signed_power(x, p) <= signed_power(y, p)
