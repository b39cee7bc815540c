from math import factorial

import numpy as np
import pytest

from conftest import random_row
from wavedirs.errors import InvalidArgumentError
from wavedirs.tensor import apply_full, wavejet_row_to_tensor
from wavedirs.wavejets import (
    WavejetCoeffs,
    evaluate,
    g_k,
    g_k_deriv,
    g_k_second,
    row_dg,
    row_g,
)

THETA = np.linspace(0, 2 * np.pi, 37)


def random_coeffs(rng, max_order=6, scale=1.0):
    return WavejetCoeffs(max_order, tuple(random_row(rng, k) for k in range(max_order + 1)), scale)


def test_evaluate_examples():
    monkey = WavejetCoeffs.from_dict({(3, 3): 0.5}, max_order=4)
    assert evaluate(monkey, 1.0, 0.0) == pytest.approx(1.0)
    r = np.linspace(0, 1, 7)[:, None]
    np.testing.assert_allclose(evaluate(monkey, r, THETA), r**3 * np.cos(3 * THETA), atol=1e-14)
    zero = WavejetCoeffs.zeros(5)
    np.testing.assert_array_equal(evaluate(zero, 0.3, THETA), 0.0)
    const = WavejetCoeffs.from_dict({(0, 0): 2.5}, max_order=3)
    np.testing.assert_allclose(evaluate(const, r, THETA), 2.5)


def test_evaluate_respects_scale():
    c = WavejetCoeffs.from_dict({(3, 3): 0.5 * 0.2**3}, max_order=3, scale=0.2)
    x, y = 0.13, -0.07
    expected = x**3 - 3 * x * y**2
    assert evaluate(c, np.hypot(x, y), np.arctan2(y, x)) == pytest.approx(expected)


def test_g_k_examples():
    monkey = WavejetCoeffs.from_dict({(3, 3): 0.5}, max_order=3)
    assert g_k(monkey, 3, 0.0) == pytest.approx(1.0)
    assert g_k(monkey, 3, np.pi / 3) == pytest.approx(-1.0)
    np.testing.assert_allclose(g_k_deriv(monkey, 3, THETA), -3 * np.sin(3 * THETA), atol=1e-14)
    k1, k2 = 2.0, 0.4
    hess = WavejetCoeffs.from_dict({(2, 0): (k1 + k2) / 4, (2, 2): (k1 - k2) / 8}, max_order=2)
    np.testing.assert_allclose(g_k(hess, 2, THETA), (k1 * np.cos(THETA) ** 2 + k2 * np.sin(THETA) ** 2) / 2)
    assert g_k(hess, 2, 0.0) == pytest.approx(k1 / 2)
    zero = WavejetCoeffs.zeros(4)
    np.testing.assert_array_equal(g_k(zero, 4, THETA), 0.0)
    np.testing.assert_array_equal(g_k_deriv(zero, 4, THETA), 0.0)
    with pytest.raises(InvalidArgumentError):
        g_k(zero, 5, 0.0)


@pytest.mark.parametrize("k", range(1, 11))
def test_derivatives_match_finite_differences(rng, k):
    h = 1e-5
    for _ in range(10):
        row = random_row(rng, k)
        c = WavejetCoeffs(k, tuple(random_row(rng, j) for j in range(k)) + (row,))
        th = rng.uniform(0, 2 * np.pi, 25)
        fd = (g_k(c, k, th + h) - g_k(c, k, th - h)) / (2 * h)
        assert np.max(np.abs(g_k_deriv(c, k, th) - fd)) < 1e-8 * max(1.0, np.abs(row).sum() * k)
        fd2 = (g_k_deriv(c, k, th + h) - g_k_deriv(c, k, th - h)) / (2 * h)
        assert np.max(np.abs(g_k_second(c, k, th) - fd2)) < 1e-6 * max(1.0, np.abs(row).sum() * k * k)


@pytest.mark.parametrize("k", range(0, 11))
def test_parity_of_g(rng, k):
    for _ in range(50):
        row = random_row(rng, k)
        th = rng.uniform(0, 2 * np.pi, 10)
        sign = 1.0 if k % 2 == 0 else -1.0
        np.testing.assert_allclose(row_g(row, th + np.pi), sign * row_g(row, th), atol=1e-12)


def test_evaluate_at_unit_radius_is_sum_of_g(rng):
    c = random_coeffs(rng, 8)
    total = sum(g_k(c, k, THETA) for k in range(9))
    np.testing.assert_allclose(evaluate(c, 1.0, THETA), total, atol=1e-12)


@pytest.mark.parametrize("k", range(0, 11))
def test_g_matches_tensor_form(rng, k):
    row = random_row(rng, k)
    T = wavejet_row_to_tensor(row)
    for th in THETA:
        expected = apply_full(T, (np.cos(th), np.sin(th))) / factorial(k)
        assert row_g(row, th) == pytest.approx(expected, abs=1e-10)


def test_negative_index_is_conjugate(rng):
    c = random_coeffs(rng, 5)
    assert c[5, -3] == np.conj(c[5, 3])
    assert c[4, 1] == 0


def test_parity_violation_rejected():
    rows = [np.zeros(k + 1, dtype=complex) for k in range(4)]
    rows[3][2] = 1.0
    with pytest.raises(InvalidArgumentError):
        WavejetCoeffs(3, tuple(rows))


def test_text_round_trip(rng):
    c = random_coeffs(rng, 7, scale=0.37)
    text = c.to_text()
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    assert len(lines) == sum(k // 2 + 1 for k in range(8))
    back = WavejetCoeffs.from_text(text)
    assert back.scale == c.scale
    for k in range(8):
        np.testing.assert_array_equal(back.row(k), c.row(k))


def test_unnormalized_row():
    c = WavejetCoeffs.from_dict({(3, 3): 0.5}, max_order=3, scale=0.5)
    np.testing.assert_allclose(c.unnormalized_row(3), [0, 0, 0, 4.0])


def test_row_dg_vectorized_shape():
    row = np.array([0, 0.3 + 0.1j, 0, 0.5])
    assert row_dg(row, np.zeros((2, 3))).shape == (2, 3)
