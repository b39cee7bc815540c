"""Two-dimensional symmetric tensors of arbitrary order.

A symmetric tensor of order ``k`` over R^2 is fully described by ``k + 1``
numbers: an entry only depends on how many of its indices point along ``x``.
``coeffs[j]`` holds the entry with ``j`` x-indices and ``k - j`` y-indices,
which for a differential tensor is ``d^k f / dx^j dy^(k-j)`` at the origin.

Wavejet rows are complex arrays ``row[n] = phi_{k,n}`` for ``n = 0..k``; the
negative frequencies are implied by ``phi_{k,-n} = conj(phi_{k,n})``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "SymTensor2",
    "tensor_from_derivatives",
    "contract",
    "apply_full",
    "tensor_gradient",
    "tensor_to_wavejet_row",
    "wavejet_row_to_tensor",
    "check_row",
]


@dataclass(frozen=True)
class SymTensor2:
    """Order-``k`` symmetric tensor in compressed form (``k + 1`` coefficients)."""

    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float).reshape(-1)
        if self.order < 0:
            raise InvalidArgumentError(f"negative tensor order {self.order}")
        if coeffs.size != self.order + 1:
            raise InvalidArgumentError(
                f"order {self.order} tensor needs {self.order + 1} coefficients, got {coeffs.size}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zeros(cls, order):
        return cls(order, np.zeros(order + 1))

    def as_vector(self):
        """Order-1 tensor as an ``(x, y)`` vector."""
        if self.order != 1:
            raise InvalidArgumentError("only order-1 tensors are vectors")
        return np.array([self.coeffs[1], self.coeffs[0]])

    def scalar(self):
        if self.order != 0:
            raise InvalidArgumentError("only order-0 tensors are scalars")
        return float(self.coeffs[0])


def tensor_from_derivatives(partials, order):
    """Build ``T_k`` from ``partials[j] = d^k f / dx^j dy^(k-j)``."""
    partials = np.asarray(partials, dtype=float).reshape(-1)
    if partials.size != order + 1:
        raise InvalidArgumentError(
            f"expected {order + 1} partial derivatives for order {order}, got {partials.size}"
        )
    return SymTensor2(order, partials)


def _as_vec2(v):
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != 2:
        raise InvalidArgumentError(f"expected a 2-vector, got shape {v.shape}")
    return v


def contract(T: SymTensor2, v) -> SymTensor2:
    """Contract one index of ``T`` with ``v``, lowering the order by one."""
    if T.order < 1:
        raise InvalidArgumentError("cannot contract an order-0 tensor")
    x, y = _as_vec2(v)
    c = T.coeffs
    return SymTensor2(T.order - 1, x * c[1:] + y * c[:-1])


def apply_full(T: SymTensor2, v) -> float:
    """Evaluate the homogeneous form ``T v^k``."""
    x, y = _as_vec2(v)
    k = T.order
    j = np.arange(k + 1)
    binom = np.array([comb(k, i) for i in j], dtype=float)
    return float(np.sum(binom * T.coeffs * x**j * y ** (k - j)))


def tensor_gradient(T: SymTensor2, v) -> np.ndarray:
    """Gradient of ``v -> T v^k``, computed as ``k T v^(k-1)``."""
    if T.order < 1:
        raise InvalidArgumentError("gradient of an order-0 tensor is not defined here")
    S = T
    for _ in range(T.order - 1):
        S = contract(S, v)
    return T.order * S.as_vector()


def tensor_to_wavejet_row(T: SymTensor2) -> np.ndarray:
    """Wavejet coefficients ``phi_{k,n}``, ``n = 0..k``, of ``T v^k / k!``.

    ``g(theta) = T (cos theta, sin theta)^k / k!`` is a trigonometric
    polynomial of degree ``k``, so a DFT over ``2k + 1`` equispaced samples
    recovers it exactly.
    """
    k = T.order
    m = 2 * k + 1
    theta = 2.0 * np.pi * np.arange(m) / m
    j = np.arange(k + 1)
    binom = np.array([comb(k, i) for i in j], dtype=float)
    c, s = np.cos(theta)[:, None], np.sin(theta)[:, None]
    g = (binom * T.coeffs * c**j * s ** (k - j)).sum(axis=1) / factorial(k)
    n = np.arange(k + 1)
    row = (g[None, :] * np.exp(-1j * np.outer(n, theta))).sum(axis=1) / m
    row[(n - k) % 2 == 1] = 0.0
    row[0] = row[0].real
    return row


def check_row(row, order=None, atol=0.0):
    """Validate a wavejet row; returns it as a complex array.

    Entries with ``n`` and ``k`` of different parity must vanish (within
    ``atol``) and ``phi_{k,0}`` must be real.
    """
    row = np.asarray(row, dtype=complex).reshape(-1)
    k = row.size - 1
    if order is not None and k != order:
        raise InvalidArgumentError(f"row of length {row.size} does not have order {order}")
    scale = max(1.0, float(np.abs(row).max(initial=0.0)))
    bad = (np.arange(k + 1) - k) % 2 == 1
    if np.any(np.abs(row[bad]) > atol * scale):
        raise InvalidArgumentError("wavejet row violates the parity constraint")
    if abs(row[0].imag) > atol * scale:
        raise InvalidArgumentError("phi_{k,0} must be real")
    return row


def _homogeneous_power(a, b, n):
    """Coefficients of ``(a x + b y)^n``, indexed by the power of ``x``."""
    return np.array([comb(n, j) * a**j * b ** (n - j) for j in range(n + 1)])


def wavejet_row_to_tensor(row, order=None) -> SymTensor2:
    """Inverse of :func:`tensor_to_wavejet_row`.

    Uses ``r^k e^{i n theta} = (x + i y)^n (x^2 + y^2)^((k - n) / 2)`` to
    expand the row into a homogeneous polynomial, then divides out the
    binomial weights of ``T v^k``.
    """
    row = check_row(row, order, atol=1e-12)
    k = row.size - 1
    poly = np.zeros(k + 1, dtype=complex)
    for n in range(k % 2, k + 1, 2):
        if row[n] == 0:
            continue
        m = (k - n) // 2
        radial = np.zeros(2 * m + 1)
        radial[::2] = [comb(m, a) for a in range(m + 1)]
        term = np.convolve(_homogeneous_power(1.0, 1j, n), radial)
        if n == 0:
            poly += row[0].real * term
        else:
            poly += row[n] * term + np.conj(row[n] * term)
    binom = np.array([comb(k, j) for j in range(k + 1)], dtype=float)
    return SymTensor2(k, factorial(k) * poly.real / binom)
