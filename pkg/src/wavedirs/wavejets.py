"""Wavejet coefficient sets and the per-order angular functions ``g_k``.

Everything is evaluated in the real basis::

    g_k(theta) = phi_{k,0} + 2 * sum_{n>=1} (Re phi_{k,n} cos(n theta) - Im phi_{k,n} sin(n theta))

Row-level helpers (``row_g``, ``row_dg``, ``row_d2g``) accept scalar or array
angles and are what the direction finder uses directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .tensor import check_row

__all__ = [
    "WavejetCoeffs",
    "evaluate",
    "g_k",
    "g_k_deriv",
    "g_k_second",
    "row_g",
    "row_dg",
    "row_d2g",
    "parity_indices",
]

DEFAULT_MAX_ORDER = 10


def parity_indices(k):
    """Frequencies ``n`` in ``0..k`` with ``n = k (mod 2)``."""
    return np.arange(k % 2, k + 1, 2)


def _harmonics(row, theta):
    row = np.asarray(row, dtype=complex)
    theta = np.asarray(theta, dtype=float)
    n = np.arange(row.size)
    nt = np.multiply.outer(theta, n[1:])
    return row, n[1:], nt


def row_g(row, theta):
    row, n, nt = _harmonics(row, theta)
    return row[0].real + 2.0 * (np.cos(nt) @ row[1:].real - np.sin(nt) @ row[1:].imag)


def row_dg(row, theta):
    row, n, nt = _harmonics(row, theta)
    return -2.0 * (np.sin(nt) @ (n * row[1:].real) + np.cos(nt) @ (n * row[1:].imag))


def row_d2g(row, theta):
    row, n, nt = _harmonics(row, theta)
    n2 = n * n
    return -2.0 * (np.cos(nt) @ (n2 * row[1:].real) - np.sin(nt) @ (n2 * row[1:].imag))


@dataclass(frozen=True)
class WavejetCoeffs:
    """Coefficients ``phi_{k,n}`` for ``0 <= k <= max_order``, ``0 <= n <= k``.

    Values are stored for the radius-normalized variable ``r / scale``;
    :meth:`unnormalized_row` converts back to physical units.
    """

    max_order: int
    rows: tuple = field(repr=False)
    scale: float = 1.0

    def __post_init__(self):
        if len(self.rows) != self.max_order + 1:
            raise InvalidArgumentError(
                f"expected {self.max_order + 1} rows, got {len(self.rows)}"
            )
        rows = []
        for k, row in enumerate(self.rows):
            row = check_row(row, k, atol=1e-12).copy()
            row[(np.arange(k + 1) - k) % 2 == 1] = 0.0
            row[0] = row[0].real
            row.setflags(write=False)
            rows.append(row)
        object.__setattr__(self, "rows", tuple(rows))
        if not self.scale > 0:
            raise InvalidArgumentError(f"scale must be positive, got {self.scale}")

    @classmethod
    def zeros(cls, max_order=DEFAULT_MAX_ORDER, scale=1.0):
        return cls(max_order, tuple(np.zeros(k + 1, dtype=complex) for k in range(max_order + 1)), scale)

    @classmethod
    def from_dict(cls, values, max_order=DEFAULT_MAX_ORDER, scale=1.0):
        """Build from ``{(k, n): value}`` with ``n >= 0``."""
        rows = [np.zeros(k + 1, dtype=complex) for k in range(max_order + 1)]
        for (k, n), value in values.items():
            if not 0 <= n <= k <= max_order:
                raise InvalidArgumentError(f"invalid index (k={k}, n={n})")
            rows[k][n] = value
        return cls(max_order, tuple(rows), scale)

    def __getitem__(self, kn):
        k, n = kn
        if k < 0 or k > self.max_order or abs(n) > k:
            raise InvalidArgumentError(f"invalid index (k={k}, n={n})")
        value = self.rows[k][abs(n)]
        return np.conj(value) if n < 0 else value

    def row(self, k):
        self._check_order(k)
        return self.rows[k]

    def unnormalized_row(self, k):
        self._check_order(k)
        return self.rows[k] / self.scale**k

    def max_abs(self, min_order=0):
        return max(float(np.abs(r).max()) for r in self.rows[min_order:])

    def _check_order(self, k):
        if not 0 <= k <= self.max_order:
            raise InvalidArgumentError(f"order {k} outside 0..{self.max_order}")

    def to_text(self):
        """One ``k n re im`` line per stored coefficient, preceded by the scale."""
        lines = [f"# scale {float(self.scale)!r}"]
        for k, row in enumerate(self.rows):
            for n in parity_indices(k):
                lines.append(f"{k} {n} {float(row[n].real)!r} {float(row[n].imag)!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        scale = 1.0
        values = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "scale":
                    scale = float(parts[1])
                continue
            parts = line.split()
            if len(parts) != 4:
                raise InvalidArgumentError(f"line {lineno}: expected 'k n re im'")
            k, n = int(parts[0]), int(parts[1])
            values[(k, n)] = complex(float(parts[2]), float(parts[3]))
        max_order = max((k for k, _ in values), default=0)
        return cls.from_dict(values, max_order=max_order, scale=scale)


def evaluate(c: WavejetCoeffs, r, theta):
    """Height ``f(r, theta)``; ``r`` is in physical units."""
    rho = np.asarray(r, dtype=float) / c.scale
    total = np.zeros(np.broadcast(rho, np.asarray(theta)).shape)
    for k, row in enumerate(c.rows):
        total = total + rho**k * row_g(row, theta)
    return total


def g_k(c: WavejetCoeffs, k, theta):
    return row_g(c.row(k), theta)


def g_k_deriv(c: WavejetCoeffs, k, theta):
    return row_dg(c.row(k), theta)


def g_k_second(c: WavejetCoeffs, k, theta):
    return row_d2g(c.row(k), theta)
