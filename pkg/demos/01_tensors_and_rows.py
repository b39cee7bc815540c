"""
Symmetric tensors and coefficient rows
======================================

An order-k symmetric 2-D tensor has k + 1 independent entries, and so does
an order-k row of wavejet coefficients (counting real and imaginary parts,
with the parity zeros removed). This script moves between the two and
checks that applying the tensor to a unit vector matches the angular
function of the row.
"""
from math import factorial

import numpy as np

from wavedirs import SymTensor2, apply_full, tensor_gradient, tensor_to_wavejet_row, wavejet_row_to_tensor
from wavedirs.wavejets import row_g

rng = np.random.default_rng(0)

# a random order-5 tensor, stored as the derivatives d^5 f / dx^j dy^(5-j)
T = SymTensor2(5, rng.uniform(-1, 1, 6))
row = tensor_to_wavejet_row(T)
print("order-5 row (n = 0..5):")
for n, phi in enumerate(row):
    print(f"  phi_5,{n} = {phi.real:+.6f} {phi.imag:+.6f}i")

# only odd n survive for odd k
assert np.all(row[::2] == 0)

# the row's angular function is the tensor applied to (cos t, sin t), over k!
theta = np.linspace(0, 2 * np.pi, 7)
lhs = [apply_full(T, (np.cos(t), np.sin(t))) / factorial(5) for t in theta]
rhs = row_g(row, theta)
print("max |T v^5 / 5! - g_5| on 7 angles:", np.abs(np.array(lhs) - rhs).max())

# and the round trip is exact up to rounding
back = wavejet_row_to_tensor(row)
print("round trip error:", np.abs(back.coeffs - T.coeffs).max())

# the gradient of T v^k is k T v^(k-1)
v = np.array([0.6, 0.8])
h = 1e-6
fd = [(apply_full(T, v + h * e) - apply_full(T, v - h * e)) / (2 * h) for e in np.eye(2)]
print("gradient:", tensor_gradient(T, v), " finite differences:", np.array(fd))
