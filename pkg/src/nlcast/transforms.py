"""Orthonormal 3D-DCT, Walsh-Hadamard transform and the signed power."""

import numpy as np
from scipy.fft import dctn, idctn


def dct3_forward(gop) -> np.ndarray:
    """Separable orthonormal DCT-II over (time, height, width).

    Accepts a GopTensor or a bare 3-D array.
    """
    x = np.asarray(getattr(gop, "data", gop), dtype=np.float64)
    if x.ndim != 3 or min(x.shape) < 1:
        raise ValueError(f"expected a non-empty 3-D array, got shape {x.shape}")
    return dctn(x, type=2, norm="ortho", axes=(0, 1, 2))


def dct3_inverse(coeffs) -> np.ndarray:
    c = np.asarray(getattr(coeffs, "data", coeffs), dtype=np.float64)
    if c.ndim != 3 or min(c.shape) < 1:
        raise ValueError(f"expected a non-empty 3-D array, got shape {c.shape}")
    return idctn(c, type=2, norm="ortho", axes=(0, 1, 2))


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def wht_block(x) -> np.ndarray:
    """Orthonormal fast Walsh-Hadamard transform along the last axis.

    Natural (Hadamard) ordering; each butterfly stage is scaled by 1/sqrt(2),
    so the transform is symmetric, orthonormal and its own inverse.
    """
    y = np.array(x, dtype=np.float64, copy=True)
    n = y.shape[-1]
    if not is_power_of_two(n):
        raise ValueError(f"WHT length must be a power of two, got {n}")
    lead = y.shape[:-1]
    h = 1
    while h < n:
        y = y.reshape(*lead, n // (2 * h), 2, h)
        a = y[..., 0, :]
        b = y[..., 1, :]
        y = np.stack(((a + b), (a - b)), axis=-2) / np.sqrt(2.0)
        h *= 2
    return y.reshape(*lead, n)


def signed_power(x, p):
    """sign(x) * |x|**p, the odd extension of the power function."""
    if not p > 0:
        raise ValueError(f"exponent must be positive, got {p}")
    x = np.asarray(x, dtype=np.float64)
    out = np.sign(x) * np.abs(x) ** p
    return out if out.ndim else float(out)
