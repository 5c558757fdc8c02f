"""LLSE decoding of received chunks followed by the inverse signed power."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nlcast.chunks import SideInfo, SideInfoError, reassemble
from nlcast.transforms import signed_power


@dataclass(frozen=True)
class LlseFactors:
    omega: np.ndarray
    noise_var: float
    a: float


def llse_factors(stats, plan, noise_var: float) -> LlseFactors:
    """omega_i = var0 / (b^a (var0 + a^2 var2 noise_var / b^2)).

    Chunks that received no power (b = 0) get omega = 0 and decode to their mean.
    """
    if noise_var < 0:
        raise ValueError(f"noise variance must be >= 0, got {noise_var}")
    a = plan.a
    b = np.asarray(plan.b, dtype=np.float64)
    var0 = np.array([s.var0 for s in stats], dtype=np.float64)
    var2 = np.array([s.var2 for s in stats], dtype=np.float64)
    if b.shape != var0.shape:
        raise SideInfoError(f"{b.size} scale factors for {var0.size} chunks")
    omega = np.zeros_like(b)
    on = b > 0
    bo = b[on]
    if noise_var == 0:
        omega[on] = bo ** -a
    else:
        omega[on] = var0[on] * bo ** 2 / (bo ** a * (bo ** 2 * var0[on] + a * a * var2[on] * noise_var))
    return LlseFactors(omega, float(noise_var), float(a))


def decode_chunks(received, factors: LlseFactors, side: SideInfo) -> np.ndarray:
    """Estimate every kept chunk as omega * signed_power(y, a) + mean.

    ``received`` holds one array per kept chunk in bitmap order; chunks that
    were not powered may be given as empty arrays. Returns the full
    coefficient tensor with dropped chunks zero-filled.
    """
    kept = side.kept_indices
    if len(received) != len(kept) or factors.omega.size != len(kept):
        raise SideInfoError(
            f"{len(received)} received chunks and {factors.omega.size} factors "
            f"for {len(kept)} kept chunks")
    n = int(np.prod(side.shape)) // int(np.prod(side.grid))
    decoded = {}
    for k, (i, y) in enumerate(zip(kept, received)):
        w = factors.omega[k]
        y = np.asarray(y, dtype=np.float64)
        if w == 0 or y.size == 0:
            decoded[i] = np.zeros(n)
        else:
            decoded[i] = w * signed_power(y, factors.a)
    return reassemble(decoded, side)
