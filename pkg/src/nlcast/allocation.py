"""Per-chunk power allocation for the signed-power encoder.

With Y_i = b_i * signed_power(X_i, 1/a) and the high-SNR distortion model

    D ~= sum_i a**2 * var2_i * noise_var / b_i**2,   s.t.  sum_i b_i**2 * var1_i = P,

the Lagrangian stationarity conditions give the closed form

    b_i = sqrt(P * std2_i / (std1_i * sum_j std1_j * std2_j)),

which reduces to SoftCast's g_i = std0_i**-0.5 * sqrt(P / sum_j std0_j) at a = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nlcast.chunks import ChunkStats


class DegenerateChunkError(ValueError):
    """A chunk with zero transformed variance was handed to the allocator."""


@dataclass(frozen=True)
class AllocationPlan:
    a: float
    P: float
    b: np.ndarray
    alpha: float
    # a**2 * var2 / b**2 per chunk: the model distortion per unit noise variance
    unit_distortion: np.ndarray

    def power(self, stats) -> float:
        var1 = np.array([s.var1 for s in stats])
        return float(np.sum(self.b ** 2 * var1))

    def power_check(self, stats) -> float:
        return self.power(stats) / self.P


def allocate_nonlinear(stats, P: float, a: float, skip_degenerate: bool = False) -> AllocationPlan:
    """Closed-form scale factors minimizing the high-SNR distortion.

    Chunks with var1 == 0 raise DegenerateChunkError unless ``skip_degenerate``
    is set, in which case they get b = 0 and are left out of the power budget.
    """
    if not P > 0:
        raise ValueError(f"power budget must be positive, got {P}")
    if a < 1:
        raise ValueError(f"exponent a must be >= 1, got {a}")
    std1 = np.sqrt(np.array([s.var1 for s in stats], dtype=np.float64))
    std2 = np.sqrt(np.array([s.var2 for s in stats], dtype=np.float64))
    live = std1 > 0
    if not skip_degenerate and not live.all():
        raise DegenerateChunkError(
            f"chunks {np.flatnonzero(~live).tolist()} have zero transformed variance")

    b = np.zeros_like(std1)
    unit = np.zeros_like(std1)
    total = float(np.sum(std1[live] * std2[live]))
    if total > 0:
        b[live] = np.sqrt(P * std2[live] / (std1[live] * total))
        unit[live] = a * a * std2[live] ** 2 / b[live] ** 2
    alpha = (total / P) ** 2
    return AllocationPlan(float(a), float(P), b, alpha, unit)


def as_softcast_stats(s: ChunkStats) -> ChunkStats:
    return ChunkStats(s.mean, s.var0, s.var0, 1.0, 1.0)


def allocate_softcast(stats, P: float, skip_degenerate: bool = False) -> AllocationPlan:
    """SoftCast's linear scaling g_i, i.e. the a = 1 allocation on var0."""
    return allocate_nonlinear([as_softcast_stats(s) for s in stats], P, 1.0, skip_degenerate)


def model_distortion(var2, b, a, noise_var):
    """High-SNR objective: sum_i a**2 var2_i noise_var / b_i**2."""
    var2 = np.asarray(var2, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return a * a * noise_var * np.sum(var2 / b ** 2, axis=-1)


def predicted_distortion(stats, plan: AllocationPlan, noise_var: float):
    """Per-coefficient MSE after LLSE decoding, summed and per chunk.

    D_i = a^2 var2 var0 n / (b^2 (var0 + a^2 var2 n / b^2)), rewritten as
    var0 * e / (b^2 var0 + e) with e = a^2 var2 n to stay finite at b = 0.
    """
    if noise_var < 0:
        raise ValueError(f"noise variance must be >= 0, got {noise_var}")
    a = plan.a
    var0 = np.array([s.var0 for s in stats], dtype=np.float64)
    var2 = np.array([s.var2 for s in stats], dtype=np.float64)
    b = np.asarray(plan.b, dtype=np.float64)
    e = a * a * var2 * noise_var
    den = b * b * var0 + e
    with np.errstate(invalid="ignore", divide="ignore"):
        d = np.where(den > 0, var0 * e / den, 0.0)
    # unpowered chunks are decoded as their mean: error is the whole variance
    d = np.where(b > 0, d, var0)
    return float(np.sum(d)), d
