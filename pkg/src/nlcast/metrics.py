"""PSNR and mean SSIM for 8-bit luma frames."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import correlate1d

PEAK = 255.0
PSNR_CAP = 99.0

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _pair(ref, test):
    x = np.asarray(ref, dtype=np.float64)
    y = np.asarray(test, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"frame shapes differ: {x.shape} vs {y.shape}")
    return x, y


def mse(ref, test) -> float:
    x, y = _pair(ref, test)
    return float(np.mean((x - y) ** 2))


def psnr(ref, test, peak: float = PEAK) -> float:
    """10 log10(peak^2 / MSE), capped at 99 dB for identical frames."""
    m = mse(ref, test)
    if m == 0:
        return PSNR_CAP
    return min(PSNR_CAP, 10.0 * math.log10(peak * peak / m))


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    """Normalized 1-D Gaussian; its outer product is the 2-D SSIM window."""
    r = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(r * r) / (2.0 * sigma * sigma))
    return g / g.sum()


def _filter_valid(img, g):
    k = g.size // 2
    out = correlate1d(correlate1d(img, g, axis=0, mode="constant"), g, axis=1, mode="constant")
    return out[k:img.shape[0] - k, k:img.shape[1] - k]


def ssim_map(ref, test, peak: float = PEAK) -> np.ndarray:
    """SSIM at every valid 11x11 Gaussian window position (sigma 1.5)."""
    x, y = _pair(ref, test)
    if x.ndim != 2 or min(x.shape) < SSIM_WINDOW:
        raise ValueError(f"frames must be 2-D and at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {x.shape}")
    g = gaussian_window()
    c1 = (SSIM_K1 * peak) ** 2
    c2 = (SSIM_K2 * peak) ** 2
    mx = _filter_valid(x, g)
    my = _filter_valid(y, g)
    sxx = _filter_valid(x * x, g) - mx * mx
    syy = _filter_valid(y * y, g) - my * my
    sxy = _filter_valid(x * y, g) - mx * my
    num = (2 * mx * my + c1) * (2 * sxy + c2)
    den = (mx * mx + my * my + c1) * (sxx + syy + c2)
    return num / den


def mssim(ref, test, peak: float = PEAK) -> float:
    return float(np.mean(ssim_map(ref, test, peak)))


@dataclass
class QualityReport:
    psnr: list = field(default_factory=list)
    mssim: list = field(default_factory=list)
    measured_mse: float = 0.0
    predicted_mse: float = 0.0
    kept_chunks: int = 0
    total_chunks: int = 0
    power_check: float = 1.0

    @property
    def mean_psnr(self) -> float:
        return float(np.mean(self.psnr)) if self.psnr else float("nan")

    @property
    def mean_mssim(self) -> float:
        return float(np.mean(self.mssim)) if self.mssim else float("nan")


def score_frames(ref_frames, test_frames):
    """Per-frame PSNR and MSSIM of reconstructions clipped to [0, peak]."""
    p, s = [], []
    for x, y in zip(ref_frames, test_frames):
        y = np.clip(y, 0.0, PEAK)
        p.append(psnr(x, y))
        s.append(mssim(x, y))
    return p, s
