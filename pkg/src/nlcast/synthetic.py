"""Deterministic synthetic luma sequences for tests and demos."""

from __future__ import annotations

import numpy as np

from nlcast.frame_io import FrameSequence


def gradient(n_frames=8, height=64, width=64, seed=0) -> FrameSequence:
    """Smooth diagonal ramp drifting one pixel per frame."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    frames = []
    for t in range(n_frames):
        f = 40 + 80 * (xx + t) / width + 60 * yy / height + 20 * np.sin((xx + 2 * yy + 3 * t) / 9.0)
        frames.append(np.clip(np.rint(f), 0, 255))
    return FrameSequence(width, height, frames)


def slides(n_frames=8, height=64, width=64, seed=0) -> FrameSequence:
    """Low-detail slide: flat background, a title bar and rows of glyph-like marks.

    Content is static apart from a cursor block that steps across the page.
    """
    rng = np.random.default_rng(seed)
    base = np.full((height, width), 235.0)
    base[: max(2, height // 8), :] = 60.0
    row_h = max(4, height // 10)
    for top in range(height // 5, height - row_h, row_h + 3):
        x = 4
        while x < width - 6:
            w = int(rng.integers(2, 6))
            if rng.random() < 0.75:
                base[top:top + row_h - 2, x:x + w] = 30.0
            x += w + int(rng.integers(1, 3))
    frames = []
    for t in range(n_frames):
        f = base.copy()
        cx = (4 + 3 * t) % (width - 4)
        f[height - 8:height - 4, cx:cx + 3] = 30.0
        frames.append(f)
    return FrameSequence(width, height, frames)


def textured(n_frames=8, height=64, width=64, seed=0, sigma=20.0) -> FrameSequence:
    """Mid-gray frames carrying temporally correlated Gaussian texture."""
    rng = np.random.default_rng(seed)
    field = rng.normal(0.0, sigma, (height, width))
    frames = []
    for _ in range(n_frames):
        field = 0.9 * field + np.sqrt(1 - 0.81) * rng.normal(0.0, sigma, (height, width))
        frames.append(np.clip(128.0 + field, 0, 255))
    return FrameSequence(width, height, frames)


GENERATORS = {"gradient": gradient, "slides": slides, "textured": textured}


def make(name: str, n_frames=8, height=64, width=64, seed=0) -> FrameSequence:
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown synthetic sequence {name!r}; choose from {sorted(GENERATORS)}") from None
    return gen(n_frames=n_frames, height=height, width=width, seed=seed)
