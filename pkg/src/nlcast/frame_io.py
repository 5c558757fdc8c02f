"""YUV4MPEG2 reading/writing and GoP assembly (luma only)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

Y4M_MAGIC = b"YUV4MPEG2"

# chroma tag -> (horizontal subsampling, vertical subsampling); None means no chroma
_CHROMA_MODES = {
    "420": (2, 2),
    "420jpeg": (2, 2),
    "420mpeg2": (2, 2),
    "420paldv": (2, 2),
    "mono": None,
}


class Y4MError(ValueError):
    """Malformed or truncated Y4M stream."""


@dataclass(frozen=True)
class FrameSequence:
    width: int
    height: int
    frames: list = field(default_factory=list)
    frame_rate: tuple[int, int] = (30, 1)

    def __post_init__(self):
        for i, f in enumerate(self.frames):
            if f.shape != (self.height, self.width):
                raise ValueError(
                    f"frame {i} has shape {f.shape}, expected {(self.height, self.width)}")

    def __len__(self):
        return len(self.frames)

    def as_array(self) -> np.ndarray:
        return np.stack(self.frames).astype(np.float64)


@dataclass(frozen=True)
class GopTensor:
    data: np.ndarray  # (gop_size, height, width)
    origin_index: int = 0

    def __post_init__(self):
        if self.data.ndim != 3 or min(self.data.shape) < 1:
            raise ValueError(f"GoP must be a non-empty 3-D array, got shape {self.data.shape}")

    @property
    def shape(self):
        return self.data.shape


def _parse_header(line: bytes):
    tokens = line.decode("ascii", errors="replace").split()
    if not tokens or tokens[0] != Y4M_MAGIC.decode():
        raise Y4MError(f"bad magic token {tokens[0] if tokens else ''!r}")
    width = height = None
    rate = (30, 1)
    chroma = "420"
    for tok in tokens[1:]:
        key, val = tok[0], tok[1:]
        try:
            if key == "W":
                width = int(val)
            elif key == "H":
                height = int(val)
            elif key == "F":
                num, den = val.split(":")
                rate = (int(num), int(den))
            elif key == "C":
                chroma = val
        except ValueError:
            raise Y4MError(f"malformed header token {tok!r}") from None
        # I (interlacing), A (aspect), X (comments) are accepted and ignored
    if width is None or height is None or width <= 0 or height <= 0:
        raise Y4MError(f"header is missing a valid W/H token: {line!r}")
    if chroma not in _CHROMA_MODES:
        raise Y4MError(f"unsupported chroma token 'C{chroma}'")
    return width, height, rate, chroma


def load_y4m(path, max_frames: int | None = None) -> FrameSequence:
    """Read the luma plane of every frame in a 4:2:0 or mono Y4M file."""
    raw = Path(path).read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise Y4MError("missing header terminator")
    width, height, rate, chroma = _parse_header(raw[:nl])

    luma = width * height
    sub = _CHROMA_MODES[chroma]
    chroma_bytes = 0 if sub is None else 2 * (-(-width // sub[0])) * (-(-height // sub[1]))
    payload = luma + chroma_bytes

    frames = []
    pos = nl + 1
    while pos < len(raw):
        if max_frames is not None and len(frames) >= max_frames:
            break
        end = raw.find(b"\n", pos)
        if end < 0 or not raw[pos:end].startswith(b"FRAME"):
            raise Y4MError(f"expected FRAME delimiter at byte {pos}")
        start = end + 1
        avail = len(raw) - start
        if avail < payload:
            raise Y4MError(
                f"truncated frame {len(frames)}: expected {payload} bytes, got {avail}")
        y = np.frombuffer(raw, dtype=np.uint8, count=luma, offset=start)
        frames.append(y.reshape(height, width).astype(np.float64))
        pos = start + payload
    return FrameSequence(width, height, frames, rate)


def write_y4m(frames: FrameSequence, path) -> None:
    """Write a mono Y4M file; samples are rounded and clamped to [0, 255]."""
    if len(frames) == 0:
        raise ValueError("cannot write an empty frame sequence")
    num, den = frames.frame_rate
    parts = [f"YUV4MPEG2 W{frames.width} H{frames.height} F{num}:{den} Ip A1:1 Cmono\n".encode()]
    for f in frames.frames:
        parts.append(b"FRAME\n")
        parts.append(np.clip(np.rint(f), 0, 255).astype(np.uint8).tobytes())
    Path(path).write_bytes(b"".join(parts))


def assemble_gops(frames: FrameSequence, gop_size: int = 4) -> list[GopTensor]:
    """Split frames into consecutive non-overlapping GoPs.

    A trailing partial group is dropped (and logged) rather than padded.
    """
    if gop_size < 1:
        raise ValueError(f"gop_size must be >= 1, got {gop_size}")
    n = len(frames)
    count = n // gop_size
    if count == 0:
        log.warning("only %d frames, fewer than gop_size=%d; no GoPs produced", n, gop_size)
        return []
    if n % gop_size:
        log.warning("dropping %d trailing frame(s) that do not fill a GoP", n % gop_size)
    return [
        GopTensor(np.stack(frames.frames[k * gop_size:(k + 1) * gop_size]).astype(np.float64),
                  origin_index=k * gop_size)
        for k in range(count)
    ]
