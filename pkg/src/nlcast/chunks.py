"""Chunk partitioning, per-chunk statistics, chunk selection and side info."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from nlcast.transforms import signed_power


class SideInfoError(ValueError):
    """Side information is inconsistent with the data it describes."""


@dataclass(frozen=True)
class ChunkData:
    index: int
    values: np.ndarray


@dataclass(frozen=True)
class ChunkSet:
    chunks: list
    grid: tuple[int, int, int]
    shape: tuple[int, int, int]

    @property
    def total_count(self) -> int:
        return len(self.chunks)

    @property
    def chunk_shape(self):
        return tuple(s // g for s, g in zip(self.shape, self.grid))


@dataclass(frozen=True)
class ChunkStats:
    """Mean and the three centered second moments of one chunk.

    ``var1`` and ``var2`` are mean squares of signed_power(X - mean, 1/a)
    and signed_power(X - mean, 1 - 1/a); ``var2`` is 1 at a == 1 (X**0 == 1).
    """

    mean: float
    var0: float
    var1: float
    var2: float
    a: float

    @property
    def std0(self):
        return math.sqrt(self.var0)

    @property
    def std1(self):
        return math.sqrt(self.var1)

    @property
    def std2(self):
        return math.sqrt(self.var2)


def _check_grid(shape, grid):
    if len(grid) != 3 or any(g < 1 for g in grid):
        raise ValueError(f"grid must be three positive counts, got {grid}")
    for axis, (s, g) in enumerate(zip(shape, grid)):
        if s % g:
            raise ValueError(f"grid count {g} does not divide dimension {s} on axis {axis}")


def _blocks(coeffs, grid):
    """View (gt, gh, gw, ct, ch, cw) of the tensor, raster order over the grid."""
    t, h, w = coeffs.shape
    gt, gh, gw = grid
    v = coeffs.reshape(gt, t // gt, gh, h // gh, gw, w // gw)
    return v.transpose(0, 2, 4, 1, 3, 5)


def partition_chunks(coeffs, grid=(4, 8, 8)) -> ChunkSet:
    """Tile a coefficient tensor into ``prod(grid)`` equal chunks."""
    c = np.asarray(getattr(coeffs, "data", coeffs), dtype=np.float64)
    grid = tuple(int(g) for g in grid)
    _check_grid(c.shape, grid)
    blocks = _blocks(c, grid).reshape(math.prod(grid), -1)
    chunks = [ChunkData(i, blocks[i].copy()) for i in range(blocks.shape[0])]
    return ChunkSet(chunks, grid, tuple(c.shape))


def compute_stats(chunk, a: float) -> ChunkStats:
    if a < 1:
        raise ValueError(f"exponent a must be >= 1, got {a}")
    x = np.asarray(getattr(chunk, "values", chunk), dtype=np.float64)
    mu = float(np.mean(x))
    d = x - mu
    var0 = float(np.mean(d * d))
    if a == 1:
        var1, var2 = var0, 1.0
    else:
        var1 = float(np.mean(signed_power(d, 1.0 / a) ** 2))
        var2 = float(np.mean(signed_power(d, 1.0 - 1.0 / a) ** 2))
    return ChunkStats(mu, var0, var1, var2, float(a))


def keep_count(m: int, keep_fraction: float) -> int:
    # guard against 2/3 * 3 = 2.0000000000000004 style round-up
    return min(m, math.ceil(round(keep_fraction * m, 9)))


def select_chunks(stats, keep_fraction: float = 1.0) -> np.ndarray:
    """Boolean bitmap keeping the ceil(keep_fraction * M) highest-variance chunks.

    Ties go to the smaller index.
    """
    if not 0 < keep_fraction <= 1:
        raise ValueError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    var0 = np.array([s.var0 for s in stats], dtype=np.float64)
    order = np.argsort(-var0, kind="stable")
    bitmap = np.zeros(len(var0), dtype=bool)
    bitmap[order[:keep_count(len(var0), keep_fraction)]] = True
    return bitmap


@dataclass(frozen=True)
class SideInfo:
    """Metadata the receiver needs: kept-chunk stats, bitmap and geometry.

    ``records`` maps chunk index to its ChunkStats, for kept chunks only.
    """

    records: dict
    bitmap: np.ndarray
    grid: tuple[int, int, int]
    shape: tuple[int, int, int]
    a: float
    P: float

    def __post_init__(self):
        if len(self.bitmap) != math.prod(self.grid):
            raise SideInfoError(
                f"bitmap length {len(self.bitmap)} != chunk count {math.prod(self.grid)}")
        kept = {int(i) for i in np.flatnonzero(self.bitmap)}
        if kept != set(self.records):
            raise SideInfoError("side-info records do not match the kept-chunk bitmap")

    @property
    def kept_indices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.bitmap)]

    def kept_stats(self) -> list[ChunkStats]:
        return [self.records[i] for i in self.kept_indices]

    def __eq__(self, other):
        if not isinstance(other, SideInfo):
            return NotImplemented
        return (self.records == other.records and np.array_equal(self.bitmap, other.bitmap)
                and self.grid == other.grid and self.shape == other.shape
                and self.a == other.a and self.P == other.P)

    def dumps(self) -> str:
        """Line-oriented text form.

        Header lines ``shape``, ``grid``, ``a``, ``P`` followed by one
        ``chunk <index> <kept> <mean> <var0> <var1> <var2>`` line per chunk;
        dropped chunks carry ``-`` in place of statistics.
        """
        g = "{:.17g}".format
        lines = [
            "nlcast-sideinfo 1",
            "shape " + " ".join(map(str, self.shape)),
            "grid " + " ".join(map(str, self.grid)),
            f"a {g(self.a)}",
            f"P {g(self.P)}",
        ]
        for i, kept in enumerate(self.bitmap):
            if kept:
                s = self.records[i]
                lines.append(f"chunk {i} 1 {g(s.mean)} {g(s.var0)} {g(s.var1)} {g(s.var2)}")
            else:
                lines.append(f"chunk {i} 0 - - - -")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> SideInfo:
        header = {}
        rows = []
        for n, line in enumerate(text.splitlines(), 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "chunk":
                if len(parts) != 7:
                    raise SideInfoError(f"line {n}: expected 7 fields, got {len(parts)}")
                rows.append(parts[1:])
            else:
                header[parts[0]] = parts[1:]
        try:
            shape = tuple(int(v) for v in header["shape"])
            grid = tuple(int(v) for v in header["grid"])
            a = float(header["a"][0])
            P = float(header["P"][0])
        except (KeyError, IndexError, ValueError) as exc:
            raise SideInfoError(f"bad side-info header: {exc}") from None
        bitmap = np.zeros(math.prod(grid), dtype=bool)
        records = {}
        for idx, kept, *vals in rows:
            i = int(idx)
            if not 0 <= i < len(bitmap):
                raise SideInfoError(f"chunk index {i} out of range")
            if kept == "1":
                bitmap[i] = True
                mean, v0, v1, v2 = (float(v) for v in vals)
                records[i] = ChunkStats(mean, v0, v1, v2, a)
        return cls(records, bitmap, grid, shape, a, P)

    def save(self, path):
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path) -> SideInfo:
        return cls.loads(Path(path).read_text())


def build_side_info(stats, bitmap, grid, shape, a, P) -> SideInfo:
    bitmap = np.asarray(bitmap, dtype=bool)
    if len(stats) != len(bitmap):
        raise SideInfoError(f"{len(stats)} stats records for a bitmap of length {len(bitmap)}")
    records = {int(i): stats[i] for i in np.flatnonzero(bitmap)}
    return SideInfo(records, bitmap, tuple(grid), tuple(shape), float(a), float(P))


def reassemble(decoded, side: SideInfo) -> np.ndarray:
    """Place decoded chunks back on the grid.

    ``decoded`` maps kept chunk index to its flat array of *centered*
    coefficient estimates; each kept chunk gets its transmitted mean added
    back. Dropped chunks are left at zero.
    """
    grid, shape = side.grid, side.shape
    _check_grid(shape, grid)
    cshape = tuple(s // g for s, g in zip(shape, grid))
    n = math.prod(cshape)
    out = np.zeros((math.prod(grid), n))
    for i in side.kept_indices:
        try:
            v = np.asarray(decoded[i], dtype=np.float64).ravel()
        except (KeyError, IndexError):
            raise SideInfoError(f"no decoded values for kept chunk {i}") from None
        if v.size != n:
            raise SideInfoError(f"chunk {i} has {v.size} values, expected {n}")
        out[i] = v + side.records[i].mean
    gt, gh, gw = grid
    t, h, w = cshape
    return out.reshape(gt, gh, gw, t, h, w).transpose(0, 3, 1, 4, 2, 5).reshape(shape)
