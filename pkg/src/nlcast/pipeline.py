"""End-to-end transmission of a frame sequence, GoP by GoP."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from nlcast import allocation, channel, chunks, decoder, metrics, transforms
from nlcast.frame_io import FrameSequence, assemble_gops


class StageError(RuntimeError):
    """A pipeline stage failed; the message is prefixed with the stage name."""

    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"[{stage}] {exc}")
        self.stage = stage


@dataclass
class _Stage:
    name: str

    def __enter__(self):
        return self

    def __exit__(self, tp, exc, tb):
        if exc is not None and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


@dataclass(frozen=True)
class LinkParams:
    gop_size: int = 4
    grid: tuple | None = None  # None -> (gop_size, 8, 8)
    keep_fraction: float = 1.0
    wht_block: int = 64

    def chunk_grid(self):
        return tuple(self.grid) if self.grid is not None else (self.gop_size, 8, 8)


@dataclass
class GopResult:
    coefficients: np.ndarray
    reconstruction: np.ndarray
    stats: list
    side: chunks.SideInfo
    plan: allocation.AllocationPlan
    noise_var: float
    predicted_sse: float
    power_check: float


def encode_gop(gop, a: float, params: LinkParams, softcast: bool = False):
    """Sender side: DCT, chunk, select, allocate and scale.

    Returns (side info, plan, scaled chunks). Unpowered chunks contribute
    empty arrays. ``softcast`` takes the dedicated linear path (a must be 1).
    """
    with _Stage("dct"):
        coeffs = transforms.dct3_forward(gop)
    with _Stage("chunk"):
        cs = chunks.partition_chunks(coeffs, params.chunk_grid())
        stats = [chunks.compute_stats(c, 1.0 if softcast else a) for c in cs.chunks]
        bitmap = chunks.select_chunks(stats, params.keep_fraction)
        kept = [stats[i] for i in np.flatnonzero(bitmap)]
        # unit mean power per transmitted symbol: chunks are equal-sized
        P = float(sum(s.var1 > 0 for s in kept)) or 1.0
        side = chunks.build_side_info(stats, bitmap, cs.grid, cs.shape, 1.0 if softcast else a, P)
    with _Stage("allocate"):
        if softcast:
            plan = allocation.allocate_softcast(kept, P, skip_degenerate=True)
        else:
            plan = allocation.allocate_nonlinear(kept, P, a, skip_degenerate=True)
    with _Stage("encode"):
        scaled = []
        for b, i in zip(plan.b, side.kept_indices):
            centered = cs.chunks[i].values - stats[i].mean
            if b == 0:
                scaled.append(np.zeros(0))
            elif softcast:
                scaled.append(b * centered)
            else:
                scaled.append(b * transforms.signed_power(centered, 1.0 / a))
    return side, plan, scaled


def decode_gop(received, side: chunks.SideInfo, noise_var: float, softcast: bool = False):
    """Receiver side: rebuild the allocation from side info, LLSE, inverse DCT."""
    kept = side.kept_stats()
    with _Stage("allocate"):
        if softcast:
            plan = allocation.allocate_softcast(kept, side.P, skip_degenerate=True)
        else:
            plan = allocation.allocate_nonlinear(kept, side.P, side.a, skip_degenerate=True)
    with _Stage("decode"):
        factors = decoder.llse_factors(kept, plan, noise_var)
        if softcast:
            n = math.prod(side.shape) // math.prod(side.grid)
            dec = {i: (factors.omega[k] * y if y.size else np.zeros(n))
                   for k, (i, y) in enumerate(zip(side.kept_indices, received))}
            coeffs = chunks.reassemble(dec, side)
        else:
            coeffs = decoder.decode_chunks(received, factors, side)
    with _Stage("idct"):
        return coeffs, transforms.dct3_inverse(coeffs)


def transmit_gop(gop, a: float, snr_db: float, seed, params: LinkParams,
                 softcast: bool = False) -> GopResult:
    side, plan, scaled = encode_gop(gop, a, params, softcast)
    with _Stage("channel"):
        stream = channel.serialize_symbols(scaled, params.wht_block)
        n_sym = sum(len(s) for s in scaled)
        power = float(np.sum(stream.symbols ** 2)) / n_sym if n_sym else 1.0
        if math.isinf(snr_db) and snr_db > 0:
            noise_var = 0.0
        else:
            noise_var = channel.noise_variance_for_snr(power if power > 0 else 1.0, snr_db)
        rx = channel.transmit(stream, channel.ChannelModel(snr_db, noise_var, seed))
        received = channel.deserialize_symbols(rx)
    coeffs, recon = decode_gop(received, side, noise_var, softcast)

    kept = side.kept_stats()
    n = math.prod(side.shape) // math.prod(side.grid)
    _, d = allocation.predicted_distortion(kept, plan, noise_var)
    cs = chunks.partition_chunks(transforms.dct3_forward(gop), side.grid)
    dropped = sum(float(np.sum(cs.chunks[i].values ** 2))
                  for i in np.flatnonzero(~side.bitmap))
    powered = plan.b > 0
    check = plan.power_check(kept) if powered.any() else 1.0
    return GopResult(coeffs, recon, kept, side, plan, noise_var, n * float(np.sum(d)) + dropped, check)


def run_sequence(frames: FrameSequence, a: float, snr_db: float, seed: int = 0,
                 params: LinkParams = LinkParams(), softcast: bool = False) -> metrics.QualityReport:
    """Transmit every full GoP of ``frames`` and score the reconstruction."""
    with _Stage("gop"):
        gops = assemble_gops(frames, params.gop_size)
        if not gops:
            raise ValueError(f"{len(frames)} frames do not fill one GoP of {params.gop_size}")
    report = metrics.QualityReport()
    sse = pred = 0.0
    checks = []
    for k, gop in enumerate(gops):
        res = transmit_gop(gop, a, snr_db, (seed, k), params, softcast)
        sse += float(np.sum((res.reconstruction - gop.data) ** 2))
        pred += res.predicted_sse
        checks.append(res.power_check)
        with _Stage("metrics"):
            p, s = metrics.score_frames(gop.data, res.reconstruction)
        report.psnr.extend(p)
        report.mssim.extend(s)
        report.kept_chunks += int(res.side.bitmap.sum())
        report.total_chunks += res.side.bitmap.size
    npix = sum(g.data.size for g in gops)
    report.measured_mse = sse / npix
    report.predicted_mse = pred / npix
    report.power_check = float(checks[int(np.argmax(np.abs(np.array(checks) - 1)))])
    return report
