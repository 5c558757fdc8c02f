"""Symbol serialization with WHT spreading, and the AWGN channel."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from nlcast.transforms import is_power_of_two, wht_block


@dataclass(frozen=True)
class ChannelModel:
    snr_db: float
    noise_var: float
    seed: int = 0

    @classmethod
    def for_power(cls, mean_symbol_power: float, snr_db: float, seed: int = 0) -> ChannelModel:
        return cls(snr_db, noise_variance_for_snr(mean_symbol_power, snr_db), seed)


@dataclass(frozen=True)
class SymbolStream:
    symbols: np.ndarray
    chunk_lengths: tuple[int, ...]
    block_size: int
    pad: int
    noise_var: float = 0.0


def noise_variance_for_snr(mean_symbol_power: float, snr_db: float) -> float:
    """Noise variance giving ``snr_db`` against the mean symbol power.

    ``snr_db = inf`` is the noiseless channel.
    """
    if not mean_symbol_power > 0:
        raise ValueError(f"mean symbol power must be positive, got {mean_symbol_power}")
    return mean_symbol_power * 10.0 ** (-snr_db / 10.0)


def serialize_symbols(chunks, block_size: int = 64) -> SymbolStream:
    """Concatenate chunks, zero-pad to whole blocks and WHT each block."""
    if not is_power_of_two(block_size):
        raise ValueError(f"WHT block size must be a power of two, got {block_size}")
    parts = [np.asarray(c, dtype=np.float64).ravel() for c in chunks]
    lengths = tuple(p.size for p in parts)
    flat = np.concatenate(parts) if parts else np.zeros(0)
    pad = -flat.size % block_size
    flat = np.concatenate([flat, np.zeros(pad)])
    symbols = wht_block(flat.reshape(-1, block_size)).ravel()
    return SymbolStream(symbols, lengths, block_size, pad)


def deserialize_symbols(stream: SymbolStream) -> list[np.ndarray]:
    """Inverse WHT, strip the padding, and split back into chunks."""
    n = stream.block_size
    flat = wht_block(stream.symbols.reshape(-1, n)).ravel()
    flat = flat[:flat.size - stream.pad]
    bounds = np.cumsum((0,) + stream.chunk_lengths)
    return [flat[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])]


def transmit(stream: SymbolStream, model: ChannelModel) -> SymbolStream:
    """Add i.i.d. N(0, noise_var) to every symbol; seeded and reproducible."""
    if model.noise_var < 0:
        raise ValueError(f"noise variance must be >= 0, got {model.noise_var}")
    if model.noise_var == 0:
        return replace(stream, symbols=stream.symbols.copy(), noise_var=0.0)
    rng = np.random.default_rng(model.seed)
    noise = rng.standard_normal(stream.symbols.size) * np.sqrt(model.noise_var)
    return replace(stream, symbols=stream.symbols + noise, noise_var=model.noise_var)
