"""Experiment configuration, SNR/exponent sweeps and CSV reports."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from nlcast import chunks, synthetic, transforms
from nlcast.frame_io import FrameSequence, assemble_gops, load_y4m
from nlcast.pipeline import LinkParams, run_sequence

DEFAULT_EXPONENTS = (1.11, 1.12, 1.2, 1.29, 1.31)
DEFAULT_SNRS = (5.0, 10.0, 15.0, 20.0)

RESULT_COLUMNS = ["sequence", "a", "snr_db", "seed", "psnr_db", "mssim", "predicted_D",
                  "measured_mse", "kept_chunks", "power_check"]


class ConfigError(ValueError):
    def __init__(self, name: str, msg: str):
        super().__init__(f"config field '{name}': {msg}")
        self.field = name


@dataclass
class ExperimentConfig:
    """Knobs for one experiment.

    ``inputs`` entries are Y4M paths or ``synthetic:<name>`` (see
    nlcast.synthetic.GENERATORS); synthetic sequences use ``frames`` frames
    of ``size`` x ``size`` pixels.
    """

    inputs: list = field(default_factory=lambda: ["synthetic:slides"])
    gop_size: int = 4
    grid: tuple | None = None
    keep_fraction: float = 1.0
    exponents: list = field(default_factory=lambda: list(DEFAULT_EXPONENTS))
    snrs: list = field(default_factory=lambda: list(DEFAULT_SNRS))
    seeds: list = field(default_factory=lambda: [0])
    out: str = "results"
    frames: int | None = None
    size: int = 64
    wht_block: int = 64

    def validate(self) -> ExperimentConfig:
        if not self.inputs:
            raise ConfigError("input", "at least one input is required")
        for src in self.inputs:
            if src.startswith("synthetic:"):
                if src.split(":", 1)[1] not in synthetic.GENERATORS:
                    raise ConfigError("input", f"unknown synthetic sequence {src!r}")
            elif not Path(src).is_file():
                raise ConfigError("input", f"no such file {src!r}")
        if self.gop_size < 1:
            raise ConfigError("gop", f"must be >= 1, got {self.gop_size}")
        if self.grid is not None and (len(self.grid) != 3 or min(self.grid) < 1):
            raise ConfigError("grid", f"must be three positive counts, got {self.grid}")
        if not 0 < self.keep_fraction <= 1:
            raise ConfigError("keep", f"must be in (0, 1], got {self.keep_fraction}")
        if not self.exponents or any(not a >= 1 for a in self.exponents):
            raise ConfigError("a", f"exponents must be >= 1, got {self.exponents}")
        if not self.snrs or any(math.isnan(s) for s in self.snrs):
            raise ConfigError("snr", f"need at least one numeric SNR, got {self.snrs}")
        if not self.seeds:
            raise ConfigError("seed", "at least one seed is required")
        if self.frames is not None and self.frames < 1:
            raise ConfigError("frames", f"must be >= 1, got {self.frames}")
        if self.size < 11:
            raise ConfigError("size", f"synthetic frames must be at least 11 pixels, got {self.size}")
        if self.wht_block < 1 or self.wht_block & (self.wht_block - 1):
            raise ConfigError("wht", f"must be a power of two, got {self.wht_block}")
        return self

    @property
    def link(self) -> LinkParams:
        return LinkParams(self.gop_size, self.grid, self.keep_fraction, self.wht_block)


# config-file / CLI key -> (dataclass field, parser)
def _floats(v):
    return [float(x) for x in str(v).replace(",", " ").split()]


def _ints(v):
    return [int(x) for x in str(v).replace(",", " ").split()]


def _strs(v):
    return [x.strip() for x in str(v).split(",") if x.strip()]


def _grid(v):
    g = tuple(_ints(v))
    return g or None


KEYS = {
    "input": ("inputs", _strs),
    "gop": ("gop_size", int),
    "grid": ("grid", _grid),
    "keep": ("keep_fraction", float),
    "a": ("exponents", _floats),
    "snr": ("snrs", _floats),
    "seed": ("seeds", _ints),
    "out": ("out", str),
    "frames": ("frames", int),
    "size": ("size", int),
    "wht": ("wht_block", int),
}


def config_from_mapping(values: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    cfg = base or ExperimentConfig()
    for key, raw in values.items():
        if raw is None:
            continue
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        name, parse = KEYS[key]
        try:
            setattr(cfg, name, parse(raw))
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, f"cannot parse {raw!r}: {exc}") from None
    return cfg


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; list values are comma separated."""
    values = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}", f"expected 'key = value', got {line!r}")
        k, v = line.split("=", 1)
        values[k.strip()] = v.strip()
    return values


def load_config(path) -> ExperimentConfig:
    return config_from_mapping(parse_config_text(Path(path).read_text())).validate()


def load_input(src: str, cfg: ExperimentConfig) -> FrameSequence:
    if src.startswith("synthetic:"):
        n = cfg.frames or 2 * cfg.gop_size
        return synthetic.make(src.split(":", 1)[1], n, cfg.size, cfg.size)
    return load_y4m(src, cfg.frames)


def sequence_name(src: str) -> str:
    return src.split(":", 1)[1] if src.startswith("synthetic:") else Path(src).stem


def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def result_row(name, a, snr, seed, report) -> dict:
    return {
        "sequence": name, "a": a, "snr_db": snr, "seed": seed,
        "psnr_db": report.mean_psnr, "mssim": report.mean_mssim,
        "predicted_D": report.predicted_mse, "measured_mse": report.measured_mse,
        "kept_chunks": report.kept_chunks, "power_check": report.power_check,
    }


def run_pipeline(cfg: ExperimentConfig, a: float, snr_db: float, seed: int,
                 source: str | None = None, frames: FrameSequence | None = None):
    """One transmission of one input at (a, snr, seed); returns a QualityReport."""
    if frames is None:
        frames = load_input(source or cfg.inputs[0], cfg)
    return run_sequence(frames, a, snr_db, seed, cfg.link)


def run_baseline(cfg: ExperimentConfig, snr_db: float, seed: int, source=None, frames=None):
    """The dedicated SoftCast path (linear scaling, no signed power)."""
    if frames is None:
        frames = load_input(source or cfg.inputs[0], cfg)
    return run_sequence(frames, 1.0, snr_db, seed, cfg.link, softcast=True)


@dataclass
class SweepResult:
    rows: list
    baseline: list
    delta_psnr: list
    delta_mssim: list


def sweep(cfg: ExperimentConfig) -> SweepResult:
    """Run every (input, a, snr, seed) plus the SoftCast baseline per (input, snr, seed)."""
    cfg.validate()
    rows, base_rows = [], []
    for src in cfg.inputs:
        frames = load_input(src, cfg)
        name = sequence_name(src)
        for snr in cfg.snrs:
            for seed in cfg.seeds:
                base_rows.append(result_row(name, 1.0, snr, seed, run_baseline(cfg, snr, seed, frames=frames)))
        for a in cfg.exponents:
            for snr in cfg.snrs:
                for seed in cfg.seeds:
                    rows.append(result_row(name, a, snr, seed, run_pipeline(cfg, a, snr, seed, frames=frames)))
    rows.sort(key=lambda r: (r["sequence"], r["a"], r["snr_db"], r["seed"]))
    base_rows.sort(key=lambda r: (r["sequence"], r["snr_db"], r["seed"]))
    dp = _delta_table(rows, base_rows, "psnr_db", cfg.snrs)
    dm = _delta_table(rows, base_rows, "mssim", cfg.snrs)
    return SweepResult(rows, base_rows, dp, dm)


def _delta_table(rows, base_rows, metric, snrs):
    """Seed-averaged (nonlinear - baseline) per (sequence, a) and SNR, with an Average row per a."""
    base = {}
    for r in base_rows:
        base.setdefault((r["sequence"], r["snr_db"]), []).append(r[metric])
    acc = {}
    for r in rows:
        acc.setdefault((r["sequence"], r["a"], r["snr_db"]), []).append(r[metric])
    keys = sorted({(s, a) for s, a, _ in acc})
    table = []
    for seq, a in keys:
        row = {"sequence": seq, "a": a}
        for snr in snrs:
            row[snr] = float(np.mean(acc[(seq, a, snr)]) - np.mean(base[(seq, snr)]))
        table.append(row)
    for a in sorted({a for _, a in keys}):
        sub = [r for r in table if r["a"] == a]
        if len(sub) > 1:
            table.append({"sequence": "Average", "a": a,
                          **{snr: float(np.mean([r[snr] for r in sub])) for snr in snrs}})
    return table


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([str(c) if not isinstance(c, float) else _fmt(c) for c in columns])
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def write_sweep(result: SweepResult, cfg: ExperimentConfig) -> dict:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    delta_cols = ["sequence", "a", *cfg.snrs]
    files = {
        "results.csv": rows_to_csv(result.rows, RESULT_COLUMNS),
        "baseline.csv": rows_to_csv(result.baseline, RESULT_COLUMNS),
        "delta_psnr.csv": rows_to_csv(result.delta_psnr, delta_cols),
        "delta_mssim.csv": rows_to_csv(result.delta_mssim, delta_cols),
    }
    paths = {}
    for name, text in files.items():
        (out / name).write_text(text)
        paths[name] = out / name
    return paths


HIST_BINS = 255


@dataclass
class HistogramDump:
    before: np.ndarray
    after: np.ndarray
    before_edges: np.ndarray
    after_edges: np.ndarray
    before_counts: np.ndarray
    after_counts: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin", "before_center", "before_count", "after_center", "after_count"])
        bc = (self.before_edges[:-1] + self.before_edges[1:]) / 2
        ac = (self.after_edges[:-1] + self.after_edges[1:]) / 2
        for k in range(HIST_BINS):
            w.writerow([k, _fmt(bc[k]), int(self.before_counts[k]), _fmt(ac[k]), int(self.after_counts[k])])
        return buf.getvalue()


def _symmetric_hist(v):
    """255 equal bins over [-max|v|, max|v|], the middle one centered on zero.

    Bins are assigned by rounding v / width, which is odd in v, so a
    symmetric sample always gives a symmetric histogram.
    """
    half = HIST_BINS // 2
    m = float(np.max(np.abs(v))) if v.size else 0.0
    width = 2.0 * (m or 1.0) / HIST_BINS
    idx = np.clip(np.rint(v / width), -half, half).astype(int) + half
    counts = np.bincount(idx, minlength=HIST_BINS)
    edges = (np.arange(HIST_BINS + 1) - HIST_BINS / 2) * width
    return edges, counts


def value_histograms(values, a: float) -> HistogramDump:
    """Histograms of centered values and of signed_power(values, 1/a)."""
    v = np.asarray(values, dtype=np.float64)
    v = v - v.mean()
    t = transforms.signed_power(v, 1.0 / a)
    be, bc = _symmetric_hist(v)
    ae, ac = _symmetric_hist(t)
    return HistogramDump(v, np.asarray(t), be, ae, bc, ac)


def histogram_dump(cfg: ExperimentConfig, chunk_index: int, a: float, gop_index: int = 0) -> HistogramDump:
    frames = load_input(cfg.inputs[0], cfg)
    gops = assemble_gops(frames, cfg.gop_size)
    if not 0 <= gop_index < len(gops):
        raise IndexError(f"GoP index {gop_index} out of range (0..{len(gops) - 1})")
    cs = chunks.partition_chunks(transforms.dct3_forward(gops[gop_index]), cfg.link.chunk_grid())
    if not 0 <= chunk_index < cs.total_count:
        raise IndexError(f"chunk index {chunk_index} out of range (0..{cs.total_count - 1})")
    return value_histograms(cs.chunks[chunk_index].values, a)
