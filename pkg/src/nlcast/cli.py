"""Command-line entry point: ``nlcast run|sweep|hist``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from nlcast import experiment
from nlcast.experiment import ConfigError, ExperimentConfig
from nlcast.pipeline import StageError


def _add_common(p):
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--input", help="Y4M path(s) or synthetic:<name>, comma separated")
    p.add_argument("--gop", help="GoP length in frames (default 4)")
    p.add_argument("--grid", help="chunk grid t,h,w (default gop,8,8)")
    p.add_argument("--keep", help="fraction of chunks transmitted, in (0, 1]")
    p.add_argument("--a", help="exponent(s) a >= 1, comma separated")
    p.add_argument("--snr", help="channel SNR(s) in dB, comma separated; 'inf' is noiseless")
    p.add_argument("--seed", help="noise seed(s), comma separated")
    p.add_argument("--out", help="output directory")
    p.add_argument("--frames", help="max frames to read / synthesize")
    p.add_argument("--size", help="synthetic frame size in pixels")
    p.add_argument("--wht", help="WHT block size (power of two)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlcast", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("run", help="one transmission at the first a/snr/seed"))
    _add_common(sub.add_parser("sweep", help="all a x snr x seed plus SoftCast baseline"))
    h = sub.add_parser("hist", help="coefficient histograms before/after the signed power")
    _add_common(h)
    h.add_argument("--chunk", type=int, required=True, help="chunk index within the GoP")
    h.add_argument("--gop-index", type=int, default=0)
    return parser


def config_from_args(args) -> ExperimentConfig:
    base = experiment.load_config(args.config) if args.config else ExperimentConfig()
    flags = {k: getattr(args, k) for k in experiment.KEYS}
    return experiment.config_from_mapping(flags, base).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        out = Path(cfg.out)
        if args.command == "run":
            a, snr, seed = cfg.exponents[0], cfg.snrs[0], cfg.seeds[0]
            src = cfg.inputs[0]
            report = experiment.run_pipeline(cfg, a, snr, seed, source=src)
            row = experiment.result_row(experiment.sequence_name(src), a, snr, seed, report)
            text = experiment.rows_to_csv([row], experiment.RESULT_COLUMNS)
            out.mkdir(parents=True, exist_ok=True)
            (out / "run.csv").write_text(text)
            sys.stdout.write(text)
        elif args.command == "sweep":
            paths = experiment.write_sweep(experiment.sweep(cfg), cfg)
            for p in paths.values():
                print(p)
        else:
            dump = experiment.histogram_dump(cfg, args.chunk, cfg.exponents[0], args.gop_index)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"hist_chunk{args.chunk}_a{cfg.exponents[0]:g}.csv"
            path.write_text(dump.to_csv())
            print(path)
    except ConfigError as exc:
        print(f"nlcast: [config] {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"nlcast: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, IndexError) as exc:
        print(f"nlcast: [{args.command}] {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
