"""Command line interface.

Two subcommands:

    warpq score --ref REF.wav --deg DEG.wav [--json]
    warpq batch --manifest FILE --out FILE [--format csv|json]
                [--per-sample] [--jobs N]

Metric parameters can be overridden per run with flags or a key=value
config file (flags win). Exit codes: 0 success, 1 usage error, 2 scoring
failed for every entry, 3 I/O error.
"""

import argparse
import json
import logging
import sys

from . import __version__
from .audio import load_waveform
from .errors import (
    AllEntriesFailedError,
    AudioDecodeError,
    ManifestError,
    WarpqError,
)
from .harness import (
    batch_score,
    compute_correlations,
    default_parallelism,
    emit_report,
    parse_manifest,
)
from .pipeline import WarpQConfig, warpq_score
from .sdtw import StepSet

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ALL_FAILED = 2
EXIT_IO = 3

_CONFIG_FIELDS = {
    "patch_frames": int,
    "patch_overlap": float,
    "n_mfcc": int,
    "f_max_hz": float,
    "window_ms": float,
    "hop_ms": float,
    "vad_frame_ms": int,
    "vad_aggressiveness": int,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for scoring failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_steps(text: str) -> StepSet:
    """Parse a step set given as 'dr,dc;dr,dc;...'."""
    try:
        steps = tuple(
            tuple(int(v) for v in part.split(","))
            for part in text.split(";") if part.strip()
        )
        return StepSet(steps=steps)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad step set {text!r}: {exc}")


def _add_config_flags(parser):
    group = parser.add_argument_group("metric parameters")
    for name, kind in _CONFIG_FIELDS.items():
        group.add_argument(f"--{name.replace('_', '-')}", type=kind, default=None, dest=name)
    group.add_argument("--steps", type=_parse_steps, default=None,
                       help="step set as 'dr,dc;dr,dc;...' (default '1,1;3,2;1,3')")
    group.add_argument("--config", default=None, metavar="FILE",
                       help="key=value file with metric parameters (flags override)")


def _read_config_file(path) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "steps":
                values[key] = _parse_steps(value)
            elif key in _CONFIG_FIELDS:
                values[key] = _CONFIG_FIELDS[key](value)
            else:
                raise ValueError(f"{path}:{line_no}: unknown parameter {key!r}")
    return values


def _build_config(args) -> WarpQConfig:
    values = {}
    if args.config:
        values.update(_read_config_file(args.config))
    for name in list(_CONFIG_FIELDS) + ["steps"]:
        flag_value = getattr(args, name)
        if flag_value is not None:
            values[name] = flag_value
    return WarpQConfig(**values)


def _cmd_score(args) -> int:
    config = _build_config(args)
    ref = load_waveform(args.ref)
    deg = load_waveform(args.deg)
    try:
        result = warpq_score(ref, deg, config)
    except WarpqError as exc:
        print(f"scoring failed: {exc}", file=sys.stderr)
        return EXIT_ALL_FAILED
    if args.json:
        payload = {
            "ref": args.ref,
            "deg": args.deg,
            "qs": result.qs,
            "num_patches": result.num_patches,
            "per_patch": result.per_patch,
            "diagnostics": [list(pair) for pair in result.diagnostics],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(result.qs)
    return EXIT_OK


def _cmd_batch(args) -> int:
    config = _build_config(args)
    entries = parse_manifest(args.manifest)
    if not entries:
        print(f"manifest {args.manifest} has no usable rows", file=sys.stderr)
        return EXIT_ALL_FAILED
    jobs = args.jobs if args.jobs is not None else default_parallelism()
    try:
        report = batch_score(entries, config, parallelism=jobs)
    except AllEntriesFailedError as exc:
        print(f"batch failed: {exc}", file=sys.stderr)
        for failure in exc.failures:
            print(f"  {failure.entry.deg_path}: {failure.error}", file=sys.stderr)
        return EXIT_ALL_FAILED
    report = compute_correlations(report, per_sample=args.per_sample)
    emit_report(report, format=args.format, path=args.out,
                include_diagnostics=args.diagnostics)
    print(f"scored {len(report.per_file)}/{len(entries)} entries -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="warpq", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score one degraded/reference file pair")
    p_score.add_argument("--ref", required=True, help="reference (clean) WAV file")
    p_score.add_argument("--deg", required=True, help="degraded WAV file")
    p_score.add_argument("--json", action="store_true", help="emit a JSON object with per-patch detail")
    _add_config_flags(p_score)
    p_score.set_defaults(func=_cmd_score)

    p_batch = sub.add_parser("batch", help="score every pair in a manifest CSV")
    p_batch.add_argument("--manifest", required=True, help="manifest CSV (header ref,deg,score,condition,scale)")
    p_batch.add_argument("--out", required=True, help="report destination path")
    p_batch.add_argument("--format", choices=["csv", "json"], default="csv")
    p_batch.add_argument("--per-sample", action="store_true", dest="per_sample",
                         help="correlate per file instead of per condition")
    p_batch.add_argument("--jobs", type=int, default=None,
                         help="worker count (default: WARPQ_JOBS env var or 1)")
    p_batch.add_argument("--diagnostics", action="store_true",
                         help="include per-patch detail in JSON reports")
    _add_config_flags(p_batch)
    p_batch.set_defaults(func=_cmd_batch)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AudioDecodeError, ManifestError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
