"""Batch scoring over dataset manifests and correlation statistics.

A manifest is a CSV file with header ``ref,deg,score,condition,scale``
(UTF-8, ``#`` lines are comments). Each row names a reference/degraded
pair, optionally with a subjective score (MOS 1-5 or MUSHRA 0-100), a
condition label used for grouping, and the scale tag. The harness scores
every pair, aggregates per condition, and correlates objective scores with
subjective ones. Scores correlate negatively with quality by construction
(lower = better); correlations are reported signed, without flipping.
"""

import csv
import datetime
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .audio import load_waveform
from .errors import AllEntriesFailedError, ManifestError, WarpqError
from .pipeline import QualityScore, WarpQConfig, warpq_score

logger = logging.getLogger("warpq")

MANIFEST_COLUMNS = ["ref", "deg", "score", "condition", "scale"]
MOS_RANGE = (1.0, 5.0)
MUSHRA_RANGE = (0.0, 100.0)
JOBS_ENV_VAR = "WARPQ_JOBS"


@dataclass
class ManifestEntry:
    ref_path: str
    deg_path: str
    subjective_score: float = None
    condition: str = None
    scale: str = None  # "mos" or "mushra" when subjective_score is present

    def mos_score(self):
        """Subjective score on the MOS scale (MUSHRA rescaled linearly)."""
        if self.subjective_score is None:
            return None
        if self.scale == "mushra":
            return rescale_linear(self.subjective_score, MUSHRA_RANGE, MOS_RANGE)
        return self.subjective_score


@dataclass
class FileResult:
    entry: ManifestEntry
    score: QualityScore

    @property
    def qs(self) -> float:
        return self.score.qs


@dataclass
class ConditionStat:
    condition: str
    mean_qs: float
    mean_subjective: float  # MOS scale, None if no subjective scores
    num_files: int


@dataclass
class Failure:
    entry: ManifestEntry
    error: str


@dataclass
class EvalReport:
    per_file: list
    per_condition: list
    failures: list
    pearson: float = None
    spearman: float = None
    correlation_basis: str = None  # "per_condition" or "per_sample"
    generated_at: str = None


def parse_manifest(path) -> list:
    """Read manifest rows into entries, resolving paths against the manifest directory.

    Malformed rows are logged with their line number and skipped; a missing
    or wrong header raises ManifestError.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc

    base_dir = os.path.dirname(os.path.abspath(path))
    numbered = [
        (i + 1, line) for i, line in enumerate(lines)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        raise ManifestError(f"{path}: missing header row")

    header_no, header_line = numbered[0]
    header = [c.strip().lower() for c in next(csv.reader([header_line]))]
    if header != MANIFEST_COLUMNS:
        raise ManifestError(
            f"{path}:{header_no}: expected header {','.join(MANIFEST_COLUMNS)}, got {header_line.strip()!r}"
        )

    entries = []
    for line_no, line in numbered[1:]:
        fields = next(csv.reader([line]))
        entry = _parse_row(fields, base_dir)
        if entry is None:
            logger.warning("%s:%d: malformed row skipped: %s", path, line_no, line.strip())
            continue
        entries.append(entry)
    return entries


def _parse_row(fields, base_dir):
    if len(fields) != len(MANIFEST_COLUMNS):
        return None
    ref, deg, score, condition, scale = (f.strip() for f in fields)
    if not ref or not deg:
        return None
    scale = scale.lower() or None
    if scale not in (None, "mos", "mushra"):
        return None
    subjective = None
    if score:
        try:
            subjective = float(score)
        except ValueError:
            return None
        lo, hi = MUSHRA_RANGE if scale == "mushra" else MOS_RANGE
        if scale is not None and not lo <= subjective <= hi:
            return None
    return ManifestEntry(
        ref_path=os.path.join(base_dir, ref) if not os.path.isabs(ref) else ref,
        deg_path=os.path.join(base_dir, deg) if not os.path.isabs(deg) else deg,
        subjective_score=subjective,
        condition=condition or None,
        scale=scale,
    )


def rescale_linear(score: float, src, dst) -> float:
    """Map a value linearly from range src = (lo, hi) to dst = (lo, hi)."""
    s_lo, s_hi = src
    d_lo, d_hi = dst
    if not s_lo < s_hi:
        raise ValueError("source range is degenerate")
    return d_lo + (score - s_lo) * (d_hi - d_lo) / (s_hi - s_lo)


def default_parallelism() -> int:
    """Worker count used when none is given; overridable via WARPQ_JOBS."""
    value = os.environ.get(JOBS_ENV_VAR)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logger.warning("ignoring invalid %s=%r", JOBS_ENV_VAR, value)
    return 1


def _score_entry(entry: ManifestEntry, config: WarpQConfig):
    ref = load_waveform(entry.ref_path)
    deg = load_waveform(entry.deg_path)
    return warpq_score(ref, deg, config)


def batch_score(entries, config: WarpQConfig = WarpQConfig(), parallelism: int = None) -> EvalReport:
    """Score every manifest entry, isolating per-entry failures.

    Results follow manifest order regardless of the worker count, so runs
    with different parallelism produce identical reports. Raises
    AllEntriesFailedError when nothing scored successfully.
    """
    entries = list(entries)
    if not entries:
        raise ValueError("no entries to score")
    if parallelism is None:
        parallelism = default_parallelism()
    if parallelism < 1:
        raise ValueError("parallelism must be positive")

    outcomes = [None] * len(entries)

    def run(i):
        try:
            outcomes[i] = FileResult(entries[i], _score_entry(entries[i], config))
        except (WarpqError, OSError, ValueError) as exc:
            logger.warning("entry %d (%s) failed: %s", i, entries[i].deg_path, exc)
            outcomes[i] = Failure(entries[i], str(exc))

    if parallelism == 1 or len(entries) == 1:
        for i in range(len(entries)):
            run(i)
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            list(pool.map(run, range(len(entries))))

    per_file = [o for o in outcomes if isinstance(o, FileResult)]
    failures = [o for o in outcomes if isinstance(o, Failure)]
    if not per_file:
        raise AllEntriesFailedError("every entry failed to score", failures)

    return EvalReport(
        per_file=per_file,
        per_condition=_condition_stats(per_file),
        failures=failures,
        generated_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )


def _condition_stats(per_file) -> list:
    by_condition = {}
    for result in per_file:
        if result.entry.condition is not None:
            by_condition.setdefault(result.entry.condition, []).append(result)
    stats = []
    for condition in sorted(by_condition):
        results = by_condition[condition]
        subjective = [r.entry.mos_score() for r in results if r.entry.mos_score() is not None]
        stats.append(ConditionStat(
            condition=condition,
            mean_qs=float(np.mean([r.qs for r in results])),
            mean_subjective=float(np.mean(subjective)) if subjective else None,
            num_files=len(results),
        ))
    return stats


def compute_correlations(report: EvalReport, per_sample: bool = False) -> EvalReport:
    """Fill in Pearson/Spearman between objective and subjective scores.

    By default correlations are over per-condition means; with per_sample
    they are over individual files. Left as None when fewer than 3 points
    with subjective scores exist or either side is constant.
    """
    if per_sample:
        points = [
            (r.qs, r.entry.mos_score())
            for r in report.per_file if r.entry.mos_score() is not None
        ]
        basis = "per_sample"
    else:
        points = [
            (c.mean_qs, c.mean_subjective)
            for c in report.per_condition if c.mean_subjective is not None
        ]
        basis = "per_condition"

    p = s = None
    if len(points) >= 3:
        qs, subj = zip(*points)
        try:
            p = pearson(qs, subj)
            s = spearman(qs, subj)
        except ValueError as exc:
            logger.warning("correlations unavailable: %s", exc)
    else:
        logger.warning("correlations unavailable: only %d scored points", len(points))
    return replace(report, pearson=p, spearman=s, correlation_basis=basis)


def pearson(x, y) -> float:
    """Sample Pearson correlation coefficient."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D and the same length")
    if len(x) < 3:
        raise ValueError("need at least 3 points")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        raise ValueError("correlation undefined for constant input")
    return float(np.clip((xc @ yc) / denom, -1.0, 1.0))


def average_ranks(x) -> np.ndarray:
    """Ranks 1..n with ties given the mean of the ranks they occupy."""
    x = np.asarray(x, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x))
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Spearman rank-order correlation: Pearson correlation of average ranks."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D and the same length")
    if len(x) < 3:
        raise ValueError("need at least 3 points")
    return pearson(average_ranks(x), average_ranks(y))


# --- report serialization ------------------------------------------------

def report_to_dict(report: EvalReport, include_diagnostics: bool = False) -> dict:
    per_file = []
    for r in report.per_file:
        item = {"entry": asdict(r.entry), "qs": r.qs}
        if include_diagnostics:
            item["per_patch"] = list(r.score.per_patch)
            item["diagnostics"] = [list(pair) for pair in r.score.diagnostics]
        per_file.append(item)
    return {
        "generated_at": report.generated_at,
        "per_file": per_file,
        "per_condition": [asdict(c) for c in report.per_condition],
        "pearson": report.pearson,
        "spearman": report.spearman,
        "correlation_basis": report.correlation_basis,
        "failures": [{"entry": asdict(f.entry), "error": f.error} for f in report.failures],
    }


def report_from_dict(payload: dict) -> EvalReport:
    per_file = []
    for item in payload["per_file"]:
        per_patch = item.get("per_patch", [])
        diagnostics = [tuple(pair) for pair in item.get("diagnostics", [])]
        score = QualityScore(
            qs=item["qs"],
            per_patch=per_patch,
            num_patches=len(per_patch),
            diagnostics=diagnostics,
        )
        per_file.append(FileResult(ManifestEntry(**item["entry"]), score))
    return EvalReport(
        per_file=per_file,
        per_condition=[ConditionStat(**c) for c in payload["per_condition"]],
        failures=[Failure(ManifestEntry(**f["entry"]), f["error"]) for f in payload["failures"]],
        pearson=payload.get("pearson"),
        spearman=payload.get("spearman"),
        correlation_basis=payload.get("correlation_basis"),
        generated_at=payload.get("generated_at"),
    )


def load_report_json(path) -> EvalReport:
    with open(path, "r", encoding="utf-8") as fh:
        return report_from_dict(json.load(fh))


def emit_report(report: EvalReport, format: str = "csv", path=None, include_diagnostics: bool = False):
    """Write the report as CSV (tables plus summary blocks) or JSON."""
    if format == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report_to_dict(report, include_diagnostics), fh, indent=2)
            fh.write("\n")
    elif format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["# generated_at", report.generated_at])
            writer.writerow(["ref", "deg", "condition", "subjective", "qs"])
            for r in report.per_file:
                e = r.entry
                writer.writerow([
                    e.ref_path, e.deg_path, e.condition or "",
                    "" if e.subjective_score is None else e.subjective_score,
                    repr(r.qs),
                ])
            writer.writerow([])
            writer.writerow(["# per-condition"])
            writer.writerow(["condition", "mean_qs", "mean_subjective", "num_files"])
            for c in report.per_condition:
                writer.writerow([
                    c.condition, repr(c.mean_qs),
                    "" if c.mean_subjective is None else repr(c.mean_subjective),
                    c.num_files,
                ])
            writer.writerow([])
            writer.writerow(["# correlations", report.correlation_basis or ""])
            writer.writerow(["pearson", "" if report.pearson is None else repr(report.pearson)])
            writer.writerow(["spearman", "" if report.spearman is None else repr(report.spearman)])
            if report.failures:
                writer.writerow([])
                writer.writerow(["# failures"])
                writer.writerow(["ref", "deg", "error"])
                for f in report.failures:
                    writer.writerow([f.entry.ref_path, f.entry.deg_path, f.error])
    else:
        raise ValueError(f"unknown report format {format!r}")
