"""Full-reference speech quality scoring via subsequence alignment of cepstral features.

The top-level entry point is :func:`warpq_score`, which compares a degraded
waveform against its clean reference and returns a quality score where
lower means better. The building blocks (decoding, VAD, MFCC/CMVN, the
subsequence aligner, and the batch evaluation harness) are all importable
on their own.
"""

__version__ = "0.1.0"

from .audio import WORKING_RATE_HZ, Waveform, load_waveform, resample
from .errors import (
    AllEntriesFailedError,
    AudioDecodeError,
    EmptyAudioError,
    InconsistentCostMatrixError,
    ManifestError,
    NoAlignmentError,
    NoSpeechError,
    UnreadableFileError,
    UnsupportedEncodingError,
    WarpqError,
)
from .features import (
    FrameParams,
    MfccMatrix,
    cmvn,
    hz_to_mel,
    lifter_weights,
    mel_filterbank,
    mel_to_hz,
    mfcc,
)
from .harness import (
    ConditionStat,
    EvalReport,
    Failure,
    FileResult,
    ManifestEntry,
    average_ranks,
    batch_score,
    compute_correlations,
    emit_report,
    load_report_json,
    parse_manifest,
    pearson,
    rescale_linear,
    report_from_dict,
    report_to_dict,
    spearman,
)
from .pipeline import (
    Patch,
    QualityScore,
    WarpQConfig,
    aggregate_quality,
    extract_patches,
    frame_to_seconds,
    patch_cost,
    preprocess,
    warpq_score,
)
from .sdtw import (
    StepSet,
    WarpPath,
    accumulate,
    backtrack,
    best_end,
    local_cost,
    sdtw,
)
from .vad import VadDecision, detect_speech, remove_silence

__all__ = [
    "WORKING_RATE_HZ",
    "Waveform",
    "load_waveform",
    "resample",
    "VadDecision",
    "detect_speech",
    "remove_silence",
    "FrameParams",
    "MfccMatrix",
    "hz_to_mel",
    "mel_to_hz",
    "mel_filterbank",
    "lifter_weights",
    "mfcc",
    "cmvn",
    "StepSet",
    "WarpPath",
    "local_cost",
    "accumulate",
    "best_end",
    "backtrack",
    "sdtw",
    "WarpQConfig",
    "Patch",
    "QualityScore",
    "extract_patches",
    "patch_cost",
    "aggregate_quality",
    "frame_to_seconds",
    "preprocess",
    "warpq_score",
    "ManifestEntry",
    "FileResult",
    "ConditionStat",
    "Failure",
    "EvalReport",
    "parse_manifest",
    "rescale_linear",
    "batch_score",
    "compute_correlations",
    "pearson",
    "spearman",
    "average_ranks",
    "emit_report",
    "report_to_dict",
    "report_from_dict",
    "load_report_json",
    "WarpqError",
    "AudioDecodeError",
    "UnreadableFileError",
    "UnsupportedEncodingError",
    "EmptyAudioError",
    "NoSpeechError",
    "NoAlignmentError",
    "InconsistentCostMatrixError",
    "ManifestError",
    "AllEntriesFailedError",
]
