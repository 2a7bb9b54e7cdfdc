"""End-to-end quality scoring.

Both signals are resampled to 16 kHz and silence-stripped, each is turned
into a CMVN-normalized MFCC matrix, the degraded matrix is cut into
overlapping fixed-length patches, and every patch is aligned against the
full reference matrix. The per-patch alignment cost divided by the patch
length gives one cost value; the aggregate score is their median. Lower
scores mean better quality.
"""

from dataclasses import dataclass, field

import numpy as np

from .audio import WORKING_RATE_HZ, Waveform, resample
from .errors import NoSpeechError
from .features import FrameParams, MfccMatrix, cmvn, mfcc
from .sdtw import StepSet, sdtw
from .vad import detect_speech, remove_silence


@dataclass(frozen=True)
class WarpQConfig:
    """Tunable parameters of the metric. Defaults are the published operating point."""

    patch_frames: int = 100          # 400 ms at the 4 ms hop
    patch_overlap: float = 0.5
    n_mfcc: int = 12
    f_max_hz: float = 5000.0
    window_ms: float = 32.0
    hop_ms: float = 4.0
    vad_frame_ms: int = 10
    vad_aggressiveness: int = 1
    steps: StepSet = field(default_factory=StepSet)

    def __post_init__(self):
        if self.patch_frames < 4:
            raise ValueError("patch_frames must be at least 4")
        if not 0.0 <= self.patch_overlap < 1.0:
            raise ValueError("patch_overlap must be in [0, 1)")
        if self.n_mfcc < 1:
            raise ValueError("n_mfcc must be positive")
        if self.window_ms <= 0 or self.hop_ms <= 0 or self.hop_ms > self.window_ms:
            raise ValueError("need 0 < hop_ms <= window_ms")

    @property
    def frame_params(self) -> FrameParams:
        return FrameParams(
            window_len_samples=round(self.window_ms * WORKING_RATE_HZ / 1000),
            hop_samples=round(self.hop_ms * WORKING_RATE_HZ / 1000),
        )

    @property
    def patch_stride(self) -> int:
        return max(1, round(self.patch_frames * (1.0 - self.patch_overlap)))


@dataclass
class Patch:
    """A block of consecutive degraded-signal frames (start_frame is 0-based)."""

    start_frame: int
    matrix: np.ndarray

    @property
    def num_frames(self) -> int:
        return self.matrix.shape[1]


@dataclass
class QualityScore:
    """Aggregate score plus per-patch detail; lower qs = better quality."""

    qs: float
    per_patch: list
    num_patches: int
    diagnostics: list  # per patch: (a_star, b_star) 1-based reference indices


def extract_patches(deg: MfccMatrix, config: WarpQConfig = WarpQConfig()) -> list:
    """Cut the degraded MFCC matrix into overlapping patches.

    Patches start at 0, S, 2S, ... (S = patch_frames * (1 - overlap)) while
    a full patch fits. A signal shorter than one patch yields a single
    whole-signal patch; trailing frames not covered by a full patch are
    dropped.
    """
    coeffs = deg.coeffs if isinstance(deg, MfccMatrix) else np.asarray(deg, dtype=np.float64)
    T = coeffs.shape[1]
    if T == 0:
        raise ValueError("cannot extract patches from an empty MFCC matrix")
    N = config.patch_frames
    if T < N:
        return [Patch(0, coeffs)]
    stride = config.patch_stride
    return [Patch(s, coeffs[:, s:s + N]) for s in range(0, T - N + 1, stride)]


def patch_cost(patch: Patch, ref: MfccMatrix, steps: StepSet = StepSet()) -> float:
    """Alignment cost of one patch against the full reference, per patch frame."""
    ref_coeffs = ref.coeffs if isinstance(ref, MfccMatrix) else ref
    cost, _ = sdtw(patch.matrix, ref_coeffs, steps)
    return cost / patch.num_frames


def aggregate_quality(per_patch) -> float:
    """Median of the per-patch costs; an even count averages the middle two."""
    return float(np.median(per_patch))


def frame_to_seconds(index: int, hop_seconds: float) -> float:
    """Time of a (1-based) frame index at the given hop."""
    if index < 0:
        raise ValueError("frame index must be non-negative")
    return index * hop_seconds


def preprocess(w: Waveform, config: WarpQConfig, label: str = "signal") -> MfccMatrix:
    """Resample to 16 kHz, strip silence, and return the normalized MFCC matrix."""
    w16 = resample(w, WORKING_RATE_HZ)
    try:
        decision = detect_speech(w16, config.vad_frame_ms, config.vad_aggressiveness)
        speech = remove_silence(w16, decision)
    except NoSpeechError as exc:
        raise NoSpeechError(f"{label}: {exc}") from exc
    feats = mfcc(speech, config.frame_params, n_mfcc=config.n_mfcc, f_max=config.f_max_hz)
    return cmvn(feats)


def warpq_score(ref: Waveform, deg: Waveform, config: WarpQConfig = WarpQConfig()) -> QualityScore:
    """Score a degraded waveform against its clean reference.

    Each signal is normalized with its own CMVN statistics. Raises
    NoSpeechError if VAD removes everything, and NoAlignmentError when the
    reference is too short to admit any warping path for some patch.
    """
    ref_feats = preprocess(ref, config, label="reference")
    deg_feats = preprocess(deg, config, label="degraded")

    per_patch = []
    diagnostics = []
    for patch in extract_patches(deg_feats, config):
        cost, path = sdtw(patch.matrix, ref_feats.coeffs, config.steps)
        per_patch.append(cost / patch.num_frames)
        diagnostics.append((path.a_star, path.b_star))

    return QualityScore(
        qs=aggregate_quality(per_patch),
        per_patch=per_patch,
        num_patches=len(per_patch),
        diagnostics=diagnostics,
    )
