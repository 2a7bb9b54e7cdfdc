"""Cepstral features: mel filterbank, MFCC extraction, CMVN.

The feature matrix handed to the alignment stage is built as
power spectrogram (Hann window, no centering) -> 12-band mel filterbank up
to 5 kHz -> decibel log -> orthonormal DCT-II over the bands -> sinusoidal
liftering, followed by per-coefficient mean/variance normalization over the
utterance.
"""

from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy.signal.windows import hann

from .audio import WORKING_RATE_HZ, Waveform

DEFAULT_WINDOW_SAMPLES = 512  # 32 ms at 16 kHz
DEFAULT_HOP_SAMPLES = 64      # 4 ms at 16 kHz
DEFAULT_NUM_COEFFS = 12
DEFAULT_F_MAX_HZ = 5000.0
DEFAULT_LIFTER = 3
LOG_POWER_FLOOR = 1e-10
CMVN_STD_FLOOR = 1e-8


@dataclass(frozen=True)
class FrameParams:
    """Analysis framing: Hann window of window_len_samples, stride hop_samples."""

    window_len_samples: int = DEFAULT_WINDOW_SAMPLES
    hop_samples: int = DEFAULT_HOP_SAMPLES

    def __post_init__(self):
        if self.window_len_samples <= 0 or self.hop_samples <= 0:
            raise ValueError("window and hop must be positive")
        if self.hop_samples > self.window_len_samples:
            raise ValueError("hop must not exceed the window length")


@dataclass
class MfccMatrix:
    """K x T matrix of cepstral coefficients (rows = coefficients, columns = frames)."""

    coeffs: np.ndarray
    hop_seconds: float
    K: int = DEFAULT_NUM_COEFFS

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.ndim != 2 or self.coeffs.shape[0] != self.K:
            raise ValueError(f"expected a {self.K} x T coefficient matrix")

    @property
    def num_frames(self) -> int:
        return self.coeffs.shape[1]


def hz_to_mel(f):
    """HTK mel scale: mel(f) = 2595 * log10(1 + f / 700)."""
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(n_mels: int, f_min: float, f_max: float, n_fft: int, rate: int) -> np.ndarray:
    """Triangular mel filters, area-normalized to unit integral over Hz.

    Center frequencies are equally spaced on the mel scale between f_min
    and f_max. Returns an (n_mels, n_fft // 2 + 1) weight matrix.
    """
    if n_mels < 1:
        raise ValueError("n_mels must be at least 1")
    if not f_min < f_max:
        raise ValueError("f_min must be below f_max")
    if f_max > rate / 2:
        raise ValueError("f_max exceeds the Nyquist frequency")

    mel_points = np.linspace(hz_to_mel(f_min), hz_to_mel(f_max), n_mels + 2)
    hz_points = mel_to_hz(mel_points)
    bin_freqs = np.arange(n_fft // 2 + 1) * rate / n_fft

    weights = np.zeros((n_mels, len(bin_freqs)))
    for i in range(n_mels):
        left, center, right = hz_points[i], hz_points[i + 1], hz_points[i + 2]
        rising = (bin_freqs - left) / (center - left)
        falling = (right - bin_freqs) / (right - center)
        tri = np.maximum(0.0, np.minimum(rising, falling))
        # unit-peak triangle integrates to (right - left) / 2 over Hz
        weights[i] = tri * (2.0 / (right - left))
    return weights


def lifter_weights(n_coeffs: int, lifter: int = DEFAULT_LIFTER) -> np.ndarray:
    """Sinusoidal lifter: w[n] = 1 + (L/2) sin(pi n / L) for n = 1..n_coeffs."""
    n = np.arange(1, n_coeffs + 1, dtype=np.float64)
    return 1.0 + (lifter / 2.0) * np.sin(np.pi * n / lifter)


def mfcc(
    w: Waveform,
    params: FrameParams = FrameParams(),
    n_mfcc: int = DEFAULT_NUM_COEFFS,
    f_min: float = 0.0,
    f_max: float = DEFAULT_F_MAX_HZ,
    lifter: int = DEFAULT_LIFTER,
) -> MfccMatrix:
    """Liftered MFCCs of a 16 kHz waveform.

    Frame t covers samples [t*hop, t*hop + window), no padding, so
    T = floor((len - window) / hop) + 1. The mel filterbank spans n_mfcc
    bands and the DCT keeps all of them.
    """
    if w.sample_rate_hz != WORKING_RATE_HZ:
        raise ValueError(f"features expect {WORKING_RATE_HZ} Hz input, got {w.sample_rate_hz}")
    win = params.window_len_samples
    hop = params.hop_samples
    if len(w.samples) < win:
        raise ValueError(f"waveform shorter than one analysis window ({win} samples)")

    frames = np.lib.stride_tricks.sliding_window_view(w.samples, win)[::hop]
    windowed = frames * hann(win, sym=False)
    power = np.abs(np.fft.rfft(windowed, axis=1)) ** 2  # (T, n_fft/2+1)

    fb = mel_filterbank(n_mfcc, f_min, f_max, win, w.sample_rate_hz)
    mel_energy = power @ fb.T  # (T, n_mfcc)
    log_mel = 10.0 * np.log10(np.maximum(mel_energy, LOG_POWER_FLOOR)).T  # (n_mfcc, T)

    coeffs = scipy.fft.dct(log_mel, type=2, axis=0, norm="ortho")
    coeffs *= lifter_weights(n_mfcc, lifter)[:, None]

    return MfccMatrix(coeffs, hop_seconds=hop / w.sample_rate_hz, K=n_mfcc)


def cmvn(m: MfccMatrix) -> MfccMatrix:
    """Standardize each coefficient row to zero mean and unit variance.

    Uses the population standard deviation over all frames of the
    utterance, floored at a tiny constant so constant rows map to zero.
    """
    if m.num_frames < 2:
        raise ValueError("CMVN needs at least 2 frames")
    mean = m.coeffs.mean(axis=1, keepdims=True)
    std = m.coeffs.std(axis=1, keepdims=True)
    normalized = (m.coeffs - mean) / np.maximum(std, CMVN_STD_FLOOR)
    return MfccMatrix(normalized, hop_seconds=m.hop_seconds, K=m.K)
