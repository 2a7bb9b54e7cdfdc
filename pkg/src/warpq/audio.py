"""WAV decoding and band-limited resampling.

Every signal entering the metric goes through this module first: files are
decoded to mono float waveforms in [-1, 1], then brought to the metric's
working rate (16 kHz) with a windowed-sinc polyphase resampler.
"""

import math
import struct
from dataclasses import dataclass

import numpy as np
from scipy.signal import firwin, resample_poly

from .errors import EmptyAudioError, UnreadableFileError, UnsupportedEncodingError

WORKING_RATE_HZ = 16000

_FORMAT_PCM = 0x0001
_FORMAT_IEEE_FLOAT = 0x0003
_FORMAT_EXTENSIBLE = 0xFFFE


@dataclass
class Waveform:
    """Mono audio: unitless samples in [-1, 1] plus their sample rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")

    def __len__(self):
        return len(self.samples)

    @property
    def duration_seconds(self) -> float:
        return len(self.samples) / self.sample_rate_hz


def load_waveform(path) -> Waveform:
    """Decode a RIFF/WAVE file into a mono waveform.

    Supported encodings: 16-bit and 24-bit integer PCM and 32-bit IEEE
    float, with 1 or 2 channels. Integer samples are scaled by the type's
    max magnitude (32768 for 16-bit, 2^23 for 24-bit); stereo is mixed to
    mono by per-sample channel average.

    Raises UnreadableFileError, UnsupportedEncodingError or EmptyAudioError
    depending on what went wrong.
    """
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise UnreadableFileError(f"cannot read {path}: {exc}") from exc

    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise UnreadableFileError(f"{path} is not a RIFF/WAVE file")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos:pos + 4]
        (chunk_size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8:pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            fmt = body
        elif chunk_id == b"data":
            data = body
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned

    if fmt is None or len(fmt) < 16:
        raise UnreadableFileError(f"{path}: missing or truncated fmt chunk")
    if data is None:
        raise UnreadableFileError(f"{path}: missing data chunk")

    format_code, channels, rate, _, block_align, bits = struct.unpack_from("<HHIIHH", fmt, 0)
    if format_code == _FORMAT_EXTENSIBLE:
        if len(fmt) < 26:
            raise UnreadableFileError(f"{path}: truncated extensible fmt chunk")
        # actual format code is the first word of the SubFormat GUID
        (format_code,) = struct.unpack_from("<H", fmt, 24)

    if channels not in (1, 2):
        raise UnsupportedEncodingError(f"{path}: {channels} channels (only mono/stereo supported)")
    if rate <= 0:
        raise UnreadableFileError(f"{path}: invalid sample rate {rate}")

    if format_code == _FORMAT_PCM and bits == 16:
        frames = np.frombuffer(data[:len(data) - len(data) % (2 * channels)], dtype="<i2")
        samples = frames.astype(np.float64) / 32768.0
    elif format_code == _FORMAT_PCM and bits == 24:
        usable = len(data) - len(data) % (3 * channels)
        triples = np.frombuffer(data[:usable], dtype=np.uint8).reshape(-1, 3)
        values = (
            triples[:, 0].astype(np.int32)
            | (triples[:, 1].astype(np.int32) << 8)
            | (triples[:, 2].astype(np.int32) << 16)
        )
        values = np.where(values >= 1 << 23, values - (1 << 24), values)  # sign extend
        samples = values.astype(np.float64) / float(1 << 23)
    elif format_code == _FORMAT_IEEE_FLOAT and bits == 32:
        frames = np.frombuffer(data[:len(data) - len(data) % (4 * channels)], dtype="<f4")
        samples = np.clip(frames.astype(np.float64), -1.0, 1.0)
    else:
        raise UnsupportedEncodingError(
            f"{path}: unsupported encoding (format code {format_code}, {bits}-bit)"
        )

    if channels == 2:
        samples = samples.reshape(-1, 2).mean(axis=1)

    if len(samples) == 0:
        raise EmptyAudioError(f"{path}: file contains no audio samples")

    return Waveform(samples, rate)


def resample(w: Waveform, target_rate_hz: int) -> Waveform:
    """Band-limited polyphase resampling to a new rate.

    A Kaiser-windowed sinc low-pass with cutoff at 0.9x the lower of the
    two Nyquist frequencies is applied; matching rates pass samples through
    bit-exact. Output length is round(len * target / source).
    """
    if target_rate_hz <= 0:
        raise ValueError("target_rate_hz must be positive")
    if len(w.samples) == 0:
        raise ValueError("cannot resample an empty waveform")
    if target_rate_hz == w.sample_rate_hz:
        return Waveform(w.samples.copy(), w.sample_rate_hz)

    g = math.gcd(w.sample_rate_hz, target_rate_hz)
    up = target_rate_hz // g
    down = w.sample_rate_hz // g
    # Cutoff relative to the Nyquist of the upsampled intermediate signal.
    cutoff = 0.9 / max(up, down)
    half_len = 16 * max(up, down)
    taps = firwin(2 * half_len + 1, cutoff, window=("kaiser", 8.6))
    out = resample_poly(w.samples, up, down, window=taps)

    n_out = int(round(len(w.samples) * target_rate_hz / w.sample_rate_hz))
    if len(out) < n_out:
        out = np.concatenate([out, np.zeros(n_out - len(out))])
    return Waveform(out[:n_out], target_rate_hz)
