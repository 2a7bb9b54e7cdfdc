"""Minimal WAV writers for test fixtures (the package itself only reads)."""

import struct

import numpy as np


def _wav_bytes(fmt_code, channels, rate, bits, payload, fmt_extra=b""):
    block_align = channels * bits // 8
    fmt_body = struct.pack(
        "<HHIIHH", fmt_code, channels, rate, rate * block_align, block_align, bits
    ) + fmt_extra
    chunks = b"fmt " + struct.pack("<I", len(fmt_body)) + fmt_body
    if len(fmt_body) % 2:
        chunks += b"\x00"
    chunks += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) % 2:
        chunks += b"\x00"
    return b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks


def write_pcm16(path, samples, rate=16000):
    """samples: float array in [-1, 1] (mono) or (n, 2) for stereo, or raw int16."""
    samples = np.asarray(samples)
    if samples.dtype != np.int16:
        samples = np.clip(np.round(samples * 32768.0), -32768, 32767).astype(np.int16)
    channels = 1 if samples.ndim == 1 else samples.shape[1]
    with open(path, "wb") as fh:
        fh.write(_wav_bytes(1, channels, rate, 16, samples.astype("<i2").tobytes()))


def write_pcm16_raw(path, values, rate=16000, channels=1):
    """values: iterable of raw int16 sample values (interleaved if stereo)."""
    payload = np.asarray(values, dtype="<i2").tobytes()
    with open(path, "wb") as fh:
        fh.write(_wav_bytes(1, channels, rate, 16, payload))


def write_pcm24(path, samples, rate=16000):
    samples = np.asarray(samples, dtype=np.float64)
    values = np.clip(np.round(samples * float(1 << 23)), -(1 << 23), (1 << 23) - 1).astype(np.int64)
    values = np.where(values < 0, values + (1 << 24), values)
    raw = bytearray()
    for v in values:
        raw += struct.pack("<I", int(v))[:3]
    with open(path, "wb") as fh:
        fh.write(_wav_bytes(1, 1, rate, 24, bytes(raw)))


def write_float32(path, samples, rate=16000, channels=1):
    samples = np.asarray(samples, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_wav_bytes(3, channels, rate, 32, samples.tobytes()))


def write_unsupported(path, rate=16000):
    """A 'WAV' claiming an ADPCM-style compressed encoding."""
    payload = b"\x00" * 64
    with open(path, "wb") as fh:
        fh.write(_wav_bytes(0x0011, 1, rate, 4, payload))


def write_pcm32(path, n_samples=8, rate=16000):
    """32-bit integer PCM, which the decoder does not accept."""
    payload = np.zeros(n_samples, dtype="<i4").tobytes()
    with open(path, "wb") as fh:
        fh.write(_wav_bytes(1, 1, rate, 32, payload))


def write_zero_length(path, rate=16000):
    with open(path, "wb") as fh:
        fh.write(_wav_bytes(1, 1, rate, 16, b""))
