"""Deterministic pseudo-speech generator for tests.

Produces harmonic signals with a wandering pitch, a formant-shaped
spectral envelope, deep syllabic amplitude modulation and a low broadband
noise floor. Not speech, but close enough in structure for VAD, cepstral
features and alignment to behave as they would on real recordings.
"""

import numpy as np

from warpq import Waveform


def speech_like(duration_s, seed, rate=16000, peak=0.3):
    rng = np.random.default_rng(seed)
    n = int(duration_s * rate)
    t = np.arange(n) / rate

    f0_base = rng.uniform(100, 180)
    f0 = f0_base * (1.0 + 0.25 * np.sin(2 * np.pi * rng.uniform(0.5, 1.2) * t + rng.uniform(0, 2 * np.pi)))
    phase = 2 * np.pi * np.cumsum(f0) / rate

    sig = np.zeros(n)
    for k in range(1, 40):
        f_k = k * f0_base
        if f_k > 4800:
            break
        amp = (np.exp(-(((f_k - 500) / 700) ** 2))
               + 0.7 * np.exp(-(((f_k - 1800) / 900) ** 2))
               + 0.08)
        sig += amp * np.sin(k * phase + rng.uniform(0, 2 * np.pi))

    syllable = 0.5 + 0.5 * np.sin(2 * np.pi * rng.uniform(2.5, 4.5) * t + rng.uniform(0, 2 * np.pi))
    sig *= 0.12 + 0.88 * syllable ** 2
    sig += 0.004 * rng.standard_normal(n)
    sig *= peak / np.max(np.abs(sig))
    return Waveform(sig, rate)


def with_silence(w, lead_s=0.0, trail_s=0.0):
    """Pad a waveform with digital silence."""
    lead = np.zeros(int(lead_s * w.sample_rate_hz))
    trail = np.zeros(int(trail_s * w.sample_rate_hz))
    return Waveform(np.concatenate([lead, w.samples, trail]), w.sample_rate_hz)


def add_noise_at_snr(w, snr_db, seed):
    """Add white noise relative to the signal's RMS; returns a new waveform."""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(len(w.samples))
    noise /= np.sqrt(np.mean(noise ** 2))
    sig_rms = np.sqrt(np.mean(w.samples ** 2))
    return Waveform(w.samples + noise * sig_rms / (10 ** (snr_db / 20)), w.sample_rate_hz)
