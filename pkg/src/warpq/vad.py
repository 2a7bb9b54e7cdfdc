"""Energy-based voice activity detection with hangover.

Frames are classified against an adaptive noise floor: the floor is the
running 10th percentile of the RMS of frames judged non-speech so far, and
a frame counts as speech when its RMS exceeds
max(noise_floor * threshold_ratio, absolute_floor). A hangover keeps the
detector active for a few frames after each speech frame so plosive tails
and low-energy word endings are not chopped.

The per-frame boolean interface allows a drop-in replacement by any other
frame-synchronous detector.
"""

from dataclasses import dataclass

import numpy as np

from .audio import WORKING_RATE_HZ, Waveform
from .errors import NoSpeechError

# Higher aggressiveness demands more energy over the noise floor.
THRESHOLD_RATIOS = {0: 2.0, 1: 3.0, 2: 4.5, 3: 6.0}
ABSOLUTE_FLOOR_RMS = 1e-4
HANGOVER_FRAMES = 3
NOISE_PERCENTILE = 10.0

VALID_FRAME_MS = (10, 20, 30)


@dataclass
class VadDecision:
    """Per-frame speech flags for non-overlapping frames of frame_ms each."""

    frame_ms: int
    flags: np.ndarray

    def __post_init__(self):
        if self.frame_ms not in VALID_FRAME_MS:
            raise ValueError(f"frame_ms must be one of {VALID_FRAME_MS}")
        self.flags = np.asarray(self.flags, dtype=bool)

    @property
    def num_frames(self) -> int:
        return len(self.flags)


def detect_speech(w: Waveform, frame_ms: int = 10, aggressiveness: int = 1) -> VadDecision:
    """Classify each non-overlapping frame of `w` as speech or silence.

    `w` must be at the 16 kHz working rate. Returns one flag per full
    frame; a trailing partial frame gets no flag of its own.
    """
    if len(w.samples) == 0:
        raise ValueError("cannot run VAD on an empty waveform")
    if w.sample_rate_hz != WORKING_RATE_HZ:
        raise ValueError(f"VAD expects {WORKING_RATE_HZ} Hz input, got {w.sample_rate_hz}")
    if frame_ms not in VALID_FRAME_MS:
        raise ValueError(f"frame_ms must be one of {VALID_FRAME_MS}")
    if aggressiveness not in THRESHOLD_RATIOS:
        raise ValueError("aggressiveness must be in 0..3")

    ratio = THRESHOLD_RATIOS[aggressiveness]
    frame_len = WORKING_RATE_HZ * frame_ms // 1000
    n_frames = len(w.samples) // frame_len

    frames = w.samples[:n_frames * frame_len].reshape(n_frames, frame_len)
    rms = np.sqrt(np.mean(frames * frames, axis=1))

    raw = np.zeros(n_frames, dtype=bool)
    noise_rms = []  # RMS history of frames judged non-speech
    noise_floor = 0.0
    for i in range(n_frames):
        threshold = max(noise_floor * ratio, ABSOLUTE_FLOOR_RMS)
        if rms[i] > threshold:
            raw[i] = True
        else:
            noise_rms.append(rms[i])
            noise_floor = float(np.percentile(noise_rms, NOISE_PERCENTILE))

    flags = raw.copy()
    for i in np.flatnonzero(raw):
        flags[i + 1:i + 1 + HANGOVER_FRAMES] = True

    return VadDecision(frame_ms=frame_ms, flags=flags)


def remove_silence(w: Waveform, decision: VadDecision) -> Waveform:
    """Concatenate, in order, the frames flagged as speech.

    The trailing partial frame (shorter than frame_ms) is kept iff the last
    full frame was speech. Raises NoSpeechError when nothing survives.
    """
    frame_len = w.sample_rate_hz * decision.frame_ms // 1000
    n_frames = len(decision.flags)
    if n_frames * frame_len > len(w.samples):
        raise ValueError("decision does not match this waveform")

    pieces = [
        w.samples[i * frame_len:(i + 1) * frame_len]
        for i in np.flatnonzero(decision.flags)
    ]
    tail = w.samples[n_frames * frame_len:]
    if len(tail) and n_frames > 0 and decision.flags[-1]:
        pieces.append(tail)

    if not pieces:
        raise NoSpeechError("no speech detected: every frame was classified as silence")
    return Waveform(np.concatenate(pieces), w.sample_rate_hz)
