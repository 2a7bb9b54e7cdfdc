"""Exception types raised by the warpq package."""


class WarpqError(Exception):
    """Base class for all errors raised by this package."""


class AudioDecodeError(WarpqError):
    """A WAV file could not be turned into a waveform."""


class UnreadableFileError(AudioDecodeError):
    """The file is missing, not accessible, or not a RIFF/WAVE container."""


class UnsupportedEncodingError(AudioDecodeError):
    """The WAV encoding is not one of PCM16, PCM24 or float32, mono/stereo."""


class EmptyAudioError(AudioDecodeError):
    """The WAV file decoded to zero samples."""


class NoSpeechError(WarpqError):
    """Voice activity detection flagged every frame as non-speech.

    Fatal for scoring: there is nothing left to compare.
    """


class NoAlignmentError(WarpqError):
    """No step-conformant warping path exists (entire last row unreachable)."""


class InconsistentCostMatrixError(WarpqError):
    """Backtracking found a cell whose value no predecessor explains.

    This signals an implementation bug, not bad input.
    """


class ManifestError(WarpqError):
    """The manifest file is unreadable or its header is missing/wrong."""


class AllEntriesFailedError(WarpqError):
    """Every entry of a batch failed to score."""

    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = failures or []
