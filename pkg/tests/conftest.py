import numpy as np
import pytest

from synth import speech_like


@pytest.fixture(scope="session")
def speech_3s():
    """One 3-second pseudo-speech utterance shared across tests."""
    return speech_like(3.0, seed=42)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
