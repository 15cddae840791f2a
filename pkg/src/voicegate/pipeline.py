"""End-to-end analysis of a single recording: bytes in, verdict out."""

from __future__ import annotations

from dataclasses import dataclass

from .classifier import Model, NormalizedFeatures, Verdict, classify
from .features import RawFeatures, extract_file_features
from .framing import DEFAULT_FRAMING, FramingConfig
from .wavio import AudioBuffer, parse_wav


@dataclass(frozen=True)
class Analysis:
    raw: RawFeatures
    normalized: NormalizedFeatures
    score: float
    verdict: Verdict


def analyze_buffer(
    buffer: AudioBuffer, model: Model, config: FramingConfig = DEFAULT_FRAMING
) -> Analysis:
    """Extract features from a buffer and classify them against a model."""
    raw = extract_file_features(buffer, config)
    decision = classify(raw, model)
    assert decision.features is not None
    return Analysis(
        raw=raw,
        normalized=decision.features,
        score=decision.score,
        verdict=decision.verdict,
    )


def analyze_wav_bytes(
    data: bytes, model: Model, config: FramingConfig = DEFAULT_FRAMING
) -> Analysis:
    """Parse WAV bytes and classify them. Raises WavError on bad input."""
    return analyze_buffer(parse_wav(data), model, config)
