"""Short-time time-domain features: energy, average amplitude, zero crossings.

Definitions on a windowed frame S of length N:

    energy     = sum S(n)^2              for n in [0, N)
    amplitude  = sum |S(n)|              for n in [0, N)
    crossings  = 1/2 sum |sgn(S(n)) - sgn(S(n-1))|   for n in [1, N)

with sgn(v) = +1 for v >= 0 and -1 otherwise. File-level features are the
sums of the per-frame values over every frame of the recording.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framing import (
    DEFAULT_FRAMING,
    FramingConfig,
    WindowedFrame,
    frame_rows,
    hamming_coefficients,
)
from .wavio import AudioBuffer


class FrameTooShortError(ValueError):
    """Zero crossings need at least two samples."""


@dataclass(frozen=True)
class FrameFeatures:
    """Feature values of a single frame."""

    energy: float
    amplitude: float
    crossings: float


@dataclass(frozen=True)
class RawFeatures:
    """File-level feature sums plus the number of frames they cover."""

    energy: float
    amplitude: float
    crossings: float
    frame_count: int

    def __post_init__(self) -> None:
        if self.energy < 0 or self.amplitude < 0 or self.crossings < 0:
            raise ValueError("feature sums cannot be negative")
        if self.frame_count < 1:
            raise ValueError("frame_count must be at least 1")


def _signs(values: np.ndarray) -> np.ndarray:
    # sgn(0) = +1 by convention
    return np.where(values >= 0, 1, -1).astype(np.int8)


def short_term_energy(frame: WindowedFrame) -> float:
    s = frame.samples
    return float(np.sum(s * s))


def short_term_amplitude(frame: WindowedFrame) -> float:
    return float(np.sum(np.abs(frame.samples)))


def short_term_zcr(frame: WindowedFrame) -> float:
    """Count of sign alternations between neighbouring samples."""
    if frame.samples.size < 2:
        raise FrameTooShortError("zero-crossing rate needs at least 2 samples")
    flips = np.abs(np.diff(_signs(frame.samples)))
    return float(int(flips.sum(dtype=np.int64)) // 2)


def _windowed_segments(
    buffer: AudioBuffer, config: FramingConfig
) -> tuple[np.ndarray, int, int]:
    """Windowed analysis segments as a ((count * nseg), window_len) matrix.

    With the default config each frame is one segment. With a fixed
    ``window_len`` each frame is split into ``nseg`` consecutive segments,
    the last one zero-padded to the window length.
    """
    rate = buffer.sample_rate
    frame_len = config.frame_samples(rate)
    hop = config.hop_samples(rate)
    window_len = config.window_samples(rate)
    rows = frame_rows(buffer.samples.astype(np.int64), frame_len, hop)
    count = rows.shape[0]
    nseg = -(-frame_len // window_len)
    if nseg * window_len > frame_len:
        rows = np.pad(rows, ((0, 0), (0, nseg * window_len - frame_len)))
    segments = rows.reshape(count * nseg, window_len).astype(np.float64)
    segments *= hamming_coefficients(window_len)
    return segments, count, nseg


def _per_frame_arrays(
    buffer: AudioBuffer, config: FramingConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    segments, count, nseg = _windowed_segments(buffer, config)
    energy = np.sum(segments * segments, axis=1)
    amplitude = np.sum(np.abs(segments), axis=1)
    flips = np.abs(np.diff(_signs(segments), axis=1))
    crossings = flips.sum(axis=1, dtype=np.int64) // 2
    # collapse the segments of each frame back into per-frame values
    energy = energy.reshape(count, nseg).sum(axis=1)
    amplitude = amplitude.reshape(count, nseg).sum(axis=1)
    crossings = crossings.reshape(count, nseg).sum(axis=1).astype(np.float64)
    return energy, amplitude, crossings, count


def frame_feature_track(
    buffer: AudioBuffer, config: FramingConfig = DEFAULT_FRAMING
) -> list[FrameFeatures]:
    """Per-frame feature values in frame order."""
    energy, amplitude, crossings, count = _per_frame_arrays(buffer, config)
    return [
        FrameFeatures(float(energy[i]), float(amplitude[i]), float(crossings[i]))
        for i in range(count)
    ]


def extract_file_features(
    buffer: AudioBuffer, config: FramingConfig = DEFAULT_FRAMING
) -> RawFeatures:
    """File-level feature sums over all frames of ``buffer``."""
    energy, amplitude, crossings, count = _per_frame_arrays(buffer, config)
    return RawFeatures(
        energy=float(np.sum(energy)),
        amplitude=float(np.sum(amplitude)),
        crossings=float(np.sum(crossings)),
        frame_count=count,
    )
