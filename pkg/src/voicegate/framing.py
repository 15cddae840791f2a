"""Short-time framing and Hamming windowing.

A signal is cut into overlapping frames: one frame starts at every hop
boundary below the signal length, so every sample is covered and the count is
ceil(len / hop). Trailing frames are zero-padded to full length. Windowing
multiplies a frame elementwise by Hamming coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .wavio import AudioBuffer


class WindowLengthError(ValueError):
    """A window needs at least two points."""


class LengthMismatchError(ValueError):
    """Frame and window coefficient lengths differ."""


@dataclass(frozen=True)
class FramingConfig:
    """Frame/hop geometry in milliseconds plus an optional fixed window size.

    With ``window_len=None`` one window spans the whole frame. With an
    explicit ``window_len`` each frame is analyzed in consecutive sub-segments
    of that many samples (the last one zero-padded), which is how 5 kHz
    material with a fixed 50-sample window is handled.
    """

    frame_ms: float = 20.0
    hop_ms: float = 10.0
    window_len: int | None = None

    def __post_init__(self) -> None:
        if not self.frame_ms > 0:
            raise ValueError("frame_ms must be positive")
        if not 0 < self.hop_ms <= self.frame_ms:
            raise ValueError("hop_ms must be in (0, frame_ms]")
        if self.window_len is not None and self.window_len < 2:
            raise WindowLengthError("window_len must be at least 2 samples")

    def frame_samples(self, rate: int) -> int:
        return max(1, round(self.frame_ms * rate / 1000.0))

    def hop_samples(self, rate: int) -> int:
        return max(1, round(self.hop_ms * rate / 1000.0))

    def window_samples(self, rate: int) -> int:
        if self.window_len is not None:
            return self.window_len
        return self.frame_samples(rate)


DEFAULT_FRAMING = FramingConfig()
# 50 samples is half a 20 ms frame at 5 kHz.
SPLIT_WINDOW_FRAMING = FramingConfig(window_len=50)


@dataclass(frozen=True, eq=False)
class Frame:
    """One frame of integer samples plus its position in the frame sequence."""

    samples: np.ndarray
    index: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.samples, other.samples)


@dataclass(frozen=True, eq=False)
class WindowedFrame:
    """A frame after elementwise multiplication with window coefficients."""

    samples: np.ndarray
    index: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WindowedFrame):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.samples, other.samples)


@lru_cache(maxsize=64)
def hamming_coefficients(length: int) -> np.ndarray:
    """Hamming window w(n) = 0.54 - 0.46 cos(2 pi n / (N - 1)) for n in [0, N).

    Evaluated as (27 - 23 cos(...)) / 50: same value, but the scaled integer
    form keeps the endpoints at exactly 0.08 and the odd-length midpoint at
    exactly 1.0 in float64.
    """
    if length < 2:
        raise WindowLengthError(f"window length {length} < 2")
    idx = np.arange(length, dtype=np.float64)
    coeffs = (27.0 - 23.0 * np.cos(2.0 * np.pi * idx / (length - 1))) / 50.0
    coeffs.flags.writeable = False
    return coeffs


def frame_count(n_samples: int, hop: int) -> int:
    """Number of frames for a signal of ``n_samples`` with the given hop."""
    if n_samples < 1:
        raise ValueError("need at least one sample")
    if hop < 1:
        raise ValueError("hop must be positive")
    return -(-n_samples // hop)


def frame_rows(samples: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    """All frames as a (count, frame_len) int64 matrix, zero-padded at the end."""
    if frame_len < 1:
        raise ValueError("frame length must be positive")
    count = frame_count(samples.size, hop)
    padded = np.zeros((count - 1) * hop + frame_len, dtype=np.int64)
    padded[: samples.size] = samples
    view = np.lib.stride_tricks.sliding_window_view(padded, frame_len)[::hop]
    rows = np.ascontiguousarray(view)
    rows.flags.writeable = False
    return rows


def frame_signal(buffer: AudioBuffer, config: FramingConfig = DEFAULT_FRAMING) -> list[Frame]:
    """Cut a buffer into frames according to ``config``."""
    rate = buffer.sample_rate
    rows = frame_rows(
        buffer.samples.astype(np.int64),
        config.frame_samples(rate),
        config.hop_samples(rate),
    )
    return [Frame(rows[i], i) for i in range(rows.shape[0])]


def apply_window(frame: Frame, coefficients: np.ndarray) -> WindowedFrame:
    """Multiply a frame by window coefficients of the same length."""
    if frame.samples.size != coefficients.size:
        raise LengthMismatchError(
            f"frame has {frame.samples.size} samples, window has {coefficients.size}"
        )
    product = frame.samples.astype(np.float64) * coefficients
    product.flags.writeable = False
    return WindowedFrame(product, frame.index)
