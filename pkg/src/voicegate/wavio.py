"""Reading and writing uncompressed 16-bit PCM WAV files.

Only the canonical RIFF/WAVE layout is handled: a RIFF header, one ``fmt ``
chunk describing linear PCM, and one ``data`` chunk with the samples. Unknown
chunks between them are skipped. Anything outside that shape raises a
:class:`WavError` subclass instead of crashing or returning garbage, so
callers can turn parse failures into precise error responses.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

# Sample rates the toolkit accepts. 5 kHz is unusual but kept for legacy
# telephone-bandwidth material; the rest are the common capture rates.
ACCEPTED_RATES = frozenset({5000, 8000, 11025, 16000, 22050, 44100, 48000})

_PCM_TAG = 1
_BITS_PER_SAMPLE = 16


class WavError(ValueError):
    """Base class for every WAV parsing or validation failure."""


class MalformedContainerError(WavError):
    """The byte stream is not a structurally valid RIFF/WAVE file."""


class UnsupportedFormatError(WavError):
    """The file is valid RIFF but not 16-bit linear PCM."""


class UnsupportedRateError(WavError):
    """The sample rate is not one of ACCEPTED_RATES."""


class EmptyAudioError(WavError):
    """The data chunk contains no samples."""


@dataclass(frozen=True, eq=False)
class AudioBuffer:
    """Mono 16-bit audio held as an immutable numpy array.

    ``samples`` is coerced to a read-only ``int16`` array at construction;
    out-of-range values, empty input, or an unaccepted rate are rejected.
    """

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples)
        if arr.ndim != 1:
            raise ValueError(f"samples must be one-dimensional, got shape {arr.shape}")
        if arr.size == 0:
            raise EmptyAudioError("a buffer needs at least one sample")
        if arr.dtype != np.int16:
            wide = arr.astype(np.int64)
            if wide.min() < -32768 or wide.max() > 32767:
                raise ValueError("samples outside the 16-bit signed range")
            arr = wide.astype(np.int16)
        else:
            arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        if self.sample_rate not in ACCEPTED_RATES:
            raise UnsupportedRateError(
                f"sample rate {self.sample_rate} not in {sorted(ACCEPTED_RATES)}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AudioBuffer):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(
            self.samples, other.samples
        )

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        """Length in seconds."""
        return self.samples.size / self.sample_rate


def _downmix(raw: np.ndarray, channels: int) -> np.ndarray:
    """Average interleaved channels, rounding halves away from zero."""
    frames = raw.reshape(-1, channels)
    mean = frames.sum(axis=1, dtype=np.int64) / channels
    # channel sums fit in int32 so the float64 mean is exact up to the .5 tie
    return np.trunc(mean + np.copysign(0.5, mean)).astype(np.int16)


def parse_wav(data: bytes) -> AudioBuffer:
    """Parse WAV bytes into an :class:`AudioBuffer`.

    Multi-channel input is downmixed to mono by the rounded channel mean.
    Raises a :class:`WavError` subclass on any structural or format problem;
    no input may crash the parser with anything else.
    """
    if len(data) < 12:
        raise MalformedContainerError("file shorter than a RIFF header")
    if data[0:4] != b"RIFF":
        raise MalformedContainerError("missing RIFF magic")
    (riff_size,) = struct.unpack_from("<I", data, 4)
    if data[8:12] != b"WAVE":
        raise MalformedContainerError("missing WAVE form type")
    end = 8 + riff_size
    if riff_size < 4:
        raise MalformedContainerError("declared RIFF size too small for a WAVE form")
    if end > len(data):
        raise MalformedContainerError("declared RIFF size overruns the file")

    fmt: tuple[int, int, int, int, int, int] | None = None
    pos = 12
    while pos < end:
        if pos + 8 > end:
            raise MalformedContainerError("truncated chunk header")
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = pos + 8
        if body + chunk_size > end:
            raise MalformedContainerError(
                f"chunk {chunk_id!r} overruns the container"
            )
        if chunk_id == b"fmt ":
            if fmt is not None:
                raise MalformedContainerError("duplicate fmt chunk")
            if chunk_size < 16:
                raise MalformedContainerError("fmt chunk shorter than 16 bytes")
            fmt = struct.unpack_from("<HHIIHH", data, body)
        elif chunk_id == b"data":
            if fmt is None:
                raise MalformedContainerError("data chunk before fmt chunk")
            return _decode_data(data, body, chunk_size, fmt)
        # unknown chunk: skip body plus the RIFF pad byte for odd sizes
        pos = body + chunk_size + (chunk_size & 1)
    if fmt is None:
        raise MalformedContainerError("no fmt chunk")
    raise MalformedContainerError("no data chunk")


def _decode_data(
    data: bytes, body: int, size: int, fmt: tuple[int, int, int, int, int, int]
) -> AudioBuffer:
    format_tag, channels, rate, _byte_rate, _block_align, bits = fmt
    if format_tag != _PCM_TAG:
        raise UnsupportedFormatError(f"format tag {format_tag}, linear PCM required")
    if bits != _BITS_PER_SAMPLE:
        raise UnsupportedFormatError(f"{bits}-bit samples, 16-bit required")
    if channels < 1:
        raise UnsupportedFormatError("zero channels")
    if rate not in ACCEPTED_RATES:
        raise UnsupportedRateError(f"sample rate {rate} not in {sorted(ACCEPTED_RATES)}")
    if size == 0:
        raise EmptyAudioError("data chunk holds no samples")
    if size % (2 * channels) != 0:
        raise MalformedContainerError("data size is not a whole number of sample frames")
    raw = np.frombuffer(data, dtype="<i2", count=size // 2, offset=body)
    mono = raw.astype(np.int16) if channels == 1 else _downmix(raw, channels)
    return AudioBuffer(mono, rate)


def write_wav(buffer: AudioBuffer) -> bytes:
    """Serialize a buffer to canonical mono PCM bytes (44-byte header)."""
    payload = buffer.samples.astype("<i2").tobytes()
    data_size = len(payload)
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + data_size,
        b"WAVE",
        b"fmt ",
        16,
        _PCM_TAG,
        1,
        buffer.sample_rate,
        buffer.sample_rate * 2,
        2,
        _BITS_PER_SAMPLE,
        b"data",
        data_size,
    )
    return header + payload
