"""Deterministic synthetic evaluation corpora.

Two waveform families bracket the behaviour the classifier separates:

* natural-like: bursts of jittered, noisy harmonics at moderate amplitude,
  separated by near-silent pauses (low-level noise keeps the pauses busy
  with sign flips, like a real room floor);
* synthetic-like: one continuous, regular harmonic tone at high amplitude,
  no pauses.

Every sample is a pure function of (seed, family, index), so corpora are
reproducible byte for byte.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .calibration import Label
from .wavio import AudioBuffer, write_wav

_NATURAL_FAMILY = 0
_SYNTHETIC_FAMILY = 1

_DURATION_RANGE = (2.2, 3.2)
_NATURAL_AMP_RANGE = (2000.0, 9000.0)
_SYNTHETIC_AMP_RANGE = (18000.0, 26000.0)
_HARMONIC_PROFILE = np.array([1.0, 0.55, 0.35, 0.22, 0.12])


def _harmonics(
    rng: np.random.Generator, n: int, rate: int, f0: float, jitter: float
) -> np.ndarray:
    """Sum of harmonics with random phases, peak-normalized to 1."""
    t = np.arange(n) / rate
    if jitter > 0:
        # slow random pitch drift, like a voice that cannot hold a note
        drift = np.cumsum(rng.standard_normal(n)) / rate
        t = t + jitter * drift / max(1.0, float(np.abs(drift).max() or 1.0))
    wave = np.zeros(n)
    for h, amp in enumerate(_HARMONIC_PROFILE, start=1):
        wave += amp * np.sin(2.0 * np.pi * f0 * h * t + rng.uniform(0, 2.0 * np.pi))
    peak = float(np.abs(wave).max())
    return wave / peak if peak > 0 else wave


def _ramp_envelope(n: int, rate: int, ramp_s: float = 0.015) -> np.ndarray:
    ramp = max(1, min(int(ramp_s * rate), n // 2))
    env = np.ones(n)
    env[:ramp] = np.linspace(0.0, 1.0, ramp, endpoint=False)
    env[n - ramp :] = np.linspace(1.0, 0.0, ramp)
    return env


def _to_buffer(wave: np.ndarray, rate: int) -> AudioBuffer:
    clipped = np.clip(np.round(wave), -32767, 32767).astype(np.int16)
    return AudioBuffer(clipped, rate)


def natural_like_buffer(rng: np.random.Generator, rate: int = 16000) -> AudioBuffer:
    """Bursty, pause-laden recording at moderate amplitude."""
    n = round(rng.uniform(*_DURATION_RANGE) * rate)
    out = np.zeros(n)
    pos = 0
    while pos < n:
        burst_len = min(round(rng.uniform(0.15, 0.5) * rate), n - pos)
        if burst_len > 8:
            amp = rng.uniform(*_NATURAL_AMP_RANGE)
            tone = _harmonics(rng, burst_len, rate, rng.uniform(90.0, 220.0), jitter=0.004)
            noise = rng.standard_normal(burst_len)
            noise /= max(1.0, float(np.abs(noise).max()))
            burst = amp * (0.75 * tone + 0.25 * noise) * _ramp_envelope(burst_len, rate)
            out[pos : pos + burst_len] = burst
        pos += burst_len
        pause_len = min(round(rng.uniform(0.05, 0.3) * rate), n - pos)
        if pause_len > 0:
            out[pos : pos + pause_len] = rng.uniform(40.0, 120.0) * rng.standard_normal(
                pause_len
            )
        pos += pause_len
    return _to_buffer(out, rate)


def synthetic_like_buffer(rng: np.random.Generator, rate: int = 16000) -> AudioBuffer:
    """Continuous, regular, high-amplitude harmonic tone."""
    n = round(rng.uniform(*_DURATION_RANGE) * rate)
    amp = rng.uniform(*_SYNTHETIC_AMP_RANGE)
    wave = amp * _harmonics(rng, n, rate, rng.uniform(140.0, 180.0), jitter=0.0)
    t = np.arange(n) / rate
    # barely-there amplitude ripple so the tone is not mathematically constant
    wave *= 1.0 + 0.03 * np.sin(2.0 * np.pi * 2.5 * t)
    return _to_buffer(wave, rate)


def _family_rng(seed: int, family: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, family, index)))


def fixture_buffers(
    seed: int = 42, per_family: int = 50, rate: int = 16000
) -> list[tuple[Label, str, AudioBuffer]]:
    """The full fixture corpus in memory: (label, file stem, buffer) triples."""
    if per_family < 1:
        raise ValueError("per_family must be at least 1")
    out = []
    for index in range(per_family):
        rng = _family_rng(seed, _NATURAL_FAMILY, index)
        out.append((Label.NATURAL, f"natural_{index:03d}", natural_like_buffer(rng, rate)))
    for index in range(per_family):
        rng = _family_rng(seed, _SYNTHETIC_FAMILY, index)
        out.append(
            (Label.SYNTHESIZED, f"synthetic_{index:03d}", synthetic_like_buffer(rng, rate))
        )
    return out


def generate_corpus(
    out_dir: Path, *, seed: int = 42, per_family: int = 50, rate: int = 16000
) -> Path:
    """Write the fixture corpus as WAV files plus a manifest; returns its path."""
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = out_dir / "manifest.csv"
    with manifest_path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        for label, stem, buffer in fixture_buffers(seed, per_family, rate):
            wav_name = f"{stem}.wav"
            (out_dir / wav_name).write_bytes(write_wav(buffer))
            writer.writerow([label.value, wav_name])
    return manifest_path
