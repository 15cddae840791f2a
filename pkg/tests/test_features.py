import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voicegate import (
    AudioBuffer,
    FramingConfig,
    FrameTooShortError,
    RawFeatures,
    WindowedFrame,
    extract_file_features,
    frame_feature_track,
    hamming_coefficients,
    short_term_amplitude,
    short_term_energy,
    short_term_zcr,
)

from oracles import naive_file_features


def windowed(values: list[float]) -> WindowedFrame:
    return WindowedFrame(np.array(values, dtype=np.float64), 0)


class TestPerFrameOps:
    def test_energy_small_case(self):
        assert short_term_energy(windowed([3.0, -4.0])) == 25.0

    def test_amplitude_small_case(self):
        assert short_term_amplitude(windowed([3.0, -4.0])) == 7.0

    def test_energy_zeros(self):
        assert short_term_energy(windowed([0.0] * 10)) == 0.0

    def test_zcr_alternating(self):
        for n in (2, 5, 17):
            values = [(-1.0) ** i for i in range(n)]
            assert short_term_zcr(windowed(values)) == n - 1

    def test_zcr_constant_sign(self):
        assert short_term_zcr(windowed([1.0, 2.0, 3.0])) == 0.0
        assert short_term_zcr(windowed([-1.0, -2.0, -3.0])) == 0.0

    def test_zcr_zero_counts_as_positive(self):
        # sgn(0) = +1, so 0 -> -1 is one crossing, 0 -> 1 is none
        assert short_term_zcr(windowed([0.0, -1.0])) == 1.0
        assert short_term_zcr(windowed([0.0, 1.0])) == 0.0
        assert short_term_zcr(windowed([-1.0, 0.0, -1.0])) == 2.0

    def test_zcr_needs_two_samples(self):
        with pytest.raises(FrameTooShortError):
            short_term_zcr(windowed([1.0]))

    @given(values=st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=200))
    @settings(max_examples=80)
    def test_zcr_integer_valued_and_bounded(self, values):
        z = short_term_zcr(windowed(values))
        assert z == int(z)
        assert 0 <= z <= len(values) - 1

    @given(values=st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200))
    @settings(max_examples=80)
    def test_energy_amplitude_non_negative(self, values):
        frame = windowed(values)
        assert short_term_energy(frame) >= 0.0
        assert short_term_amplitude(frame) >= 0.0


class TestRawFeatures:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            RawFeatures(-1.0, 0.0, 0.0, 1)

    def test_rejects_zero_frames(self):
        with pytest.raises(ValueError):
            RawFeatures(0.0, 0.0, 0.0, 0)


def random_buffer(rng, n: int, rate: int) -> AudioBuffer:
    return AudioBuffer(rng.integers(-32768, 32768, size=n, dtype=np.int64), rate)


class TestExtract:
    def test_zero_signal(self):
        buffer = AudioBuffer(np.zeros(1000, dtype=np.int16), 16000)
        raw = extract_file_features(buffer)
        assert raw.energy == 0.0
        assert raw.amplitude == 0.0
        assert raw.crossings == 0.0
        assert raw.frame_count == 7

    def test_nonzero_signal_has_positive_amplitude(self):
        buffer = AudioBuffer(np.array([0, 0, 5, 0], dtype=np.int16), 16000)
        assert extract_file_features(buffer).amplitude > 0.0

    def test_matches_naive_oracle(self, rng):
        for _ in range(30):
            rate = int(rng.choice([5000, 16000]))
            n = int(rng.integers(1, 20000))
            buffer = random_buffer(rng, n, rate)
            raw = extract_file_features(buffer)
            e, m, z, count = naive_file_features(buffer.samples.tolist(), rate)
            assert raw.frame_count == count
            assert raw.crossings == z
            assert raw.energy == pytest.approx(e, rel=1e-9)
            assert raw.amplitude == pytest.approx(m, rel=1e-9)

    def test_split_window_matches_naive_oracle(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 4000))
            buffer = random_buffer(rng, n, 5000)
            config = FramingConfig(window_len=50)
            raw = extract_file_features(buffer, config)
            e, m, z, count = naive_file_features(
                buffer.samples.tolist(), 5000, window_len=50
            )
            assert raw.frame_count == count
            assert raw.crossings == z
            assert raw.energy == pytest.approx(e, rel=1e-9)
            assert raw.amplitude == pytest.approx(m, rel=1e-9)

    def test_split_window_not_dividing_frame(self, rng):
        # 320-sample frames in 50-sample windows: 7 segments, last one padded
        buffer = random_buffer(rng, 1000, 16000)
        config = FramingConfig(window_len=50)
        raw = extract_file_features(buffer, config)
        e, m, z, count = naive_file_features(
            buffer.samples.tolist(), 16000, window_len=50
        )
        assert raw.crossings == z
        assert raw.energy == pytest.approx(e, rel=1e-9)
        assert raw.amplitude == pytest.approx(m, rel=1e-9)
        assert raw.frame_count == count

    def test_file_level_equals_sum_of_track(self, rng):
        buffer = random_buffer(rng, 5000, 16000)
        raw = extract_file_features(buffer)
        track = frame_feature_track(buffer)
        assert len(track) == raw.frame_count
        assert raw.energy == float(np.sum(np.array([f.energy for f in track])))
        assert raw.amplitude == float(np.sum(np.array([f.amplitude for f in track])))
        assert raw.crossings == float(np.sum(np.array([f.crossings for f in track])))

    def test_square_wave_closed_form(self):
        # full-scale square wave at 16 kHz for 1 s: every sample is +/-32767,
        # so E0 is 32767^2 times the sum of squared window values over all
        # frame positions (the last frame only covers its first 160 slots)
        period = 40
        wave = np.where(np.arange(16000) % period < period // 2, 32767, -32767)
        buffer = AudioBuffer(wave.astype(np.int16), 16000)
        raw = extract_file_features(buffer)
        coeffs = hamming_coefficients(320)
        w2 = np.sum(coeffs * coeffs)
        w2_half = np.sum(coeffs[:160] * coeffs[:160])
        expected = 32767.0**2 * (99 * w2 + w2_half)
        assert raw.frame_count == 100
        assert raw.energy == pytest.approx(float(expected), rel=1e-6)

    def test_deterministic(self, rng):
        buffer = random_buffer(rng, 3000, 16000)
        assert extract_file_features(buffer) == extract_file_features(buffer)

    @given(n=st.integers(1, 2000))
    @settings(max_examples=40)
    def test_crossings_integral(self, n):
        samples = (np.arange(n, dtype=np.int64) * 7919) % 1001 - 500
        raw = extract_file_features(AudioBuffer(samples.astype(np.int16), 16000))
        assert raw.crossings == int(raw.crossings)

    def test_gain_scaling_float_path(self, rng):
        # production floats track the exact scaling law to near machine eps;
        # crossings are exactly invariant
        base = rng.integers(-3000, 3000, size=4000, dtype=np.int64)
        raw1 = extract_file_features(AudioBuffer(base, 16000))
        for k in (2, 3, 10):
            rawk = extract_file_features(AudioBuffer(base * k, 16000))
            assert rawk.crossings == raw1.crossings
            assert rawk.energy == pytest.approx(k * k * raw1.energy, rel=1e-12)
            assert rawk.amplitude == pytest.approx(k * raw1.amplitude, rel=1e-12)
