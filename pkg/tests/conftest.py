import sys
from pathlib import Path

import numpy as np
import pytest

from voicegate import AudioBuffer

sys.path.insert(0, str(Path(__file__).parent))

# criterion label per acceptance test, printed as a summary block after a run
ACCEPTANCE_LABELS = {
    "test_window_correctness": "window correctness (exact endpoints/midpoint, oracle, symmetry)",
    "test_feature_oracle_equivalence": "feature oracle equivalence (100 buffers, 1e-9 rel, Z0 exact)",
    "test_scaling_laws": "scaling laws (E0 x k^2, M0 x k exact, Z0 invariant)",
    "test_classifier_algebra": "classifier algebra (convexity, boundary rule, shipped defaults)",
    "test_calibration_oracle": "calibration oracle (grid == brute force, triple count)",
    "test_acceptance_rule_analogue": "acceptance-rule analogue (calibrate seed 42, evaluate seed 43)",
    "test_wav_round_trip_and_fuzz": "WAV round-trip + truncation fuzz",
    "test_service_end_to_end": "service end-to-end (bit-identical verdict, reuse, expiry)",
    "test_performance_sanity": "performance sanity (10 s @ 16 kHz, 50 ms target)",
}

_acceptance_results: dict[str, str] = {}

# free-form notes tests may add to the acceptance summary (e.g. timings)
ACCEPTANCE_NOTES: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in report.nodeid and name in ACCEPTANCE_LABELS:
        _acceptance_results[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, label in ACCEPTANCE_LABELS.items():
        outcome = _acceptance_results.get(name, "NOT RUN")
        note = ACCEPTANCE_NOTES.get(name)
        suffix = f" [{note}]" if note else ""
        terminalreporter.write_line(f"{outcome:7s} {label}{suffix}")


@pytest.fixture
def tone_buffer():
    """Factory for deterministic sine-ish test buffers."""

    def make(
        seconds: float = 2.0, rate: int = 16000, freq: float = 220.0, amp: int = 12000
    ) -> AudioBuffer:
        t = np.arange(round(seconds * rate)) / rate
        wave = amp * np.sin(2.0 * np.pi * freq * t)
        return AudioBuffer(np.round(wave).astype(np.int16), rate)

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
