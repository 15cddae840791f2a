"""Weighted-threshold classifier over normalized feature triples.

Raw feature sums are min-max normalized against training statistics, clamped
to [0, 1], combined into a single score

    V = energy_weight * E + amplitude_weight * M + crossing_weight * Z

with non-negative weights summing to one, and compared against a threshold:
strictly above means bot, the boundary and below mean human.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources

from .features import RawFeatures

_WEIGHT_SUM_TOL = 1e-9

MODEL_FORMAT_VERSION = 1


class Verdict(enum.Enum):
    HUMAN = "human"
    BOT = "bot"


class EmptyDatasetError(ValueError):
    """Normalization stats need at least one sample."""


class ModelFormatError(ValueError):
    """The model file is missing fields or has the wrong version."""


@dataclass(frozen=True)
class NormalizationStats:
    """Per-indicator min/max observed on a training corpus."""

    energy_min: float
    energy_max: float
    amplitude_min: float
    amplitude_max: float
    crossing_min: float
    crossing_max: float

    def __post_init__(self) -> None:
        for name in ("energy", "amplitude", "crossing"):
            lo = getattr(self, f"{name}_min")
            hi = getattr(self, f"{name}_max")
            if not (lo <= hi):
                raise ValueError(f"{name}: min {lo} exceeds max {hi}")


@dataclass(frozen=True)
class NormalizedFeatures:
    """Feature triple scaled into the unit cube."""

    energy: float
    amplitude: float
    crossings: float

    def __post_init__(self) -> None:
        for name in ("energy", "amplitude", "crossings"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")


@dataclass(frozen=True)
class ClassifierParams:
    """Score weights plus the human/bot decision threshold."""

    energy_weight: float
    amplitude_weight: float
    crossing_weight: float
    threshold: float

    def __post_init__(self) -> None:
        weights = (self.energy_weight, self.amplitude_weight, self.crossing_weight)
        if any(w < 0 for w in weights):
            raise ValueError("weights must be non-negative")
        if abs(sum(weights) - 1.0) > _WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {sum(weights)!r}, expected 1")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold {self.threshold} outside [0, 1]")


# Default operating point: nearly all weight on average amplitude with a low
# threshold. See the calibration experiments under scripts/.
DEFAULT_PARAMS = ClassifierParams(
    energy_weight=0.01,
    amplitude_weight=0.98,
    crossing_weight=0.01,
    threshold=0.01,
)


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    score: float
    features: NormalizedFeatures | None = None


def fit_normalizer(dataset: list[RawFeatures]) -> NormalizationStats:
    """Component-wise min/max of a training set."""
    if not dataset:
        raise EmptyDatasetError("cannot fit normalization stats on an empty dataset")
    return NormalizationStats(
        energy_min=min(f.energy for f in dataset),
        energy_max=max(f.energy for f in dataset),
        amplitude_min=min(f.amplitude for f in dataset),
        amplitude_max=max(f.amplitude for f in dataset),
        crossing_min=min(f.crossings for f in dataset),
        crossing_max=max(f.crossings for f in dataset),
    )


def _norm_component(value: float, lo: float, hi: float) -> float:
    # degenerate training range pins the component mid-scale
    if hi == lo:
        return 0.5
    scaled = (value - lo) / (hi - lo)
    if scaled < 0.0:
        return 0.0
    if scaled > 1.0:
        return 1.0
    return scaled


def normalize(raw: RawFeatures, stats: NormalizationStats) -> NormalizedFeatures:
    """Min-max scale a raw triple, clamping anything outside the fitted range."""
    return NormalizedFeatures(
        energy=_norm_component(raw.energy, stats.energy_min, stats.energy_max),
        amplitude=_norm_component(raw.amplitude, stats.amplitude_min, stats.amplitude_max),
        crossings=_norm_component(raw.crossings, stats.crossing_min, stats.crossing_max),
    )


def score(features: NormalizedFeatures, params: ClassifierParams) -> float:
    """Convex combination of the normalized features."""
    return (
        params.energy_weight * features.energy
        + params.amplitude_weight * features.amplitude
        + params.crossing_weight * features.crossings
    )


def decide(
    value: float, params: ClassifierParams, features: NormalizedFeatures | None = None
) -> Decision:
    """Bot strictly above the threshold, human at or below it."""
    verdict = Verdict.BOT if value > params.threshold else Verdict.HUMAN
    return Decision(verdict=verdict, score=value, features=features)


def classify(raw: RawFeatures, model: "Model") -> Decision:
    """Normalize, score, and decide in one step."""
    ftr = normalize(raw, model.stats)
    return decide(score(ftr, model.params), model.params, ftr)


@dataclass(frozen=True)
class Model:
    """Everything needed to classify a recording: stats plus parameters."""

    stats: NormalizationStats
    params: ClassifierParams


_MODEL_FIELDS = (
    "energy_min",
    "energy_max",
    "amplitude_min",
    "amplitude_max",
    "crossing_min",
    "crossing_max",
    "energy_weight",
    "amplitude_weight",
    "crossing_weight",
    "threshold",
)


def dump_model(model: Model) -> str:
    """Serialize a model to deterministic JSON (fixed key order)."""
    payload: dict[str, float | int] = {"format_version": MODEL_FORMAT_VERSION}
    for name in _MODEL_FIELDS[:6]:
        payload[name] = getattr(model.stats, name)
    for name in _MODEL_FIELDS[6:]:
        payload[name] = getattr(model.params, name)
    return json.dumps(payload, indent=2) + "\n"


def load_model(text: str) -> Model:
    """Parse a model file, rejecting unknown versions and missing fields."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ModelFormatError("model file must hold a JSON object")
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format_version {version!r}")
    missing = [name for name in _MODEL_FIELDS if name not in payload]
    if missing:
        raise ModelFormatError(f"model file missing fields: {', '.join(missing)}")
    values = {}
    for name in _MODEL_FIELDS:
        v = payload[name]
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ModelFormatError(f"model field {name} must be a number")
        values[name] = float(v)
    stats = NormalizationStats(**{k: values[k] for k in _MODEL_FIELDS[:6]})
    params = ClassifierParams(**{k: values[k] for k in _MODEL_FIELDS[6:]})
    return Model(stats=stats, params=params)


def load_default_model() -> Model:
    """The model shipped with the package (fitted on the built-in fixtures)."""
    text = resources.files("voicegate.data").joinpath("default_model.json").read_text("utf-8")
    return load_model(text)
