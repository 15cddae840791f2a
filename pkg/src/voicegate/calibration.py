"""Calibration: rate evaluation, single-indicator sweeps, and grid search.

A labeled corpus (natural vs synthesized recordings) is reduced to two
quality rates for any candidate operating point:

    misjudgment rate  = fraction of natural samples classified bot
    recognition rate  = fraction of synthesized samples classified bot

The grid search walks every weight triple on the a+b+c=1 simplex (exact
rational steps, lexicographic order) crossed with a threshold ladder, keeps
the combos passing the acceptance rule (misjudgment < 0.10, recognition >
0.90), and picks the best by: recognition desc, misjudgment asc, threshold
asc, then lexicographic weights.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .classifier import (
    ClassifierParams,
    NormalizationStats,
    fit_normalizer,
    normalize,
    score,
)
from .features import RawFeatures, extract_file_features
from .framing import DEFAULT_FRAMING, FramingConfig
from .wavio import parse_wav

MAX_MISJUDGMENT = 0.10
MIN_RECOGNITION = 0.90


class Label(enum.Enum):
    NATURAL = "natural"
    SYNTHESIZED = "synthesized"


class Indicator(enum.Enum):
    ENERGY = "energy"
    AMPLITUDE = "amplitude"
    CROSSINGS = "crossings"


class MissingClassError(ValueError):
    """The corpus lacks natural or synthesized samples."""


class ManifestError(ValueError):
    """A corpus manifest line could not be parsed."""


class NoAcceptableComboError(Exception):
    """No grid point satisfied the acceptance rule. Carries the full report."""

    def __init__(self, report: "CalibrationReport") -> None:
        super().__init__(
            "no weight/threshold combination reached misjudgment < "
            f"{MAX_MISJUDGMENT} and recognition > {MIN_RECOGNITION}"
        )
        self.report = report


@dataclass(frozen=True)
class LabeledSample:
    features: RawFeatures
    label: Label
    source_id: str


@dataclass(frozen=True)
class RatePair:
    misjudgment_rate: float
    recognition_rate: float

    def __post_init__(self) -> None:
        for v in (self.misjudgment_rate, self.recognition_rate):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"rate {v} outside [0, 1]")


class ParamResult(NamedTuple):
    params: ClassifierParams
    rates: RatePair


def thresholds_from_step(step: Fraction | int | float | str) -> tuple[float, ...]:
    """Score thresholds covering [0, 1] inclusive at the given exact step."""
    step = _as_step(step)
    q = int(Fraction(1) / step)
    return tuple(float(Fraction(i, q)) for i in range(q + 1))


def default_thresholds() -> tuple[float, ...]:
    """201 score thresholds from 0 to 1 in steps of 0.005."""
    return thresholds_from_step(Fraction(1, 200))


def _as_step(value: Fraction | int | float | str) -> Fraction:
    # floats go through str() so 0.01 means 1/100, not its binary neighbour
    step = Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    if not 0 < step <= 1:
        raise ValueError(f"weight step {step} outside (0, 1]")
    if (Fraction(1) / step).denominator != 1:
        raise ValueError(f"weight step {step} does not divide 1 evenly")
    return step


@dataclass(frozen=True)
class GridSpec:
    """Weight simplex resolution and score-threshold ladder for grid search."""

    weight_step: Fraction = Fraction(1, 100)
    thresholds: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight_step", _as_step(self.weight_step))
        thresholds = tuple(float(t) for t in self.thresholds) or default_thresholds()
        if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
            raise ValueError("thresholds must be strictly ascending")
        object.__setattr__(self, "thresholds", thresholds)

    @property
    def triple_count(self) -> int:
        q = int(Fraction(1) / self.weight_step)
        return (q + 1) * (q + 2) // 2


@dataclass(frozen=True)
class CalibrationReport:
    n_natural: int
    n_synthesized: int
    grid: GridSpec
    sweep_tables: Mapping[Indicator, tuple[tuple[float, RatePair], ...]]
    accepted: tuple[ParamResult, ...]
    best: ParamResult | None


def _split_by_label(corpus: Sequence[LabeledSample]) -> tuple[list[LabeledSample], list[LabeledSample]]:
    natural = [s for s in corpus if s.label is Label.NATURAL]
    synthesized = [s for s in corpus if s.label is Label.SYNTHESIZED]
    if not natural or not synthesized:
        raise MissingClassError(
            f"corpus has {len(natural)} natural and {len(synthesized)} synthesized "
            "samples; both classes are required"
        )
    return natural, synthesized


def evaluate(
    params: ClassifierParams,
    stats: NormalizationStats,
    corpus: Sequence[LabeledSample],
) -> RatePair:
    """Misjudgment/recognition rates of one operating point on a corpus."""
    natural, synthesized = _split_by_label(corpus)

    def bot_fraction(samples: list[LabeledSample]) -> float:
        hits = 0
        for sample in samples:
            if score(normalize(sample.features, stats), params) > params.threshold:
                hits += 1
        return hits / len(samples)

    return RatePair(bot_fraction(natural), bot_fraction(synthesized))


def sweep_single_indicator(
    indicator: Indicator,
    thresholds: Sequence[float] | None,
    corpus: Sequence[LabeledSample],
) -> tuple[tuple[float, RatePair], ...]:
    """Rates when classifying on one raw indicator alone, per threshold.

    ``thresholds`` are in raw feature units; ``None`` sweeps every distinct
    observed value of the corpus.
    """
    natural, synthesized = _split_by_label(corpus)
    name = indicator.value
    nat_values = np.array([getattr(s.features, name) for s in natural])
    syn_values = np.array([getattr(s.features, name) for s in synthesized])
    if thresholds is None:
        ladder = sorted(set(nat_values.tolist()) | set(syn_values.tolist()))
    else:
        ladder = [float(t) for t in thresholds]
    rows = []
    for t in ladder:
        rows.append(
            (
                t,
                RatePair(
                    float(np.count_nonzero(nat_values > t)) / len(natural),
                    float(np.count_nonzero(syn_values > t)) / len(synthesized),
                ),
            )
        )
    return tuple(rows)


def weight_triples(step: Fraction | int | float | str) -> list[tuple[Fraction, Fraction, Fraction]]:
    """All (a, b, c) with a+b+c=1 on the given grid, lexicographic ascending."""
    step = _as_step(step)
    q = int(Fraction(1) / step)
    triples = []
    for i in range(q + 1):
        for j in range(q + 1 - i):
            triples.append((Fraction(i, q), Fraction(j, q), Fraction(q - i - j, q)))
    return triples


def _normalized_columns(
    samples: Sequence[LabeledSample], stats: NormalizationStats
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    normalized = [normalize(s.features, stats) for s in samples]
    return (
        np.array([f.energy for f in normalized], dtype=np.float64),
        np.array([f.amplitude for f in normalized], dtype=np.float64),
        np.array([f.crossings for f in normalized], dtype=np.float64),
    )


def grid_search(
    corpus: Sequence[LabeledSample],
    stats: NormalizationStats,
    grid: GridSpec = GridSpec(),
) -> CalibrationReport:
    """Exhaustive search of the weight simplex times the threshold ladder.

    Raises :class:`NoAcceptableComboError` (report attached) when nothing
    passes the acceptance rule.
    """
    natural, synthesized = _split_by_label(corpus)
    nat_e, nat_m, nat_z = _normalized_columns(natural, stats)
    syn_e, syn_m, syn_z = _normalized_columns(synthesized, stats)
    thresholds = np.array(grid.thresholds, dtype=np.float64)
    n_nat, n_syn = len(natural), len(synthesized)

    accepted: list[ParamResult] = []
    best: ParamResult | None = None
    best_key: tuple | None = None
    for fa, fb, fc in weight_triples(grid.weight_step):
        a, b, c = float(fa), float(fb), float(fc)
        nat_scores = a * nat_e + b * nat_m + c * nat_z
        syn_scores = a * syn_e + b * syn_m + c * syn_z
        mis = (nat_scores[None, :] > thresholds[:, None]).sum(axis=1) / n_nat
        rec = (syn_scores[None, :] > thresholds[:, None]).sum(axis=1) / n_syn
        ok = (mis < MAX_MISJUDGMENT) & (rec > MIN_RECOGNITION)
        for i in np.nonzero(ok)[0]:
            result = ParamResult(
                ClassifierParams(a, b, c, float(thresholds[i])),
                RatePair(float(mis[i]), float(rec[i])),
            )
            accepted.append(result)
            key = (-rec[i], mis[i], thresholds[i], fa, fb, fc)
            if best_key is None or key < best_key:
                best_key = key
                best = result

    report = CalibrationReport(
        n_natural=n_nat,
        n_synthesized=n_syn,
        grid=grid,
        sweep_tables={
            ind: sweep_single_indicator(ind, None, corpus) for ind in Indicator
        },
        accepted=tuple(accepted),
        best=best,
    )
    if not accepted:
        raise NoAcceptableComboError(report)
    return report


@dataclass(frozen=True)
class CrossValidationResult:
    folds: tuple[RatePair, ...]

    @property
    def mean_misjudgment(self) -> float:
        return sum(f.misjudgment_rate for f in self.folds) / len(self.folds)

    @property
    def mean_recognition(self) -> float:
        return sum(f.recognition_rate for f in self.folds) / len(self.folds)


def cross_validate(
    corpus: Sequence[LabeledSample],
    grid: GridSpec = GridSpec(),
    k: int = 5,
) -> CrossValidationResult:
    """K-fold check: calibrate on k-1 folds, evaluate rates on the held-out one.

    Folds are assigned round-robin per class in corpus order, so the split is
    deterministic for a given corpus ordering.
    """
    if k < 2:
        raise ValueError("cross-validation needs k >= 2")
    natural, synthesized = _split_by_label(corpus)
    if min(len(natural), len(synthesized)) < k:
        raise ValueError(
            f"k={k} exceeds the smaller class ({min(len(natural), len(synthesized))} samples)"
        )
    folds = []
    for fold in range(k):
        test: list[LabeledSample] = []
        train: list[LabeledSample] = []
        for group in (natural, synthesized):
            for pos, sample in enumerate(group):
                (test if pos % k == fold else train).append(sample)
        stats = fit_normalizer([s.features for s in train])
        report = grid_search(train, stats, grid)
        assert report.best is not None
        folds.append(evaluate(report.best.params, stats, test))
    return CrossValidationResult(folds=tuple(folds))


def load_manifest(path: Path) -> list[tuple[Label, Path]]:
    """Parse a ``label,path`` manifest; paths are relative to the manifest."""
    entries = []
    base = path.parent
    for lineno, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        label_text, sep, wav_text = line.partition(",")
        if not sep or not wav_text.strip():
            raise ManifestError(f"{path}:{lineno}: expected 'label,path'")
        try:
            label = Label(label_text.strip())
        except ValueError:
            raise ManifestError(
                f"{path}:{lineno}: unknown label {label_text.strip()!r}"
            ) from None
        wav_path = Path(wav_text.strip())
        entries.append((label, wav_path if wav_path.is_absolute() else base / wav_path))
    if not entries:
        raise ManifestError(f"{path}: manifest is empty")
    return entries


def build_corpus(
    entries: Sequence[tuple[Label, Path]],
    config: FramingConfig = DEFAULT_FRAMING,
) -> list[LabeledSample]:
    """Extract features for every manifest entry, in manifest order."""
    corpus = []
    for label, wav_path in entries:
        buffer = parse_wav(wav_path.read_bytes())
        corpus.append(
            LabeledSample(
                features=extract_file_features(buffer, config),
                label=label,
                source_id=str(wav_path),
            )
        )
    return corpus


_ACCEPTED_PREVIEW = 20


def format_report(report: CalibrationReport) -> str:
    """Render a report as deterministic plain-text tables."""
    lines = [
        "calibration report",
        "==================",
        f"corpus: {report.n_natural} natural, {report.n_synthesized} synthesized samples",
        "",
        "single-indicator sweeps (raw-unit thresholds, bot above threshold)",
    ]
    for indicator in Indicator:
        lines.append("")
        lines.append(f"indicator: {indicator.value}")
        lines.append(f"  {'threshold':>14}  {'misjudgment':>11}  {'recognition':>11}")
        for threshold, rates in report.sweep_tables[indicator]:
            lines.append(
                f"  {threshold:>14.6g}  {rates.misjudgment_rate:>11.4f}"
                f"  {rates.recognition_rate:>11.4f}"
            )
    q = int(Fraction(1) / report.grid.weight_step)
    lines += [
        "",
        "grid search",
        f"  weight step: 1/{q} ({report.grid.triple_count} weight triples)",
        f"  thresholds: {len(report.grid.thresholds)} values from "
        f"{report.grid.thresholds[0]:.6g} to {report.grid.thresholds[-1]:.6g}",
        f"  acceptance rule: misjudgment < {MAX_MISJUDGMENT} and recognition > {MIN_RECOGNITION}",
        f"  accepted combos: {len(report.accepted)}",
    ]
    if report.best is not None:
        p, r = report.best
        lines += [
            "",
            "best combo",
            f"  energy_weight={p.energy_weight:.6g} amplitude_weight={p.amplitude_weight:.6g}"
            f" crossing_weight={p.crossing_weight:.6g} threshold={p.threshold:.6g}",
            f"  misjudgment={r.misjudgment_rate:.4f} recognition={r.recognition_rate:.4f}",
        ]
    if report.accepted:
        shown = report.accepted[:_ACCEPTED_PREVIEW]
        lines += [
            "",
            f"accepted combos (enumeration order, first {len(shown)} of {len(report.accepted)})",
            f"  {'energy_w':>8}  {'ampl_w':>8}  {'cross_w':>8}  {'threshold':>9}"
            f"  {'misjudgment':>11}  {'recognition':>11}",
        ]
        for p, r in shown:
            lines.append(
                f"  {p.energy_weight:>8.6g}  {p.amplitude_weight:>8.6g}"
                f"  {p.crossing_weight:>8.6g}  {p.threshold:>9.6g}"
                f"  {r.misjudgment_rate:>11.4f}  {r.recognition_rate:>11.4f}"
            )
        if len(report.accepted) > len(shown):
            lines.append(f"  ... and {len(report.accepted) - len(shown)} more")
    return "\n".join(lines) + "\n"
