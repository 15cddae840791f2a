"""Calibrate on one fixture seed, evaluate the chosen point on another.

This is the acceptance-rule experiment: the best grid combo fitted on the
seed-42 corpus must keep misjudgment < 10% and recognition > 90% on a fresh
seed-43 corpus of the same families.

    python3 scripts/holdout_eval.py [train_seed] [holdout_seed]
"""

import sys

from voicegate import (
    LabeledSample,
    evaluate,
    extract_file_features,
    fit_normalizer,
    grid_search,
)
from voicegate.fixtures import fixture_buffers


def corpus_for(seed: int) -> list[LabeledSample]:
    return [
        LabeledSample(extract_file_features(buffer), label, stem)
        for label, stem, buffer in fixture_buffers(seed=seed)
    ]


def main() -> None:
    train_seed = int(sys.argv[1]) if len(sys.argv) > 1 else 42
    holdout_seed = int(sys.argv[2]) if len(sys.argv) > 2 else 43
    train = corpus_for(train_seed)
    stats = fit_normalizer([s.features for s in train])
    report = grid_search(train, stats)
    assert report.best is not None
    p, r = report.best
    print(f"train seed {train_seed}: accepted={len(report.accepted)}")
    print(
        f"best: energy_w={p.energy_weight:g} amplitude_w={p.amplitude_weight:g} "
        f"crossing_w={p.crossing_weight:g} threshold={p.threshold:g} "
        f"(mis={r.misjudgment_rate:.3f} rec={r.recognition_rate:.3f})"
    )
    holdout = evaluate(p, stats, corpus_for(holdout_seed))
    print(
        f"holdout seed {holdout_seed}: mis={holdout.misjudgment_rate:.3f} "
        f"rec={holdout.recognition_rate:.3f}"
    )
    ok = holdout.misjudgment_rate < 0.10 and holdout.recognition_rate > 0.90
    print("acceptance rule:", "PASS" if ok else "FAIL")


if __name__ == "__main__":
    main()
