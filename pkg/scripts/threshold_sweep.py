"""Print misjudgment/recognition curves for each single indicator.

Sweeps every observed raw value of the fixture corpus, one table per
indicator, the same tables `voicegate calibrate` embeds in its report.

    python3 scripts/threshold_sweep.py [seed]
"""

import sys

from voicegate import (
    Indicator,
    LabeledSample,
    extract_file_features,
    sweep_single_indicator,
)
from voicegate.fixtures import fixture_buffers


def main() -> None:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 42
    corpus = [
        LabeledSample(extract_file_features(buffer), label, stem)
        for label, stem, buffer in fixture_buffers(seed=seed)
    ]
    for indicator in Indicator:
        print(f"indicator: {indicator.value}")
        print(f"  {'threshold':>14}  {'misjudgment':>11}  {'recognition':>11}")
        for threshold, rates in sweep_single_indicator(indicator, None, corpus):
            print(
                f"  {threshold:>14.6g}  {rates.misjudgment_rate:>11.4f}"
                f"  {rates.recognition_rate:>11.4f}"
            )
        print()


if __name__ == "__main__":
    main()
