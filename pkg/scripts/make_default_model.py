"""Regenerate the packaged default model.

The shipped model combines the documented default weights/threshold with
normalization stats fitted on the built-in fixture corpus (seed 42, 50 + 50).
Run from the repo root:

    python3 scripts/make_default_model.py
"""

from pathlib import Path

from voicegate import DEFAULT_PARAMS, Model, dump_model, extract_file_features, fit_normalizer
from voicegate.fixtures import fixture_buffers

OUT = Path(__file__).resolve().parent.parent / "src" / "voicegate" / "data" / "default_model.json"


def main() -> None:
    dataset = [extract_file_features(buffer) for _, _, buffer in fixture_buffers(seed=42)]
    model = Model(stats=fit_normalizer(dataset), params=DEFAULT_PARAMS)
    OUT.write_text(dump_model(model), encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
