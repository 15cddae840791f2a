import json
import subprocess
import sys

import pytest

from voicegate import (
    Model,
    analyze_buffer,
    load_model,
    parse_wav,
    write_wav,
)
from voicegate.cli import EXIT_IO, EXIT_NO_COMBO, EXIT_OK, EXIT_USAGE, main
from voicegate.fixtures import fixture_buffers, generate_corpus


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    generate_corpus(out, seed=7, per_family=4)
    return out


@pytest.fixture(scope="module")
def model_path(tmp_path_factory, corpus_dir):
    out = tmp_path_factory.mktemp("model") / "model.json"
    code = main(
        [
            "calibrate",
            "--manifest", str(corpus_dir / "manifest.csv"),
            "--model-out", str(out),
            "--weight-step", "0.25",
            "--threshold-step", "0.05",
            "--report-out", str(out.parent / "report.txt"),
        ]
    )
    assert code == EXIT_OK
    return out


class TestAnalyze:
    def test_table_output(self, capsys, corpus_dir, model_path):
        wav = corpus_dir / "natural_000.wav"
        code = main(["analyze", str(wav), "--model", str(model_path)])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        header, row = out.strip().splitlines()
        for column in ("file", "E0", "M0", "Z0", "E", "M", "Z", "V", "verdict"):
            assert column in header
        assert str(wav) in row
        assert row.split()[-1] in ("human", "bot")

    def test_verdict_matches_library(self, capsys, corpus_dir, model_path):
        wav = corpus_dir / "synthetic_000.wav"
        model = load_model(model_path.read_text("utf-8"))
        expected = analyze_buffer(parse_wav(wav.read_bytes()), model)
        code = main(
            ["analyze", str(wav), "--model", str(model_path), "--format", "json-lines"]
        )
        assert code == EXIT_OK
        record = json.loads(capsys.readouterr().out.strip())
        assert record["verdict"] == expected.verdict.value
        assert record["V"] == expected.score
        assert record["E0"] == expected.raw.energy

    def test_csv_output_multiple_files(self, capsys, corpus_dir, model_path):
        wavs = [str(corpus_dir / f"natural_00{i}.wav") for i in range(3)]
        code = main(["analyze", *wavs, "--model", str(model_path), "--format", "csv"])
        assert code == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "file,E0,M0,Z0,E,M,Z,V,verdict"
        assert len(lines) == 4
        assert [line.split(",")[0] for line in lines[1:]] == wavs

    def test_default_model_used_when_flag_omitted(self, capsys, corpus_dir):
        code = main(["analyze", str(corpus_dir / "natural_001.wav")])
        assert code == EXIT_OK
        assert capsys.readouterr().out.strip()

    def test_frames_csv_dump(self, capsys, tmp_path, corpus_dir, model_path):
        frames_out = tmp_path / "frames.csv"
        code = main(
            [
                "analyze", str(corpus_dir / "natural_000.wav"),
                "--model", str(model_path),
                "--frames-csv", str(frames_out),
            ]
        )
        assert code == EXIT_OK
        lines = frames_out.read_text("utf-8").strip().splitlines()
        assert lines[0] == "frame_index,energy,amplitude,zcr"
        assert len(lines) > 100
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) >= 0.0

    def test_frames_csv_multiple_inputs_is_usage_error(self, corpus_dir):
        wavs = [str(corpus_dir / "natural_000.wav"), str(corpus_dir / "natural_001.wav")]
        assert main(["analyze", *wavs, "--frames-csv", "x.csv"]) == EXIT_USAGE

    def test_missing_file(self, capsys):
        code = main(["analyze", "/nonexistent/file.wav"])
        assert code == EXIT_IO
        assert "file.wav" in capsys.readouterr().err

    def test_invalid_wav(self, capsys, tmp_path):
        bad = tmp_path / "bad.wav"
        bad.write_bytes(b"garbage")
        assert main(["analyze", str(bad)]) == EXIT_IO

    def test_split_window_flag(self, capsys, tmp_path):
        buffers = fixture_buffers(seed=3, per_family=1, rate=5000)
        wav = tmp_path / "five_k.wav"
        wav.write_bytes(write_wav(buffers[0][2]))
        assert main(["analyze", str(wav), "--split-window"]) == EXIT_OK

    def test_split_window_conflicts_with_window_len(self, corpus_dir):
        code = main(
            ["analyze", str(corpus_dir / "natural_000.wav"),
             "--split-window", "--window-len", "60"]
        )
        assert code == EXIT_USAGE


class TestCalibrate:
    def test_model_file_valid_and_perfect_on_fixtures(self, model_path):
        model = load_model(model_path.read_text("utf-8"))
        assert isinstance(model, Model)
        report = (model_path.parent / "report.txt").read_text("utf-8")
        assert "recognition=1.0000" in report

    def test_deterministic_model_bytes(self, tmp_path, corpus_dir):
        args = [
            "calibrate",
            "--manifest", str(corpus_dir / "manifest.csv"),
            "--weight-step", "0.5",
            "--threshold-step", "0.1",
        ]
        out1 = tmp_path / "m1.json"
        out2 = tmp_path / "m2.json"
        assert main(args + ["--model-out", str(out1)]) == EXIT_OK
        assert main(args + ["--model-out", str(out2)]) == EXIT_OK
        assert out1.read_bytes() == out2.read_bytes()

    def test_single_class_manifest(self, capsys, tmp_path, corpus_dir):
        manifest = tmp_path / "one_class.csv"
        manifest.write_text(
            "natural,natural_000.wav\nnatural,natural_001.wav\n", encoding="utf-8"
        )
        # paths resolve against the manifest directory, so copy the wavs over
        for name in ("natural_000.wav", "natural_001.wav"):
            (tmp_path / name).write_bytes((corpus_dir / name).read_bytes())
        code = main(["calibrate", "--manifest", str(manifest), "--model-out", str(tmp_path / "m.json")])
        assert code == EXIT_IO
        assert "natural" in capsys.readouterr().err

    def test_no_acceptable_combo_exit_code(self, capsys, tmp_path):
        # one identical file in both classes cannot be separated
        buffers = fixture_buffers(seed=5, per_family=1)
        wav = tmp_path / "same.wav"
        wav.write_bytes(write_wav(buffers[0][2]))
        manifest = tmp_path / "manifest.csv"
        manifest.write_text("natural,same.wav\nsynthesized,same.wav\n", encoding="utf-8")
        code = main(
            ["calibrate", "--manifest", str(manifest),
             "--model-out", str(tmp_path / "m.json"),
             "--weight-step", "0.5", "--threshold-step", "0.25"]
        )
        assert code == EXIT_NO_COMBO
        out = capsys.readouterr()
        assert "accepted combos: 0" in out.out
        assert "no weight/threshold combination" in out.err
        assert not (tmp_path / "m.json").exists()

    def test_missing_manifest(self, capsys):
        assert main(["calibrate", "--manifest", "/nope.csv"]) == EXIT_IO

    def test_cross_validate_report_section(self, capsys, tmp_path, corpus_dir):
        code = main(
            ["calibrate",
             "--manifest", str(corpus_dir / "manifest.csv"),
             "--model-out", str(tmp_path / "m.json"),
             "--weight-step", "0.5", "--threshold-step", "0.1",
             "--cross-validate", "2"]
        )
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "cross-validation (2 folds)" in out
        assert "fold 0" in out and "fold 1" in out

    def test_bad_weight_step_is_usage_error(self, corpus_dir):
        code = main(
            ["calibrate", "--manifest", str(corpus_dir / "manifest.csv"),
             "--weight-step", "0.3"]
        )
        assert code == EXIT_USAGE


class TestGenFixtures:
    def test_writes_corpus(self, capsys, tmp_path):
        code = main(
            ["gen-fixtures", "--out", str(tmp_path / "fx"), "--seed", "1",
             "--per-family", "2"]
        )
        assert code == EXIT_OK
        assert "4 wav files" in capsys.readouterr().out
        manifest = tmp_path / "fx" / "manifest.csv"
        assert len(manifest.read_text("utf-8").strip().splitlines()) == 4

    def test_deterministic_across_runs(self, tmp_path):
        for sub in ("a", "b"):
            main(["gen-fixtures", "--out", str(tmp_path / sub), "--seed", "5",
                  "--per-family", "2"])
        for name in ("natural_000.wav", "synthetic_001.wav", "manifest.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_bad_count_is_usage_error(self, tmp_path):
        assert main(["gen-fixtures", "--out", str(tmp_path), "--per-family", "0"]) == EXIT_USAGE


class TestServe:
    def test_bad_model_path_fails_before_binding(self, capsys, tmp_path):
        sentences = tmp_path / "s.txt"
        sentences.write_text(
            "a challenge sentence that has exactly nine words total.", encoding="utf-8"
        )
        code = main(
            ["serve", "--sentences", str(sentences), "--model", "/missing/model.json"]
        )
        assert code == EXIT_IO

    def test_ineligible_sentences_rejected(self, capsys, tmp_path):
        sentences = tmp_path / "s.txt"
        sentences.write_text("Too short. Nope.", encoding="utf-8")
        assert main(["serve", "--sentences", str(sentences)]) == EXIT_IO

    def test_bad_listen_flag(self, tmp_path):
        sentences = tmp_path / "s.txt"
        sentences.write_text(
            "a challenge sentence that has exactly nine words total.", encoding="utf-8"
        )
        code = main(["serve", "--sentences", str(sentences), "--listen", "nonsense"])
        assert code == EXIT_USAGE

    def test_sentences_required(self, monkeypatch):
        monkeypatch.delenv("VOICEGATE_SENTENCES", raising=False)
        assert main(["serve"]) == EXIT_USAGE


class TestUsage:
    def test_no_arguments(self):
        assert main([]) == EXIT_USAGE

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_module_entrypoint_help(self):
        result = subprocess.run(
            [sys.executable, "-m", "voicegate", "--help"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "analyze" in result.stdout
        assert "serve" in result.stdout
