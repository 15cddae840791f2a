"""Command-line entry points.

Subcommands: ``analyze`` (classify WAV files), ``calibrate`` (fit a model
from a labeled manifest), ``gen-fixtures`` (write a deterministic evaluation
corpus), and ``serve`` (run the challenge/verify HTTP service).

Exit codes: 0 success, 1 usage error, 2 I/O or input-data error, 3 when
calibration finds no acceptable weight/threshold combination.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .calibration import (
    GridSpec,
    ManifestError,
    MissingClassError,
    NoAcceptableComboError,
    build_corpus,
    cross_validate,
    fit_normalizer,
    format_report,
    grid_search,
    load_manifest,
    thresholds_from_step,
)
from .challenge import NoEligibleSentencesError, load_corpus
from .classifier import Model, ModelFormatError, dump_model, load_default_model, load_model
from .features import frame_feature_track
from .fixtures import generate_corpus
from .framing import FramingConfig
from .pipeline import analyze_buffer
from .wavio import WavError, parse_wav

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NO_COMBO = 3

# --split-window applies this fixed window size (half a 20 ms frame at 5 kHz)
SPLIT_WINDOW_LEN = 50


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _add_framing_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("framing")
    group.add_argument("--frame-ms", type=float, default=20.0, help="frame length in ms")
    group.add_argument("--hop-ms", type=float, default=10.0, help="hop length in ms")
    group.add_argument(
        "--window-len",
        type=int,
        default=None,
        help="fixed window size in samples (default: one window per frame)",
    )
    group.add_argument(
        "--split-window",
        action="store_true",
        help=f"shorthand for --window-len {SPLIT_WINDOW_LEN}, meant for 5 kHz input",
    )


def _framing_from_args(args: argparse.Namespace) -> FramingConfig:
    window_len = args.window_len
    if args.split_window:
        if window_len is not None and window_len != SPLIT_WINDOW_LEN:
            raise _UsageError("--split-window conflicts with --window-len")
        window_len = SPLIT_WINDOW_LEN
    try:
        return FramingConfig(frame_ms=args.frame_ms, hop_ms=args.hop_ms, window_len=window_len)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _load_model_arg(path: str | None) -> Model:
    if path is None:
        return load_default_model()
    return load_model(Path(path).read_text("utf-8"))


def _fail(message: str) -> int:
    print(f"voicegate: error: {message}", file=sys.stderr)
    return EXIT_IO


def cmd_analyze(args: argparse.Namespace) -> int:
    config = _framing_from_args(args)
    if args.frames_csv is not None and len(args.wav) != 1:
        raise _UsageError("--frames-csv works with exactly one input file")
    try:
        model = _load_model_arg(args.model)
    except (OSError, ModelFormatError) as exc:
        return _fail(f"cannot load model: {exc}")

    rows = []
    for wav_path in args.wav:
        try:
            buffer = parse_wav(Path(wav_path).read_bytes())
        except OSError as exc:
            return _fail(f"cannot read {wav_path}: {exc}")
        except WavError as exc:
            return _fail(f"{wav_path}: {exc}")
        analysis = analyze_buffer(buffer, model, config)
        rows.append((wav_path, analysis))
        if args.frames_csv is not None:
            _write_frames_csv(Path(args.frames_csv), buffer, config)

    _emit_analyses(rows, args.format)
    return EXIT_OK


def _write_frames_csv(path: Path, buffer, config: FramingConfig) -> None:
    lines = ["frame_index,energy,amplitude,zcr"]
    for index, frame in enumerate(frame_feature_track(buffer, config)):
        lines.append(f"{index},{frame.energy!r},{frame.amplitude!r},{frame.crossings!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _emit_analyses(rows: list[tuple[str, object]], fmt: str) -> None:
    if fmt == "json-lines":
        for path, a in rows:
            print(
                json.dumps(
                    {
                        "file": path,
                        "E0": a.raw.energy,
                        "M0": a.raw.amplitude,
                        "Z0": a.raw.crossings,
                        "E": a.normalized.energy,
                        "M": a.normalized.amplitude,
                        "Z": a.normalized.crossings,
                        "V": a.score,
                        "verdict": a.verdict.value,
                    }
                )
            )
        return
    if fmt == "csv":
        print("file,E0,M0,Z0,E,M,Z,V,verdict")
        for path, a in rows:
            print(
                f"{path},{a.raw.energy!r},{a.raw.amplitude!r},{a.raw.crossings!r},"
                f"{a.normalized.energy!r},{a.normalized.amplitude!r},"
                f"{a.normalized.crossings!r},{a.score!r},{a.verdict.value}"
            )
        return
    width = max(len("file"), *(len(path) for path, _ in rows))
    print(
        f"{'file':<{width}}  {'E0':>12}  {'M0':>12}  {'Z0':>10}"
        f"  {'E':>8}  {'M':>8}  {'Z':>8}  {'V':>8}  verdict"
    )
    for path, a in rows:
        print(
            f"{path:<{width}}  {a.raw.energy:>12.6g}  {a.raw.amplitude:>12.6g}"
            f"  {a.raw.crossings:>10.6g}  {a.normalized.energy:>8.6f}"
            f"  {a.normalized.amplitude:>8.6f}  {a.normalized.crossings:>8.6f}"
            f"  {a.score:>8.6f}  {a.verdict.value}"
        )


def cmd_calibrate(args: argparse.Namespace) -> int:
    config = _framing_from_args(args)
    try:
        grid = GridSpec(
            weight_step=args.weight_step,
            thresholds=thresholds_from_step(args.threshold_step),
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(str(exc)) from exc

    try:
        entries = load_manifest(Path(args.manifest))
        corpus = build_corpus(entries, config)
    except OSError as exc:
        return _fail(f"cannot read corpus: {exc}")
    except (ManifestError, WavError) as exc:
        return _fail(str(exc))

    try:
        stats = fit_normalizer([s.features for s in corpus])
        report = grid_search(corpus, stats, grid)
    except MissingClassError as exc:
        return _fail(str(exc))
    except NoAcceptableComboError as exc:
        _emit_report(format_report(exc.report), args.report_out)
        print(f"voicegate: {exc}", file=sys.stderr)
        return EXIT_NO_COMBO

    assert report.best is not None
    text = format_report(report)
    if args.cross_validate is not None:
        try:
            cv = cross_validate(corpus, grid, args.cross_validate)
        except (ValueError, NoAcceptableComboError) as exc:
            return _fail(f"cross-validation failed: {exc}")
        lines = ["", f"cross-validation ({args.cross_validate} folds)"]
        for i, fold in enumerate(cv.folds):
            lines.append(
                f"  fold {i}: misjudgment={fold.misjudgment_rate:.4f}"
                f" recognition={fold.recognition_rate:.4f}"
            )
        lines.append(
            f"  mean: misjudgment={cv.mean_misjudgment:.4f}"
            f" recognition={cv.mean_recognition:.4f}"
        )
        text += "\n".join(lines) + "\n"
    _emit_report(text, args.report_out)

    model = Model(stats=stats, params=report.best.params)
    out_path = Path(args.model_out)
    try:
        out_path.write_text(dump_model(model), encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot write model: {exc}")
    print(f"model written to {out_path}")
    return EXIT_OK


def _emit_report(text: str, report_out: str | None) -> None:
    if report_out is None:
        sys.stdout.write(text)
    else:
        Path(report_out).write_text(text, encoding="utf-8")


def cmd_gen_fixtures(args: argparse.Namespace) -> int:
    if args.per_family < 1:
        raise _UsageError("--per-family must be at least 1")
    try:
        manifest = generate_corpus(
            Path(args.out), seed=args.seed, per_family=args.per_family, rate=args.rate
        )
    except OSError as exc:
        return _fail(f"cannot write fixtures: {exc}")
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    print(f"wrote {2 * args.per_family} wav files and {manifest.name} to {args.out}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    # imported lazily: analysis subcommands should not need the HTTP stack
    import uvicorn

    from .service import ServiceConfig, create_app

    config = _framing_from_args(args)
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise _UsageError(f"--listen expects HOST:PORT, got {args.listen!r}")

    try:
        documents = [Path(p).read_text("utf-8") for p in args.sentences]
        corpus = load_corpus(documents)
        model = _load_model_arg(args.model)
    except OSError as exc:
        return _fail(str(exc))
    except (NoEligibleSentencesError, ModelFormatError) as exc:
        return _fail(str(exc))

    try:
        service_config = ServiceConfig(
            ttl=args.ttl, min_duration=args.min_duration, max_duration=args.max_duration
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc

    app = create_app(
        corpus, model, config, service_config, challenge_seed=args.challenge_seed
    )
    print(f"voicegate service ready on http://{host}:{port_text}", flush=True)
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    return EXIT_OK


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="voicegate",
        description="Voice-liveness checks from short-time time-domain features.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="classify WAV files")
    p_analyze.add_argument("wav", nargs="+", help="input WAV files")
    p_analyze.add_argument("--model", default=None, help="model JSON (default: built-in)")
    p_analyze.add_argument(
        "--format", choices=("table", "csv", "json-lines"), default="table"
    )
    p_analyze.add_argument(
        "--frames-csv", default=None, help="also dump per-frame features to this CSV"
    )
    _add_framing_flags(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_cal = sub.add_parser("calibrate", help="fit a model from a labeled manifest")
    p_cal.add_argument("--manifest", required=True, help="CSV of label,path lines")
    p_cal.add_argument("--model-out", default="model.json")
    p_cal.add_argument("--report-out", default=None, help="report file (default: stdout)")
    p_cal.add_argument("--weight-step", default="0.01", help="weight grid step, e.g. 0.01 or 1/100")
    p_cal.add_argument("--threshold-step", default="0.005", help="threshold ladder step")
    p_cal.add_argument(
        "--cross-validate", type=int, default=None, metavar="K", help="also run k-fold checks"
    )
    _add_framing_flags(p_cal)
    p_cal.set_defaults(func=cmd_calibrate)

    p_gen = sub.add_parser("gen-fixtures", help="write a deterministic evaluation corpus")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--seed", type=int, default=42)
    p_gen.add_argument("--per-family", type=int, default=50)
    p_gen.add_argument("--rate", type=int, default=16000)
    p_gen.set_defaults(func=cmd_gen_fixtures)

    p_serve = sub.add_parser("serve", help="run the challenge/verify HTTP service")
    p_serve.add_argument(
        "--listen",
        default=os.environ.get("VOICEGATE_LISTEN", "127.0.0.1:8000"),
        help="HOST:PORT (env VOICEGATE_LISTEN)",
    )
    p_serve.add_argument(
        "--sentences",
        nargs="+",
        default=None,
        help="plain-text documents to draw challenge sentences from (env VOICEGATE_SENTENCES)",
    )
    p_serve.add_argument(
        "--model",
        default=os.environ.get("VOICEGATE_MODEL"),
        help="model JSON (env VOICEGATE_MODEL, default: built-in)",
    )
    p_serve.add_argument("--ttl", type=float, default=120.0, help="challenge TTL in seconds")
    p_serve.add_argument("--min-duration", type=float, default=1.0)
    p_serve.add_argument("--max-duration", type=float, default=30.0)
    p_serve.add_argument(
        "--challenge-seed", type=int, default=None, help="seed the sentence sequence"
    )
    _add_framing_flags(p_serve)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve" and args.sentences is None:
            env = os.environ.get("VOICEGATE_SENTENCES")
            if not env:
                raise _UsageError("serve needs --sentences (or VOICEGATE_SENTENCES)")
            args.sentences = env.split(os.pathsep)
        return args.func(args)
    except _UsageError as exc:
        print(f"voicegate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())
