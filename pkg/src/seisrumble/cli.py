"""``seisrumble`` command line: run any pipeline stage on files.

Exit codes: 0 ok, 2 input error, 3 pipeline-contract error (scale or unit
tag mismatch), 4 numeric failure. Every output is a pure function of the
inputs, the config and the seed; timestamps only go to ``run.log``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .classifiers import Dataset, evaluate, leaderboard, make_trainer, split_dataset
from .config import PipelineConfig, apply_overrides, load_config
from .dsp import Scale, stft_spectrogram, to_decibel
from .enhancement import enhance_coherence, enhance_threshold, ssim
from .errors import (ConfigError, DataError, DegenerateSignalError, NumericError, ScaleError,
                     SeisRumbleError, UnitMismatchError)
from .features import FeatureKind, FeatureVector, Label, extract_features
from .frontend import codes_to_signal, run_frontend
from .signals import TimeSeries, Unit
from .synthgen import RumbleSpec, gen_background, gen_labeled_corpus, gen_rumble, read_manifest

EXIT_OK, EXIT_INPUT, EXIT_CONTRACT, EXIT_NUMERIC = 0, 2, 3, 4

log = logging.getLogger("seisrumble")
log.addHandler(logging.NullHandler())
log.propagate = False


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (ScaleError, UnitMismatchError)):
        return EXIT_CONTRACT
    if isinstance(exc, (NumericError, DegenerateSignalError)):
        return EXIT_NUMERIC
    return EXIT_INPUT


def _require_file(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"no such file: {p}")
    return p


def _write_text(path: Path, text: str) -> None:
    path.write_text(text)
    log.info("wrote %s", path)


def _analysis_signal(path) -> TimeSeries:
    """ADC codes (WAV or CSV tagged adc_code) become a zero-mean signal."""
    x = io.read_signal(_require_file(path))
    if x.unit is Unit.ADC_CODE:
        return codes_to_signal(x)
    return x


# -- subcommands -----------------------------------------------------------

def cmd_synth(args, cfg: PipelineConfig, out: Path) -> int:
    seed = cfg.seed
    if args.kind == "corpus":
        sc = cfg.synth
        entries = gen_labeled_corpus(sc.n_rumbles, sc.n_background, seed=seed, snr_db=sc.snr_db,
                                     duration=sc.duration, cfg=cfg.frontend, out_dir=out,
                                     write_csv=args.csv)
        worst = max(e.clip_fraction for e in entries)
        print(f"corpus: {len(entries)} segments in {out} (max clipping {100 * worst:.2f}%)")
        return EXIT_OK
    if args.kind == "rumble":
        spec = RumbleSpec(fundamental=args.fundamental, n_harmonics=args.harmonics,
                          duration=args.duration, amplitude=args.amplitude, snr_db=args.snr_db,
                          seed=seed, sample_rate=cfg.frontend.sample_rate)
        x = gen_rumble(spec)
    else:
        x = gen_background(args.duration, seed, sample_rate=cfg.frontend.sample_rate)
    path = out / f"{args.kind}.csv"
    io.write_timeseries_csv(path, x)
    print(f"{args.kind}: {x.samples.shape[0]} samples -> {path}")
    return EXIT_OK


def cmd_simulate(args, cfg: PipelineConfig, out: Path) -> int:
    if args.input:
        x = io.read_timeseries_csv(_require_file(args.input), Unit.GROUND_VELOCITY)
        stem = Path(args.input).stem
    else:
        spec = RumbleSpec(duration=args.duration, seed=cfg.seed,
                          sample_rate=cfg.frontend.sample_rate)
        x, stem = gen_rumble(spec), "rumble"
    result = run_frontend(x, cfg.frontend)
    io.write_adc_wav(out / f"{stem}_codes.wav", result.codes)
    if args.csv:
        io.write_timeseries_csv(out / f"{stem}_codes.csv", result.codes)
    print(f"simulate: {result.codes.samples.shape[0]} samples, "
          f"clipping {100 * result.clip_fraction:.2f}% -> {out / (stem + '_codes.wav')}")
    return EXIT_OK


def _write_spec(s, out: Path, stem: str, csv: bool, png: bool) -> Path:
    path = out / f"{stem}.spg"
    io.write_spg(path, s)
    if csv:
        io.write_spectrogram_csv(out / f"{stem}.csv", s)
    if png:
        io.write_spectrogram_png(out / f"{stem}.png", s)
    return path


def cmd_spectrogram(args, cfg: PipelineConfig, out: Path) -> int:
    x = _analysis_signal(args.input)
    st = cfg.stft
    s = stft_spectrogram(x, st.frame_ms, st.overlap, st.n_fft)
    stem = Path(args.input).stem + "_spec"
    path = _write_spec(s, out, stem, args.csv, args.png)
    print(f"spectrogram: {s.shape[0]} frames x {s.shape[1]} bins (power) -> {path}")
    return EXIT_OK


def cmd_enhance(args, cfg: PipelineConfig, out: Path) -> int:
    s = io.read_spectrogram(_require_file(args.input))
    s.require_scale(Scale.POWER)
    ec = cfg.enhancement
    stage1 = enhance_coherence(s, ec.sigma, ec.sigma_r, ec.eps)
    stage2 = enhance_threshold(stage1, ec.deltas, ec.blur_sigma)
    ref = to_decibel(s)
    stem = Path(args.input).stem
    _write_spec(stage1, out, f"{stem}_coherence", args.csv, args.png)
    _write_spec(stage2, out, f"{stem}_threshold", args.csv, args.png)
    s1, s2 = ssim(stage1, ref), ssim(stage2, ref)
    _write_text(out / f"{stem}_ssim.csv",
                f"stage,ssim_vs_input_db\ncoherence,{s1!r}\nthreshold,{s2!r}\n")
    print(f"enhance: SSIM vs input  coherence={s1:.4f}  threshold={s2:.4f}")
    return EXIT_OK


def _corpus_rows(manifest: Path):
    for row in read_manifest(manifest):
        wav = manifest.parent / f"{row['source_id']}.wav"
        yield row["source_id"], Label(row["label"]), _analysis_signal(wav)


def cmd_features(args, cfg: PipelineConfig, out: Path) -> int:
    if args.manifest:
        items = list(_corpus_rows(_require_file(args.manifest)))
    else:
        if not args.inputs:
            raise ConfigError("give input files or --manifest")
        if args.label is None:
            raise ConfigError("--label is required without a manifest")
        items = [(Path(p).stem, Label(args.label), _analysis_signal(p)) for p in args.inputs]
    kinds = [FeatureKind(k) for k in args.kinds]
    rows = {k: [] for k in kinds}
    for source_id, label, x in items:
        for kind, values in extract_features(x, cfg.features, kinds).items():
            rows[kind].append(FeatureVector(kind, values, label, source_id))
    for kind in kinds:
        path = out / f"features_{kind.value}.csv"
        io.write_features_csv(path, rows[kind])
        print(f"features: {len(rows[kind])} {kind.value} rows -> {path}")
    return EXIT_OK


def _load_dataset(path) -> Dataset:
    rows = io.read_features_csv(_require_file(path))
    if not rows:
        raise DataError(f"{path}: no feature rows")
    return Dataset(tuple(rows))


def cmd_train(args, cfg: PipelineConfig, out: Path) -> int:
    tc = cfg.training
    data = _load_dataset(args.features)
    train, _ = split_dataset(data, tc.split, tc.seed)
    model = make_trainer(tc.algorithm, tc.hyperparams())(train)
    path = out / f"model_{data.kind.value}_{tc.algorithm}.json"
    io.write_model_json(path, model)
    print(f"train: {tc.algorithm} on {len(train)} {data.kind.value} rows "
          f"(split={tc.split}) -> {path}")
    return EXIT_OK


def cmd_evaluate(args, cfg: PipelineConfig, out: Path) -> int:
    tc = cfg.training
    model = io.read_model_json(_require_file(args.model))
    data = _load_dataset(args.features)
    test = data if args.all else split_dataset(data, tc.split, tc.seed)[1]
    report = evaluate(model, test)
    record = {"data": "synthetic", "n_test": len(test), **report.to_dict()}
    _write_text(out / "eval_report.json", json.dumps(record, indent=2, sort_keys=True) + "\n")
    print(f"evaluate: accuracy {100 * report.accuracy:.2f}% on {len(test)} rows (synthetic data)")
    return EXIT_OK


def cmd_leaderboard(args, cfg: PipelineConfig, out: Path) -> int:
    tc = cfg.training
    by_kind = {}
    for path in args.features:
        ds = _load_dataset(path)
        by_kind[ds.kind] = ds
    hp = {a: tc.hyperparams(a) for a in ("ridge", "svm_linear", "logistic", "tree")}
    lb = leaderboard(by_kind, split=tc.split, seed=tc.seed, cv_k=tc.k, hyperparams=hp)
    _write_text(out / "leaderboard.csv", lb.to_csv())
    text = lb.to_text()
    _write_text(out / "leaderboard.txt", text)
    print(text, end="")
    return EXIT_OK


def _load_matrix(path):
    p = _require_file(path)
    if p.suffix.lower() in (".spg", ".csv"):
        return io.read_spectrogram(p).values
    return np.load(p)


def cmd_ssim(args, cfg: PipelineConfig, out: Path) -> int:
    value = ssim(_load_matrix(args.a), _load_matrix(args.b))
    print(repr(value))
    return EXIT_OK


# -- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON pipeline config")
    common.add_argument("--seed", type=int, help="overrides training.seed")
    common.add_argument("--out", default=".", help="output directory (default: .)")
    common.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override one config value (JSON literal); repeatable")

    # global flags live on each subcommand (``seisrumble enhance x.spg --out d``)
    p = argparse.ArgumentParser(prog="seisrumble",
                                description="Seismic rumble detection pipeline.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("synth", cmd_synth, "generate synthetic ground velocity or a labeled corpus")
    sp.add_argument("kind", choices=("rumble", "background", "corpus"))
    sp.add_argument("--fundamental", type=float, default=20.0)
    sp.add_argument("--harmonics", type=int, default=3)
    sp.add_argument("--duration", type=float, default=6.0)
    sp.add_argument("--amplitude", type=float, default=1e-6)
    sp.add_argument("--snr-db", type=float, default=float("inf"))
    sp.add_argument("--csv", action="store_true", help="corpus: also write code CSVs")

    sp = add("simulate", cmd_simulate, "run the analog front end and ADC")
    sp.add_argument("input", nargs="?", help="ground-velocity CSV (default: synthetic rumble)")
    sp.add_argument("--duration", type=float, default=6.0)
    sp.add_argument("--csv", action="store_true")

    sp = add("spectrogram", cmd_spectrogram, "power STFT of a WAV/CSV signal")
    sp.add_argument("input")
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--png", action="store_true")

    sp = add("enhance", cmd_enhance, "coherence and threshold enhancement of a power spectrogram")
    sp.add_argument("input")
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--png", action="store_true")

    sp = add("features", cmd_features, "extract MFCC / Hjorth / SED features")
    sp.add_argument("inputs", nargs="*")
    sp.add_argument("--manifest", help="corpus manifest.csv (labels and WAV files)")
    sp.add_argument("--label", choices=[l.value for l in Label])
    sp.add_argument("--kinds", nargs="+", default=[k.value for k in FeatureKind],
                    choices=[k.value for k in FeatureKind])

    sp = add("train", cmd_train, "train one classifier on a feature CSV")
    sp.add_argument("features")

    sp = add("evaluate", cmd_evaluate, "score a model on the held-out split")
    sp.add_argument("model")
    sp.add_argument("features")
    sp.add_argument("--all", action="store_true", help="score every row, not just the test split")

    sp = add("leaderboard", cmd_leaderboard, "rank feature x algorithm pairs")
    sp.add_argument("features", nargs="+")

    sp = add("ssim", cmd_ssim, "global SSIM of two spectrograms (.spg/.csv) or .npy matrices")
    sp.add_argument("a")
    sp.add_argument("b")
    return p


def _setup_log(out: Path) -> logging.Handler:
    handler = logging.FileHandler(out / "run.log")
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO)
    return handler


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = None
    try:
        cfg = apply_overrides(load_config(args.config and _require_file(args.config)),
                              args.set, args.seed)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        handler = _setup_log(out)
        log.info("command %s argv=%s", args.command, sys.argv[1:] if argv is None else argv)
        code = args.func(args, cfg, out)
        log.info("exit %d", code)
        return code
    except (SeisRumbleError, FileNotFoundError, ValueError, KeyError, OSError) as exc:
        code = _exit_code(exc)
        print(f"seisrumble {args.command}: error: {exc}", file=sys.stderr)
        log.error("exit %d: %s", code, exc)
        return code
    finally:
        if handler is not None:
            log.removeHandler(handler)
            handler.close()


if __name__ == "__main__":
    sys.exit(main())
