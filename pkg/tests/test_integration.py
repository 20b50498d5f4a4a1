"""End-to-end runs of the command-line pipeline on the default synthetic corpus."""

import filecmp
import json
from pathlib import Path

import pytest

from seisrumble.cli import main

pytestmark = pytest.mark.slow


def full_pipeline(out: Path) -> None:
    steps = [
        ["synth", "corpus", "--out", out / "corpus"],
        ["simulate", "--out", out / "sim"],
        ["spectrogram", out / "sim" / "rumble_codes.wav", "--out", out / "sim", "--csv"],
        ["enhance", out / "sim" / "rumble_codes_spec.spg", "--out", out / "sim", "--csv"],
        ["features", "--manifest", out / "corpus" / "manifest.csv", "--out", out / "feat"],
        ["train", out / "feat" / "features_mfcc.csv", "--out", out / "feat"],
        ["evaluate", out / "feat" / "model_mfcc_ridge.json", out / "feat" / "features_mfcc.csv",
         "--out", out / "feat"],
        ["leaderboard", *(out / "feat" / f"features_{k}.csv" for k in ("mfcc", "hjorth", "sed")),
         "--out", out / "feat"],
    ]
    for argv in steps:
        assert main([str(a) for a in argv]) == 0, argv


def artifacts(root: Path) -> list[Path]:
    return sorted(p.relative_to(root) for p in root.rglob("*")
                  if p.is_file() and p.name != "run.log")


def test_end_to_end_writes_an_eval_report(tmp_path):
    full_pipeline(tmp_path)
    report = json.loads((tmp_path / "feat" / "eval_report.json").read_text())
    assert report["data"] == "synthetic"
    assert report["accuracy"] >= 0.9
    assert (tmp_path / "feat" / "leaderboard.csv").is_file()


def test_two_runs_are_byte_identical(tmp_path):
    full_pipeline(tmp_path / "a")
    full_pipeline(tmp_path / "b")
    files = artifacts(tmp_path / "a")
    assert files == artifacts(tmp_path / "b") and len(files) > 40
    _, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b",
                                           [str(f) for f in files], shallow=False)
    assert not mismatch and not errors
