import filecmp
import json

import numpy as np
import pytest

from seisrumble import io
from seisrumble.cli import main
from seisrumble.dsp import Scale
from seisrumble.signals import TimeSeries, Unit


def run(*argv):
    return main([str(a) for a in argv])


def test_simulate_zero_velocity_gives_midscale(tmp_path):
    io.write_timeseries_csv(tmp_path / "z.csv",
                            TimeSeries(np.zeros(475), 475.0, Unit.GROUND_VELOCITY))
    assert run("simulate", tmp_path / "z.csv", "--out", tmp_path) == 0
    codes = io.read_adc_wav(tmp_path / "z_codes.wav")
    assert np.all(codes.samples == 32768)


def test_simulated_rumble_peaks_near_20hz(tmp_path, capsys):
    assert run("simulate", "--out", tmp_path) == 0
    assert "clipping" in capsys.readouterr().out
    assert run("spectrogram", tmp_path / "rumble_codes.wav", "--out", tmp_path) == 0
    s = io.read_spg(tmp_path / "rumble_codes_spec.spg")
    peak = s.bin_freqs[np.argmax(s.values.mean(axis=0))]
    assert abs(peak - 20.0) <= 475.0 / s.n_fft


def test_missing_file_exit_code(tmp_path, capsys):
    assert run("simulate", tmp_path / "missing.csv", "--out", tmp_path) == 2
    assert "no such file" in capsys.readouterr().err
    assert run("ssim", tmp_path / "a.spg", tmp_path / "b.spg") == 2


def test_enhancing_a_decibel_file_is_a_contract_error(tmp_path, capsys):
    run("simulate", "--out", tmp_path)
    run("spectrogram", tmp_path / "rumble_codes.wav", "--out", tmp_path)
    assert run("enhance", tmp_path / "rumble_codes_spec.spg", "--out", tmp_path) == 0
    stage1 = io.read_spg(tmp_path / "rumble_codes_spec_coherence.spg")
    assert stage1.scale is Scale.DECIBEL
    capsys.readouterr()
    assert run("enhance", tmp_path / "rumble_codes_spec_coherence.spg", "--out", tmp_path) == 3
    assert "decibel" in capsys.readouterr().err


def test_enhance_writes_both_stages_and_ssim(tmp_path):
    run("simulate", "--out", tmp_path)
    run("spectrogram", tmp_path / "rumble_codes.wav", "--out", tmp_path)
    run("enhance", tmp_path / "rumble_codes_spec.spg", "--out", tmp_path, "--png")
    for name in ("coherence.spg", "threshold.spg", "coherence.png", "threshold.png", "ssim.csv"):
        assert (tmp_path / f"rumble_codes_spec_{name}").is_file()
    lines = (tmp_path / "rumble_codes_spec_ssim.csv").read_text().splitlines()
    assert lines[0] == "stage,ssim_vs_input_db"
    assert [l.split(",")[0] for l in lines[1:]] == ["coherence", "threshold"]


def test_ssim_of_a_file_with_itself(tmp_path, capsys):
    run("simulate", "--out", tmp_path)
    run("spectrogram", tmp_path / "rumble_codes.wav", "--out", tmp_path)
    capsys.readouterr()
    spg = tmp_path / "rumble_codes_spec.spg"
    assert run("ssim", spg, spg) == 0
    assert capsys.readouterr().out.strip() == "1.0"


def test_numeric_failure_exit_code(tmp_path):
    assert run("synth", "corpus", "--out", tmp_path / "c", "--set", "synth.n_rumbles=4",
               "--set", "synth.n_background=4") == 0
    assert run("features", "--manifest", tmp_path / "c" / "manifest.csv", "--out", tmp_path,
               "--kinds", "mfcc") == 0
    assert run("train", tmp_path / "features_mfcc.csv", "--out", tmp_path,
               "--set", "training.alpha=0") == 4


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"stft": {"frame_ms": 100.0}}))
    run("simulate", "--out", tmp_path)
    assert run("spectrogram", tmp_path / "rumble_codes.wav", "--out", tmp_path,
               "--config", cfg) == 0
    assert io.read_spg(tmp_path / "rumble_codes_spec.spg").frame_len == 48
    assert run("spectrogram", tmp_path / "rumble_codes.wav", "--out", tmp_path,
               "--config", cfg, "--set", "stft.frame_ms=250") == 0
    assert io.read_spg(tmp_path / "rumble_codes_spec.spg").frame_len == 119
    cfg.write_text(json.dumps({"stft": {"frames": 1}}))
    assert run("spectrogram", tmp_path / "rumble_codes.wav", "--config", cfg) == 2


def test_timestamps_only_in_sidecar_log(tmp_path):
    run("simulate", "--out", tmp_path / "a")
    run("simulate", "--out", tmp_path / "b")
    assert (tmp_path / "a" / "run.log").is_file()
    assert filecmp.cmp(tmp_path / "a" / "rumble_codes.wav", tmp_path / "b" / "rumble_codes.wav",
                       shallow=False)


def test_synth_rumble_and_background(tmp_path):
    assert run("synth", "rumble", "--out", tmp_path, "--seed", "3") == 0
    assert run("synth", "background", "--out", tmp_path, "--duration", "2") == 0
    assert len(io.read_timeseries_csv(tmp_path / "background.csv")) == 950
    assert run("synth", "rumble", "--out", tmp_path, "--fundamental", "60",
               "--harmonics", "3") == 2
