import json
import struct
import zlib

import numpy as np
import pytest

from seisrumble import io
from seisrumble.classifiers import Dataset, train_ridge, train_tree
from seisrumble.config import PipelineConfig, apply_overrides, load_config
from seisrumble.dsp import Scale, Spectrogram, stft_spectrogram, to_decibel
from seisrumble.errors import ConfigError, RangeError, UnitMismatchError
from seisrumble.features import FeatureKind, FeatureVector
from seisrumble.signals import TimeSeries, Unit


def test_timeseries_csv_round_trip(tmp_path, rng):
    x = TimeSeries(rng.normal(size=50) * 1e-7, 475.0, Unit.GROUND_VELOCITY)
    io.write_timeseries_csv(tmp_path / "x.csv", x)
    y = io.read_timeseries_csv(tmp_path / "x.csv")
    assert y.sample_rate == 475.0
    assert np.array_equal(x.samples, y.samples)
    assert (tmp_path / "x.csv").read_text().startswith("time_s,value\n")


def test_wav_round_trip(tmp_path):
    codes = TimeSeries([0, 1, 32768, 65535], 475.0, Unit.ADC_CODE)
    io.write_adc_wav(tmp_path / "c.wav", codes)
    back = io.read_adc_wav(tmp_path / "c.wav")
    assert back.unit is Unit.ADC_CODE and back.sample_rate == 475.0
    assert back.samples.tolist() == [0, 1, 32768, 65535]
    with pytest.raises(UnitMismatchError):
        io.write_adc_wav(tmp_path / "v.wav", TimeSeries([0.0], 475.0, Unit.VOLTS))
    with pytest.raises(RangeError):
        io.write_adc_wav(tmp_path / "r.wav", TimeSeries([70000], 475.0, Unit.ADC_CODE))


def _spec(rng, scale=Scale.POWER):
    s = stft_spectrogram(TimeSeries(rng.normal(size=1000), 475.0), 250.0)
    return to_decibel(s) if scale is Scale.DECIBEL else s


@pytest.mark.parametrize("scale", list(Scale))
def test_spg_round_trip_keeps_scale_tag(tmp_path, rng, scale):
    s = _spec(rng, scale)
    io.write_spg(tmp_path / "s.spg", s)
    back = io.read_spg(tmp_path / "s.spg")
    assert back.scale is scale
    assert np.array_equal(back.values, s.values)
    assert (back.frame_len, back.hop, back.n_fft, back.sample_rate) == (119, 59, 128, 475.0)


def test_spg_layout(rng):
    s = _spec(rng)
    buf = io.spectrogram_to_bytes(s)
    assert buf[:4] == b"SPG1"
    rows, cols = struct.unpack_from("<II", buf, 4)
    assert (rows, cols) == s.shape
    first = struct.unpack_from("<d", buf, 12)[0]
    assert first == s.values[0, 0]


def test_untagged_spg_defaults_to_power_with_warning(rng):
    buf = io.spectrogram_to_bytes(_spec(rng))
    plain = buf[: buf.index(b"TAG1")]
    with pytest.warns(RuntimeWarning):
        s = io.spectrogram_from_bytes(plain)
    assert s.scale is Scale.POWER


def test_spectrogram_csv_round_trip(tmp_path, rng):
    s = _spec(rng)
    io.write_spectrogram_csv(tmp_path / "s.csv", s)
    back = io.read_spectrogram_csv(tmp_path / "s.csv")
    assert np.array_equal(back.values, s.values)
    assert np.array_equal(back.bin_freqs, s.bin_freqs)


def test_features_csv_round_trip(tmp_path):
    rows = [FeatureVector(FeatureKind.SED, [1.5, 2.5], "rumble", "a"),
            FeatureVector(FeatureKind.SED, [0.1, 1e-300], "background", "b")]
    io.write_features_csv(tmp_path / "f.csv", rows)
    back = io.read_features_csv(tmp_path / "f.csv")
    for a, b in zip(rows, back):
        assert (a.kind, a.label, a.source_id) == (b.kind, b.label, b.source_id)
        assert np.array_equal(a.values, b.values)


def test_model_json_round_trip(tmp_path, rng):
    data = Dataset.from_arrays(rng.normal(size=(20, 3)), [1, -1] * 10)
    for model in (train_ridge(data), train_tree(data)):
        io.write_model_json(tmp_path / "m.json", model)
        back = io.read_model_json(tmp_path / "m.json")
        assert np.array_equal(back.predict(data.X), model.predict(data.X))


def test_png_is_valid(tmp_path, rng):
    io.write_spectrogram_png(tmp_path / "s.png", _spec(rng))
    raw = (tmp_path / "s.png").read_bytes()
    assert raw[:8] == b"\x89PNG\r\n\x1a\n"
    w, h = struct.unpack(">II", raw[16:24])
    idat_len = struct.unpack(">I", raw[33:37])[0]
    pixels = zlib.decompress(raw[41:41 + idat_len])
    assert len(pixels) == h * (w + 1)


# -- config ----------------------------------------------------------------

def test_default_config_round_trip(tmp_path):
    cfg = PipelineConfig()
    (tmp_path / "c.json").write_text(json.dumps(cfg.to_dict()))
    assert load_config(tmp_path / "c.json") == cfg
    assert cfg.stft.frame_ms == 250.0
    assert cfg.enhancement.deltas == (5.0, 2.0, -2.0, -5.0)


@pytest.mark.parametrize("doc", [
    {"nonsense": {}},
    {"training": {"algorithm": "ridge", "lr": 1}},
    {"frontend": {"gain": 2}},
    {"training": {"algorithm": "lgbm"}},
    {"training": {"split": "half"}},
    {"enhancement": {"deltas": [1, 2]}},
])
def test_invalid_configs_are_rejected(doc):
    with pytest.raises(ConfigError):
        PipelineConfig.from_dict(doc)


def test_overrides_win_over_file():
    cfg = PipelineConfig.from_dict({"training": {"alpha": 2.0, "seed": 1}})
    out = apply_overrides(cfg, ["training.alpha=0.5", "stft.overlap=0.25"], seed=9)
    assert out.training.alpha == 0.5 and out.stft.overlap == 0.25 and out.seed == 9
    with pytest.raises(ConfigError):
        apply_overrides(cfg, ["alpha=3"])
