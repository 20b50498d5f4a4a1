"""File formats: time-series CSV/WAV, spectrogram CSV/SPG1, feature CSV, model JSON, PNG."""

from __future__ import annotations

import csv
import json
import struct
import warnings
import wave
import zlib
from pathlib import Path

import numpy as np

from .dsp import Scale, Spectrogram
from .errors import RangeError, SizeError
from .features import FeatureKind, FeatureVector
from .signals import TimeSeries, Unit

SPG_MAGIC = b"SPG1"
SPG_TRAILER = b"TAG1"
_SCALE_CODES = {Scale.POWER: 0, Scale.DECIBEL: 1}
ADC_MIDSCALE = 32768


def _num(v: float) -> str:
    return repr(float(v))


# -- time series -----------------------------------------------------------

def write_timeseries_csv(path, x: TimeSeries) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time_s", "value"])
        for t, v in zip(x.times, x.samples):
            w.writerow([_num(t), _num(v)])


def read_timeseries_csv(path, unit: Unit = Unit.GROUND_VELOCITY,
                        sample_rate: float | None = None) -> TimeSeries:
    """Read a (time_s, value) CSV; the rate is inferred from the time column."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0][:2]] != ["time_s", "value"]:
        raise ValueError(f"{path}: expected header 'time_s,value'")
    data = np.array([[float(r[0]), float(r[1])] for r in rows[1:] if r], dtype=np.float64)
    if data.shape[0] < 2 and sample_rate is None:
        raise SizeError(f"{path}: need >= 2 rows to infer the sample rate")
    if sample_rate is None:
        dt = np.diff(data[:, 0])
        sample_rate = 1.0 / float(np.median(dt))
        if np.any(np.abs(dt - 1.0 / sample_rate) > 1e-6 / sample_rate):
            raise ValueError(f"{path}: time column is not uniformly sampled")
        sample_rate = float(round(sample_rate, 6))
    return TimeSeries(data[:, 1], sample_rate, unit)


def write_adc_wav(path, codes: TimeSeries) -> None:
    """16-bit little-endian PCM; unsigned codes are stored offset by -32768."""
    codes.require_unit(Unit.ADC_CODE)
    c = codes.samples
    if c.size and (c.min() < 0 or c.max() > 65535 or np.any(c != np.round(c))):
        raise RangeError("ADC codes must be integers in [0, 65535] for 16-bit WAV")
    pcm = (c.astype(np.int64) - ADC_MIDSCALE).astype("<i2")
    rate = int(round(codes.sample_rate))
    if abs(rate - codes.sample_rate) > 1e-9:
        raise ValueError("WAV needs an integer sample rate")
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(rate)
        wf.writeframes(pcm.tobytes())


def read_adc_wav(path) -> TimeSeries:
    with wave.open(str(path), "rb") as wf:
        if wf.getnchannels() != 1 or wf.getsampwidth() != 2:
            raise ValueError(f"{path}: expected mono 16-bit PCM")
        rate = wf.getframerate()
        pcm = np.frombuffer(wf.readframes(wf.getnframes()), dtype="<i2")
    return TimeSeries(pcm.astype(np.int64) + ADC_MIDSCALE, rate, Unit.ADC_CODE)


def read_signal(path, unit: Unit = Unit.GROUND_VELOCITY) -> TimeSeries:
    """WAV files are ADC codes; CSV files carry ``unit``."""
    path = Path(path)
    if path.suffix.lower() == ".wav":
        return read_adc_wav(path)
    return read_timeseries_csv(path, unit)


# -- spectrograms ----------------------------------------------------------

def write_spectrogram_csv(path, s: Spectrogram) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time_s"] + [_num(f) for f in s.bin_freqs])
        for t, row in zip(s.frame_times, s.values):
            w.writerow([_num(t)] + [_num(v) for v in row])


def read_spectrogram_csv(path, scale: Scale = Scale.POWER) -> Spectrogram:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    freqs = np.array([float(v) for v in rows[0][1:]])
    body = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=np.float64)
    body = body.reshape(-1, freqs.size + 1)
    return Spectrogram(body[:, 1:], body[:, 0], freqs, scale)


def spectrogram_to_bytes(s: Spectrogram) -> bytes:
    """SPG1 layout plus a metadata trailer carrying the scale tag.

    magic "SPG1", u32 rows, u32 cols, f64 values (row-major), f64 frame
    times, f64 bin frequencies, then "TAG1", u8 scale (0 power, 1 dB),
    3 pad bytes, u32 frame_len, u32 hop, u32 n_fft, f64 sample_rate.
    All little-endian.
    """
    rows, cols = s.shape
    parts = [
        SPG_MAGIC,
        struct.pack("<II", rows, cols),
        np.ascontiguousarray(s.values, dtype="<f8").tobytes(),
        np.ascontiguousarray(s.frame_times, dtype="<f8").tobytes(),
        np.ascontiguousarray(s.bin_freqs, dtype="<f8").tobytes(),
        SPG_TRAILER,
        struct.pack("<B3xIIId", _SCALE_CODES[s.scale], s.frame_len, s.hop, s.n_fft,
                    s.sample_rate),
    ]
    return b"".join(parts)


def spectrogram_from_bytes(buf: bytes) -> Spectrogram:
    if buf[:4] != SPG_MAGIC:
        raise ValueError("not an SPG1 spectrogram (bad magic)")
    rows, cols = struct.unpack_from("<II", buf, 4)
    off = 12
    need = off + 8 * (rows * cols + rows + cols)
    if len(buf) < need:
        raise SizeError("truncated SPG1 payload")
    vals = np.frombuffer(buf, "<f8", rows * cols, off).reshape(rows, cols)
    off += 8 * rows * cols
    times = np.frombuffer(buf, "<f8", rows, off)
    off += 8 * rows
    freqs = np.frombuffer(buf, "<f8", cols, off)
    off += 8 * cols
    scale, frame_len, hop, n_fft, fs = Scale.POWER, 0, 0, 0, 0.0
    if buf[off:off + 4] == SPG_TRAILER:
        code, frame_len, hop, n_fft, fs = struct.unpack_from("<B3xIIId", buf, off + 4)
        scale = {v: k for k, v in _SCALE_CODES.items()}[code]
    else:
        warnings.warn("SPG1 file has no scale tag; assuming power", RuntimeWarning, stacklevel=2)
    return Spectrogram(vals, times, freqs, scale, frame_len, hop, n_fft, fs)


def write_spg(path, s: Spectrogram) -> None:
    Path(path).write_bytes(spectrogram_to_bytes(s))


def read_spg(path) -> Spectrogram:
    return spectrogram_from_bytes(Path(path).read_bytes())


def read_spectrogram(path, scale: Scale = Scale.POWER) -> Spectrogram:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_spectrogram_csv(path, scale)
    return read_spg(path)


# -- features --------------------------------------------------------------

def write_features_csv(path, rows) -> None:
    rows = list(rows)
    n = rows[0].values.shape[0] if rows else 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "source_id", "label"] + [f"v{i}" for i in range(n)])
        for r in rows:
            w.writerow([r.kind.value, r.source_id, r.label.value] + [_num(v) for v in r.values])


def read_features_csv(path) -> list[FeatureVector]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:3] != ["kind", "source_id", "label"]:
            raise ValueError(f"{path}: expected header 'kind,source_id,label,v0..'")
        return [FeatureVector(FeatureKind(r[0]), [float(v) for v in r[3:]], r[2], r[1])
                for r in reader if r]


# -- models ----------------------------------------------------------------

def write_model_json(path, model) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n")


def read_model_json(path):
    from .classifiers import model_from_dict

    return model_from_dict(json.loads(Path(path).read_text()))


# -- PNG -------------------------------------------------------------------

def _png_chunk(tag: bytes, data: bytes) -> bytes:
    crc = zlib.crc32(tag + data) & 0xFFFFFFFF
    return struct.pack(">I", len(data)) + tag + data + struct.pack(">I", crc)


def matrix_to_png(m: np.ndarray) -> bytes:
    """8-bit grayscale PNG with min-max normalization."""
    m = np.asarray(m, dtype=np.float64)
    lo, hi = float(m.min()), float(m.max())
    scaled = np.zeros_like(m) if hi == lo else (m - lo) / (hi - lo)
    img = np.round(scaled * 255.0).astype(np.uint8)
    h, w = img.shape
    raw = b"".join(b"\x00" + img[r].tobytes() for r in range(h))
    return (b"\x89PNG\r\n\x1a\n"
            + _png_chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, 0, 0, 0, 0))
            + _png_chunk(b"IDAT", zlib.compress(raw, 9))
            + _png_chunk(b"IEND", b""))


def write_spectrogram_png(path, s: Spectrogram) -> None:
    """Time runs left to right, frequency bottom to top."""
    Path(path).write_bytes(matrix_to_png(s.values.T[::-1]))
