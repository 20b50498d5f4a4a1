"""Framing, windowing, DFT/STFT spectrograms and db3 wavelet denoising."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ScaleError, SizeError
from .signals import TimeSeries

DB_EPS = 1e-12


class Scale(str, enum.Enum):
    POWER = "power"
    DECIBEL = "decibel"


@dataclass(frozen=True)
class Spectrogram:
    """Time x frequency matrix: rows are frames, columns are frequency bins."""

    values: np.ndarray
    frame_times: np.ndarray
    bin_freqs: np.ndarray
    scale: Scale = Scale.POWER
    frame_len: int = 0
    hop: int = 0
    n_fft: int = 0
    sample_rate: float = 0.0

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.ndim != 2:
            raise SizeError(f"spectrogram values must be 2-D, got shape {vals.shape}")
        times = np.array(self.frame_times, dtype=np.float64, copy=True).reshape(-1)
        freqs = np.array(self.bin_freqs, dtype=np.float64, copy=True).reshape(-1)
        if times.shape[0] != vals.shape[0] or freqs.shape[0] != vals.shape[1]:
            raise SizeError("axis arrays do not match the value matrix")
        if not np.all(np.isfinite(vals)):
            raise ValueError("spectrogram values must be finite")
        if freqs.size > 1 and np.any(np.diff(freqs) <= 0):
            raise ValueError("bin_freqs must be strictly increasing")
        if freqs.size and freqs[0] < 0:
            raise ValueError("bin_freqs must be nonnegative")
        for arr in (vals, times, freqs):
            arr.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "frame_times", times)
        object.__setattr__(self, "bin_freqs", freqs)
        object.__setattr__(self, "scale", Scale(self.scale))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def replace(self, values, scale: Scale | None = None) -> "Spectrogram":
        return Spectrogram(values, self.frame_times, self.bin_freqs,
                           self.scale if scale is None else scale,
                           self.frame_len, self.hop, self.n_fft, self.sample_rate)

    def require_scale(self, scale: Scale) -> None:
        if self.scale != scale:
            raise ScaleError(f"expected a {scale.value} spectrogram, got {self.scale.value}")


def frame_length(frame_ms: float, sample_rate: float) -> int:
    return int(round(frame_ms / 1000.0 * sample_rate))


def hop_length(frame_len: int, overlap_fraction: float) -> int:
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError(f"overlap_fraction must be in [0, 1), got {overlap_fraction}")
    return max(1, int(np.floor(frame_len * (1.0 - overlap_fraction) + 1e-9)))


def frame_signal(x: TimeSeries, frame_ms: float = 25.0, overlap_fraction: float = 0.5):
    """Split a signal into overlapping frames.

    Returns ``(frames, frame_len, hop)`` where ``frames`` has one row per frame.
    A final partial frame is zero-padded and kept whenever samples remain
    past the last full frame.
    """
    L = frame_length(frame_ms, x.sample_rate)
    if L < 2:
        raise SizeError(f"frame of {frame_ms} ms at {x.sample_rate} Hz has < 2 samples")
    hop = hop_length(L, overlap_fraction)
    n = len(x)
    if n < L:
        raise SizeError(f"signal of {n} samples is shorter than one frame ({L})")
    n_frames = 1 + -(-(n - L) // hop)
    padded = np.zeros((n_frames - 1) * hop + L)
    padded[:n] = x.samples
    idx = np.arange(L)[None, :] + hop * np.arange(n_frames)[:, None]
    return padded[idx], L, hop


def hamming_window(L: int) -> np.ndarray:
    if L < 2:
        raise SizeError("Hamming window needs at least 2 samples")
    n = np.arange(L)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * n / (L - 1))


def next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def dft_magnitude(frame, n_fft: int | None = None) -> np.ndarray:
    """|X(k)| for k = 0..N-1.

    The frame is zero-padded to ``n_fft`` (default: next power of two), so
    the effective N is the length of the returned array.
    """
    frame = np.asarray(frame, dtype=np.float64)
    N = next_pow2(frame.shape[-1]) if n_fft is None else int(n_fft)
    if N < frame.shape[-1]:
        raise SizeError(f"n_fft={N} shorter than frame length {frame.shape[-1]}")
    return np.abs(np.fft.fft(frame, n=N, axis=-1))


def stft_spectrogram(x: TimeSeries, frame_ms: float = 25.0, overlap_fraction: float = 0.5,
                     n_fft: int | None = None) -> Spectrogram:
    """One-sided power spectrogram of Hamming-windowed frames."""
    frames, L, hop = frame_signal(x, frame_ms, overlap_fraction)
    N = next_pow2(L) if n_fft is None else int(n_fft)
    windowed = frames * hamming_window(L)
    mag = dft_magnitude(windowed, N)[:, : N // 2 + 1]
    times = (np.arange(frames.shape[0]) * hop + L / 2.0) / x.sample_rate
    freqs = np.arange(N // 2 + 1) * x.sample_rate / N
    return Spectrogram(mag * mag, times, freqs, Scale.POWER, L, hop, N, x.sample_rate)


def to_decibel(s: Spectrogram, floor_db: float = -100.0) -> Spectrogram:
    if s.scale == Scale.DECIBEL:
        raise ScaleError("spectrogram is already in decibels")
    db = np.maximum(10.0 * np.log10(s.values + DB_EPS), floor_db)
    return s.replace(db, Scale.DECIBEL)


# -- Daubechies-3 wavelet --------------------------------------------------

def _db3_filters():
    a = np.sqrt(10.0)
    b = np.sqrt(5.0 + 2.0 * a)
    rec_lo = np.array([1 + a + b, 5 + a + 3 * b, 10 - 2 * a + 2 * b,
                       10 - 2 * a - 2 * b, 5 + a - 3 * b, 1 + a - b]) / (16.0 * np.sqrt(2.0))
    dec_lo = rec_lo[::-1].copy()
    sign = np.array([(-1.0) ** (k + 1) for k in range(6)])
    dec_hi = sign * rec_lo
    rec_hi = dec_hi[::-1].copy()
    return dec_lo, dec_hi, rec_lo, rec_hi


DB3_DEC_LO, DB3_DEC_HI, DB3_REC_LO, DB3_REC_HI = _db3_filters()
DB3_LEN = 6


@dataclass(frozen=True)
class WaveletDecomposition:
    """Pyramidal db3 decomposition.

    ``detail_coeffs[0]`` is the finest level; ``signal_lengths[i]`` is the
    length of the approximation that level ``i + 1`` was computed from.
    """

    approx_coeffs: np.ndarray
    detail_coeffs: list
    levels: int
    signal_lengths: tuple = field(default=())
    wavelet: str = "db3"


def _dwt_step(x: np.ndarray):
    F = DB3_LEN
    n_out = (x.shape[0] + F - 1) // 2
    ext = np.pad(x, F - 1, mode="symmetric")
    lo = np.convolve(ext, DB3_DEC_LO)[F:F + 2 * n_out:2]
    hi = np.convolve(ext, DB3_DEC_HI)[F:F + 2 * n_out:2]
    return lo, hi


def _idwt_step(a: np.ndarray, d: np.ndarray) -> np.ndarray:
    F = DB3_LEN
    n = a.shape[0]
    up_a = np.zeros(2 * n)
    up_a[::2] = a
    up_d = np.zeros(2 * n)
    up_d[::2] = d
    y = np.convolve(up_a, DB3_REC_LO) + np.convolve(up_d, DB3_REC_HI)
    return y[F - 2:F - 2 + 2 * n - F + 2]


def _check_wavelet_length(n: int, levels: int) -> None:
    if levels < 1:
        raise SizeError("levels must be >= 1")
    need = DB3_LEN * 2 ** levels
    if n < need:
        raise SizeError(f"db3 decomposition to {levels} levels needs >= {need} samples, got {n}")


def db3_decompose(x: TimeSeries | np.ndarray, levels: int = 4) -> WaveletDecomposition:
    data = x.samples if isinstance(x, TimeSeries) else np.asarray(x, dtype=np.float64)
    _check_wavelet_length(data.shape[0], levels)
    approx = data
    details = []
    lengths = []
    for _ in range(levels):
        lengths.append(approx.shape[0])
        approx, detail = _dwt_step(approx)
        details.append(detail)
    return WaveletDecomposition(approx, details, levels, tuple(lengths))


def db3_reconstruct(dec: WaveletDecomposition) -> np.ndarray:
    approx = dec.approx_coeffs
    for level in range(dec.levels - 1, -1, -1):
        approx = _idwt_step(approx, dec.detail_coeffs[level])[: dec.signal_lengths[level]]
    return approx


def universal_threshold(finest_detail: np.ndarray, n: int) -> float:
    """Donoho-Johnstone threshold: median(|d1|)/0.6745 * sqrt(2 ln n)."""
    sigma = np.median(np.abs(finest_detail)) / 0.6745
    return float(sigma * np.sqrt(2.0 * np.log(n)))


def soft_threshold(c: np.ndarray, t: float) -> np.ndarray:
    return np.sign(c) * np.maximum(np.abs(c) - t, 0.0)


def db3_denoise(x: TimeSeries, levels: int = 4) -> TimeSeries:
    """Soft-threshold every detail level with the universal threshold."""
    dec = db3_decompose(x, levels)
    t = universal_threshold(dec.detail_coeffs[0], len(x))
    shrunk = WaveletDecomposition(dec.approx_coeffs,
                                  [soft_threshold(d, t) for d in dec.detail_coeffs],
                                  dec.levels, dec.signal_lengths)
    return x.with_samples(db3_reconstruct(shrunk))
