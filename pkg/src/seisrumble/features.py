"""MFCC, Hjorth and spectral-energy-distribution feature extractors."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .dsp import (Scale, Spectrogram, db3_denoise, dft_magnitude, frame_signal,
                  hamming_window, stft_spectrogram)
from .errors import ConfigError, DegenerateSignalError, DomainError, SizeError
from .signals import TimeSeries

MFCC_EPS = 1e-10


class FeatureKind(str, enum.Enum):
    MFCC = "mfcc"
    HJORTH = "hjorth"
    SED = "sed"


class Label(str, enum.Enum):
    RUMBLE = "rumble"
    BACKGROUND = "background"


@dataclass(frozen=True)
class FeatureVector:
    kind: FeatureKind
    values: np.ndarray
    label: Label
    source_id: str

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"non-finite feature values for {self.source_id}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "kind", FeatureKind(self.kind))
        object.__setattr__(self, "label", Label(self.label))


# -- mel scale -------------------------------------------------------------

def mel_from_hz(f):
    f = np.asarray(f, dtype=np.float64)
    if np.any(f < 0):
        raise DomainError("frequency must be nonnegative")
    m = 2595.0 * np.log10(1.0 + f / 700.0)
    return float(m) if m.ndim == 0 else m


def hz_from_mel(m):
    m = np.asarray(m, dtype=np.float64)
    f = 700.0 * (10.0 ** (m / 2595.0) - 1.0)
    return float(f) if f.ndim == 0 else f


@dataclass(frozen=True)
class MelFilterBank:
    """Triangular filters on one-sided FFT bins.

    ``points`` holds the M + 2 boundary positions in (fractional) bin units;
    filter m rises from ``points[m]`` to a peak of 2 at ``points[m + 1]`` and
    falls back to zero at ``points[m + 2]``.
    """

    n_filters: int
    n_fft: int
    sample_rate: float
    freq_range: tuple
    points: np.ndarray
    weights: np.ndarray

    @property
    def n_bins(self) -> int:
        return self.weights.shape[1]

    @property
    def center_freqs(self) -> np.ndarray:
        return self.points[1:-1] * self.sample_rate / self.n_fft


def build_mel_filterbank(M: int, n_fft: int, sample_rate: float, f_min: float = 5.0,
                         f_max: float = 150.0) -> MelFilterBank:
    if M < 1:
        raise ConfigError("need at least one mel filter")
    if n_fft < 2:
        raise ConfigError("n_fft must be >= 2")
    if not 0 <= f_min < f_max <= sample_rate / 2:
        raise ConfigError(f"invalid mel range [{f_min}, {f_max}] for fs={sample_rate}")
    mels = np.linspace(mel_from_hz(f_min), mel_from_hz(f_max), M + 2)
    points = hz_from_mel(mels) * n_fft / sample_rate
    k = np.arange(n_fft // 2 + 1, dtype=np.float64)[None, :]
    left = points[:-2, None]
    center = points[1:-1, None]
    right = points[2:, None]
    rising = 2.0 * (k - left) / (center - left)
    falling = 2.0 * (right - k) / (right - center)
    w = np.where((k >= left) & (k <= center), rising,
                 np.where((k > center) & (k <= right), falling, 0.0))
    empty = np.flatnonzero(~np.any(w > 0, axis=1))
    if empty.size:
        warnings.warn(
            f"{empty.size} of {M} mel filters cover no FFT bin (n_fft={n_fft}); "
            f"their outputs are floored at {MFCC_EPS}", RuntimeWarning, stacklevel=2)
    return MelFilterBank(M, int(n_fft), float(sample_rate), (float(f_min), float(f_max)),
                         points, w)


def mel_spectrum(frame_mag, fb: MelFilterBank) -> np.ndarray:
    """s(m) = sum_k |X(k)|^2 H_m(k) over the one-sided bins."""
    mag = np.asarray(frame_mag, dtype=np.float64)
    if mag.shape[-1] != fb.n_bins:
        raise SizeError(f"spectrum has {mag.shape[-1]} bins, filter bank expects {fb.n_bins}")
    return (mag * mag) @ fb.weights.T


def cepstrum(mel_power: np.ndarray, n_coeffs: int) -> np.ndarray:
    """c(n) = sum_m log10(s(m) + eps) cos(pi n (m - 0.5) / M), m = 1..M."""
    M = mel_power.shape[-1]
    if n_coeffs > M:
        raise ConfigError(f"n_coeffs={n_coeffs} exceeds the {M} mel filters")
    m = np.arange(1, M + 1)
    n = np.arange(n_coeffs)
    basis = np.cos(np.pi * n[:, None] * (m[None, :] - 0.5) / M)
    return np.log10(mel_power + MFCC_EPS) @ basis.T


def mfcc(frame, fb: MelFilterBank, n_coeffs: int = 12) -> np.ndarray:
    """MFCCs of one frame (or a stack of frames along the last axis)."""
    frame = np.asarray(frame, dtype=np.float64)
    if n_coeffs > fb.n_filters:
        raise ConfigError(f"n_coeffs={n_coeffs} exceeds the {fb.n_filters} mel filters")
    windowed = frame * hamming_window(frame.shape[-1])
    mag = dft_magnitude(windowed, fb.n_fft)[..., : fb.n_bins]
    return cepstrum(mel_spectrum(mag, fb), n_coeffs)


def mfcc_frames(x: TimeSeries, fb: MelFilterBank, n_coeffs: int = 12,
                frame_ms: float = 25.0, overlap_fraction: float = 0.5) -> np.ndarray:
    frames, _, _ = frame_signal(x, frame_ms, overlap_fraction)
    return mfcc(frames, fb, n_coeffs)


def mfcc_from_spectrogram(s: Spectrogram, fb: MelFilterBank, n_coeffs: int = 12) -> np.ndarray:
    """MFCCs computed from spectrogram rows instead of raw frames.

    Decibel-scaled input is mapped back to power with 10^(v/10).
    """
    power = s.values if s.scale == Scale.POWER else 10.0 ** (s.values / 10.0)
    if power.shape[1] != fb.n_bins:
        raise SizeError(f"spectrogram has {power.shape[1]} bins, filter bank expects {fb.n_bins}")
    return cepstrum(power @ fb.weights.T, n_coeffs)


# -- Hjorth parameters -----------------------------------------------------

def _as_array(x) -> np.ndarray:
    return x.samples if isinstance(x, TimeSeries) else np.asarray(x, dtype=np.float64)


def hjorth_activity(x) -> float:
    x = _as_array(x)
    if x.shape[0] < 2:
        raise SizeError("Hjorth activity needs at least 2 samples")
    return float(np.var(x, ddof=1))


def hjorth_mobility(x) -> float:
    x = _as_array(x)
    if x.shape[0] < 3:
        raise SizeError("Hjorth mobility needs at least 3 samples")
    var_x = np.var(x, ddof=1)
    if var_x == 0:
        raise DegenerateSignalError("mobility undefined for a constant signal")
    return float(np.sqrt(np.var(np.diff(x), ddof=1) / var_x))


def hjorth_complexity(x) -> float:
    x = _as_array(x)
    dx = np.diff(x)
    if dx.shape[0] < 3 or np.var(dx, ddof=1) == 0:
        raise DegenerateSignalError("complexity undefined: first difference has zero variance")
    return hjorth_mobility(dx) / hjorth_mobility(x)


def hjorth(x) -> tuple[float, float, float]:
    """Activity, mobility and complexity (variances use N - 1)."""
    x = _as_array(x)
    if x.shape[0] < 3:
        raise SizeError("Hjorth parameters need at least 3 samples")
    return hjorth_activity(x), hjorth_mobility(x), hjorth_complexity(x)


# -- spectral energy distribution ------------------------------------------

def band_partition(n_bins: int, n_bands: int) -> list[np.ndarray]:
    """Contiguous near-equal bands; leftover bins go to the lowest bands."""
    if n_bins < n_bands:
        raise SizeError(f"{n_bins} frequency bins cannot form {n_bands} bands")
    return np.array_split(np.arange(n_bins), n_bands)


def spectral_energy_distribution(s, n_bands: int = 25) -> np.ndarray:
    """E_k = sum over band k bins and all frames of value^2."""
    v = s.values if isinstance(s, Spectrogram) else np.asarray(s, dtype=np.float64)
    sq = v * v
    return np.array([sq[:, band].sum() for band in band_partition(v.shape[1], n_bands)])


# -- per-segment extraction ------------------------------------------------

@dataclass(frozen=True)
class FeatureParams:
    n_mels: int = 20
    n_coeffs: int = 12
    n_bands: int = 25
    mfcc_frame_ms: float = 25.0
    mfcc_n_fft: int = 64
    overlap: float = 0.5
    spec_frame_ms: float = 250.0
    denoise_levels: int = 4
    f_min: float = 5.0
    f_max: float = 150.0
    mfcc_source: str = "frames"

    def __post_init__(self):
        if self.mfcc_source not in ("frames", "enhanced"):
            raise ConfigError("mfcc_source must be 'frames' or 'enhanced'")


def extract_features(x: TimeSeries, params: FeatureParams = FeatureParams(),
                     kinds=tuple(FeatureKind), enhanced: Spectrogram | None = None,
                     fb: MelFilterBank | None = None) -> dict:
    """Segment-level feature rows keyed by kind.

    The segment is db3-denoised first. MFCCs are reduced to their per-coefficient
    median over frames (robust to short transients), Hjorth parameters use the
    whole segment, SED uses the power STFT.
    """
    clean = db3_denoise(x, params.denoise_levels)
    out = {}
    for kind in map(FeatureKind, kinds):
        if kind is FeatureKind.MFCC:
            if params.mfcc_source == "enhanced":
                if enhanced is None:
                    raise ConfigError("mfcc_source='enhanced' needs an enhanced spectrogram")
                bank = build_mel_filterbank(params.n_mels, enhanced.n_fft, x.sample_rate,
                                            params.f_min, params.f_max)
                coeffs = mfcc_from_spectrogram(enhanced, bank, params.n_coeffs)
            else:
                bank = fb or build_mel_filterbank(params.n_mels, params.mfcc_n_fft,
                                                  x.sample_rate, params.f_min, params.f_max)
                coeffs = mfcc_frames(clean, bank, params.n_coeffs, params.mfcc_frame_ms,
                                     params.overlap)
            out[kind] = np.median(coeffs, axis=0)
        elif kind is FeatureKind.HJORTH:
            out[kind] = np.array(hjorth(clean))
        elif kind is FeatureKind.SED:
            spec = stft_spectrogram(clean, params.spec_frame_ms, params.overlap)
            out[kind] = spectral_energy_distribution(spec, params.n_bands)
    return out
