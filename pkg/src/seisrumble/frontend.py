"""Software model of the geophone acquisition chain.

Signal path: geophone -> instrumentation amplifier -> Butterworth bandpass
-> variable-gain amplifier with DC clamp and clip -> 16-bit ADC.
The analog stages are represented by digital equivalents obtained with the
bilinear transform, so the frequency response matches the circuit while
component values are not modelled.
"""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import ConfigError, RangeError
from .signals import TimeSeries, Unit

TOTAL_GAIN_RANGE = (3000.0, 6000.0)
DEFAULT_STAGE1_GAIN = 500.0


@dataclass(frozen=True)
class FrontEndConfig:
    geophone_sensitivity: float = 80.0  # V/(m/s)
    geophone_natural_freq: float = 5.0
    geophone_damping: float = 0.7
    gain_stage1: float = DEFAULT_STAGE1_GAIN
    gain_stage2: float = 6.0
    band_low: float = 5.0
    band_high: float = 150.0
    filter_order: int = 3
    adc_bits: int = 16
    adc_vref: float = 3.3
    sample_rate: float = 475.0
    dc_offset: float | None = None

    def __post_init__(self):
        if self.dc_offset is None:
            object.__setattr__(self, "dc_offset", self.adc_vref / 2.0)
        if not self.sample_rate > 0:
            raise ConfigError("sample_rate must be positive")
        if not 0 < self.band_low < self.band_high < self.sample_rate / 2:
            raise ConfigError(
                f"need 0 < band_low < band_high < fs/2, got {self.band_low}, "
                f"{self.band_high}, fs={self.sample_rate}")
        if int(self.adc_bits) != self.adc_bits or self.adc_bits < 1:
            raise ConfigError("adc_bits must be an integer >= 1")
        if int(self.filter_order) != self.filter_order or self.filter_order < 1:
            raise ConfigError("filter_order must be an integer >= 1")
        for name in ("geophone_sensitivity", "gain_stage1", "gain_stage2", "adc_vref",
                     "geophone_natural_freq", "geophone_damping"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not self.geophone_natural_freq < self.sample_rate / 2:
            raise ConfigError("geophone_natural_freq must be below Nyquist")
        lo, hi = TOTAL_GAIN_RANGE
        if self.gain_stage1 == DEFAULT_STAGE1_GAIN and not lo <= self.total_gain <= hi:
            raise ConfigError(
                f"total gain {self.total_gain:g} outside [{lo:g}, {hi:g}] "
                f"with the default first-stage gain")

    @property
    def total_gain(self) -> float:
        return self.gain_stage1 * self.gain_stage2

    @classmethod
    def from_dict(cls, data: dict) -> "FrontEndConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown frontend config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


# -- filter design ---------------------------------------------------------

def _prewarp(freq: float, fs: float) -> float:
    return 2.0 * fs * np.tan(np.pi * freq / fs)


def geophone_sos(cfg: FrontEndConfig) -> np.ndarray:
    """Second-order high-pass modelling the proof-mass resonance.

    H(s) = s^2 / (s^2 + 2*zeta*w0*s + w0^2), discretized by the bilinear
    transform with prewarping at the natural frequency.
    """
    fs = cfg.sample_rate
    k = 2.0 * fs
    w0 = _prewarp(cfg.geophone_natural_freq, fs)
    zeta = cfg.geophone_damping
    a0 = k * k + 2.0 * zeta * w0 * k + w0 * w0
    a1 = -2.0 * k * k + 2.0 * w0 * w0
    a2 = k * k - 2.0 * zeta * w0 * k + w0 * w0
    g = k * k / a0
    return np.array([[g, -2.0 * g, g, 1.0, a1 / a0, a2 / a0]])


def butterworth_bandpass_sos(cfg: FrontEndConfig) -> np.ndarray:
    """Design the digital Butterworth bandpass as second-order sections.

    The order-N lowpass prototype is mapped to a bandpass between the
    prewarped edges, then discretized by the bilinear transform, so the
    -3 dB points land exactly on ``band_low`` and ``band_high``.
    """
    fs = cfg.sample_rate
    n = int(cfg.filter_order)
    w_lo = _prewarp(cfg.band_low, fs)
    w_hi = _prewarp(cfg.band_high, fs)
    bw = w_hi - w_lo
    w0 = np.sqrt(w_lo * w_hi)

    proto = np.exp(1j * np.pi * (2 * np.arange(n) + n + 1) / (2 * n))
    analog = []
    for p in proto:
        half = p * bw / 2.0
        disc = np.sqrt(half * half - w0 * w0 + 0j)
        analog.extend([half + disc, half - disc])
    analog = np.asarray(analog)
    k = 2.0 * fs
    poles = (k + analog) / (k - analog)

    sections = []
    for a in _pair_poles(poles):
        sections.append([1.0, 0.0, -1.0, 1.0, a[0], a[1]])
    sos = np.asarray(sections, dtype=np.float64)

    w_center = 2.0 * np.arctan(w0 / k)
    gain = np.abs(sos_response(sos, np.array([w_center])))[0]
    sos[0, :3] /= gain
    return sos


def _pair_poles(poles: np.ndarray) -> list[tuple[float, float]]:
    """Group digital poles into real quadratic denominators (a1, a2)."""
    tol = 1e-10
    upper = sorted((p for p in poles if p.imag > tol), key=lambda p: (abs(p), p.real))
    reals = sorted(p.real for p in poles if abs(p.imag) <= tol)
    pairs = [(-2.0 * p.real, abs(p) ** 2) for p in upper]
    if len(reals) % 2:
        raise ConfigError("odd number of real poles; filter order unsupported")
    for r1, r2 in zip(reals[0::2], reals[1::2]):
        pairs.append((-(r1 + r2), r1 * r2))
    return pairs


def sos_response(sos: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Complex response of a biquad cascade at normalized frequencies w (rad/sample)."""
    z1 = np.exp(-1j * np.asarray(w, dtype=np.float64))
    z2 = z1 * z1
    h = np.ones_like(z1)
    for b0, b1, b2, a0, a1, a2 in sos:
        h = h * (b0 + b1 * z1 + b2 * z2) / (a0 + a1 * z1 + a2 * z2)
    return h


def magnitude_db(sos: np.ndarray, freqs_hz, fs: float) -> np.ndarray:
    w = 2.0 * np.pi * np.asarray(freqs_hz, dtype=np.float64) / fs
    return 20.0 * np.log10(np.abs(sos_response(sos, w)))


# -- chain stages ----------------------------------------------------------

def _check_rate(x: TimeSeries, cfg: FrontEndConfig) -> None:
    if abs(x.sample_rate - cfg.sample_rate) > 1e-9 * cfg.sample_rate:
        raise ConfigError(
            f"signal sampled at {x.sample_rate} Hz, config expects {cfg.sample_rate} Hz")


def geophone_transduce(ground_velocity: TimeSeries, cfg: FrontEndConfig) -> TimeSeries:
    """Convert vertical ground velocity (m/s) to geophone coil voltage."""
    ground_velocity.require_unit(Unit.GROUND_VELOCITY)
    _check_rate(ground_velocity, cfg)
    volts = ground_velocity.samples * cfg.geophone_sensitivity
    out = kernels.sosfilt(geophone_sos(cfg), volts)
    return ground_velocity.with_samples(out, Unit.VOLTS)


def amplify_stage1(x: TimeSeries, cfg: FrontEndConfig) -> TimeSeries:
    """Instrumentation amplifier (fixed gain, default 500)."""
    x.require_unit(Unit.VOLTS)
    return x.with_samples(x.samples * cfg.gain_stage1)


def butterworth_bandpass(x: TimeSeries, cfg: FrontEndConfig) -> TimeSeries:
    x.require_unit(Unit.VOLTS)
    _check_rate(x, cfg)
    return x.with_samples(kernels.sosfilt(butterworth_bandpass_sos(cfg), x.samples))


def amplify_clip_clamp(x: TimeSeries, cfg: FrontEndConfig) -> TimeSeries:
    """Variable-gain stage, DC clamp to mid-rail, and clip to [0, vref]."""
    x.require_unit(Unit.VOLTS)
    shifted = x.samples * cfg.gain_stage2 + cfg.dc_offset
    return x.with_samples(np.clip(shifted, 0.0, cfg.adc_vref))


def adc_quantize(x: TimeSeries, cfg: FrontEndConfig) -> TimeSeries:
    """Quantize volts to integer codes, rounding half up."""
    x.require_unit(Unit.VOLTS)
    v = x.samples
    if v.size and (v.min() < 0.0 or v.max() > cfg.adc_vref):
        raise RangeError(
            f"ADC input outside [0, {cfg.adc_vref}] V; is the clip stage missing?")
    full_scale = 2 ** int(cfg.adc_bits) - 1
    codes = np.floor(v / cfg.adc_vref * full_scale + 0.5)
    codes = np.clip(codes, 0, full_scale)
    return x.with_samples(codes, Unit.ADC_CODE)


def adc_sensitivity(cfg: FrontEndConfig) -> float:
    """Volts per ADC code step."""
    return cfg.adc_vref / (2 ** int(cfg.adc_bits) - 1)


def system_sensitivity(cfg: FrontEndConfig, total_gain: float | None = None) -> float:
    """Ground velocity (m/s) corresponding to one ADC code step."""
    g = cfg.total_gain if total_gain is None else total_gain
    if not g > 0:
        raise ConfigError(f"total gain must be positive, got {g}")
    return adc_sensitivity(cfg) / (g * cfg.geophone_sensitivity)


@dataclass(frozen=True)
class FrontEndResult:
    codes: TimeSeries
    clip_fraction: float


def run_frontend(ground_velocity: TimeSeries, cfg: FrontEndConfig) -> FrontEndResult:
    """Full chain: transduce -> amplify -> bandpass -> gain/clamp/clip -> ADC."""
    v = geophone_transduce(ground_velocity, cfg)
    v = amplify_stage1(v, cfg)
    v = butterworth_bandpass(v, cfg)
    pre_clip = v.samples * cfg.gain_stage2 + cfg.dc_offset
    clipped = float(np.mean((pre_clip < 0.0) | (pre_clip > cfg.adc_vref))) if len(v) else 0.0
    if clipped > 0.01:
        warnings.warn(f"{clipped:.1%} of samples clipped at the ADC input", RuntimeWarning,
                      stacklevel=2)
    v = amplify_clip_clamp(v, cfg)
    return FrontEndResult(adc_quantize(v, cfg), clipped)


def codes_to_signal(codes: TimeSeries) -> TimeSeries:
    """Remove the mid-rail offset from ADC codes for spectral analysis."""
    codes.require_unit(Unit.ADC_CODE)
    x = codes.samples - codes.samples.mean() if len(codes) else codes.samples
    return codes.with_samples(x, Unit.DIMENSIONLESS)
