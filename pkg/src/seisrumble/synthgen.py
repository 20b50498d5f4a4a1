"""Deterministic synthetic ground-velocity data with ground-truth labels.

Rumbles are harmonic stacks around a ~20 Hz fundamental following a
piecewise-linear frequency contour. Background segments are 1/f-shaped
ambient noise with optional broadband footfall-like transients.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SpecError
from .features import Label
from .frontend import FrontEndConfig, run_frontend
from .io import write_adc_wav, write_timeseries_csv
from .signals import TimeSeries, Unit

BAND_LIMIT_HZ = 150.0
SAMPLE_RATE = 475.0


@dataclass(frozen=True)
class RumbleSpec:
    fundamental: float = 20.0
    n_harmonics: int = 3
    duration: float = 6.0
    freq_contour: tuple = ((0.0, 0.0),)  # (time_s, Hz offset) breakpoints
    amplitude: float = 1e-6  # m/s, fundamental
    snr_db: float = float("inf")
    seed: int = 0
    noise_std: float | None = None  # overrides snr_db when set
    sample_rate: float = SAMPLE_RATE
    ramp_s: float = 0.1

    def __post_init__(self):
        if not self.duration > 0:
            raise SpecError("duration must be positive")
        if self.n_harmonics < 1 or self.fundamental <= 0:
            raise SpecError("need a positive fundamental and at least one harmonic")
        if self.fundamental * self.n_harmonics > BAND_LIMIT_HZ:
            raise SpecError(f"{self.n_harmonics} harmonics of {self.fundamental} Hz "
                            f"exceed {BAND_LIMIT_HZ} Hz")
        offsets = [o for _, o in self.freq_contour]
        top = (self.fundamental + max(offsets)) * self.n_harmonics
        if top > BAND_LIMIT_HZ:
            raise SpecError(f"contour drives harmonic {self.n_harmonics} to {top:.1f} Hz")
        if self.fundamental + min(offsets) <= 0:
            raise SpecError("contour drives the fundamental to a nonpositive frequency")
        if self.amplitude < 0:
            raise SpecError("amplitude must be nonnegative")

    def to_record(self) -> dict:
        return {
            "fundamental": self.fundamental, "n_harmonics": self.n_harmonics,
            "duration": self.duration, "amplitude": self.amplitude, "snr_db": self.snr_db,
            "seed": self.seed,
            "freq_contour": ";".join(f"{t:g}:{o:g}" for t, o in self.freq_contour),
        }


def _contour(spec: RumbleSpec, t: np.ndarray) -> np.ndarray:
    times = np.array([p[0] for p in spec.freq_contour], dtype=np.float64)
    offs = np.array([p[1] for p in spec.freq_contour], dtype=np.float64)
    order = np.argsort(times, kind="mergesort")
    return spec.fundamental + np.interp(t, times[order], offs[order])


def _onset_envelope(n: int, fs: float, ramp_s: float) -> np.ndarray:
    env = np.ones(n)
    r = min(int(round(ramp_s * fs)), n // 2)
    if r > 0:
        ramp = 0.5 * (1.0 - np.cos(np.pi * np.arange(r) / r))
        env[:r] = ramp
        env[n - r:] = ramp[::-1]
    return env


def clean_rumble(spec: RumbleSpec, rng: np.random.Generator | None = None) -> np.ndarray:
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    fs = spec.sample_rate
    n = int(round(spec.duration * fs))
    t = np.arange(n) / fs
    f_inst = _contour(spec, t)
    base_phase = 2.0 * np.pi * np.cumsum(f_inst) / fs
    phases = rng.uniform(0.0, 2.0 * np.pi, spec.n_harmonics)
    sig = np.zeros(n)
    for h in range(1, spec.n_harmonics + 1):
        sig += (spec.amplitude / h) * np.sin(h * base_phase + phases[h - 1])
    return sig * _onset_envelope(n, fs, spec.ramp_s)


def gen_rumble(spec: RumbleSpec) -> TimeSeries:
    """Harmonic rumble plus white Gaussian noise at ``snr_db`` (or ``noise_std``)."""
    rng = np.random.default_rng(spec.seed)
    sig = clean_rumble(spec, rng)
    if spec.noise_std is not None:
        sigma = float(spec.noise_std)
    elif np.isfinite(spec.snr_db):
        power = float(np.mean(sig * sig))
        sigma = np.sqrt(power / 10.0 ** (spec.snr_db / 10.0))
    else:
        sigma = 0.0
    if sigma > 0:
        sig = sig + rng.normal(0.0, sigma, sig.shape[0])
    return TimeSeries(sig, spec.sample_rate, Unit.GROUND_VELOCITY)


@dataclass(frozen=True)
class NoiseProfile:
    level: float = 1e-7  # rms of the ambient noise, m/s
    exponent: float = 1.0  # power spectrum ~ 1/f^exponent
    n_transients: int = 0
    transient_amplitude: float = 1e-6
    transient_ms: float = 40.0


def colored_noise(n: int, exponent: float, rng: np.random.Generator) -> np.ndarray:
    """Unit-rms Gaussian noise with power spectrum ~ 1/f^exponent."""
    white = rng.normal(size=n)
    spec = np.fft.rfft(white)
    f = np.arange(spec.shape[0], dtype=np.float64)
    shape = np.zeros_like(f)
    shape[1:] = f[1:] ** (-exponent / 2.0)
    out = np.fft.irfft(spec * shape, n)
    rms = np.sqrt(np.mean(out * out))
    return out / rms if rms > 0 else out


def gen_background(duration: float, seed: int, noise_profile: NoiseProfile = NoiseProfile(),
                   sample_rate: float = SAMPLE_RATE) -> TimeSeries:
    """Ambient 1/f noise plus short broadband transients (exponentially decaying bursts)."""
    if not duration > 0:
        raise SpecError("duration must be positive")
    rng = np.random.default_rng(seed)
    n = int(round(duration * sample_rate))
    sig = noise_profile.level * colored_noise(n, noise_profile.exponent, rng)
    width = max(2, int(round(noise_profile.transient_ms / 1000.0 * sample_rate)))
    for _ in range(noise_profile.n_transients):
        start = int(rng.integers(0, max(1, n - width)))
        burst = rng.normal(size=width) * np.exp(-np.arange(width) / (width / 4.0))
        burst *= noise_profile.transient_amplitude / np.max(np.abs(burst))
        end = min(n, start + width)
        sig[start:end] += burst[: end - start]
    return TimeSeries(sig, sample_rate, Unit.GROUND_VELOCITY)


# -- labeled corpus --------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    source_id: str
    label: Label
    velocity: TimeSeries
    codes: TimeSeries
    params: dict = field(default_factory=dict)
    clip_fraction: float = 0.0


MANIFEST_FIELDS = ("source_id", "label", "seed", "fundamental", "n_harmonics", "duration",
                   "amplitude", "snr_db", "freq_contour", "noise_level", "n_transients")


def _harmonic_rms(amplitude: float, n_harmonics: int) -> float:
    return amplitude * np.sqrt(sum(0.5 / h ** 2 for h in range(1, n_harmonics + 1)))


def _draw_rumble(rng: np.random.Generator, seed: int, duration: float, snr_db: float):
    fundamental = float(rng.uniform(15.0, 25.0))
    n_harm = int(rng.integers(2, 5))
    n_points = 4
    times = np.linspace(0.0, duration, n_points)
    limit = BAND_LIMIT_HZ / n_harm - fundamental
    offsets = np.clip(rng.uniform(-3.0, 3.0, n_points), -fundamental + 1.0, limit)
    amplitude = float(np.exp(rng.uniform(np.log(2e-8), np.log(2e-6))))
    spec = RumbleSpec(fundamental, n_harm, duration,
                      tuple((float(t), float(o)) for t, o in zip(times, offsets)),
                      amplitude, float("inf"), seed)
    level = _harmonic_rms(amplitude, n_harm) / 10.0 ** (snr_db / 20.0)
    return spec, level


def _draw_transients(rng: np.random.Generator, level: float) -> tuple[int, float]:
    return int(rng.poisson(1.5)), float(level * rng.uniform(2.0, 5.0))


def gen_labeled_corpus(n_rumbles: int, n_background: int, seed: int = 42,
                       snr_db: float = 10.0, duration: float = 6.0,
                       cfg: FrontEndConfig | None = None, out_dir=None,
                       write_csv: bool = False) -> list[CorpusEntry]:
    """Build a labeled corpus and pass every segment through the front end.

    Rumble segments are a clean rumble plus ambient background whose rms sits
    ``snr_db`` below the rumble; background segments draw their noise level
    from the same distribution. Per-source seeds derive from ``seed``.
    With ``out_dir`` set, writes one WAV of ADC codes per source (and
    optionally a CSV) plus ``manifest.csv``.
    """
    if n_rumbles < 1 or n_background < 1:
        raise SpecError("need at least one rumble and one background segment")
    cfg = cfg or FrontEndConfig()
    seeds = np.random.SeedSequence(seed).generate_state(n_rumbles + n_background).tolist()
    entries = []
    for i, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        is_rumble = i < n_rumbles
        spec, level = _draw_rumble(rng, s, duration, snr_db)
        n_tr, tr_amp = _draw_transients(rng, level)
        profile = NoiseProfile(level=level, n_transients=n_tr, transient_amplitude=tr_amp)
        noise = gen_background(duration, s + 1, profile, cfg.sample_rate)
        record = {"seed": s, "duration": duration, "noise_level": level, "n_transients": n_tr}
        if is_rumble:
            velocity = noise.with_samples(clean_rumble(spec) + noise.samples)
            record.update(spec.to_record())
            record["snr_db"] = snr_db
            source_id, label = f"rumble_{i:03d}", Label.RUMBLE
        else:
            velocity = noise
            source_id, label = f"background_{i - n_rumbles:03d}", Label.BACKGROUND
        result = run_frontend(velocity, cfg)
        entries.append(CorpusEntry(source_id, label, velocity, result.codes, record,
                                   result.clip_fraction))
    if out_dir is not None:
        write_corpus(entries, out_dir, write_csv)
    return entries


def write_corpus(entries, out_dir, write_csv: bool = False) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for e in entries:
        write_adc_wav(out / f"{e.source_id}.wav", e.codes)
        if write_csv:
            write_timeseries_csv(out / f"{e.source_id}.csv", e.codes)
    manifest = out / "manifest.csv"
    with open(manifest, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=MANIFEST_FIELDS, lineterminator="\n",
                           extrasaction="ignore")
        w.writeheader()
        for e in entries:
            row = {k: "" for k in MANIFEST_FIELDS}
            row.update({k: (repr(v) if isinstance(v, float) else v) for k, v in e.params.items()})
            row.update(source_id=e.source_id, label=e.label.value)
            w.writerow(row)
    return manifest


def read_manifest(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
