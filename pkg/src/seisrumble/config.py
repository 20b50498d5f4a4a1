"""Pipeline configuration: one JSON document, one section per stage.

Unknown keys are rejected at every level. Command-line flags are applied
on top of the file with :func:`apply_overrides`.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .classifiers.harness import SPLITS, TRAINERS
from .errors import ConfigError
from .features import FeatureParams
from .frontend import FrontEndConfig


def _from_dict(cls, data: dict, section: str):
    if not isinstance(data, dict):
        raise ConfigError(f"section {section!r} must be an object")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"bad {section!r} section: {exc}") from exc


@dataclass(frozen=True)
class StftConfig:
    frame_ms: float = 250.0
    overlap: float = 0.5
    n_fft: int | None = None

    def __post_init__(self):
        if not self.frame_ms > 0:
            raise ConfigError("stft.frame_ms must be positive")
        if not 0 <= self.overlap < 1:
            raise ConfigError("stft.overlap must lie in [0, 1)")


@dataclass(frozen=True)
class EnhancementConfig:
    sigma: float = 1.5
    sigma_r: float = 1.5
    blur_sigma: float = 1.0
    deltas: tuple = (5.0, 2.0, -2.0, -5.0)
    eps: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        if len(self.deltas) != 4:
            raise ConfigError("enhancement.deltas needs four values")
        if self.sigma <= 0 or self.sigma_r <= 0 or self.blur_sigma < 0:
            raise ConfigError("enhancement sigmas must be positive")


@dataclass(frozen=True)
class TrainingConfig:
    algorithm: str = "ridge"
    alpha: float = 1.0
    C: float = 1.0
    epochs: int = 300
    step: float = 1.0
    max_depth: int = 4
    split: str = "paper"
    k: int = 5
    seed: int = 42

    def __post_init__(self):
        if self.algorithm not in TRAINERS:
            raise ConfigError(f"training.algorithm must be one of {sorted(TRAINERS)}")
        if self.split not in SPLITS:
            raise ConfigError(f"training.split must be one of {sorted(SPLITS)}")
        if self.k < 2:
            raise ConfigError("training.k must be >= 2")

    def hyperparams(self, algorithm: str | None = None) -> dict:
        algo = algorithm or self.algorithm
        return {
            "ridge": {"alpha": self.alpha},
            "svm_linear": {"C": self.C, "epochs": self.epochs, "step": self.step},
            "logistic": {},
            "tree": {"max_depth": self.max_depth},
        }[algo]


@dataclass(frozen=True)
class SynthConfig:
    n_rumbles: int = 20
    n_background: int = 20
    snr_db: float = 10.0
    duration: float = 6.0


SECTIONS = {
    "frontend": FrontEndConfig,
    "stft": StftConfig,
    "enhancement": EnhancementConfig,
    "features": FeatureParams,
    "training": TrainingConfig,
    "synth": SynthConfig,
}


@dataclass(frozen=True)
class PipelineConfig:
    frontend: FrontEndConfig = field(default_factory=FrontEndConfig)
    stft: StftConfig = field(default_factory=StftConfig)
    enhancement: EnhancementConfig = field(default_factory=EnhancementConfig)
    features: FeatureParams = field(default_factory=FeatureParams)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - set(SECTIONS)
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        return cls(**{name: _from_dict(SECTIONS[name], body, name)
                      for name, body in data.items()})

    def to_dict(self) -> dict:
        out = {}
        for name in SECTIONS:
            d = dataclasses.asdict(getattr(self, name))
            out[name] = {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}
        return out

    @property
    def seed(self) -> int:
        return self.training.seed


def load_config(path=None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return PipelineConfig.from_dict(data)


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(cfg: PipelineConfig, assignments=(), seed: int | None = None) -> PipelineConfig:
    """Apply ``section.key=value`` assignments (JSON values) and a seed."""
    data = cfg.to_dict()
    for item in assignments:
        key, sep, value = item.partition("=")
        section, dot, name = key.partition(".")
        if not sep or not dot:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        if section not in data:
            raise ConfigError(f"unknown config section {section!r}")
        data[section][name] = _parse_value(value)
    if seed is not None:
        data["training"]["seed"] = int(seed)
    return PipelineConfig.from_dict(data)
