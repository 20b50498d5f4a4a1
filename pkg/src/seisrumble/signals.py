"""Uniformly sampled signals tagged with a physical unit."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, UnitMismatchError


class Unit(str, enum.Enum):
    GROUND_VELOCITY = "ground_velocity_m_per_s"
    VOLTS = "volts"
    ADC_CODE = "adc_code"
    DIMENSIONLESS = "dimensionless"


@dataclass(frozen=True)
class TimeSeries:
    """A sampled signal.

    ``samples`` is stored as a read-only float64 array (integer ADC codes are
    kept as exact floats) so downstream stages never mutate a shared buffer.
    """

    samples: np.ndarray
    sample_rate: float
    unit: Unit = Unit.DIMENSIONLESS

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise ConfigError("TimeSeries samples must be finite")
        if not self.sample_rate > 0:
            raise ConfigError(f"sample_rate must be positive, got {self.sample_rate}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate", float(self.sample_rate))
        object.__setattr__(self, "unit", Unit(self.unit))

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) / self.sample_rate

    def with_samples(self, samples, unit: Unit | None = None) -> "TimeSeries":
        return TimeSeries(samples, self.sample_rate, self.unit if unit is None else unit)

    def require_unit(self, *units: Unit) -> None:
        if self.unit not in units:
            expected = ", ".join(u.value for u in units)
            raise UnitMismatchError(f"expected unit {expected}, got {self.unit.value}")
