"""Exception hierarchy shared by every stage of the toolkit."""


class SeisRumbleError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(SeisRumbleError, ValueError):
    """Invalid configuration value or combination."""


class UnitMismatchError(SeisRumbleError, ValueError):
    """A signal carries a different physical unit than the stage expects."""


class ScaleError(SeisRumbleError, ValueError):
    """A spectrogram carries the wrong scale tag (power vs decibel)."""


class SizeError(SeisRumbleError, ValueError):
    """Input too short, too small, or with mismatched dimensions."""


class RangeError(SeisRumbleError, ValueError):
    """Value outside the range a stage can accept."""


class DomainError(SeisRumbleError, ValueError):
    """Argument outside the mathematical domain of a function."""


class DegenerateSignalError(SeisRumbleError, ArithmeticError):
    """Statistic undefined for the given signal (e.g. zero variance)."""


class NumericError(SeisRumbleError, ArithmeticError):
    """Numerical failure such as a singular linear system."""


class DataError(SeisRumbleError, ValueError):
    """Dataset unusable for the requested operation."""


class SpecError(SeisRumbleError, ValueError):
    """Synthetic signal specification violates its constraints."""
