"""Exception hierarchy for measurement failures."""

from __future__ import annotations


class EnergyError(Exception):
    """Base class for all errors raised by this package."""


class CorruptCounterError(EnergyError):
    """A raw counter value exceeded the channel's declared range."""


class UnknownChannelError(EnergyError):
    """A read was requested for a channel the probe never discovered."""


class ProbeReadError(EnergyError):
    """A backend read failed (permission, driver error, malformed file)."""


class ParseError(EnergyError):
    """A backend file had contents that could not be interpreted."""


class UnsupportedHostError(EnergyError):
    """The host lacks a usable CPU energy interface.

    Carries the support report that explains why.
    """

    def __init__(self, report) -> None:
        super().__init__(report.message)
        self.report = report


class LifecycleError(EnergyError):
    """A tracker operation was called in the wrong state."""


class NothingMeasuredError(EnergyError):
    """calculate_energy was called before any interval was closed."""


class SchemaError(EnergyError):
    """CSV data did not match the expected column schema."""


class ZeroVarianceError(EnergyError):
    """All paired differences were zero; the signed-rank test is undefined."""


class RepetitionError(EnergyError):
    """The measured task failed partway through a repetition series.

    ``completed`` holds the measurements recorded before the failure.
    """

    def __init__(self, message: str, completed) -> None:
        super().__init__(message)
        self.completed = list(completed)
