"""Exception hierarchy shared by the library and the CLI."""


class NHJCMError(Exception):
    """Base class for all errors raised by nhjcm."""

    exit_code = 1


class ValidationError(NHJCMError, ValueError):
    """Bad parameters, level indices, grids or sweep specs."""

    exit_code = 2


class NumericalError(NHJCMError, ArithmeticError):
    """A computation could not produce a trustworthy number."""

    exit_code = 3


class DivergenceError(NumericalError):
    """Evaluated exactly at a singular point (e.g. the QFI at an EP)."""


class OutputError(NHJCMError, OSError):
    """Writing results failed; the message carries the path."""

    exit_code = 4
