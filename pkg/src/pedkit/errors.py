"""Exception hierarchy shared across the package."""


class PedkitError(Exception):
    """Base class for every error raised by this package."""


class InvalidDistributionError(PedkitError, ValueError):
    """A probability mass function violates its contract."""


class DistributionFormatError(PedkitError, ValueError):
    """A distribution text file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidSourceError(PedkitError, ValueError):
    """A source (variable subset) is malformed, out of range, or unsupported."""


class UndefinedSurprisalError(PedkitError, ValueError):
    """Surprisal was requested for a zero-probability outcome."""


class LatticeError(PedkitError, ValueError):
    """Lattice construction, parsing, or node lookup failed."""


class IpfConvergenceError(PedkitError, RuntimeError):
    """Iterative proportional fitting hit its cycle cap before converging.

    The partial fitting report is attached as ``report``.
    """

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report
