"""Exception hierarchy shared across the package.

Exit-code mapping used by the command line client:
  0  success / property verified
  2  a checked mathematical property was falsified
  3  a guard refused the computation (size, characteristic, precision)
  4  invalid configuration or request
"""


class NilorbError(Exception):
    """Base class for all package errors."""


class InvalidTypeError(NilorbError):
    """Unknown Cartan type label or malformed type request."""

    exit_code = 4


class ConfigError(NilorbError):
    """Malformed request payload, file, or CLI arguments."""

    exit_code = 4


class GuardError(NilorbError):
    """Computation refused: it would exceed a documented size or
    characteristic guard rather than return a wrong answer."""

    exit_code = 3


class BadPrimeError(GuardError):
    """The requested characteristic is too small for the construction
    to be valid (for example a root group whose exponential truncates)."""

    exit_code = 3


class PrecisionError(GuardError):
    """A Laurent-series computation ran out of known coefficients before
    the answer was determined."""

    exit_code = 3


class FalsifiedError(NilorbError):
    """A verification routine found a concrete counterexample to the
    property it was asked to certify."""

    exit_code = 2
