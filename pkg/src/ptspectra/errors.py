"""Exception hierarchy shared across the package.

Everything raised on purpose derives from PtSpectraError so callers
(and the CLI) can separate our diagnostics from genuine bugs.
"""


class PtSpectraError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PtSpectraError, ValueError):
    """Malformed or out-of-contract input (shape, dtype, range)."""


class ConfigError(PtSpectraError, ValueError):
    """Bad run configuration (unknown keys, missing fields)."""


class ConvergenceError(PtSpectraError):
    """An iterative routine failed to meet its tolerance."""


class PairingError(PtSpectraError):
    """Eigenvalues could not be matched into real/conjugate-pair groups."""


class BrokenSymmetryError(PtSpectraError):
    """Operation requires an all-real spectrum but complex pairs exist."""


class DegenerateSpectrumError(PtSpectraError):
    """Operation requires a nondegenerate spectrum."""


class PartitionZeroError(PtSpectraError):
    """Partition function is too close to zero for the requested ratio."""


class SizeCapError(PtSpectraError, ValueError):
    """Requested enumeration exceeds the configured size cap."""


class TruncationError(PtSpectraError):
    """Truncated-basis result did not stabilize within the cutoff budget."""


class CoefficientOverflowError(PtSpectraError, OverflowError):
    """Characteristic-polynomial coefficients overflowed float range."""


class BasisConstructionError(PtSpectraError):
    """A similarity/basis construction failed its validity check."""


class InvariantError(PtSpectraError):
    """A structural self-check (dimension sum rule, symmetry) failed."""
