"""Exception hierarchy for msifield.

Every contract violation raises a subclass of :class:`MsiFieldError`, so
callers (and the CLI) can distinguish computational errors from genuine
bugs with a single ``except`` clause.
"""


class MsiFieldError(Exception):
    """Base class for all msifield errors."""


# --- model / parameter validation -------------------------------------------

class InvalidHurstPrimeError(MsiFieldError):
    """A sheet Hurst exponent lies outside the open interval (0, 1)."""


class InvalidScaleError(MsiFieldError):
    """A scale parameter is not strictly greater than one."""


class LengthMismatchError(MsiFieldError):
    """Sequence lengths are inconsistent with each other."""


# --- lattice transforms ------------------------------------------------------

class OffLatticeError(MsiFieldError):
    """Evaluation point is not on the stored geometric lattice."""


class NonLatticeScaleError(MsiFieldError):
    """Dilation scale is not an integer power of the lattice base."""


# --- simulation --------------------------------------------------------------

class OutOfDomainError(MsiFieldError):
    """Evaluation point lies outside the covariance kernel's domain."""


class FactorizationError(MsiFieldError):
    """Covariance matrix is not positive semidefinite within the jitter budget."""


# --- spectral ----------------------------------------------------------------

class NonRealResidueError(MsiFieldError):
    """A reconstructed covariance table has a non-negligible imaginary part."""


# --- Markov ------------------------------------------------------------------

class ZeroVarianceError(MsiFieldError):
    """A variance entry is zero or negative where a ratio is required."""


class NegativeIndexError(MsiFieldError):
    """A lattice index that must be non-negative is negative."""


# --- estimation --------------------------------------------------------------

class TooShortError(MsiFieldError):
    """Input series or interval is too short for the requested operation."""


class DegenerateIntervalError(MsiFieldError):
    """A breakpoint interval has zero or negative length."""


class InvalidRatioError(MsiFieldError):
    """A variance ratio is not strictly positive."""


class UnitScaleError(MsiFieldError):
    """Scale parameter equals one, so the log-ratio estimator is undefined."""


class ZeroDenominatorError(MsiFieldError):
    """A dyadic difference sum vanished, leaving the estimator undefined."""


# --- prediction --------------------------------------------------------------

class MissingRectangleError(MsiFieldError):
    """A requested rectangle key is absent from the totals table."""


class ZeroActualError(MsiFieldError):
    """An actual value included in a MAPE computation is not positive."""


class EmptySetError(MsiFieldError):
    """The included key set for a MAPE computation is empty."""


# --- I/O ---------------------------------------------------------------------

class RaggedGridError(MsiFieldError):
    """CSV rows have differing lengths."""


class NonNumericError(MsiFieldError):
    """CSV contains a cell that does not parse as a real number."""


class NegativeValueError(MsiFieldError):
    """Grid or series data contains a negative value."""


class OutOfExtentError(MsiFieldError):
    """Breakpoints fall outside the grid extent."""
