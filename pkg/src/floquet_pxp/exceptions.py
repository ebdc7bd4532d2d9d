"""Exception hierarchy shared across the package."""


class FloquetPXPError(Exception):
    """Base class for all package errors."""


class SizeError(FloquetPXPError, ValueError):
    """A size parameter is out of the supported range."""


class InvalidStateError(FloquetPXPError, ValueError):
    """A pattern or state is incompatible with the blockaded basis."""


class IntegrationError(FloquetPXPError, RuntimeError):
    """Time stepping lost norm or unitarity beyond tolerance."""


class DecompositionError(FloquetPXPError, RuntimeError):
    """The Floquet eigendecomposition failed its reconstruction check."""


class NoArcError(FloquetPXPError, ValueError):
    """Fewer than two dominant Floquet states were found."""


class FitError(FloquetPXPError, ValueError):
    """The least-squares fit could not be performed."""
