"""Exception types shared across the package.

The CLI maps these onto its stable exit codes: parameter problems exit 1,
I/O problems exit 2, tolerance/consistency breaches exit 3, malformed
input files exit 4.
"""


class CatcorrError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(CatcorrError, ValueError):
    """Invalid physical parameter, time argument, or configuration value."""


class TruncationError(CatcorrError):
    """Fock-space truncation too small for the requested state."""


class PositivityError(CatcorrError):
    """Eigenvalue or probability below the accepted negativity floor."""


class SupportError(CatcorrError):
    """Evolved state has weight outside the cat-qubit manifold."""


class ResolutionError(CatcorrError):
    """Scan grid too coarse for the requested analysis."""


class FormatError(CatcorrError):
    """Malformed CSV or other structured input."""
