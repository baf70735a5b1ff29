"""Exception types shared across the package."""


class StokesZerosError(Exception):
    """Base class for all package errors."""


class DomainError(StokesZerosError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class RootFindingError(StokesZerosError):
    """Simultaneous root iteration failed to converge.

    Carries the best iterate so callers can diagnose near-misses.
    """

    def __init__(self, message, best_roots=None, residual=None):
        super().__init__(message)
        self.best_roots = best_roots
        self.residual = residual


class TraceError(StokesZerosError):
    """Trajectory tracing failed; carries the partial polyline."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class StructuralError(StokesZerosError):
    """A Stokes-complex invariant (region census, symmetry, labels) failed."""


class IntegrationError(StokesZerosError):
    """ODE transport could not proceed (step underflow or overflow)."""


class QuadratureError(StokesZerosError):
    """A phase-integral quadrature path could not be routed or resolved."""


class CertificateError(StokesZerosError):
    """A WKB error certificate is unavailable (h below the h0 threshold)."""


class GeometryError(StokesZerosError):
    """A zero-counting rectangle could not be freed of boundary zeros."""
