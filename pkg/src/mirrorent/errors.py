"""Exception types shared across the package."""


class MirrorEntError(Exception):
    """Base class for all package-specific errors."""


class DegreeCapError(MirrorEntError, ValueError):
    """Polynomial degree exceeded the supported cap."""


class FactorizationError(MirrorEntError, ValueError):
    """Spectral factorization failed (real-axis roots, bad symmetry, ...)."""


class ProjectionError(MirrorEntError, ValueError):
    """Causal/anticausal projection failed (non-proper input, axis poles)."""


class IntegrationError(MirrorEntError, RuntimeError):
    """Moment integral failed to converge to the requested tolerance."""


class NoStabilizingSolution(MirrorEntError, RuntimeError):
    """The steady-state Riccati equation has no stabilizing solution."""


class PhysicalityError(MirrorEntError, ValueError):
    """A covariance matrix violates the Heisenberg bound; upstream bug."""


class ThresholdNotFound(MirrorEntError, RuntimeError):
    """No entanglement threshold inside the searched ratio range."""


class ConfigError(MirrorEntError, ValueError):
    """Invalid run configuration (unknown/missing/ill-typed keys)."""
