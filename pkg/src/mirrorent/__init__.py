"""Conditional quantum states of interferometer test masses under continuous
homodyne measurement, and the entanglement they share.

The pipeline: parameter records (params) -> channel spectra as rational
functions (spectra) -> causal Wiener filtering for the posterior moments
(wiener), cross-checked by a Kalman-Bucy steady state (riccati) -> two-mirror
covariance and logarithmic negativity (entangle) -> optimization over
measurement strengths (optimize).  A CLI (mirrorent) exposes the analyses.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .entangle import (
    TwoModeCovariance,
    assemble,
    ellipse_points,
    log_negativity,
    physicality_check,
)
from .errors import (
    ConfigError,
    DegreeCapError,
    FactorizationError,
    IntegrationError,
    MirrorEntError,
    NoStabilizingSolution,
    PhysicalityError,
    ProjectionError,
    ThresholdNotFound,
)
from .optimize import SweepPoint, max_logneg, sweep, threshold_ratio
from .params import (
    ModeParams,
    PhysicalSetup,
    UnitSystem,
    db_to_relative_psd,
    effective_zetas,
    measurement_strength,
    omega_alpha_from_alpha,
)
from .ratfunc import RationalFunction
from .riccati import StateSpaceModel, care_steady_state, to_state_space
from .spectra import SpectraSet, budget, build_spectra, sql
from .wiener import (
    ConditionalMoments,
    SpectralFactor,
    anticausal_part,
    causal_part,
    conditional_moments,
    conditional_moments_closed,
    conditional_moments_numeric,
    spectral_factorize,
    uncertainty_product,
    wiener_gain,
)

__all__ = [
    "BACKEND",
    "ConditionalMoments",
    "ConfigError",
    "DegreeCapError",
    "FactorizationError",
    "IntegrationError",
    "MirrorEntError",
    "ModeParams",
    "NoStabilizingSolution",
    "PhysicalSetup",
    "PhysicalityError",
    "ProjectionError",
    "RationalFunction",
    "SpectraSet",
    "SpectralFactor",
    "StateSpaceModel",
    "SweepPoint",
    "ThresholdNotFound",
    "TwoModeCovariance",
    "UnitSystem",
    "anticausal_part",
    "assemble",
    "budget",
    "build_spectra",
    "care_steady_state",
    "causal_part",
    "conditional_moments",
    "conditional_moments_closed",
    "conditional_moments_numeric",
    "db_to_relative_psd",
    "effective_zetas",
    "ellipse_points",
    "log_negativity",
    "max_logneg",
    "measurement_strength",
    "omega_alpha_from_alpha",
    "physicality_check",
    "spectral_factorize",
    "sql",
    "sweep",
    "threshold_ratio",
    "to_state_space",
    "uncertainty_product",
    "wiener_gain",
]
