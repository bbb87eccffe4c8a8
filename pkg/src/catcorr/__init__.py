"""catcorr: correlation dynamics of entangled cat-state modes under photon loss.

Analytic X-state evolution of two dissipating cavity modes, the full
correlation toolbox (mutual information, classical correlations, discord,
concurrence), regime detection, and an independent truncated-Fock-space
oracle that cross-checks every analytic result.
"""

from .correlations import (
    SIGMA_X,
    SIGMA_Z,
    ClassicalCorrelations,
    CorrelationRecord,
    MeasurementBasis,
    clamp_stats,
    classical_correlations,
    concurrence_xstate,
    conditional_entropy,
    correlation_record,
    detect_switch_time,
    discord,
    marginals,
    mutual_information,
    von_neumann_entropy,
    xstate_spectrum,
)
from .errors import (
    CatcorrError,
    FormatError,
    ParameterError,
    PositivityError,
    ResolutionError,
    SupportError,
    TruncationError,
)
from .fock import (
    CatProjection,
    ChannelSpec,
    DensityOperator,
    FockVector,
    VerifyPoint,
    VerifyReport,
    amplitude_damping_kraus,
    apply_channel_both_modes,
    apply_kraus,
    brute_force_classical,
    cat_pair,
    coherent_fock,
    default_truncation,
    fock_channel_xstate,
    initial_density,
    project_to_cat_basis,
    random_xstate,
    verify_grid,
    verify_point,
    wootters_concurrence,
)
from .model import (
    EnvelopeFactors,
    ModelParams,
    RegimeTimes,
    XStateMatrix,
    build_xstate,
    characteristic_times,
    compute_envelopes,
    plateau_xstate,
)
from .scan import (
    PLATEAU_ENTRY_TOL,
    RegimeSegmentation,
    ScanConfig,
    find_sudden_death,
    scan,
    segment_regimes,
)

__version__ = "0.1.0"

__all__ = [
    "SIGMA_X",
    "SIGMA_Z",
    "CatcorrError",
    "CatProjection",
    "ChannelSpec",
    "ClassicalCorrelations",
    "CorrelationRecord",
    "DensityOperator",
    "EnvelopeFactors",
    "FockVector",
    "FormatError",
    "MeasurementBasis",
    "ModelParams",
    "ParameterError",
    "PLATEAU_ENTRY_TOL",
    "PositivityError",
    "RegimeSegmentation",
    "RegimeTimes",
    "ResolutionError",
    "ScanConfig",
    "SupportError",
    "TruncationError",
    "VerifyPoint",
    "VerifyReport",
    "XStateMatrix",
    "amplitude_damping_kraus",
    "apply_channel_both_modes",
    "apply_kraus",
    "brute_force_classical",
    "build_xstate",
    "cat_pair",
    "characteristic_times",
    "clamp_stats",
    "classical_correlations",
    "coherent_fock",
    "compute_envelopes",
    "concurrence_xstate",
    "conditional_entropy",
    "correlation_record",
    "default_truncation",
    "detect_switch_time",
    "discord",
    "find_sudden_death",
    "fock_channel_xstate",
    "initial_density",
    "marginals",
    "mutual_information",
    "plateau_xstate",
    "project_to_cat_basis",
    "random_xstate",
    "scan",
    "segment_regimes",
    "verify_grid",
    "verify_point",
    "von_neumann_entropy",
    "wootters_concurrence",
    "xstate_spectrum",
]
