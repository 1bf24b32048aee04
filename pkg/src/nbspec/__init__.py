"""Non-backtracking spectra of Erdős–Rényi graphs and their partly averaged surrogates."""

from .closed_form import (
    BoundsReport,
    H0ClosedForm,
    bounds_report,
    build_Y_X,
    certified_cz,
    condition_number_Y,
    condition_number_from_lambdas,
    cz_case_constants,
    g_eval,
    h0_pairs,
    singular_values_formula,
)
from .errors import (
    ConfigInvalid,
    DegenerateEigenvalue,
    DegenerateScale,
    EmitError,
    GraphDisconnected,
    HypothesisViolated,
    MinDegreeTooLow,
    NBSpecError,
    NoConvergence,
    NotSymmetric,
    SingularY,
    TooLarge,
)
from .esd import bl_distance, esd, ks_vs_semicircle, replacement_diagnostics, spectral_variation
from .graph import Graph, SeededRng, directed_edges, sample_gnp
from .operators import OperatorBundle, build_B, build_operators, e_operator_norm, ihara_bass_oracle
from .spectral import bottleneck_matching, gen_eig, svdvals, sym_eig

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
