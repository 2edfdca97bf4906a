"""Lipschitz (MWK) extensions, gradually varied fill and discrete smoothness metrics."""

from gvsmooth.domain import (
    Domain,
    LevelSequence,
    SampleSet,
    ScalarField,
    build_graph_domain,
    build_grid_domain,
    build_path_domain,
    geodesic_distance,
    multi_source_distances,
)
from gvsmooth.errors import (
    DisconnectedDomainError,
    FormatError,
    InfeasibleFillError,
    InfeasibleLipschitzError,
    InvalidArgument,
)
from gvsmooth.gvf import GvfStrategy, gvf_envelopes, gvf_feasible, gvf_fill, is_gradually_varied
from gvsmooth.mwk import (
    LipschitzEstimate,
    Metric,
    lipschitz_constant,
    mwk_inf_extension,
    mwk_mid_extension,
    mwk_sup_extension,
)
from gvsmooth.polish import (
    PolishConfig,
    PolishOutcome,
    general_slope_residual,
    polish_1d,
    polish_grid,
    second_difference_residual,
)
from gvsmooth.smoothness import (
    classify_discrete_smoothness,
    count_extreme_points,
    decompose_micro_macro,
    derivative_sign_changes,
    difference_ladder,
    lip_pairwise,
    natural_smoothness_1d,
    natural_smoothness_kd,
)

__version__ = "0.1.0"
