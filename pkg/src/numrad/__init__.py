"""Numerical radius computation and verification of norm inequalities for complex matrices."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundsReport,
    CheckId,
    CheckVerdict,
    OperatorData,
    Status,
    bounds_report,
    check_background,
    check_cor_2_3,
    check_cor_2_5,
    check_eq_3,
    check_farei,
    check_prop_2_2,
    check_scalar_cond,
    check_thm_2_1,
    dee,
    gee,
    pair_report,
)
from .ensemble import (  # noqa: E402
    EnsembleSpec,
    generate,
    run_suite,
    search_sqrt2_counterexample,
    slack_statistics,
)
from .matrix import (  # noqa: E402
    adjoint,
    alpha,
    cartesian_parts,
    direct_sum,
    hermitian_eigen,
    inverse,
    off_diag_block,
    operator_norm,
    singular_values,
)
from .radius import (  # noqa: E402
    RadiusEstimate,
    numerical_radius,
    numerical_radius_gridsearch,
    numerical_range_boundary,
    rayleigh,
    rotated_real_part,
)
