from .period import PrecisionError, least_real_period, period_by_quadrature, real_period, snap_rational
from .points import ApTable, BadReductionError, ap, ap_table, count_points_fast, count_points_naive
from .series import (
    BudgetExceeded,
    LValueResult,
    an_array,
    an_stream,
    kronecker_character,
    l_value_at_1,
    numerical_root_number,
    terms_needed,
)
from .sha import (
    AlgebraicLValue,
    BaseCurve,
    ShaAnalytic,
    ShaStatus,
    algebraic_l_value,
    analytic_sha_rank0,
    twist_data,
)

__all__ = [
    "AlgebraicLValue",
    "ApTable",
    "BadReductionError",
    "BaseCurve",
    "BudgetExceeded",
    "LValueResult",
    "PrecisionError",
    "ShaAnalytic",
    "ShaStatus",
    "algebraic_l_value",
    "an_array",
    "an_stream",
    "analytic_sha_rank0",
    "ap",
    "ap_table",
    "count_points_fast",
    "count_points_naive",
    "kronecker_character",
    "l_value_at_1",
    "least_real_period",
    "numerical_root_number",
    "period_by_quadrature",
    "real_period",
    "snap_rational",
    "terms_needed",
    "twist_data",
]
