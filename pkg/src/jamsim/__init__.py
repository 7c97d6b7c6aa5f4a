"""Sum spectral efficiency of a massive MIMO uplink under a smart jammer."""

from .errors import (DegenerateSplitError, JamsimError, NoTrainingError,
                     NonSymmetricFadingError, UnboundedLimitError)
from .jammer_opt import (JammerSolution, equal_jamming, objective, second_derivative_fk,
                         solve_closed_form_symmetric, solve_numeric)
from .montecarlo import (ChannelRealization, PilotBook, UatfEstimate, estimate_uatf_sinr,
                         generate_block, mmse_estimate)
from .scenario import ScenarioConfig, SystemParams, db_to_linear, drop_users, make_params
from .se_core import (PowerSplit, SinrReport, estimation_variances, se_map, sum_se_asymptotic,
                      sum_se_closed_form, sum_se_closed_form_cscg)
from .sweeps import SweepSpec, ValidationSpec, run_sweep, run_validation
from .user_opt import UserStrategy, optimize_users

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization", "DegenerateSplitError", "JammerSolution", "JamsimError",
    "NoTrainingError", "NonSymmetricFadingError", "PilotBook", "PowerSplit",
    "ScenarioConfig", "SinrReport", "SweepSpec", "SystemParams", "UatfEstimate",
    "UnboundedLimitError", "UserStrategy", "ValidationSpec", "db_to_linear", "drop_users",
    "equal_jamming", "estimate_uatf_sinr", "estimation_variances", "generate_block",
    "make_params", "mmse_estimate", "objective", "optimize_users", "run_sweep",
    "run_validation", "se_map", "second_derivative_fk", "solve_closed_form_symmetric",
    "solve_numeric", "sum_se_asymptotic", "sum_se_closed_form", "sum_se_closed_form_cscg",
]
