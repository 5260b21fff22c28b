"""Cost-optimal sub-hourly power dispatch under energy, power and ramping prices."""

from .basecase import BaseProfile, base_energy, build_base_profile, eval_base_power
from .controller import (ControllerCoefficients, DiscreteTrajectory, Mode,
                         make_coefficients, sample_dispatch)
from .cost import (CostBreakdown, base_case_cost, discrete_cost, discrete_cost_breakdown,
                   is_minimizer, optimal_cost, second_variation)
from .errors import (BadStep, DegeneratePrices, DispatchError, EmptyInput, EmptyTrajectory,
                     HourFailure, InvalidInput, NoConvergence, OutOfDomain, SingularKKT,
                     SingularSystem, WrongRegime)
from .oracle import OracleSolution, compare, solve_numeric
from .simulator import (DurationCurve, ErrorModel, HourInput, HourResult, ScenarioConfig,
                        SweepRow, draw_errors, duration_curve, run_scenario,
                        sensitivity_sweep, synthetic_year, total_savings)
from .trajectory import (HourSchedule, PriceSet, Regime, TrajectoryParams, classify_regime,
                         eval_energy, eval_power, eval_ramp, solve_hour)

__version__ = "0.1.0"
