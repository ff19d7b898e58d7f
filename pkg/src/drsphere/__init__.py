"""Douglas-Rachford iteration for a circle and a horizontal line."""

from .core import (ALPHA, DimensionMismatch, Params, PointN, SingularPoint, State2D,
                   Target, dist_sq_to_solution, dr_step, dr_step_2d, dr_step_array,
                   dr_step_composed, reflect, solution_point)
from .regions import (EPSILON, GAMMA, Region, UncertifiedRegime, allowed_transitions,
                      check_step, classify, contraction_factor)
from .basin import (BasinGrid, Outcome, TrajectoryConfig, TrajectoryResult,
                    run_batch, run_trajectory, sample_basin, verify_theorem_main)

__version__ = "0.1.0"
