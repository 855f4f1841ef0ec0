"""Optimal fixed-point amplitude amplification: phase schedules, exact
two-level and statevector simulation, and closed-form guarantees."""

from fpsearch.cheb import cheb_T, cheb_T_frac, gamma_of, gen_cheb_a
from fpsearch.model2d import (
    SearchParams,
    TwoLevelState,
    apply_sequence,
    avoidance_prob,
    grover_reference,
    min_queries,
    pi3_reference,
    success_prob_closed,
    width,
)
from fpsearch.schedule import PhaseSchedule, fixed_point_phases, nest, nest_many, zeta_sequence

__version__ = "0.1.0"

__all__ = [
    "PhaseSchedule",
    "SearchParams",
    "TwoLevelState",
    "apply_sequence",
    "avoidance_prob",
    "cheb_T",
    "cheb_T_frac",
    "fixed_point_phases",
    "gamma_of",
    "gen_cheb_a",
    "grover_reference",
    "min_queries",
    "nest",
    "nest_many",
    "pi3_reference",
    "success_prob_closed",
    "width",
    "zeta_sequence",
]
