"""Versioned parameter grids and tolerances for the verification suites.

Bump GRID_VERSION whenever a grid or tolerance changes so that recorded
verification runs stay comparable.
"""

import numpy as np

GRID_VERSION = 1

DELTA_SQ = (0.9, 0.5, 0.1, 0.01, 0.0)


def lambda_grid(points: int = 200, lo: float = 1e-3) -> np.ndarray:
    """Log-spaced lambdas in (lo, 1], endpoint 1 included."""
    return np.logspace(np.log10(lo), 0.0, points + 1)[1:]


FULL = {
    "l_values": tuple(range(1, 13)),
    "delta_sq": DELTA_SQ,
    "lambda_points": 200,
    "width_L_max": 199,
    "width_delta_sq": (0.5, 0.1, 0.01),
    "pi3_levels": (1, 2, 3),
    "nest_pairs": tuple((a, b) for a in (1, 2, 3) for b in (1, 2, 3)),
    "nest_delta_sq": (0.5, 0.1),
    "qsim_n": 10,
    "qsim_marked": (1, 4, 37),
    "qsim_l": (2, 6),
    "pulse_l_max": 8,
    "avoid_l_max": 6,
    "gencheb_l_max": 10,
    "gencheb_gammas": (0.2, 0.5, 0.9, 1.0),
    "gencheb_x_points": 50,
    "scaling_lambda0": (1e-4, 1e-1),
    "scaling_points": 40,
}

QUICK = dict(
    FULL,
    l_values=(1, 2, 5, 12),
    lambda_points=40,
    width_L_max=61,
    nest_pairs=((1, 2), (2, 1), (3, 3)),
    qsim_n=8,
    qsim_marked=(1, 5),
    qsim_l=(2,),
    pulse_l_max=4,
    avoid_l_max=3,
    gencheb_l_max=5,
    gencheb_x_points=20,
    scaling_points=15,
)

TOL = {
    "equivalence": 1e-9,
    "fixed_point_slack": 1e-12,
    "grover": 1e-10,
    "pi3": 1e-9,
    "nesting": 1e-9,
    "statevector": 1e-9,
    "engine_fidelity": 1e-10,
    "ancilla_leak": 1e-20,
    "pulse_fidelity": 1e-10,
    "gencheb": 1e-10,
    "avoid": 1e-9,
    "scaling_band": (0.8, 1.2),
}
