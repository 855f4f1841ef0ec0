"""Invariant suites behind ``fpsearch verify``.

Each suite returns a SuiteResult; ``run_all`` evaluates them on the quick
or full grid from :mod:`fpsearch.grids`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from fpsearch import grids
from fpsearch.cheb import cheb_T, cheb_T_frac, gen_cheb_a
from fpsearch.model2d import (
    SearchParams,
    amplitude_recurrence,
    apply_sequence,
    grover_reference,
    min_queries,
    pi3_min_level,
    prob_grid,
    pulse_form_state,
    success_prob_closed,
    width,
)
from fpsearch.qsim import ProblemInstance, run, state_fidelity
from fpsearch.schedule import AVOID, fixed_point_phases, nest, pi3_schedule, wrap_angle


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _closed_grid(L: int, delta: float, lams: np.ndarray) -> np.ndarray:
    return np.array([success_prob_closed(L, delta, lam) for lam in lams])


def suite_cheb(cfg: dict) -> tuple[bool, str]:
    worst = 0.0
    xs = np.linspace(-2.0, 2.0, 81)
    for p in range(1, 10):
        for q in range(1, 10):
            for x in xs:
                ref = cheb_T(p * q, x)
                worst = max(worst, abs(cheb_T(p, cheb_T(q, x)) - ref) / max(1.0, abs(ref)))
    for L in (1, 3, 5, 9, 21):
        for x in np.geomspace(1.0, 1e6, 60):
            worst = max(worst, abs(cheb_T(L, cheb_T_frac(L, x)) - x) / x)
    ok = worst <= 1e-10
    return ok, f"max relative error {worst:.2e}"


def suite_special_cases(cfg: dict) -> tuple[bool, str]:
    s = fixed_point_phases(1, 0.0)
    ok = math.isclose(s.alphas[0], -math.pi / 3, abs_tol=1e-15) and math.isclose(
        s.betas[0], math.pi / 3, abs_tol=1e-15
    )
    for l in range(1, 13):
        g = fixed_point_phases(l, 1.0)
        ok &= all(abs(wrap_angle(a - math.pi)) < 1e-15 for a in g.alphas + g.betas)
    return ok, "delta=0 gives -/+pi/3, delta=1 gives pi"


def suite_equivalence(cfg: dict) -> tuple[bool, str]:
    lams = grids.lambda_grid(cfg["lambda_points"])
    worst = 0.0
    for l in cfg["l_values"]:
        for dsq in cfg["delta_sq"]:
            s = fixed_point_phases(l, math.sqrt(dsq))
            diff = np.abs(prob_grid(s, lams) - _closed_grid(s.L, s.delta, lams))
            worst = max(worst, float(diff.max()))
    return worst <= grids.TOL["equivalence"], f"max |P_sim - P_closed| = {worst:.2e}"


def suite_fixed_point(cfg: dict) -> tuple[bool, str]:
    lams = grids.lambda_grid(cfg["lambda_points"])
    bad = 0
    checked = 0
    for l in cfg["l_values"]:
        for dsq in cfg["delta_sq"]:
            s = fixed_point_phases(l, math.sqrt(dsq))
            mask = lams >= width(s.L, s.delta)
            p = prob_grid(s, lams[mask])
            checked += int(mask.sum())
            bad += int(np.sum(p < 1.0 - dsq - grids.TOL["fixed_point_slack"]))
    return bad == 0, f"{bad} violations over {checked} points above the width"


def suite_width_monotone(cfg: dict) -> tuple[bool, str]:
    bad = 0
    for dsq in cfg["width_delta_sq"]:
        d = math.sqrt(dsq)
        for L in range(1, cfg["width_L_max"] + 1, 2):
            bad += width(L + 2, d) > width(L, d)
    return bad == 0, f"{bad} increases"


def suite_grover(cfg: dict) -> tuple[bool, str]:
    lams = grids.lambda_grid(cfg["lambda_points"])
    worst = 0.0
    for l in range(0, 13):
        s = fixed_point_phases(l, 1.0)
        ref = np.array([grover_reference(l, lam) for lam in lams])
        worst = max(worst, float(np.abs(prob_grid(s, lams) - ref).max()))
    return worst <= grids.TOL["grover"], f"max deviation {worst:.2e}"


def suite_pi3(cfg: dict) -> tuple[bool, str]:
    lams = grids.lambda_grid(cfg["lambda_points"])
    worst = 0.0
    for k in cfg["pi3_levels"]:
        ref = 1.0 - (1.0 - lams) ** (3**k)
        worst = max(worst, float(np.abs(prob_grid(pi3_schedule(k), lams) - ref).max()))
    return worst <= grids.TOL["pi3"], f"max deviation {worst:.2e}"


def suite_fig1(cfg: dict) -> tuple[bool, str]:
    d = math.sqrt(0.1)
    q25 = min_queries(d, 0.25)
    _, pi3_25 = pi3_min_level(d, 0.25)
    q03 = min_queries(d, 0.03)
    _, pi3_03 = pi3_min_level(d, 0.03)
    tight = width(q03.L, d) <= 0.03 < width(q03.L - 2, d)
    ok = q25.queries == 4 and pi3_25 == 8 and pi3_03 == 80 and tight
    return ok, (
        f"lambda0=0.25: fp {q25.queries} / pi3 {pi3_25} queries; "
        f"lambda0=0.03: fp {q03.queries} / pi3 {pi3_03} queries"
    )


def suite_nesting(cfg: dict) -> tuple[bool, str]:
    lams = grids.lambda_grid(cfg["lambda_points"])
    worst = 0.0
    for a, b in cfg["nest_pairs"]:
        for dsq in cfg["nest_delta_sq"]:
            s = nest(a, b, math.sqrt(dsq))
            diff = np.abs(prob_grid(s, lams) - _closed_grid(s.L, s.delta, lams))
            worst = max(worst, float(diff.max()))
    return worst <= grids.TOL["nesting"], f"max deviation {worst:.2e}"


def suite_statevector(cfg: dict) -> tuple[bool, str]:
    n = cfg["qsim_n"]
    d = math.sqrt(0.1)
    worst_p = worst_leak = 0.0
    worst_f = 1.0
    for m in cfg["qsim_marked"]:
        inst = ProblemInstance.uniform(n, range(m))
        for l in cfg["qsim_l"]:
            s = fixed_point_phases(l, d)
            direct = run(s, inst, "direct")
            circ = run(s, inst, "circuit")
            p2d = apply_sequence(s, SearchParams(inst.lam, d)).p_target
            worst_p = max(worst_p, abs(direct.p - p2d), abs(circ.p - p2d))
            worst_f = min(worst_f, state_fidelity(direct.state, circ.state))
            worst_leak = max(worst_leak, circ.max_leak)
    ok = (
        worst_p <= grids.TOL["statevector"]
        and worst_f >= 1 - grids.TOL["engine_fidelity"]
        and worst_leak <= grids.TOL["ancilla_leak"]
    )
    return ok, f"max |P_sv - P_2d| {worst_p:.2e}, min fidelity {worst_f:.12f}, leak {worst_leak:.1e}"


def suite_pulse(cfg: dict) -> tuple[bool, str]:
    lams = grids.lambda_grid(cfg["lambda_points"])
    worst = 1.0
    for l in [l for l in cfg["l_values"] if l <= cfg["pulse_l_max"]]:
        for dsq in cfg["delta_sq"]:
            s = fixed_point_phases(l, math.sqrt(dsq))
            for lam in lams:
                p = SearchParams(float(lam), s.delta)
                worst = min(worst, pulse_form_state(s, p).fidelity(apply_sequence(s, p)))
    return worst >= 1 - grids.TOL["pulse_fidelity"], f"min fidelity {worst:.15f}"


def suite_gencheb(cfg: dict) -> tuple[bool, str]:
    worst = 0.0
    xs = np.linspace(0.0, 1.0, cfg["gencheb_x_points"])
    for l in range(1, cfg["gencheb_l_max"] + 1):
        L = 2 * l + 1
        for g in cfg["gencheb_gammas"]:
            for x in xs:
                ref = abs(cheb_T(L, x / g)) / cheb_T(L, 1.0 / g)
                worst = max(worst, abs(abs(gen_cheb_a(L, g, float(x))) - ref))
    # the recurrence run on actual pulses agrees with the closed form
    for l in range(1, 6):
        s = fixed_point_phases(l, math.sqrt(0.1))
        for lam in (0.05, 0.3, 0.8):
            a, _ = amplitude_recurrence(s, SearchParams(lam, s.delta))
            worst = max(worst, abs(abs(a[-1]) ** 2 + success_prob_closed(s.L, s.delta, lam) - 1.0))
    return worst <= grids.TOL["gencheb"], f"max deviation {worst:.2e}"


def suite_avoidance(cfg: dict) -> tuple[bool, str]:
    lams = grids.lambda_grid(cfg["lambda_points"])
    worst = 0.0
    for l in [l for l in cfg["l_values"] if l <= cfg["avoid_l_max"]]:
        for dsq in cfg["delta_sq"]:
            s = fixed_point_phases(l, math.sqrt(dsq), AVOID)
            p_avoid = 1.0 - prob_grid(s, lams)
            ref = _closed_grid(s.L, s.delta, 1.0 - lams)
            worst = max(worst, float(np.abs(p_avoid - ref).max()))
    return worst <= grids.TOL["avoid"], f"|<tbar|out>|^2 vs P_L(1-lambda): max deviation {worst:.2e}"


def suite_scaling(cfg: dict) -> tuple[bool, str]:
    d = math.sqrt(0.1)
    lo, hi = cfg["scaling_lambda0"]
    lam0 = np.geomspace(lo, hi, cfg["scaling_points"])
    q = np.array([min_queries(d, float(x)).queries for x in lam0], dtype=float)
    u = 1.0 / np.sqrt(lam0)
    c = float(np.linalg.lstsq(u[:, None], q, rcond=None)[0][0])
    ratio = c / math.log(2.0 / d)
    lo_b, hi_b = grids.TOL["scaling_band"]
    return lo_b <= ratio <= hi_b, f"c = {c:.4f} = {ratio:.4f} log(2/delta)"


SUITES: dict[str, Callable[[dict], tuple[bool, str]]] = {
    "chebyshev identities": suite_cheb,
    "special-case phases": suite_special_cases,
    "closed-form equivalence": suite_equivalence,
    "fixed-point bound": suite_fixed_point,
    "width monotonicity": suite_width_monotone,
    "grover recovery": suite_grover,
    "pi/3 recovery": suite_pi3,
    "query counts": suite_fig1,
    "nesting semigroup": suite_nesting,
    "statevector agreement": suite_statevector,
    "pulse-form equivalence": suite_pulse,
    "generalized chebyshev": suite_gencheb,
    "target avoidance": suite_avoidance,
    "query scaling": suite_scaling,
}


def run_all(level: str = "quick") -> list[SuiteResult]:
    cfg = grids.FULL if level == "full" else grids.QUICK
    results = []
    for name, fn in SUITES.items():
        t0 = time.perf_counter()
        try:
            ok, detail = fn(cfg)
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(SuiteResult(name, bool(ok), detail, time.perf_counter() - t0))
    return results
