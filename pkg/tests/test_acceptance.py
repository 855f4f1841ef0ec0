"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also collected in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from fpsearch import grids
from fpsearch.cheb import cheb_T, gen_cheb_a
from fpsearch.model2d import (
    SearchParams,
    apply_sequence,
    min_queries,
    pi3_min_level,
    pulse_form_state,
    success_prob_closed,
    width,
)
from fpsearch.qsim import ProblemInstance, run, state_fidelity
from fpsearch.schedule import AVOID, fixed_point_phases, nest, pi3_schedule

CFG = grids.FULL
TOL = grids.TOL
LAMS = grids.lambda_grid(CFG["lambda_points"])
D10 = math.sqrt(0.1)


def test_grid_shape():
    assert len(LAMS) == 200
    assert LAMS[0] > 1e-3 and LAMS[-1] == 1.0
    assert grids.GRID_VERSION == 1


def test_c01_closed_form_equivalence(report):
    t0 = time.perf_counter()
    worst = 0.0
    for l in CFG["l_values"]:
        for dsq in CFG["delta_sq"]:
            s = fixed_point_phases(l, math.sqrt(dsq))
            for lam in LAMS:
                p = apply_sequence(s, SearchParams(float(lam), s.delta)).p_target
                worst = max(worst, abs(p - success_prob_closed(s.L, s.delta, float(lam))))
    elapsed = time.perf_counter() - t0
    ok = worst <= TOL["equivalence"] and elapsed < 5.0
    report("C1 closed-form equivalence", ok, f"max |P_sim - P_closed| = {worst:.2e}, {elapsed:.2f}s (< 5s)")
    assert worst <= TOL["equivalence"]
    assert elapsed < 5.0


def test_c02_fixed_point_bound(report):
    violations, checked = [], 0
    for l in CFG["l_values"]:
        for dsq in CFG["delta_sq"]:
            s = fixed_point_phases(l, math.sqrt(dsq))
            w = width(s.L, s.delta)
            for lam in LAMS[LAMS >= w]:
                checked += 1
                p = apply_sequence(s, SearchParams(float(lam), s.delta)).p_target
                if p < 1 - dsq - TOL["fixed_point_slack"]:
                    violations.append((l, dsq, float(lam), p))
    report("C2 fixed-point bound", not violations, f"{len(violations)} violations in {checked} points")
    assert not violations


def test_c03_width_monotone(report):
    bad = [
        (L, dsq)
        for dsq in CFG["width_delta_sq"]
        for L in range(1, CFG["width_L_max"] + 1, 2)
        if width(L + 2, math.sqrt(dsq)) > width(L, math.sqrt(dsq))
    ]
    report("C3 width monotonicity", not bad, f"{len(bad)} increases for odd L <= {CFG['width_L_max']}")
    assert not bad


def test_c04_grover_recovery(report):
    worst = 0.0
    for l in range(0, 13):
        s = fixed_point_phases(l, 1.0)
        for lam in LAMS:
            p = apply_sequence(s, SearchParams(float(lam))).p_target
            worst = max(worst, abs(p - math.sin((2 * l + 1) * math.asin(math.sqrt(lam))) ** 2))
    report("C4 Grover recovery (delta=1)", worst <= TOL["grover"], f"max deviation {worst:.2e}")
    assert worst <= TOL["grover"]


def test_c05_pi3_recovery(report):
    worst = 0.0
    for k in range(0, 4):
        s = pi3_schedule(k)
        for lam in LAMS:
            p = apply_sequence(s, SearchParams(float(lam))).p_target
            worst = max(worst, abs(p - (1 - (1 - lam) ** (3**k))))
    report("C5 pi/3 recovery (self-nesting, k<=3)", worst <= TOL["pi3"], f"max deviation {worst:.2e}")
    assert worst <= TOL["pi3"]


def test_c06_query_counts(report):
    q25 = min_queries(D10, 0.25)
    _, pi3_25 = pi3_min_level(D10, 0.25)
    _, pi3_03 = pi3_min_level(D10, 0.03)
    q03 = min_queries(D10, 0.03)
    tight = width(q03.L, D10) <= 0.03 < width(q03.L - 2, D10)
    ok = q25.queries == 4 and pi3_25 == 8 and pi3_03 == 80 and tight
    report(
        "C6 query counts",
        ok,
        f"lambda0=0.25: ours {q25.queries}, pi/3 {pi3_25}; lambda0=0.03: pi/3 {pi3_03}, "
        f"ours L={q03.L} ({q03.queries} queries, width {width(q03.L, D10):.5f})",
    )
    assert q25.queries == 4
    assert pi3_25 == 8
    assert pi3_03 == 80
    assert tight
    assert q03.L == 11


def test_c07_nesting_semigroup(report):
    worst = 0.0
    for a, b in CFG["nest_pairs"]:
        for dsq in CFG["nest_delta_sq"]:
            s = nest(a, b, math.sqrt(dsq))
            for lam in LAMS:
                p = apply_sequence(s, SearchParams(float(lam))).p_target
                worst = max(worst, abs(p - success_prob_closed(s.L, s.delta, float(lam))))
    report("C7 nesting semigroup", worst <= TOL["nesting"], f"max deviation {worst:.2e}")
    assert worst <= TOL["nesting"]


def test_c08_statevector_agreement(report):
    t0 = time.perf_counter()
    worst_p = worst_leak = 0.0
    worst_f = 1.0
    for m in CFG["qsim_marked"]:
        inst = ProblemInstance.uniform(CFG["qsim_n"], range(m))
        for l in CFG["qsim_l"]:
            s = fixed_point_phases(l, D10)
            p2d = apply_sequence(s, SearchParams(inst.lam, D10)).p_target
            direct = run(s, inst, "direct")
            circuit = run(s, inst, "circuit")
            worst_p = max(worst_p, abs(direct.p - p2d), abs(circuit.p - p2d))
            worst_f = min(worst_f, state_fidelity(direct.state, circuit.state))
            worst_leak = max(worst_leak, circuit.max_leak)
    elapsed = time.perf_counter() - t0
    ok = (
        worst_p <= TOL["statevector"]
        and worst_f >= 1 - TOL["engine_fidelity"]
        and worst_leak <= TOL["ancilla_leak"]
        and elapsed < 10.0
    )
    report(
        "C8 statevector agreement",
        ok,
        f"max |P_sv - P_2d| {worst_p:.2e}, min fidelity {worst_f:.15f}, leak {worst_leak:.1e}, {elapsed:.2f}s",
    )
    assert worst_p <= TOL["statevector"]
    assert worst_f >= 1 - TOL["engine_fidelity"]
    assert worst_leak <= TOL["ancilla_leak"]
    assert elapsed < 10.0


def test_c09_pulse_form(report):
    worst = 1.0
    for l in range(1, CFG["pulse_l_max"] + 1):
        for dsq in CFG["delta_sq"]:
            s = fixed_point_phases(l, math.sqrt(dsq))
            for lam in LAMS:
                p = SearchParams(float(lam), s.delta)
                worst = min(worst, pulse_form_state(s, p).fidelity(apply_sequence(s, p)))
    ok = worst >= 1 - TOL["pulse_fidelity"]
    report("C9 pulse-form equivalence", ok, f"min |<pulse|seq>| = {worst:.15f}")
    assert ok


def test_c10_generalized_chebyshev(report):
    worst = 0.0
    xs = np.linspace(0.0, 1.0, CFG["gencheb_x_points"])
    for l in range(1, CFG["gencheb_l_max"] + 1):
        L = 2 * l + 1
        for g in CFG["gencheb_gammas"]:
            for x in xs:
                ref = abs(cheb_T(L, x / g)) / cheb_T(L, 1 / g)
                worst = max(worst, abs(abs(gen_cheb_a(L, g, float(x))) - ref))
    report("C10 generalized Chebyshev identity", worst <= TOL["gencheb"], f"max deviation {worst:.2e}")
    assert worst <= TOL["gencheb"]


def _avoid_deviation(lam_for_closed):
    worst = 0.0
    for l in range(1, CFG["avoid_l_max"] + 1):
        for dsq in CFG["delta_sq"]:
            s = fixed_point_phases(l, math.sqrt(dsq), AVOID)
            for lam in LAMS:
                p = apply_sequence(s, SearchParams(float(lam))).p_avoid
                closed = success_prob_closed(s.L, s.delta, lam_for_closed(float(lam)))
                worst = max(worst, abs(p - closed))
    return worst


def test_c11_avoidance_same_lambda(report):
    # Stated form: |<tbar|out>|^2 = P_L at the same lambda.  This cannot hold
    # (at lambda = 1 the state has no |tbar> component to amplify), so this
    # criterion is expected to fail; see test_c11_avoidance_complement.
    worst = _avoid_deviation(lambda lam: lam)
    ok = worst <= TOL["avoid"]
    report("C11 avoidance, closed form at lambda", ok, f"max deviation {worst:.2e}")
    assert ok


def test_c11_avoidance_complement(report):
    worst = _avoid_deviation(lambda lam: 1.0 - lam)
    ok = worst <= TOL["avoid"]
    report("C11' avoidance, closed form at 1 - lambda", ok, f"max deviation {worst:.2e}")
    assert ok


def test_c12_query_scaling(report):
    lo, hi = CFG["scaling_lambda0"]
    lam0 = np.geomspace(lo, hi, CFG["scaling_points"])
    q = np.array([min_queries(D10, float(x)).queries for x in lam0], dtype=float)
    u = 1 / np.sqrt(lam0)
    c = float(np.linalg.lstsq(u[:, None], q, rcond=None)[0][0])
    ratio = c / math.log(2 / D10)
    lo_b, hi_b = TOL["scaling_band"]
    ok = lo_b <= ratio <= hi_b
    report("C12 query-complexity scaling", ok, f"c = {c:.4f} = {ratio:.4f} x log(2/delta)")
    assert ok
