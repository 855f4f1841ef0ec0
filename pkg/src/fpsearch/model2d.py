"""Exact simulation in the two-dimensional subspace spanned by |t> and |s>,
closed-form success probabilities, and the Grover / pi-3 reference models.

Basis ordering is (|tbar>, |t>): the initial state is (sqrt(1-lam), sqrt(lam)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from fpsearch.cheb import cheb_ratio, gamma_of
from fpsearch.schedule import AMPLIFY, AVOID, PhaseSchedule, zeta_sequence


@dataclass(frozen=True)
class SearchParams:
    """Problem parameters: target overlap ``lam`` = |<T|s>|^2 and error bound ``delta``.

    ``lam = 0`` is accepted but flagged as ``degenerate``: nothing can be
    amplified and every success probability evaluates to 0.
    """

    lam: float
    delta: float = 1.0
    xi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")

    @property
    def phi(self) -> float:
        return 2.0 * math.asin(math.sqrt(self.lam))

    @property
    def degenerate(self) -> bool:
        return self.lam == 0.0

    @property
    def target_prob(self) -> float:
        return 1.0 - self.delta**2


@dataclass(frozen=True)
class TwoLevelState:
    a_tbar: complex
    a_t: complex

    @property
    def p_target(self) -> float:
        return abs(self.a_t) ** 2

    @property
    def p_avoid(self) -> float:
        return abs(self.a_tbar) ** 2

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.a_tbar) ** 2 + abs(self.a_t) ** 2)

    @property
    def chi(self) -> float:
        """Relative phase of the target amplitude (free; reported, never constrained)."""
        if self.a_t == 0 or self.a_tbar == 0:
            return 0.0
        return cmath.phase(self.a_t) - cmath.phase(self.a_tbar)

    def as_array(self) -> np.ndarray:
        return np.array([self.a_tbar, self.a_t], dtype=complex)

    def fidelity(self, other: "TwoLevelState") -> float:
        """|<self|other>|, insensitive to global phase."""
        return abs(self.a_tbar.conjugate() * other.a_tbar + self.a_t.conjugate() * other.a_t)


def initial_state(params: SearchParams) -> TwoLevelState:
    return TwoLevelState(complex(math.sqrt(1.0 - params.lam)), complex(math.sqrt(params.lam)))


def reflect_s(state: TwoLevelState, alpha: float, params: SearchParams) -> TwoLevelState:
    """S_s(alpha) = I - (1 - e^{-i alpha}) |s><s|."""
    c = 1.0 - cmath.exp(-1j * alpha)
    lam = params.lam
    lam_bar = 1.0 - lam
    off = c * math.sqrt(lam * lam_bar)
    return TwoLevelState(
        (1.0 - c * lam_bar) * state.a_tbar - off * state.a_t,
        -off * state.a_tbar + (1.0 - c * lam) * state.a_t,
    )


def reflect_t(state: TwoLevelState, beta: float) -> TwoLevelState:
    """S_t(beta): phase e^{i beta} on the target amplitude."""
    return TwoLevelState(state.a_tbar, cmath.exp(1j * beta) * state.a_t)


def grover_iterate(state: TwoLevelState, alpha: float, beta: float, params: SearchParams) -> TwoLevelState:
    s = reflect_s(reflect_t(state, beta), alpha, params)
    return TwoLevelState(-s.a_tbar, -s.a_t)


def apply_sequence(schedule: PhaseSchedule, params: SearchParams, count: int | None = None) -> TwoLevelState:
    """Apply G(alpha_j, beta_j) for j = 1..l (or only the first ``count``) to |s>."""
    state = initial_state(params)
    n = schedule.l if count is None else count
    for alpha, beta in zip(schedule.alphas[:n], schedule.betas[:n]):
        state = grover_iterate(state, alpha, beta, params)
    return state


def success_prob_closed(L: int, delta: float, lam: float) -> float:
    """P_L = 1 - delta^2 T_L(T_{1/L}(1/delta) sqrt(1 - lam))^2.

    delta = 0 uses the limit 1 - (1 - lam)^L.
    """
    if L < 1 or L % 2 != 1:
        raise ValueError(f"L must be an odd positive integer, got {L}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    x = math.sqrt(1.0 - lam)
    if delta == 0.0:
        return 1.0 - x ** (2 * L)
    gamma = gamma_of(delta, L)
    # delta * T_L(x/gamma) = T_L(x/gamma) / T_L(1/gamma)
    r = cheb_ratio(L, x / gamma, 1.0 / gamma)
    return min(1.0, max(0.0, 1.0 - r * r))


def width(L: int, delta: float, approx: bool = False) -> float:
    """Smallest lambda at which P_L >= 1 - delta^2 is guaranteed: w = 1 - gamma^2.

    With ``approx=True`` returns the large-L estimate (log(2/delta) / L)^2.
    """
    if approx:
        if delta == 0.0:
            return math.inf
        return (math.log(2.0 / delta) / L) ** 2
    if delta == 0.0:
        return 1.0
    return 1.0 - gamma_of(delta, L) ** 2


class QueryCount(NamedTuple):
    L: int
    queries: int
    width: float
    bound: float  # log(2/delta) / sqrt(lambda0)


def min_queries(delta: float, lambda0: float) -> QueryCount:
    """Smallest odd L with width(L, delta) <= lambda0."""
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if not 0.0 < lambda0 <= 1.0:
        raise ValueError(f"lambda0 must lie in (0, 1], got {lambda0}")
    bound = math.log(2.0 / delta) / math.sqrt(lambda0)
    if delta == 1.0 or lambda0 == 1.0:
        return QueryCount(1, 0, width(1, delta), bound)
    # width <= lambda0  <=>  L >= arccosh(1/delta) / arccosh(1/sqrt(1-lambda0))
    est = math.acosh(1.0 / delta) / math.acosh(1.0 / math.sqrt(1.0 - lambda0))
    L = max(1, math.ceil(est) | 1)
    while L > 1 and width(L - 2, delta) <= lambda0:
        L -= 2
    while width(L, delta) > lambda0:
        L += 2
    return QueryCount(L, L - 1, width(L, delta), bound)


def _rz(theta: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])


def _pulse(zeta: float, phi: float) -> np.ndarray:
    # exp(-i phi/2 (cos zeta X + sin zeta Y))
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    return np.array(
        [[c, -1j * s * cmath.exp(-1j * zeta)], [-1j * s * cmath.exp(1j * zeta), c]],
        dtype=complex,
    )


def pulse_form_state(schedule: PhaseSchedule, params: SearchParams) -> TwoLevelState:
    """The sequence output rewritten as a composite pulse A_{zeta_L} ... A_{zeta_1} |tbar>.

    The palindromic zetas are fixed only up to a common z-frame; the frame
    rotation R_0(pi/2 - zeta_1) ... R_0(zeta_1 - pi/2) puts the outer pulses on
    the state-preparation axis, which makes the result equal the sequence
    output up to a global phase.
    """
    if schedule.mode != AMPLIFY:
        raise ValueError("pulse form is defined for amplify-mode schedules")
    zetas = zeta_sequence(schedule)
    frame = zetas[0] - math.pi / 2
    v = _rz(frame) @ np.array([1.0, 0.0], dtype=complex)
    for z in zetas:
        v = _pulse(z, params.phi) @ v
    v = _rz(-frame) @ v
    return TwoLevelState(complex(v[0]), complex(v[1]))


def amplitude_recurrence(schedule: PhaseSchedule, params: SearchParams) -> tuple[np.ndarray, np.ndarray]:
    """Run (a_h, b_h sin(phi/2)) = A_{zeta_h} (a_{h-1}, b_{h-1} sin(phi/2)) from (1, 0).

    Returns the arrays a[0..L], b[0..L]; |a_L|^2 = 1 - P_L.  ``b`` is
    undefined (NaN) when lambda = 0.
    """
    if schedule.mode != AMPLIFY:
        raise ValueError("amplitude recurrence is defined for amplify-mode schedules")
    zetas = zeta_sequence(schedule)
    phi = params.phi
    s = math.sin(phi / 2)
    L = schedule.L
    a = np.zeros(L + 1, dtype=complex)
    b = np.zeros(L + 1, dtype=complex)
    v = np.array([1.0, 0.0], dtype=complex)
    a[0] = 1.0
    for h, z in enumerate(zetas, start=1):
        v = _pulse(z, phi) @ v
        a[h] = v[0]
        b[h] = v[1] / s if s > 0 else np.nan
    return a, b


def auxiliary_residual(schedule: PhaseSchedule, params: SearchParams) -> float:
    """max_h |b'_h + a_{h-1}| for the decoupling variable

        b'_h = -x a_h - i sqrt(1 - x^2) e^{-i zeta_h} (b_h sin(phi/2)),  x = cos(phi/2).

    The second component enters with its sin(phi/2) weight, i.e. exactly as it
    appears in the recursion vector; b'_h = -a_{h-1} is then the inverse step.
    """
    a, b = amplitude_recurrence(schedule, params)
    zetas = zeta_sequence(schedule)
    x = math.cos(params.phi / 2)
    y = math.sin(params.phi / 2)
    worst = 0.0
    for h in range(1, schedule.L + 1):
        bh = b[h] * y if y > 0 else 0.0
        bp = -x * a[h] - 1j * y * cmath.exp(-1j * zetas[h - 1]) * bh
        worst = max(worst, abs(bp + a[h - 1]))
    return worst


def grover_reference(l: int, lam: float) -> float:
    """Success probability of l plain Grover iterates: sin^2((2l+1) arcsin sqrt(lam))."""
    return math.sin((2 * l + 1) * math.asin(math.sqrt(lam))) ** 2


def pi3_reference(k: int, lam: float) -> tuple[float, int]:
    """k recursion levels of the pi/3 algorithm: (1 - (1-lam)^(3^k), 3^k - 1 queries)."""
    L = 3**k
    return 1.0 - (1.0 - lam) ** L, L - 1


def pi3_min_level(delta: float, lambda0: float, max_k: int = 40) -> tuple[int, int]:
    """Smallest k with pi/3 success >= 1 - delta^2 for every lambda >= lambda0."""
    target = 1.0 - delta**2
    for k in range(max_k + 1):
        p, q = pi3_reference(k, lambda0)
        if p >= target:
            return k, q
    raise ValueError(f"pi/3 recursion does not reach {target} within {max_k} levels")


def avoidance_prob(schedule: PhaseSchedule, params: SearchParams) -> float:
    """Population left on |tbar> after an avoid-mode sequence.

    The avoid sequence is an amplifying sequence aimed at |tbar>, so this
    equals success_prob_closed(L, delta, 1 - lam).
    """
    if schedule.mode != AVOID:
        raise ValueError("avoidance_prob needs an avoid-mode schedule")
    return apply_sequence(schedule, params).p_avoid


def closed_for_mode(schedule: PhaseSchedule, lam: float) -> float:
    """Closed-form prediction of the amplified population for either mode."""
    if schedule.mode == AMPLIFY:
        return success_prob_closed(schedule.L, schedule.delta, lam)
    return success_prob_closed(schedule.L, schedule.delta, 1.0 - lam)


def prob_grid(schedule: PhaseSchedule, lams: np.ndarray) -> np.ndarray:
    """Simulated target population for each lambda in ``lams`` (vectorized 2x2 products)."""
    lams = np.asarray(lams, dtype=float)
    a0 = np.sqrt(1.0 - lams).astype(complex)
    a1 = np.sqrt(lams).astype(complex)
    lam_bar = 1.0 - lams
    cross = np.sqrt(lams * lam_bar)
    for alpha, beta in zip(schedule.alphas, schedule.betas):
        a1 = a1 * cmath.exp(1j * beta)
        c = 1.0 - cmath.exp(-1j * alpha)
        a0, a1 = -((1.0 - c * lam_bar) * a0 - c * cross * a1), -(-c * cross * a0 + (1.0 - c * lams) * a1)
    return np.abs(a1) ** 2
