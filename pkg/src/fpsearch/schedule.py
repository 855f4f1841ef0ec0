"""Phase schedules for fixed-point search sequences.

A schedule holds the reflection phases (alpha_j, beta_j), j = 1..l, of the
product G(alpha_l, beta_l) ... G(alpha_1, beta_1).  Direct schedules come
from the analytic formula; longer ones can also be built by nesting.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from fpsearch.cheb import cheb_T_frac, gamma_of

AMPLIFY = "amplify"
AVOID = "avoid"
MODES = (AMPLIFY, AVOID)


def wrap_angle(theta: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    r = math.remainder(theta, 2 * math.pi)
    return math.pi if r == -math.pi else r


def acot(y: float) -> float:
    """Inverse cotangent on the branch (-pi/2, pi/2] with acot(0) = pi/2."""
    if y == 0.0:
        return math.pi / 2
    return math.atan(1.0 / y)


@dataclass(frozen=True)
class PhaseSchedule:
    l: int
    delta: float
    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    mode: str = AMPLIFY
    # iterate counts of the nested components, outermost last; (l,) when direct
    components: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if len(self.alphas) != self.l or len(self.betas) != self.l:
            raise ValueError("alphas and betas must both have length l")
        if not self.components:
            object.__setattr__(self, "components", (self.l,))

    @property
    def L(self) -> int:
        return 2 * self.l + 1

    @property
    def gamma(self) -> float:
        return gamma_of(self.delta, self.L)

    @property
    def queries(self) -> int:
        return 2 * self.l

    @property
    def nested(self) -> bool:
        return len(self.components) > 1

    def is_phase_matched(self, tol: float = 1e-12) -> bool:
        """Check beta_{l-j+1} = -alpha_j (amplify) or +alpha_j (avoid), modulo 2 pi."""
        sign = -1.0 if self.mode == AMPLIFY else 1.0
        for j in range(self.l):
            if abs(wrap_angle(self.betas[self.l - 1 - j] - sign * self.alphas[j])) > tol:
                return False
        return True

    def truncated(self, count: int) -> "PhaseSchedule":
        """The first ``count`` iterates, as a bare (unmatched) schedule."""
        return PhaseSchedule(
            l=count,
            delta=self.delta,
            alphas=self.alphas[:count],
            betas=self.betas[:count],
            mode=self.mode,
            components=(count,),
        )

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "L": self.L,
            "delta": self.delta,
            "mode": self.mode,
            "alphas": list(self.alphas),
            "betas": list(self.betas),
            "components": list(self.components),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PhaseSchedule":
        sched = cls(
            l=int(data["l"]),
            delta=float(data["delta"]),
            alphas=tuple(float(a) for a in data["alphas"]),
            betas=tuple(float(b) for b in data["betas"]),
            mode=data.get("mode", AMPLIFY),
            components=tuple(data.get("components", ())),
        )
        if "L" in data and int(data["L"]) != sched.L:
            raise ValueError(f"inconsistent schedule: L={data['L']} but l={sched.l}")
        return sched

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PhaseSchedule":
        return cls.from_dict(json.loads(text))


def _match_betas(alphas: Sequence[float], mode: str) -> tuple[float, ...]:
    sign = -1.0 if mode == AMPLIFY else 1.0
    return tuple(wrap_angle(sign * a) for a in reversed(alphas))


def fixed_point_phases(l: int, delta: float, mode: str = AMPLIFY) -> PhaseSchedule:
    """Analytic phases alpha_j = 2 acot(tan(2 pi j / L) sqrt(1 - gamma^2)).

    delta = 1 gives Grover's iterate (all phases pi); delta = 0 with l = 1
    gives the pi/3 iterate.
    """
    if l < 0:
        raise ValueError(f"l must be nonnegative, got {l}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    L = 2 * l + 1
    s = math.sqrt(1.0 - gamma_of(delta, L) ** 2)
    alphas = tuple(
        wrap_angle(2.0 * acot(math.tan(2.0 * math.pi * j / L) * s)) for j in range(1, l + 1)
    )
    return PhaseSchedule(l=l, delta=delta, alphas=alphas, betas=_match_betas(alphas, mode), mode=mode)


def zeta_differences(L: int, gamma: float) -> list[float]:
    """zeta_{k+1} - zeta_k = (-1)^k pi - 2 acot(tan(k pi / L) sqrt(1 - gamma^2)), k = 1..L-1."""
    s = math.sqrt(1.0 - gamma * gamma)
    return [
        (-1) ** k * math.pi - 2.0 * acot(math.tan(k * math.pi / L) * s) for k in range(1, L)
    ]


def zeta_sequence(schedule: PhaseSchedule) -> list[float]:
    """Composite-pulse phases zeta_1..zeta_L of an amplifying direct schedule.

    Anchored at zeta_{l+1} = (-1)^l pi/2 and stepped outwards in both
    directions.  The result is palindromic.
    """
    if schedule.mode != AMPLIFY:
        raise ValueError("zeta_sequence needs an amplify-mode schedule")
    if schedule.nested:
        return _zeta_from_angles(schedule)
    l, L = schedule.l, schedule.L
    diffs = zeta_differences(L, schedule.gamma)
    zetas = [0.0] * (L + 1)  # 1-based
    zetas[l + 1] = (-1) ** l * math.pi / 2
    for k in range(l + 1, L):
        zetas[k + 1] = zetas[k] + diffs[k - 1]
    for k in range(l, 0, -1):
        zetas[k] = zetas[k + 1] - diffs[k - 1]
    return [wrap_angle(z) for z in zetas[1:]]


def _zeta_from_angles(schedule: PhaseSchedule) -> list[float]:
    # the z-rotation between pulses k and k+1 is beta_j (k = 2j-1) or alpha_j (k = 2j)
    l, L = schedule.l, schedule.L
    thetas = []
    for j in range(l):
        thetas += [schedule.betas[j], schedule.alphas[j]]
    diffs = [(-1) ** k * math.pi - thetas[k - 1] for k in range(1, L)]
    zetas = [0.0] * (L + 1)
    zetas[l + 1] = (-1) ** l * math.pi / 2
    for k in range(l + 1, L):
        zetas[k + 1] = zetas[k] + diffs[k - 1]
    for k in range(l, 0, -1):
        zetas[k] = zetas[k + 1] - diffs[k - 1]
    return [wrap_angle(z) for z in zetas[1:]]


def compose(inner: PhaseSchedule, outer: PhaseSchedule) -> PhaseSchedule:
    """Nest ``inner`` inside ``outer``: the outer sequence runs with the
    inner sequence applied after every state preparation.

    Angle j of the result is alpha_in_h when j = h (mod L_in), -alpha_in_h
    when j = -h (mod L_in), and alpha_out_k when j = k L_in.  The caller is
    responsible for the error-bound split between the two components.
    """
    if inner.mode != outer.mode:
        raise ValueError("cannot nest schedules with different modes")
    L1 = inner.L
    l = inner.l + 2 * inner.l * outer.l + outer.l
    alphas = []
    for j in range(1, l + 1):
        h = j % L1
        if h == 0:
            alphas.append(outer.alphas[j // L1 - 1])
        elif h <= inner.l:
            alphas.append(inner.alphas[h - 1])
        else:
            alphas.append(wrap_angle(-inner.alphas[L1 - h - 1]))
    return PhaseSchedule(
        l=l,
        delta=outer.delta,
        alphas=tuple(alphas),
        betas=_match_betas(alphas, inner.mode),
        mode=inner.mode,
        components=inner.components + outer.components,
    )


def split_deltas(ls: Sequence[int], delta: float) -> list[float]:
    """Per-component error bounds so the nested product has overall bound delta.

    Component i gets 1 / T_{1/M}(1/delta), with M the product of the L values
    nested around it; the outermost component keeps delta itself.
    """
    deltas = []
    for i in range(len(ls)):
        M = math.prod(2 * m + 1 for m in ls[i + 1:])
        if delta == 0.0:
            deltas.append(0.0)
        else:
            deltas.append(1.0 / cheb_T_frac(M, 1.0 / delta))
    return deltas


def nest_many(ls: Sequence[int], delta: float, mode: str = AMPLIFY) -> PhaseSchedule:
    """Left fold of pairwise nesting over components ``ls`` (innermost first)."""
    if not ls:
        raise ValueError("need at least one component")
    if any(m < 1 for m in ls):
        raise ValueError(f"component lengths must be positive, got {list(ls)}")
    parts = [fixed_point_phases(m, d, mode) for m, d in zip(ls, split_deltas(ls, delta))]
    sched = parts[0]
    for part in parts[1:]:
        sched = compose(sched, part)
    return sched


def nest(inner_l: int, outer_l: int, delta: float, mode: str = AMPLIFY) -> PhaseSchedule:
    """Nested schedule of length L = (2 inner_l + 1)(2 outer_l + 1) with error bound delta."""
    return nest_many([inner_l, outer_l], delta, mode)


def pi3_schedule(k: int) -> PhaseSchedule:
    """The k-level pi/3 recursion: the (l=1, delta=0) iterate nested with itself."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return fixed_point_phases(0, 0.0)
    return nest_many([1] * k, 0.0)
