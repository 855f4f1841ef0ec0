"""Chebyshev polynomials of the first kind, including the fractional order
1/L used to set the error bound, and the generalized polynomials produced
by the decoupled amplitude recurrence."""

from __future__ import annotations

import cmath
import math

# Inputs this close to a branch joint are snapped onto it.
JOINT_TOL = 1e-14


def _check_odd(L: int) -> None:
    if L < 1 or L % 2 != 1:
        raise ValueError(f"L must be an odd positive integer, got {L}")


def _cosh(y: float) -> float:
    try:
        return math.cosh(y)
    except OverflowError:
        raise OverflowError(f"Chebyshev value overflows float64 (cosh argument {y:.6g})") from None


def cheb_T(n: int, x: float) -> float:
    """T_n(x) for integer n >= 0 and any real x.

    Uses cos(n arccos x) inside [-1, 1] and the cosh/arccosh continuation
    outside, so large arguments never go through the growing recurrence.
    """
    if n < 0:
        raise ValueError(f"order must be nonnegative, got {n}")
    if abs(x - 1.0) <= JOINT_TOL:
        return 1.0
    if abs(x + 1.0) <= JOINT_TOL:
        return -1.0 if n % 2 else 1.0
    if -1.0 < x < 1.0:
        return math.cos(n * math.acos(x))
    if x > 1.0:
        return _cosh(n * math.acosh(x))
    sign = -1.0 if n % 2 else 1.0
    return sign * _cosh(n * math.acosh(-x))


def cheb_T_frac(L: int, x: float) -> float:
    """T_{1/L}(x) = cosh(arccosh(x) / L), defined for x >= 1.

    This is the inverse of T_L on [1, inf): ``cheb_T(L, cheb_T_frac(L, x)) == x``.
    """
    _check_odd(L)
    if math.isinf(x) and x > 0:
        return math.inf
    if x < 1.0:
        if x > 1.0 - JOINT_TOL:
            return 1.0
        raise ValueError(f"fractional order needs x >= 1, got {x}")
    return math.cosh(math.acosh(x) / L)


def gamma_of(delta: float, L: int) -> float:
    """gamma = 1 / T_{1/L}(1/delta); the delta -> 0 limit is gamma = 0."""
    _check_odd(L)
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    if delta == 0.0:
        return 0.0
    if delta == 1.0:
        return 1.0
    return 1.0 / cheb_T_frac(L, 1.0 / delta)


def cheb_ratio(L: int, y: float, z: float) -> float:
    """T_L(y) / T_L(z) for z >= 1 without forming either value when both are huge."""
    if z < 1e2:
        return cheb_T(L, y) / cheb_T(L, z)
    bz = math.acosh(z)
    if abs(y) <= 1.0:
        # |T_L(y)| <= 1 and T_L(z) is large but finite in log space
        den = L * bz + math.log1p(math.exp(-2 * L * bz)) - math.log(2.0)
        return cheb_T(L, y) * math.exp(-den)
    by = math.acosh(abs(y))
    sign = -1.0 if (y < 0 and L % 2) else 1.0
    return sign * math.exp(L * (by - bz)) * (1 + math.exp(-2 * L * by)) / (1 + math.exp(-2 * L * bz))


def gen_cheb_a(L: int, gamma: float, x: float) -> complex:
    """Evaluate a_L^(gamma)(x) through the decoupled recurrence

        a_h = x (1 + e^{-i d_h}) a_{h-1} - e^{-i d_h} a_{h-2},  d_h = zeta_h - zeta_{h-1},

    with a_0 = 1, a_1 = x.  Its modulus is |T_L(x/gamma)| / T_L(1/gamma).
    """
    from fpsearch.schedule import zeta_differences

    _check_odd(L)
    if gamma <= 0.0:
        raise ValueError("gen_cheb_a is undefined at gamma = 0; use the delta = 0 closed form")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    diffs = zeta_differences(L, gamma)
    a_prev, a = 1.0 + 0j, complex(x)
    for h in range(2, L + 1):
        rot = cmath.exp(-1j * diffs[h - 2])
        a_prev, a = a, x * (1 + rot) * a - rot * a_prev
    return a
