"""Exact quasi-stationary radius histories in implicit parametric form.

The leading-order radius equation

    dR/dt = -epsilon (1/R + 1/sqrt(t)),   R(0) = 1

separates in the similarity variables tau = sqrt(t), u = R/tau.  Each regime
has a closed-form branch in which time is an explicit, strictly decreasing
function of a single curve parameter and the radius follows algebraically:

* dissolution (0 < eps < 2), with k = sqrt(eps/(2-eps)) and parameter p >= k:
      t = exp(-2 k atan(1/p)) / [eps (2-eps) (1+p^2)]
      R = (p sqrt(2-eps) - sqrt(eps)) sqrt(eps t)
* growth (eps < 0), with k = sqrt(-eps/(2-eps)) and parameter p > 1:
      t = [(p+1)/(p-1)]^k / [(-eps)(2-eps)(p^2-1)]
      R = (p sqrt(2-eps) + sqrt(-eps)) sqrt(-eps t)
* supercritical (eps > 2), with k = sqrt(eps/(eps-2)) and parameter p >= k:
      t = [(p+1)/(p-1)]^(-k) / [eps (eps-2) (p^2-1)]
      R = (p sqrt(eps-2) - sqrt(eps)) sqrt(eps t)
* critical (eps == 2), parameter p >= 0:
      t = exp(-4/(p+2)) / (p+2)^2,   R = p sqrt(t)

Radius-at-time queries invert the monotone t(p) map by bisection, which is
unconditionally safe even at the extinction endpoint where dt/dp vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import MethodId, RadiusCurve
from .errors import DomainError, PastDissolutionError
from .model import Regime, classify_regime

#: Parametric radii smaller than this are reported as exactly zero; the
#: extinction endpoint suffers catastrophic cancellation at that scale.
RADIUS_CLAMP = 1e-13

#: Queries below this time return the initial radius exactly, avoiding the
#: 1/sqrt(t) singularity of the flux term.
TINY_TIME = 1e-14

_BISECT_MAX_ITER = 200
_BISECT_PARAM_TOL = 1e-14


def branch_exponent(eps: float) -> float:
    """sqrt(|eps/(2-eps)|): exponent constant of the implicit time formula."""
    if not math.isfinite(eps):
        raise DomainError("epsilon", "must be finite")
    if eps == 2:
        raise DomainError("epsilon", "the critical branch has no exponent constant")
    return math.sqrt(abs(eps / (2.0 - eps)))


def extinction_parameter(eps: float) -> float:
    """Curve-parameter value at which the radius reaches zero (eps > 0 only)."""
    if not math.isfinite(eps) or eps <= 0:
        raise DomainError("epsilon", "the radius only reaches zero for epsilon > 0")
    if eps == 2:
        return 0.0
    return branch_exponent(eps)


@dataclass(frozen=True)
class ParametricPoint:
    """One point of a solution curve: the parameter with its (t, R) pair."""

    parameter: float
    t: float
    radius: float
    regime: Regime

    def __post_init__(self):
        if not (math.isfinite(self.parameter) and math.isfinite(self.t)):
            raise DomainError("parameter", "parametric point must be finite")
        if self.t < 0 or self.radius < 0:
            raise DomainError("t", "time and radius must be non-negative")


def _log1p_sq(p: float) -> float:
    # log(1 + p^2) without overflowing p*p for huge parameters
    if p > 1e100:
        return 2.0 * math.log(p)
    return math.log1p(p * p)


def _time_dissolution(eps: float, p: float) -> float:
    k = math.sqrt(eps / (2.0 - eps))
    # 2 atan(p) - pi == -2 atan(1/p) for p > 0, evaluated without cancellation
    log_t = -2.0 * k * math.atan(1.0 / p) - math.log(eps * (2.0 - eps)) - _log1p_sq(p)
    return math.exp(log_t)


def _time_growth(eps: float, p: float) -> float:
    k = math.sqrt(-eps / (2.0 - eps))
    log_t = (
        k * math.log1p(2.0 / (p - 1.0))
        - math.log((-eps) * (2.0 - eps))
        - math.log(p - 1.0)
        - math.log(p + 1.0)
    )
    return math.exp(log_t) if log_t < 709.0 else math.inf


def _time_supercritical(eps: float, p: float) -> float:
    k = math.sqrt(eps / (eps - 2.0))
    log_t = (
        -k * math.log1p(2.0 / (p - 1.0))
        - math.log(eps * (eps - 2.0))
        - math.log(p - 1.0)
        - math.log(p + 1.0)
    )
    return math.exp(log_t)


def _time_critical(p: float) -> float:
    return math.exp(-4.0 / (p + 2.0) - 2.0 * math.log(p + 2.0))


def _clamp_radius(r: float) -> float:
    return 0.0 if abs(r) < RADIUS_CLAMP else r


def param_point_dissolution(eps: float, param: float) -> ParametricPoint:
    """Evaluate the dissolution branch (0 < eps < 2) at one curve parameter.

    The parameter runs from its lower bound (complete dissolution, R = 0)
    to infinity (t -> 0, R -> 1).
    """
    if not math.isfinite(eps) or not 0.0 < eps < 2.0:
        raise DomainError("epsilon", f"dissolution branch needs 0 < epsilon < 2, got {eps!r}")
    lower = extinction_parameter(eps)
    if not math.isfinite(param) or param < lower:
        raise DomainError("param", f"must be >= {lower!r} for epsilon={eps!r}, got {param!r}")
    t = _time_dissolution(eps, param)
    radius = _clamp_radius((param * math.sqrt(2.0 - eps) - math.sqrt(eps)) * math.sqrt(eps * t))
    return ParametricPoint(param, t, radius, Regime.DISSOLUTION)


def param_point_growth(eps: float, param: float) -> ParametricPoint:
    """Evaluate the growth branch (eps < 0) at one curve parameter (> 1)."""
    if not math.isfinite(eps) or eps >= 0.0:
        raise DomainError("epsilon", f"growth branch needs epsilon < 0, got {eps!r}")
    if not math.isfinite(param) or param <= 1.0:
        raise DomainError("param", f"must be > 1, got {param!r}")
    t = _time_growth(eps, param)
    radius = (param * math.sqrt(2.0 - eps) + math.sqrt(-eps)) * math.sqrt(-eps * t)
    return ParametricPoint(param, t, radius, Regime.GROWTH)


def param_point_supercritical(eps: float, param: float) -> ParametricPoint:
    """Evaluate the supercritical dissolution branch (eps > 2)."""
    if not math.isfinite(eps) or eps <= 2.0:
        raise DomainError("epsilon", f"supercritical branch needs epsilon > 2, got {eps!r}")
    lower = extinction_parameter(eps)
    if not math.isfinite(param) or param < lower:
        raise DomainError("param", f"must be >= {lower!r} for epsilon={eps!r}, got {param!r}")
    t = _time_supercritical(eps, param)
    radius = _clamp_radius((param * math.sqrt(eps - 2.0) - math.sqrt(eps)) * math.sqrt(eps * t))
    return ParametricPoint(param, t, radius, Regime.SUPERCRITICAL)


def param_point_critical(param: float) -> ParametricPoint:
    """Evaluate the critical branch (eps == 2) at one curve parameter (>= 0)."""
    if not math.isfinite(param) or param < 0.0:
        raise DomainError("param", f"must be >= 0, got {param!r}")
    t = _time_critical(param)
    radius = _clamp_radius(param * math.sqrt(t))
    return ParametricPoint(param, t, radius, Regime.CRITICAL)


def time_to_dissolution(eps: float) -> float:
    """Dimensionless time at which the radius reaches zero, for eps > 0.

    The three dissolving branches give

        0 < eps < 2:  exp(-2 k atan(1/k)) / (2 eps),  k = sqrt(eps/(2-eps))
        eps == 2:     exp(-2) / 4
        eps > 2:      exp(-2 k atanh(1/k)) / (2 eps), k = sqrt(eps/(eps-2))

    which join continuously at eps = 2.
    """
    if not math.isfinite(eps):
        raise DomainError("epsilon", "must be finite")
    if eps <= 0:
        raise DomainError("epsilon", "dissolution never completes for epsilon <= 0")
    if eps == 2:
        return math.exp(-2.0) / 4.0
    k = branch_exponent(eps)
    if eps < 2:
        return math.exp(-2.0 * k * math.atan(1.0 / k)) / (2.0 * eps)
    return math.exp(-2.0 * k * math.atanh(1.0 / k)) / (2.0 * eps)


def _invert_time(time_of: Callable[[float], float], lo: float, hi: float, t: float) -> float:
    """Bisect the strictly decreasing map ``time_of`` to locate time ``t``.

    ``time_of(lo) >= t >= time_of(hi)`` must hold on entry.
    """
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if time_of(mid) > t:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _BISECT_PARAM_TOL:
            break
    return 0.5 * (lo + hi)


def _branch(eps: float):
    """Return (time_of_param, radius_of(param, t), lower_bound) for eps != 0."""
    regime = classify_regime(eps)
    if regime is Regime.DISSOLUTION:
        return (
            lambda p: _time_dissolution(eps, p),
            lambda p, t: (p * math.sqrt(2.0 - eps) - math.sqrt(eps)) * math.sqrt(eps * t),
            extinction_parameter(eps),
        )
    if regime is Regime.GROWTH:
        return (
            lambda p: _time_growth(eps, p),
            lambda p, t: (p * math.sqrt(2.0 - eps) + math.sqrt(-eps)) * math.sqrt(-eps * t),
            1.0,
        )
    if regime is Regime.SUPERCRITICAL:
        return (
            lambda p: _time_supercritical(eps, p),
            lambda p, t: (p * math.sqrt(eps - 2.0) - math.sqrt(eps)) * math.sqrt(eps * t),
            extinction_parameter(eps),
        )
    if regime is Regime.CRITICAL:
        return (
            _time_critical,
            lambda p, t: p * math.sqrt(t),
            0.0,
        )
    raise DomainError("epsilon", "the static regime has no parametric branch")


def _param_at_time(eps: float, t: float) -> float:
    """Invert t(p) for the regime of ``eps`` (eps != 0, 0 < t <= t0 where bounded)."""
    time_of, _, lower = _branch(eps)
    regime = classify_regime(eps)
    if regime is Regime.GROWTH:
        # t(p) -> inf as p -> 1+ and -> 0 as p -> inf: expand a bracket both ways
        lo = 2.0
        while time_of(lo) < t:
            lo = 1.0 + 0.25 * (lo - 1.0)
            if lo - 1.0 < 1e-300:
                raise DomainError("t", f"t={t!r} too large to invert")
        hi = max(lo, 2.0)
        while time_of(hi) > t:
            hi = 1.0 + 2.0 * (hi - 1.0)
        return _invert_time(time_of, lo, hi, t)
    hi = lower + 1.0
    while time_of(hi) > t:
        hi = lower + 2.0 * (hi - lower)
    return _invert_time(time_of, lower, hi, t)


def radius_at(eps: float, t: float) -> float:
    """Radius at a given dimensionless time, by inverting the implicit relation.

    For eps > 0 the time must not exceed the complete-dissolution time; such
    queries raise ``PastDissolutionError``.
    """
    if not math.isfinite(eps) or not math.isfinite(t):
        raise DomainError("t" if math.isfinite(eps) else "epsilon", "must be finite")
    if t < 0:
        raise DomainError("t", f"must be non-negative, got {t!r}")
    if t < TINY_TIME:
        return 1.0
    if eps == 0:
        return 1.0
    if eps > 0:
        t0 = time_to_dissolution(eps)
        if t > t0:
            if t <= t0 * (1.0 + 1e-12):
                return 0.0
            raise PastDissolutionError(t, t0)
        if t == t0:
            return 0.0
    time_of, radius_of, _ = _branch(eps)
    p = _param_at_time(eps, t)
    return max(_clamp_radius(radius_of(p, time_of(p))), 0.0)


def exact_curve(eps: float, n: int = 256, t_max: float | None = None) -> RadiusCurve:
    """Sample the exact solution on a geometric parameter grid.

    For eps > 0 the curve spans from near t = 0 (R near 1) down to complete
    dissolution (R = 0), or to ``t_max`` if that comes first.  For eps <= 0
    there is no finite endpoint and ``t_max`` is required.  The parameter
    grid is log-spaced in the offset from the branch's lower bound, which
    resolves both the t -> 0 and the R -> 0 ends.
    """
    if not isinstance(n, int) or n < 2:
        raise DomainError("n", f"need at least 2 samples, got {n!r}")
    if not math.isfinite(eps):
        raise DomainError("epsilon", "must be finite")
    if t_max is not None and (not math.isfinite(t_max) or t_max <= 0):
        raise DomainError("t_max", f"must be positive, got {t_max!r}")

    metadata = {
        "samples": n,
        "parameter_grid": "geometric",
        "t_max": t_max,
    }
    if eps == 0:
        if t_max is None:
            raise DomainError("t_max", "required for epsilon <= 0 (no finite endpoint)")
        times = np.linspace(0.0, t_max, n)
        return RadiusCurve(MethodId.EXACT_QS, eps, times, np.ones(n), metadata)

    time_of, radius_of, lower = _branch(eps)

    if eps > 0:
        t0 = time_to_dissolution(eps)
        t_end = min(t_max, t0) if t_max is not None else t0
        t_first = t_end * 1e-10
        p_hi = _param_at_time(eps, t_first)
        if t_end >= t0:
            # include the extinction endpoint exactly, then fan out geometrically
            g_small = 1e-6 * (1.0 + lower)
            offsets = np.concatenate(
                ([0.0], np.geomspace(g_small, p_hi - lower, n - 1))
            )
        else:
            p_end = _param_at_time(eps, t_end)
            offsets = np.geomspace(p_end - lower, p_hi - lower, n)
        params = lower + offsets
    else:
        if t_max is None:
            raise DomainError("t_max", "required for epsilon <= 0 (no finite endpoint)")
        p_end = _param_at_time(eps, t_max)
        p_hi = _param_at_time(eps, t_max * 1e-10)
        params = lower + np.geomspace(p_end - lower, p_hi - lower, n)

    # descending parameter <=> ascending time
    params = np.sort(params)[::-1]
    times = np.array([time_of(p) for p in params])
    radii = np.array([max(_clamp_radius(radius_of(p, t)), 0.0) for p, t in zip(params, times)])
    return RadiusCurve(MethodId.EXACT_QS, eps, times, radii, metadata)


def concentration_profile(radius: float, t: float, r: float) -> float:
    """Leading-order concentration around a sphere of the given radius.

    C(r, t) = (radius / r) * erfc((r - radius) * sqrt(pi / (4 t)))

    in units where the surface value is 1 and the far field 0.  Arguments
    of the complementary error function beyond 6 contribute less than
    1e-16 and are reported as exactly zero.
    """
    if not (math.isfinite(radius) and math.isfinite(t) and math.isfinite(r)):
        raise DomainError("r", "arguments must be finite")
    if radius <= 0:
        raise DomainError("radius", f"must be positive, got {radius!r}")
    if t <= 0:
        raise DomainError("t", f"must be positive, got {t!r}")
    if r < radius:
        raise DomainError("r", f"position {r!r} lies inside the particle (radius {radius!r})")
    x = (r - radius) * math.sqrt(math.pi / (4.0 * t))
    if x > 6.0:
        return 0.0
    return (radius / r) * math.erfc(x)
