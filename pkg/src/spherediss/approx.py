"""Explicit approximate radius formulas and their complete-dissolution times.

Every closed form here is an algebraic function of sqrt(t):

    qss:        R = sqrt(1 - 2 eps t)                   (steady surface flux only)
    small-time: R = 1 - 2 eps sqrt(t)                   (planar transient flux only)
    intuitive:  R = sqrt(1 - 2 eps t) - 2 eps sqrt(t)   (sum of both effects)
    duda:       R = sqrt(1 - 2 eps (2 sqrt(t) + t))     (boundary-fitted closed form)
    blended:    R = sqrt(alpha * duda^2 + (1-alpha) * intuitive^2)

The blended weight alpha(eps) is a semi-empirical fit valid only for
-0.5 <= eps <= 0.5; outside that range it is refused unless extrapolation
is explicitly requested.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import exact
from .curves import MethodId, RadiusCurve
from .errors import (
    ClampedRadiusWarning,
    DomainError,
    EpsilonRangeError,
    ExtrapolationWarning,
    PastDissolutionError,
    warn_clamped,
)

FIT_RANGE = (-0.5, 0.5)

#: Resolution of the sign-change scan used to locate the blended formula's
#: first radicand zero (the scan is uniform in sqrt(t)).
_BLEND_SCAN_POINTS = 4096
_BLEND_T0_REL_TOL = 1e-12


def _check_time(t: float) -> None:
    if not math.isfinite(t) or t < 0:
        raise DomainError("t", f"must be a non-negative finite time, got {t!r}")


def _check_eps(eps: float, nonzero: bool = False) -> None:
    if not math.isfinite(eps):
        raise DomainError("epsilon", "must be finite")
    if nonzero and eps == 0:
        raise DomainError("epsilon", "this formula is undefined at epsilon = 0")


def qss_radius(eps: float, t: float) -> float:
    """Quasi-steady-state radius sqrt(1 - 2 eps t)."""
    _check_eps(eps)
    _check_time(t)
    if eps > 0:
        t0 = 0.5 / eps
        if t > t0 * (1.0 + 1e-12):
            raise PastDissolutionError(t, t0, "qss")
    return math.sqrt(max(1.0 - 2.0 * eps * t, 0.0))


def small_time_radius(eps: float, t: float) -> float:
    """Short-time radius 1 - 2 eps sqrt(t); negative values clamp to 0."""
    _check_eps(eps)
    _check_time(t)
    radius = 1.0 - 2.0 * eps * math.sqrt(t)
    if radius < 0.0:
        warn_clamped("small-time", t)
        return 0.0
    return radius


def intuitive_t0(eps: float) -> float:
    """Complete-dissolution time of the combined-flux formula, 1/(2 eps (2 eps + 1))."""
    _check_eps(eps, nonzero=True)
    if eps < 0:
        raise DomainError("epsilon", "dissolution never completes for epsilon < 0")
    return 1.0 / (2.0 * eps * (2.0 * eps + 1.0))


def intuitive_radius(eps: float, t: float) -> float:
    """Combined-flux radius sqrt(1 - 2 eps t) - 2 eps sqrt(t)."""
    _check_eps(eps, nonzero=True)
    _check_time(t)
    if eps > 0 and t > intuitive_t0(eps) * (1.0 + 1e-12):
        raise PastDissolutionError(t, intuitive_t0(eps), "intuitive")
    return max(math.sqrt(max(1.0 - 2.0 * eps * t, 0.0)) - 2.0 * eps * math.sqrt(t), 0.0)


def duda_t0(eps: float) -> float:
    """Complete-dissolution time of the boundary-fitted closed form."""
    _check_eps(eps, nonzero=True)
    if eps < 0:
        raise DomainError("epsilon", "dissolution never completes for epsilon < 0")
    return (math.sqrt(1.0 + 0.5 / eps) - 1.0) ** 2


def duda_radius(eps: float, t: float) -> float:
    """Boundary-fitted closed-form radius sqrt(1 - 2 eps (2 sqrt(t) + t))."""
    _check_eps(eps, nonzero=True)
    _check_time(t)
    if eps > 0 and t > duda_t0(eps) * (1.0 + 1e-12):
        raise PastDissolutionError(t, duda_t0(eps), "duda")
    return math.sqrt(max(1.0 - 2.0 * eps * (2.0 * math.sqrt(t) + t), 0.0))


@dataclass(frozen=True)
class BlendWeight:
    """Blending weight with the epsilon interval its fit covers."""

    alpha: float
    epsilon_domain: tuple[float, float]

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError("alpha", f"must lie in [0, 1], got {self.alpha!r}")


def _check_fit_range(eps: float, allow_extrapolation: bool) -> None:
    _check_eps(eps, nonzero=True)
    if FIT_RANGE[0] <= eps <= FIT_RANGE[1]:
        return
    if not allow_extrapolation:
        raise EpsilonRangeError(
            f"blended fit covers {FIT_RANGE[0]} <= epsilon <= {FIT_RANGE[1]} (got {eps:g}); "
            "pass allow_extrapolation=True to override"
        )
    warnings.warn(
        f"extrapolating the blended fit to epsilon={eps:g} outside {FIT_RANGE}",
        ExtrapolationWarning,
        stacklevel=3,
    )


def blend_alpha(eps: float, allow_extrapolation: bool = False) -> BlendWeight:
    """Semi-empirical blending weight between the two explicit closed forms.

    Three fitted branches: a rational form on 0 < eps < 0.1, a quadratic in
    log10(eps) on 0.1 <= eps <= 0.5 (inclusive at both ends), and a rational
    form in |eps| on -0.5 <= eps < 0.
    """
    _check_fit_range(eps, allow_extrapolation)
    if eps < 0:
        alpha = 0.5381 * (1.0 - 0.3 / (1.0 + abs(eps) ** (-0.6514)))
        domain = (-0.5, 0.0)
    elif eps < 0.1:
        alpha = 0.781 * (1.0 - 1.935 / (1.0 + 1.05 * eps ** (-0.4278)))
        domain = (0.0, 0.1)
    else:
        lg = math.log10(eps)
        alpha = 0.0193 * lg * lg - 0.2703 * lg + 0.095
        domain = (0.1, 0.5)
    # extrapolated evaluations can leave the fitted weight's range
    return BlendWeight(min(max(alpha, 0.0), 1.0), domain)


def _blend_radicand(eps: float, alpha: float, t: float) -> float:
    st = math.sqrt(t)
    duda_sq = 1.0 - 2.0 * eps * (2.0 * st + t)
    inner = max(1.0 - 2.0 * eps * t, 0.0)
    intuitive = math.sqrt(inner) - 2.0 * eps * st
    return alpha * duda_sq + (1.0 - alpha) * intuitive * intuitive


@lru_cache(maxsize=512)
def blended_t0(eps: float, allow_extrapolation: bool = False) -> float:
    """First zero of the blended radicand: the formula's dissolution time.

    Located by a sign-change scan uniform in sqrt(t) over [0, 1/(2 eps)]
    followed by bisection.
    """
    _check_fit_range(eps, allow_extrapolation)
    if eps <= 0:
        raise DomainError("epsilon", "dissolution never completes for epsilon <= 0")
    alpha = blend_alpha(eps, allow_extrapolation).alpha
    t_cap = 0.5 / eps
    roots = np.linspace(0.0, math.sqrt(t_cap), _BLEND_SCAN_POINTS + 1)
    previous = 1.0
    bracket = None
    for s in roots[1:]:
        value = _blend_radicand(eps, alpha, s * s)
        if value <= 0.0:
            bracket = (previous, s)
            break
        previous = s
    if bracket is None:
        raise DomainError("epsilon", f"blended radicand has no zero below t={t_cap:g}")
    lo, hi = bracket[0] ** 2, bracket[1] ** 2
    tol = _BLEND_T0_REL_TOL * max(1.0, t_cap)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _blend_radicand(eps, alpha, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def blended_radius(eps: float, t: float, allow_extrapolation: bool = False) -> float:
    """Weighted combination of the two explicit closed forms.

    For eps > 0 the radius is clamped to 0 from the first radicand zero
    onwards (the radicand can become positive again later, which has no
    physical meaning past complete dissolution).
    """
    _check_fit_range(eps, allow_extrapolation)
    _check_time(t)
    alpha = blend_alpha(eps, allow_extrapolation).alpha
    if eps > 0 and t >= blended_t0(eps, allow_extrapolation):
        if t > 0.0:
            warn_clamped("blended", t)
        return 0.0
    return math.sqrt(max(_blend_radicand(eps, alpha, t), 0.0))


#: Methods with a closed-form (or root-findable) dissolution time.
_T0_DISPATCH = {
    MethodId.EXACT_QS: exact.time_to_dissolution,
    MethodId.QSS: lambda eps: 0.5 / eps,
    MethodId.SMALL_TIME: lambda eps: 0.25 / (eps * eps),
    MethodId.INTUITIVE: intuitive_t0,
    MethodId.DUDA_VRENTAS: duda_t0,
    MethodId.BLENDED: blended_t0,
}


def approx_t0(method: MethodId, eps: float) -> float:
    """Complete-dissolution time predicted by the given method, for eps > 0."""
    _check_eps(eps)
    if eps <= 0:
        raise DomainError("epsilon", "no method predicts complete dissolution for epsilon <= 0")
    try:
        handler = _T0_DISPATCH[method]
    except KeyError:
        raise DomainError(
            "method",
            f"{method.value!r} has no closed-form dissolution time; run its solver directly",
        ) from None
    return handler(eps)


_RADIUS_DISPATCH = {
    MethodId.QSS: qss_radius,
    MethodId.SMALL_TIME: small_time_radius,
    MethodId.INTUITIVE: intuitive_radius,
    MethodId.DUDA_VRENTAS: duda_radius,
    MethodId.BLENDED: blended_radius,
}


def approx_radius(method: MethodId, eps: float, t: float) -> float:
    """Evaluate one of the explicit approximations by method id."""
    try:
        handler = _RADIUS_DISPATCH[method]
    except KeyError:
        raise DomainError("method", f"{method.value!r} is not an explicit approximation") from None
    return handler(eps, t)


def approx_curve(
    method: MethodId, eps: float, n: int = 256, t_max: float | None = None
) -> RadiusCurve:
    """Sample an explicit approximation uniformly in sqrt(t).

    For eps > 0 the grid spans [0, t0(method)] unless ``t_max`` cuts it
    short; for eps <= 0 a ``t_max`` is required.
    """
    if not isinstance(n, int) or n < 2:
        raise DomainError("n", f"need at least 2 samples, got {n!r}")
    if method not in _RADIUS_DISPATCH:
        raise DomainError("method", f"{method.value!r} is not an explicit approximation")
    _check_eps(eps)
    if eps > 0:
        t_end = approx_t0(method, eps)
        if t_max is not None:
            t_end = min(t_end, t_max)
    else:
        if t_max is None:
            raise DomainError("t_max", "required for epsilon <= 0 (no finite endpoint)")
        t_end = t_max
    times = np.linspace(0.0, math.sqrt(t_end), n) ** 2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClampedRadiusWarning)
        radii = np.array([approx_radius(method, eps, t) for t in times])
    return RadiusCurve(method, eps, times, radii, {"samples": n, "t_max": t_max})
