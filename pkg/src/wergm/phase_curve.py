"""The two-maximizer region and the first-order transition curve.

For the uniform(0, 1) law and a fixed shape exponent ``p``, the objective
has two local maximizers exactly when ``(beta1, beta2)`` lies inside a
V-shaped region bounded by two curves.  The boundary is the parametric
curve ``u -> (-f(u), m(u))``: for a given ``beta1`` below the critical
value, the tangency condition ``f(u) = -beta1`` has one root ``a`` below
``u0`` and one root ``b`` above, and the region is ``m(b) < beta2 < m(a)``.

Inside that bracket the value gap between the upper and lower local
maximum is strictly increasing in ``beta2`` and changes sign exactly once;
the zero is the first-order transition curve ``beta2 = r(beta1)``, where
both maximizers are global.  ``r_of_beta1`` locates it by bisection,
continuing both maximizers in ``beta2`` by Newton steps so their
identities never swap near the tie.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import cramer, critical, variational
from .errors import (
    BracketError,
    InputValidationError,
    NoTwoPhaseRegionError,
    ThetaCapError,
)

_MODULE = "phase_curve"

#: Absolute u-tolerance for the bounding-root bisections.
ROOT_TOL = 1e-11

#: Absolute beta2 tolerance for the transition-curve bisection.
CURVE_TOL = 1e-10

#: Tracing stops this far below the critical beta1: at the corner the two
#: maximizers merge and the tie becomes a degenerate double root.
CORNER_MARGIN = 1e-3

#: Tilt bound defining how close to the support endpoints root searches
#: reach; the duals of +-THETA_WINDOW are the effective u-interval.
THETA_WINDOW = 680.0

#: Relative inset from the bounding bracket's edges used when verifying
#: that the maxima gap changes sign (at the exact edges one maximum
#: degenerates into an inflection and the gap is ill-defined).
_EDGE_INSET = 1e-6


@dataclass(frozen=True)
class BoundingPoint:
    """Bounding data of the two-maximizer region at one ``beta1``.

    ``a`` and ``b`` are the tangency roots of ``f(u) = -beta1`` below and
    above ``u0``; ``m_a = m(a)`` is the upper bounding ``beta2`` and
    ``m_b = m(b)`` the lower.
    """

    beta1: float
    a: float
    b: float
    m_a: float
    m_b: float


@dataclass(frozen=True)
class PhaseCurvePoint:
    """One point of the transition curve: tie location and maximizers."""

    beta1: float
    r: float
    u1_star: float
    u2_star: float
    psi: float


def _u_window() -> tuple[float, float]:
    lo = cramer.log_mgf_d1(cramer.UNIFORM01, -THETA_WINDOW)
    hi = cramer.log_mgf_d1(cramer.UNIFORM01, THETA_WINDOW)
    return lo, hi


def _check_beta1(p: int, beta1: float, operation: str) -> tuple[float, critical.CriticalData]:
    beta1 = float(beta1)
    if not math.isfinite(beta1):
        raise InputValidationError(
            f"beta1 must be finite, got {beta1!r}",
            module=_MODULE,
            operation=operation,
            offending_parameter="beta1",
        )
    data = critical.find_theta0(p)
    if beta1 >= data.beta1_c:
        raise NoTwoPhaseRegionError(
            f"beta1 = {beta1:g} is not below the critical value "
            f"{data.beta1_c:.6g}; no two-maximizer region exists there",
            module=_MODULE,
            operation=operation,
            offending_parameter="beta1",
        )
    return beta1, data


def _bisect_on_sign(fn, lo: float, hi: float, v_lo: float, tol: float) -> float:
    """Root of ``fn`` on a sign-changing bracket, to absolute ``tol`` in x."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        v_mid = fn(mid)
        if v_mid == 0.0:
            return mid
        if (v_mid > 0.0) == (v_lo > 0.0):
            lo, v_lo = mid, v_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bounding_point(p: int, beta1: float) -> BoundingPoint:
    """Tangency roots of ``f(u) = -beta1`` and the bounding ``beta2`` pair.

    ``f`` decreases from the left support side to its minimum at ``u0``
    and increases beyond, so each side holds exactly one root; both are
    refined by bisection to ROOT_TOL.
    """
    beta1, data = _check_beta1(p, beta1, "bounding_point")
    target = -beta1
    u_lo, u_hi = _u_window()

    def resid(u: float) -> float:
        return critical.f_of_u(p, u) - target

    r_left = resid(u_lo)
    if r_left <= 0.0:
        raise ThetaCapError(
            f"the lower tangency root for beta1 = {beta1:g} lies outside "
            "the tilt-reachable u-window",
            module=_MODULE,
            operation="bounding_point",
            offending_parameter="beta1",
        )
    r_right = resid(u_hi)
    if r_right <= 0.0:
        raise ThetaCapError(
            f"the upper tangency root for beta1 = {beta1:g} lies outside "
            "the tilt-reachable u-window",
            module=_MODULE,
            operation="bounding_point",
            offending_parameter="beta1",
        )
    # resid(u0) = f(u0) + beta1 = beta1 - beta1_c < 0: both sides bracket.
    a = _bisect_on_sign(resid, u_lo, data.u0, r_left, ROOT_TOL)
    b = _bisect_on_sign(resid, data.u0, u_hi, resid(data.u0), ROOT_TOL)
    return BoundingPoint(
        beta1=beta1, a=a, b=b, m_a=critical.m_of_u(p, a), m_b=critical.m_of_u(p, b)
    )


def _best_in_window(
    params: variational.ModelParams, lo: float, hi: float
) -> float | None:
    """Best local maximizer of the objective strictly inside (lo, hi)."""
    best_u, best_v = None, -math.inf
    for mx in variational.local_maxima(params):
        if lo < mx.u < hi and mx.value > best_v:
            best_u, best_v = mx.u, mx.value
    return best_u


def _track_maximum(
    params: variational.ModelParams, seed: float, lo: float, hi: float
) -> float | None:
    """Continue a local maximum from ``seed`` by safeguarded Newton.

    Returns None when the iteration leaves (lo, hi), meets the wrong
    curvature, or stalls — the caller then falls back to a fresh scan.
    """
    u = seed
    for _ in range(60):
        d2 = variational.objective_d2(params, u)
        if d2 >= 0.0:
            return None
        u_new = u - variational.objective_d1(params, u) / d2
        if not lo < u_new < hi:
            return None
        if abs(u_new - u) <= 1e-11:
            return u_new
        u = u_new
    return None


def _maxima_pair(
    params: variational.ModelParams,
    u0: float,
    window: tuple[float, float],
    seeds: tuple[float, float] | None,
) -> tuple[float | None, float | None]:
    """The lower and upper local maximizer, by continuation or fresh scan."""
    lo, hi = window
    u1 = u2 = None
    if seeds is not None:
        u1 = _track_maximum(params, seeds[0], lo, u0)
        u2 = _track_maximum(params, seeds[1], u0, hi)
    if u1 is None:
        u1 = _best_in_window(params, lo, u0)
    if u2 is None:
        u2 = _best_in_window(params, u0, hi)
    return u1, u2


def maxima_gap(
    p: int,
    beta1: float,
    beta2: float,
    *,
    _seeds: tuple[float, float] | None = None,
) -> float:
    """Value gap l(upper max) - l(lower max) for the uniform law.

    Returns -inf when the upper local maximum does not exist and +inf when
    the lower one does not — the sign is what the curve bisection needs,
    and there is no finite gap to report in either degenerate case.
    """
    _, data = _check_beta1(p, beta1, "maxima_gap")
    params = variational.ModelParams(beta1, beta2, p, cramer.UNIFORM01)
    u1, u2 = _maxima_pair(params, data.u0, _u_window(), _seeds)
    if u1 is None and u2 is None:
        raise BracketError(
            f"no local maxima found at (beta1, beta2) = ({beta1:g}, {beta2:g})",
            module=_MODULE,
            operation="maxima_gap",
            offending_parameter="beta2",
        )
    if u2 is None:
        return -math.inf
    if u1 is None:
        return math.inf
    return variational.objective(params, u2) - variational.objective(params, u1)


def r_of_beta1(
    p: int, beta1: float, dist: cramer.EdgeDistribution = cramer.UNIFORM01
) -> PhaseCurvePoint:
    """Transition ``beta2`` at the given ``beta1``, with both maximizers.

    Bisection on the sign of the maxima gap over the bounding bracket
    ``(m_b, m_a)``; the gap must be negative just above the lower edge and
    positive just below the upper edge, otherwise the bracket is reported
    as inconsistent.  Only interior points are ever evaluated — at the
    exact edges one maximum degenerates into an inflection.
    """
    if dist != cramer.UNIFORM01:
        raise InputValidationError(
            "the transition-curve analysis is specific to the uniform(0,1) law",
            module=_MODULE,
            operation="r_of_beta1",
            offending_parameter="dist",
        )
    beta1, data = _check_beta1(p, beta1, "r_of_beta1")
    bound = bounding_point(p, beta1)
    width = bound.m_a - bound.m_b
    lo = bound.m_b + _EDGE_INSET * width
    hi = bound.m_a - _EDGE_INSET * width
    u0 = data.u0
    window = _u_window()

    seeds: tuple[float, float] | None = None

    def gap(beta2: float) -> float:
        nonlocal seeds
        params = variational.ModelParams(beta1, beta2, p, cramer.UNIFORM01)
        u1, u2 = _maxima_pair(params, u0, window, seeds)
        if u1 is not None and u2 is not None:
            seeds = (u1, u2)
            return variational.objective(params, u2) - variational.objective(
                params, u1
            )
        if u1 is None and u2 is None:
            raise BracketError(
                f"no local maxima inside the bracket at beta2 = {beta2:g}",
                module=_MODULE,
                operation="r_of_beta1",
                offending_parameter="beta1",
            )
        return -math.inf if u2 is None else math.inf

    g_lo = gap(lo)
    g_hi = gap(hi)
    if not (g_lo < 0.0 < g_hi):
        raise BracketError(
            "maxima gap does not change sign across the bounding bracket: "
            f"gap({lo:.6g}) = {g_lo:.3g}, gap({hi:.6g}) = {g_hi:.3g}",
            module=_MODULE,
            operation="r_of_beta1",
            offending_parameter="beta1",
        )
    while hi - lo > CURVE_TOL:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    r = 0.5 * (lo + hi)

    params = variational.ModelParams(beta1, r, p, cramer.UNIFORM01)
    u1, u2 = _maxima_pair(params, u0, window, seeds)
    if u1 is None or u2 is None:
        raise BracketError(
            f"maximizers degenerate at the located tie point r = {r:.12g}",
            module=_MODULE,
            operation="r_of_beta1",
            offending_parameter="beta1",
        )
    l1 = variational.objective(params, u1)
    l2 = variational.objective(params, u2)
    return PhaseCurvePoint(
        beta1=beta1, r=r, u1_star=u1, u2_star=u2, psi=max(l1, l2)
    )


def trace_curve(
    p: int, beta1_lo: float, beta1_hi: float, steps: int
) -> list[PhaseCurvePoint]:
    """Transition-curve points on a uniform ``beta1`` grid.

    The effective upper end is clamped to ``beta1_c - CORNER_MARGIN``:
    at the corner itself the tie becomes a degenerate double root, and
    the corner's coordinates are known exactly from ``find_theta0``.
    """
    if not float(steps).is_integer() or int(steps) < 2:
        raise InputValidationError(
            f"steps must be an integer >= 2, got {steps!r}",
            module=_MODULE,
            operation="trace_curve",
            offending_parameter="steps",
        )
    steps = int(steps)
    data = critical.find_theta0(p)
    if beta1_hi > data.beta1_c:
        raise InputValidationError(
            f"beta1_hi = {beta1_hi:g} exceeds the critical value "
            f"{data.beta1_c:.6g}",
            module=_MODULE,
            operation="trace_curve",
            offending_parameter="beta1_hi",
        )
    hi_eff = min(float(beta1_hi), data.beta1_c - CORNER_MARGIN)
    if not beta1_lo < hi_eff:
        raise InputValidationError(
            f"empty tracing range: [{beta1_lo:g}, {hi_eff:g}]",
            module=_MODULE,
            operation="trace_curve",
            offending_parameter="beta1_lo",
        )
    step = (hi_eff - beta1_lo) / (steps - 1)
    grid = [beta1_lo + i * step for i in range(steps - 1)] + [hi_eff]
    return [r_of_beta1(p, b) for b in grid]


def jump_profile(p: int, beta1: float) -> tuple[float, float]:
    """Jumps of the envelope gradient across the curve at ``beta1``.

    Returns ``(u2* - u1*, u2***p - u1***p)`` — the discontinuities of the
    two partial derivatives of psi when the transition curve is crossed.
    """
    point = r_of_beta1(p, beta1)
    return (
        point.u2_star - point.u1_star,
        point.u2_star**p - point.u1_star**p,
    )
