"""Hermite-Hadamard checks and Sugeno-integral upper bounds for log-convex
functions.

For log-convex ``g`` on ``[a, b]`` the log-linear majorant
``h(x) = g(a)**((b-x)/(b-a)) * g(b)**((x-a)/(b-a))`` dominates ``g``, so the
Sugeno integral of ``g`` is at most that of ``h``. The distribution of ``h``
is explicit, and its fixed point ``alpha`` gives the bound
``min(alpha, b - a)``. Which equation ``alpha`` solves depends on whether
``g`` rises, falls or is level between the endpoints.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .analysis import RealFunction, classify, logarithmic_mean
from .errors import BoundViolation, PreconditionError
from .measure import Interval, lebesgue
from .rootfind import LOG_INSET, Root, RootConfig, bisect
from .sugeno import DistributionFunction, integrate, integrate_grid

# bisect to (nearly) machine precision so the unit and general forms agree to 1e-10
BOUND_ROOT = RootConfig(abs_tol=1e-15, max_iter=400)
EQUAL_RTOL = 1e-12

UNIT_INCREASING = "unit_increasing"
UNIT_DECREASING = "unit_decreasing"
UNIT_EQUAL = "unit_equal"
GENERAL_INCREASING = "general_increasing"
GENERAL_EQUAL = "general_equal"
GENERAL_DECREASING = "general_decreasing"


class NotLogConvexWarning(UserWarning):
    """The sampled input is not log-convex, so the bound is not guaranteed."""


@dataclass(frozen=True)
class HHBound:
    case: str
    alpha: float
    t: float | None
    bound: float
    residual: float
    a: float
    b: float
    g_a: float
    g_b: float
    sound: bool = True
    saturated: bool = False  # min(g(a), g(b)) >= b - a: the bound is the full length
    equations: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "alpha": self.alpha,
            "t": self.t,
            "bound": self.bound,
            "residual": self.residual,
            "a": self.a,
            "b": self.b,
            "g_a": self.g_a,
            "g_b": self.g_b,
            "sound": self.sound,
            "saturated": self.saturated,
            "equations": dict(self.equations),
        }


def _endpoints(g: RealFunction, a: float, b: float):
    if not a < b:
        raise PreconditionError(f"need a < b, got a={a}, b={b}")
    ga, gb = g(a), g(b)
    if not (ga > 0 and gb > 0):
        raise PreconditionError(f"endpoint values must be positive, got g(a)={ga}, g(b)={gb}")
    return float(ga), float(gb)


def _soundness(g: RealFunction, a: float, b: float, check: bool) -> bool:
    if not check:
        return True
    report = classify(g.restrict(a, b))
    if not report.log_convex:
        warnings.warn(
            f"{g.label} does not look log-convex on [{a}, {b}] "
            f"(worst midpoint violation {report.worst_violation:.3g}); the bound may not hold",
            NotLogConvexWarning,
            stacklevel=3,
        )
    return report.log_convex


def _solve_case(phi, g_min: float, g_max: float, width: float) -> Root:
    # phi(g_min) = width - g_min and phi(g_max) = -g_max; when g_min >= width the
    # root sits in [width, g_min] and the bound saturates at width
    if g_min < width:
        return bisect(phi, max(g_min, LOG_INSET), g_max, BOUND_ROOT)
    if g_min == width:
        return Root(width, phi(width), 0, (width, width))
    return bisect(phi, width, g_min, BOUND_ROOT)


def _equal(ga: float, gb: float) -> bool:
    return abs(ga - gb) <= EQUAL_RTOL * max(ga, gb)


def bound_unit(g: RealFunction, check_log_convex: bool = True) -> HHBound:
    """Upper bound for the Sugeno integral of ``g`` over ``[0, 1]``.

    Rising ``g`` (``g(0) < g(1)``): ``alpha`` solves
    ``1 - (ln a - ln g0) / (ln g1 - ln g0) = a``, equivalently
    ``g0**(1-t) * g1**t + t - 1 = 0`` with ``t = 1 - alpha``.
    Falling ``g``: ``alpha`` solves ``(ln a - ln g0) / (ln g1 - ln g0) = a``,
    equivalently ``g0**(1-a) * g1**a - a = 0``. Level endpoints give
    ``min(g0, 1)`` directly.
    """
    g0, g1 = _endpoints(g, 0.0, 1.0)
    sound = _soundness(g, 0.0, 1.0, check_log_convex)
    if _equal(g0, g1):
        return HHBound(UNIT_EQUAL, g0, 1.0 - g0, min(g0, 1.0), 0.0, 0.0, 1.0, g0, g1,
                       sound, g0 >= 1.0)

    l0, l1 = math.log(g0), math.log(g1)
    dl = l1 - l0
    if g0 < g1:
        case = UNIT_INCREASING

        def phi(al):
            return 1.0 - (math.log(al) - l0) / dl - al
    else:
        case = UNIT_DECREASING

        def phi(al):
            return (math.log(al) - l0) / dl - al

    g_min, g_max = min(g0, g1), max(g0, g1)
    root = _solve_case(phi, g_min, g_max, 1.0)
    alpha = root.value
    t = 1.0 - alpha
    if case == UNIT_INCREASING:
        equations = {"product_form": g0 ** (1 - t) * g1**t + t - 1}
    else:
        equations = {
            "proof_form": g0 ** (1 - alpha) * g1**alpha - alpha,
            "t_form": g0**t * g1 ** (1 - t) + t - 1,
        }
    return HHBound(case, alpha, t, min(alpha, 1.0), root.residual, 0.0, 1.0, g0, g1,
                   sound, g_min >= 1.0, equations)


def bound_general(g: RealFunction, a: float, b: float, check_log_convex: bool = True) -> HHBound:
    """Upper bound for the Sugeno integral of ``g`` over ``[a, b]``.

    With ``s(alpha) = ((b-a) ln alpha - b ln g(a) + a ln g(b)) / (ln g(b) - ln g(a))``
    the case equations are ``b - s(alpha) = alpha`` when ``g(a) < g(b)``
    and ``s(alpha) - a = alpha`` when ``g(a) > g(b)``. Level endpoints
    give ``min(g(a), b - a)``.
    """
    a, b = float(a), float(b)
    ga, gb = _endpoints(g, a, b)
    sound = _soundness(g, a, b, check_log_convex)
    width = b - a
    if _equal(ga, gb):
        return HHBound(GENERAL_EQUAL, ga, None, min(ga, width), 0.0, a, b, ga, gb,
                       sound, ga >= width)

    la, lb = math.log(ga), math.log(gb)
    dl = lb - la

    def s(al):
        return (width * math.log(al) - b * la + a * lb) / dl

    if ga < gb:
        case = GENERAL_INCREASING

        def phi(al):
            return b - s(al) - al
    else:
        case = GENERAL_DECREASING

        def phi(al):
            return s(al) - a - al

    g_min, g_max = min(ga, gb), max(ga, gb)
    root = _solve_case(phi, g_min, g_max, width)
    return HHBound(case, root.value, None, min(root.value, width), root.residual, a, b, ga, gb,
                   sound, g_min >= width)


@dataclass(frozen=True)
class ClassicalHHReport:
    midpoint_value: float
    mean_integral_bound: float
    sugeno_value: float
    left_holds: bool
    right_holds: bool
    method: str = "fixed_point"

    def as_dict(self) -> dict:
        return {
            "midpoint_value": self.midpoint_value,
            "mean_integral_bound": self.mean_integral_bound,
            "sugeno_value": self.sugeno_value,
            "left_holds": self.left_holds,
            "right_holds": self.right_holds,
            "method": self.method,
        }


def classical_check(f: RealFunction, a: float, b: float) -> ClassicalHHReport:
    """Compare the Sugeno integral with both sides of the log-convex
    Hermite-Hadamard inequality: ``f((a+b)/2) <= . <= L(f(a), f(b))``."""
    a, b = float(a), float(b)
    fa, fb = _endpoints(f, a, b)
    A = Interval(a, b)
    res = integrate(f.restrict(a, b), A, lebesgue(a, b))
    mid = float(f(0.5 * (a + b)))
    L = logarithmic_mean(fa, fb)
    return ClassicalHHReport(mid, L, res.value, mid <= res.value, res.value <= L, res.method)


@dataclass(frozen=True)
class BoundVerification:
    bound: HHBound
    integral_fixed_point: float
    integral_grid: float
    slack: float
    holds: bool
    fallback: bool = False

    def as_dict(self) -> dict:
        return {
            "bound": self.bound.as_dict(),
            "integral_fixed_point": self.integral_fixed_point,
            "integral_grid": self.integral_grid,
            "slack": self.slack,
            "holds": self.holds,
            "fallback": self.fallback,
        }


def verify_bound(g: RealFunction, a: float, b: float, tol: float = 1e-6, grid_size: int = 100_001,
                 bound: HHBound | None = None) -> BoundVerification:
    """Integrate ``g`` with both integrators and check both results against the bound.

    Raises :class:`BoundViolation` when a log-convex input breaks the bound;
    inputs that failed the log-convexity check just report ``holds=False``.
    """
    a, b = float(a), float(b)
    hb = bound if bound is not None else bound_general(g, a, b)
    A, mu = Interval(a, b), lebesgue(a, b)
    gr = g.restrict(a, b)
    F = DistributionFunction(gr, A, mu)
    fp = integrate(gr, A, mu, dist=F)
    grid = integrate_grid(gr, A, mu, grid_size, dist=F)
    worst = max(fp.value, grid.value)
    holds = worst <= hb.bound + tol
    out = BoundVerification(hb, fp.value, grid.value, hb.bound - worst, holds, fp.fallback)
    if not holds and hb.sound:
        raise BoundViolation(
            f"Sugeno integral {worst:.10g} exceeds bound {hb.bound:.10g} for {g.label} on [{a}, {b}]"
        )
    return out
