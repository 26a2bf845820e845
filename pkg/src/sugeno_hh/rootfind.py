"""Bracketed bisection and the fixed-point equation F(alpha) = alpha."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import BracketError, EvaluationError

# smallest admissible left end for brackets on functions involving ln(alpha)
LOG_INSET = 1e-15


@dataclass(frozen=True)
class RootConfig:
    abs_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


DEFAULT = RootConfig()


@dataclass(frozen=True)
class Root:
    value: float
    residual: float
    iterations: int
    bracket: tuple[float, float]
    converged: bool = True


def _checked(phi, x):
    try:
        v = float(phi(x))
    except EvaluationError as exc:
        raise EvaluationError(f"evaluation failed at {x!r}: {exc}") from exc
    if not math.isfinite(v):
        raise EvaluationError(f"non-finite value {v} at {x!r}")
    return v


def bisect(
    phi: Callable[[float], float], lo: float, hi: float, cfg: RootConfig = DEFAULT
) -> Root:
    """Locate a sign change of ``phi`` on ``[lo, hi]``.

    The bracket is halved until its width is at most ``cfg.abs_tol``, the
    midpoint stops moving in floating point, or ``cfg.max_iter`` steps have
    run (``converged=False`` in that last case). The returned value is the
    bracket end with the smaller ``|phi|``, so the residual never exceeds
    the residuals at the original ends.
    """
    if not lo < hi:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    flo = _checked(phi, lo)
    if flo == 0.0:
        return Root(lo, 0.0, 0, (lo, lo))
    fhi = _checked(phi, hi)
    if fhi == 0.0:
        return Root(hi, 0.0, 0, (hi, hi))
    if (flo > 0) == (fhi > 0):
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: phi(lo)={flo:.6g}, phi(hi)={fhi:.6g}"
        )

    it = 0
    while hi - lo > cfg.abs_tol and it < cfg.max_iter:
        mid = lo + (hi - lo) / 2
        if mid <= lo or mid >= hi:
            break
        it += 1
        fmid = _checked(phi, mid)
        if fmid == 0.0:
            return Root(mid, 0.0, it, (mid, mid))
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid

    converged = hi - lo <= cfg.abs_tol or lo + (hi - lo) / 2 in (lo, hi)
    if abs(flo) <= abs(fhi):
        return Root(lo, flo, it, (lo, hi), converged)
    return Root(hi, fhi, it, (lo, hi), converged)


def solve_fixed_point(
    F: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: RootConfig = DEFAULT,
    spot_checks: int = 9,
) -> Root:
    """Solve ``F(alpha) = alpha`` for non-increasing ``F`` on ``[lo, hi]``.

    ``Root.residual`` is ``F(value) - value``. Raises :class:`BracketError`
    when ``F(lo) < lo`` or ``F(hi) > hi``, or when the spot samples show
    ``F`` increasing.
    """
    theta = lambda a: F(a) - a  # noqa: E731
    if spot_checks >= 2 and hi > lo:
        step = (hi - lo) / (spot_checks - 1)
        values = [_checked(F, lo + k * step) for k in range(spot_checks)]
        for k in range(1, len(values)):
            if values[k] > values[k - 1] * (1 + 1e-12) + 1e-15:
                raise BracketError(
                    f"F is not non-increasing: F({lo + (k - 1) * step:.6g})="
                    f"{values[k - 1]:.6g} < F({lo + k * step:.6g})={values[k]:.6g}"
                )
    t_lo = _checked(theta, lo)
    if t_lo < 0:
        raise BracketError(f"F(lo) < lo at lo={lo}: the fixed point lies below the bracket")
    if lo < hi:
        t_hi = _checked(theta, hi)
        if t_hi > 0:
            raise BracketError(f"F(hi) > hi at hi={hi}: the fixed point lies above the bracket")
    return bisect(theta, lo, hi, cfg)
