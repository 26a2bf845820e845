"""Shape classification of sampled functions, the log-linear majorant and
the logarithmic mean."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationError, PreconditionError
from .expr import Expression
from .measure import Interval

DEFAULT_SAMPLES = 1025
DEFAULT_TOL = 1e-9
# cap on midpoint pairs examined by classify; beyond it pairs are thinned
PAIR_BUDGET = 2_000_000


class RealFunction:
    """A real function on a closed interval, evaluable on numpy arrays.

    ``evaluator`` is an :class:`~sugeno_hh.expr.Expression` or any callable.
    Callables that do not accept arrays are vectorised element by element.
    """

    def __init__(self, evaluator: Callable, domain: Interval, label: str | None = None):
        self.evaluator = evaluator
        self.domain = domain
        self.label = label if label is not None else str(evaluator)
        self._vectorised = True

    @classmethod
    def from_text(cls, text: str, a: float, b: float) -> "RealFunction":
        return cls(Expression.from_text(text), Interval(float(a), float(b)), text)

    def __call__(self, x):
        if np.ndim(x) == 0:
            return float(self.evaluator(float(x)))
        xs = np.asarray(x, dtype=float)
        if self._vectorised:
            try:
                out = np.asarray(self.evaluator(xs), dtype=float)
                if out.shape == xs.shape:
                    return self._finite(out, xs)
                if out.ndim == 0:
                    return self._finite(np.full(xs.shape, float(out)), xs)
            except EvaluationError:
                raise
            except (TypeError, ValueError):
                pass
            self._vectorised = False
        out = np.array([float(self.evaluator(float(v))) for v in xs.ravel()]).reshape(xs.shape)
        return self._finite(out, xs)

    @staticmethod
    def _finite(out, xs):
        bad = ~np.isfinite(out)
        if np.any(bad):
            raise EvaluationError(f"non-finite value near x={float(xs[bad][0])}")
        return out

    def restrict(self, a: float, b: float) -> "RealFunction":
        return RealFunction(self.evaluator, Interval(float(a), float(b)), self.label)

    def __repr__(self):
        return f"RealFunction({self.label!r} on {self.domain!r})"


@dataclass(frozen=True)
class ShapeReport:
    positive: bool
    monotone: str  # "increasing", "decreasing", "constant" or "none"
    log_convex: bool
    samples_used: int
    worst_violation: float


def classify(f: RealFunction, n_samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL) -> ShapeReport:
    """Sample ``f`` on a uniform grid and report positivity, monotonicity and
    log-convexity.

    Log-convexity uses the midpoint inequality
    ``log f((x+y)/2) <= (log f(x) + log f(y)) / 2`` over grid pairs whose
    midpoint is itself a grid point. ``worst_violation`` is the largest
    excess, scaled by ``max(1, max|log f|)``; the function counts as
    log-convex when that is at most ``tol``. Monotonicity compares adjacent
    samples with a tolerance of ``tol * max|f|``.
    """
    if n_samples < 3:
        raise ValueError("n_samples must be at least 3")
    xs = np.linspace(f.domain.lo, f.domain.hi, n_samples)
    ys = f(xs)

    slack = tol * max(1.0, float(np.max(np.abs(ys))))
    d = np.diff(ys)
    if np.all(np.abs(d) <= slack):
        monotone = "constant"
    elif np.all(d >= -slack):
        monotone = "increasing"
    elif np.all(d <= slack):
        monotone = "decreasing"
    else:
        monotone = "none"

    positive = bool(np.all(ys > 0))
    if not positive:
        return ShapeReport(False, monotone, False, n_samples, math.inf)

    logs = np.log(ys)
    i, j = _midpoint_pairs(n_samples)
    excess = logs[(i + j) // 2] - 0.5 * (logs[i] + logs[j])
    scale = max(1.0, float(np.max(np.abs(logs))))
    worst = max(0.0, float(np.max(excess)) / scale) if excess.size else 0.0
    return ShapeReport(True, monotone, worst <= tol, n_samples, worst)


def _midpoint_pairs(n: int):
    # pairs (i, j), i < j, j - i even, so that (i + j) / 2 is a grid index
    gaps = np.arange(2, n, 2)
    counts = n - gaps
    total = int(counts.sum())
    if total > PAIR_BUDGET:
        keep = max(1, int(len(gaps) * PAIR_BUDGET / total))
        gaps = gaps[np.unique(np.linspace(0, len(gaps) - 1, keep).astype(int))]
        counts = n - gaps
    i = np.concatenate([np.arange(c) for c in counts]) if len(gaps) else np.empty(0, int)
    j = i + np.repeat(gaps, counts)
    return i, j


def log_majorant(g: RealFunction, a: float, b: float) -> RealFunction:
    """The chord of ``log g`` through ``(a, g(a))`` and ``(b, g(b))``, exponentiated:
    ``h(x) = g(a)**((b-x)/(b-a)) * g(b)**((x-a)/(b-a))``.
    """
    if not a < b:
        raise PreconditionError(f"need a < b, got a={a}, b={b}")
    ga, gb = g(a), g(b)
    if ga <= 0 or gb <= 0:
        raise PreconditionError(f"endpoint values must be positive, got g(a)={ga}, g(b)={gb}")
    la, lb = math.log(ga), math.log(gb)
    width = b - a

    def h(x):
        s = (np.asarray(x, dtype=float) - a) / width
        return np.exp((1 - s) * la + s * lb)

    return RealFunction(h, Interval(float(a), float(b)), f"majorant of {g.label}")


def logarithmic_mean(p: float, q: float) -> float:
    """``(p - q) / (ln p - ln q)``, or ``p`` when ``p == q``.

    When the logarithms differ by less than 1e-12 the arithmetic mean is
    returned instead, which agrees with the limit to that precision and
    keeps the result exactly symmetric.
    """
    if p <= 0 or q <= 0:
        raise PreconditionError(f"logarithmic mean needs positive arguments, got {p}, {q}")
    if p == q:
        return float(p)
    dl = math.log(p) - math.log(q)
    if abs(dl) < 1e-12:
        return 0.5 * (p + q)
    return (p - q) / dl
