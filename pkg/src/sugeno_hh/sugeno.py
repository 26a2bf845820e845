"""Superlevel sets, distribution functions and Sugeno integrals.

Two integrators are provided and are meant to check each other:

* :func:`integrate_fixed_point` solves ``F(alpha) = alpha`` by bisection,
  where ``F(alpha) = mu(A & {f >= alpha})``.
* :func:`integrate_grid` evaluates ``max_alpha min(alpha, F(alpha))``
  directly on a uniform alpha grid.

Superlevel sets are located by sampling ``f`` on a uniform grid and
refining every cell where ``f - alpha`` changes sign by bisection. Features
narrower than one grid cell are invisible to this scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import RealFunction
from .errors import BracketError, DomainError, PlateauError, PreconditionError
from .measure import FuzzyMeasure, Interval, IntervalUnion, lebesgue, normalize
from .rootfind import DEFAULT, RootConfig, solve_fixed_point

DEFAULT_X_SAMPLES = 4096
DEFAULT_GRID = 100_001
CROSSING_XTOL = 1e-12
SUP_INFLATION = 1e-9
# theta(lo) - theta(hi) above this (times max(1, mu(A))) marks a jump crossing
JUMP_TOL = 1e-6


class DistributionFunction:
    """``alpha -> mu(A & {f >= alpha})`` for a Lebesgue-type ``mu``.

    Calling it with an array evaluates every alpha in one vectorised sweep.
    """

    def __init__(
        self,
        f: RealFunction,
        A: Interval,
        mu: FuzzyMeasure,
        n_samples: int = DEFAULT_X_SAMPLES,
        xtol: float = CROSSING_XTOL,
    ):
        if not mu.domain.contains(A, 1e-12 * max(1.0, mu.domain.length)):
            raise DomainError(f"{A!r} is not inside the measure domain {mu.domain!r}")
        if n_samples < 2:
            raise ValueError("n_samples must be at least 2")
        self.f, self.A, self.mu = f, A, mu
        self.xs = np.linspace(A.lo, A.hi, n_samples)
        self.fx = f(self.xs)
        if np.any(self.fx < 0):
            k = int(np.argmax(self.fx < 0))
            raise PreconditionError(f"f must be non-negative on A, f({self.xs[k]})={self.fx[k]}")
        self.measure_A = mu(A)

        left, right = self.fx[:-1], self.fx[1:]
        self._cmin = np.minimum(left, right)
        self._cmax = np.maximum(left, right)
        self._width = np.diff(self.xs)
        order = np.argsort(self._cmin, kind="stable")
        self._sorted_cmin = self._cmin[order]
        # _tail[k] = total width of the cells order[k:], i.e. cells with cmin >= sorted_cmin[k]
        self._tail = np.concatenate([np.cumsum(self._width[order][::-1])[::-1], [0.0]])
        self._tail[0] = self.measure_A  # every cell full: exactly mu(A), not a float sum
        max_w = float(self._width.max()) if self._width.size else 0.0
        self._n_bisect = max(1, math.ceil(math.log2(max_w / xtol))) if max_w > xtol else 1

    @property
    def sup_sample(self) -> float:
        return float(self.fx.max())

    @property
    def levels(self) -> np.ndarray:
        """Sampled values of f; the only places where the computed F can jump."""
        return self.fx

    def _crossings(self, alphas: np.ndarray):
        """Refined crossing points for every (alpha, cell) where f - alpha changes sign.

        Returns alpha indices, cell indices, the boundary point on the
        ``f >= alpha`` side and whether that side is the cell's left end.
        """
        order = np.argsort(alphas, kind="stable")
        a_sorted = alphas[order]
        first = np.searchsorted(a_sorted, self._cmin, side="right")
        last = np.searchsorted(a_sorted, self._cmax, side="right")
        counts = last - first
        total = int(counts.sum())
        if total == 0:
            empty = np.empty(0, dtype=int)
            return empty, empty, np.empty(0), np.empty(0, dtype=bool)
        cells = np.repeat(np.arange(counts.size), counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        a_idx = order[np.repeat(first, counts) + offsets]
        level = alphas[a_idx]

        left_in = self.fx[cells] >= level
        p_in = np.where(left_in, self.xs[cells], self.xs[cells + 1])
        p_out = np.where(left_in, self.xs[cells + 1], self.xs[cells])
        f = self.f
        for _ in range(self._n_bisect):
            mid = 0.5 * (p_in + p_out)
            inside = f(mid) >= level
            p_in = np.where(inside, mid, p_in)
            p_out = np.where(inside, p_out, mid)
        return a_idx, cells, p_in, left_in

    def __call__(self, alpha):
        scalar = np.ndim(alpha) == 0
        alphas = np.atleast_1d(np.asarray(alpha, dtype=float))
        k = np.searchsorted(self._sorted_cmin, alphas, side="left")
        values = self._tail[k].copy()
        a_idx, cells, p_in, left_in = self._crossings(alphas)
        if a_idx.size:
            part = np.where(left_in, p_in - self.xs[cells], self.xs[cells + 1] - p_in)
            values += np.bincount(a_idx, weights=part, minlength=alphas.size)
        values = np.minimum(values, self.measure_A)
        return float(values[0]) if scalar else values

    def superlevel_set(self, alpha: float) -> IntervalUnion:
        alpha = float(alpha)
        if alpha < 0:
            raise ValueError("alpha must be non-negative")
        xs = self.xs
        pieces = [(xs[j], xs[j + 1]) for j in np.flatnonzero(self._cmin >= alpha)]
        _, cells, p_in, left_in = self._crossings(np.array([alpha]))
        for j, p, li in zip(cells, p_in, left_in):
            pieces.append((xs[j], p) if li else (p, xs[j + 1]))
        if alpha <= 0:
            pieces.append((self.A.lo, self.A.hi))
        return normalize(pieces)


def _resolve(f: RealFunction, A: Interval | None, mu: FuzzyMeasure | None):
    if A is None:
        A = f.domain
    if mu is None:
        mu = lebesgue(A.lo, A.hi)
    return A, mu


def distribution(
    f: RealFunction, A: Interval | None = None, mu: FuzzyMeasure | None = None, **kw
) -> DistributionFunction:
    A, mu = _resolve(f, A, mu)
    return DistributionFunction(f, A, mu, **kw)


def superlevel_set(f: RealFunction, A: Interval, alpha: float, **kw) -> IntervalUnion:
    """``{x in A : f(x) >= alpha}`` as a finite union of closed intervals."""
    return DistributionFunction(f, A, lebesgue(A.lo, A.hi), **kw).superlevel_set(alpha)


@dataclass(frozen=True)
class SugenoResult:
    value: float
    method: str  # "fixed_point" or "grid"
    residual: float
    iterations_or_gridsize: int
    bracket: tuple[float, float] | None = None
    crossing: str | None = None  # "continuous" or "jump" for the fixed-point method
    fallback: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "residual": self.residual,
            "iterations_or_gridsize": self.iterations_or_gridsize,
            "bracket": list(self.bracket) if self.bracket is not None else None,
            "crossing": self.crossing,
            "fallback": self.fallback,
            "notes": list(self.notes),
        }


class FixedPointError(BracketError):
    """The fixed point failed its post-validation against the distribution."""


def integrate_fixed_point(
    f: RealFunction,
    A: Interval | None = None,
    mu: FuzzyMeasure | None = None,
    cfg: RootConfig = DEFAULT,
    dist: DistributionFunction | None = None,
) -> SugenoResult:
    """Sugeno integral as the solution of ``F(alpha) = alpha``.

    When ``F`` jumps over the diagonal (``f`` has a plateau at the crossing
    level) there is no exact fixed point. Because ``F`` is left-continuous
    the integral is then the jump location; if that location is one of the
    sampled values of ``f`` it is returned exactly with
    ``crossing="jump"``, otherwise :class:`PlateauError` is raised.
    """
    A, mu = _resolve(f, A, mu)
    F = dist if dist is not None else DistributionFunction(f, A, mu)
    m_A = F.measure_A
    top = min(F.sup_sample * (1 + SUP_INFLATION), m_A)
    lo = min(1e-15, top / 2)
    if not top > 0:
        raise PlateauError("F vanishes for every alpha > 0; the fixed-point bracket is empty")

    root = solve_fixed_point(F, lo, top, cfg)
    a_lo, a_hi = root.bracket
    value, crossing = root.value, "continuous"
    if root.residual != 0.0:
        theta_lo = F(a_lo) - a_lo
        theta_hi = F(a_hi) - a_hi
        if theta_lo - theta_hi > JUMP_TOL * max(1.0, m_A):
            levels = F.levels[(F.levels >= a_lo) & (F.levels <= a_hi)]
            ok = [c for c in np.unique(levels)[::-1] if F(c) >= c]
            if not ok:
                raise PlateauError(
                    f"F jumps across the diagonal inside [{a_lo:.12g}, {a_hi:.12g}] "
                    "at a level that is not a sampled value of f"
                )
            value, crossing = float(ok[0]), "jump"

    eps = 10 * cfg.abs_tol
    if F(value + eps) > value + eps:
        raise FixedPointError(f"F(v+eps) > v+eps at v={value}: integral would exceed v")
    if value - eps > 0 and F(value - eps) < value - eps:
        raise FixedPointError(f"F(v-eps) < v-eps at v={value}: integral would fall below v")

    return SugenoResult(
        value=value,
        method="fixed_point",
        residual=F(value) - value,
        iterations_or_gridsize=root.iterations,
        bracket=(a_lo, a_hi),
        crossing=crossing,
    )


def integrate_grid(
    f: RealFunction,
    A: Interval | None = None,
    mu: FuzzyMeasure | None = None,
    grid_size: int = DEFAULT_GRID,
    dist: DistributionFunction | None = None,
    top: float | None = None,
) -> SugenoResult:
    """Brute-force ``max min(alpha, F(alpha))`` over ``grid_size`` uniform alphas.

    The grid spans ``[0, top]`` with ``top = min(max sampled f, mu(A))``
    unless given. The true integral lies in ``[value, value + step]``;
    ``residual`` reports that step.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    A, mu = _resolve(f, A, mu)
    F = dist if dist is not None else DistributionFunction(f, A, mu)
    if top is None:
        top = min(F.sup_sample, F.measure_A)
    alphas = np.linspace(0.0, top, grid_size)
    scores = np.minimum(alphas, F(alphas))
    k = int(np.argmax(scores))
    step = top / (grid_size - 1)
    return SugenoResult(
        value=float(scores[k]),
        method="grid",
        residual=step,
        iterations_or_gridsize=grid_size,
        bracket=(float(alphas[k]), float(min(alphas[k] + step, top))),
    )


def integrate(
    f: RealFunction,
    A: Interval | None = None,
    mu: FuzzyMeasure | None = None,
    cfg: RootConfig = DEFAULT,
    grid_size: int = DEFAULT_GRID,
    dist: DistributionFunction | None = None,
) -> SugenoResult:
    """Fixed-point integral, falling back to the grid when the bracket fails."""
    A, mu = _resolve(f, A, mu)
    F = dist if dist is not None else DistributionFunction(f, A, mu)
    try:
        return integrate_fixed_point(f, A, mu, cfg, dist=F)
    except BracketError as exc:
        res = integrate_grid(f, A, mu, grid_size, dist=F)
        return SugenoResult(
            value=res.value,
            method=res.method,
            residual=res.residual,
            iterations_or_gridsize=res.iterations_or_gridsize,
            bracket=res.bracket,
            fallback=True,
            notes=(f"fixed-point failed: {exc}",),
        )


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class PropertyReport:
    checks: tuple[PropertyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def _constant(k: float, A: Interval) -> RealFunction:
    return RealFunction(lambda x: np.full(np.shape(x), k, dtype=float) if np.ndim(x) else k, A, repr(k))


def check_properties(
    f: RealFunction,
    g: RealFunction | None = None,
    A: Interval | None = None,
    mu: FuzzyMeasure | None = None,
    constants=None,
    grid_size: int = DEFAULT_GRID,
    n_check: int = 4096,
) -> PropertyReport:
    """Check three basic facts about the Sugeno integral numerically.

    1. the integral of ``f`` never exceeds ``mu(A)``;
    2. a constant ``k`` integrates to ``min(k, mu(A))`` (within 1e-12);
    3. if ``f <= g`` on a sample grid, the integral of ``f`` is at most that
       of ``g`` (grid oracle on a shared alpha grid, within 1e-9).
    """
    A, mu = _resolve(f, A, mu)
    m_A = mu(A)
    checks = []

    v = integrate(f, A, mu, grid_size=grid_size).value
    checks.append(PropertyCheck("bounded_by_measure", v <= m_A + 1e-12, f"integral={v:.12g}, mu(A)={m_A:.12g}"))

    if constants is None:
        constants = [0.25 * m_A, 0.5 * m_A, m_A, 2.0 * m_A]
    worst = 0.0
    for k in constants:
        got = integrate(_constant(float(k), A), A, mu, grid_size=grid_size).value
        worst = max(worst, abs(got - min(k, m_A)))
    checks.append(PropertyCheck("constant_rule", worst <= 1e-12, f"max error {worst:.3g} over {len(constants)} constants"))

    if g is not None:
        xs = np.linspace(A.lo, A.hi, n_check)
        if not np.all(f(xs) <= g(xs)):
            checks.append(PropertyCheck("monotonicity", False, "precondition f <= g fails on the sample grid"))
        else:
            Ff = DistributionFunction(f, A, mu)
            Fg = DistributionFunction(g, A, mu)
            top = min(max(Ff.sup_sample, Fg.sup_sample), m_A)
            vf = integrate_grid(f, A, mu, grid_size, dist=Ff, top=top).value
            vg = integrate_grid(g, A, mu, grid_size, dist=Fg, top=top).value
            checks.append(PropertyCheck("monotonicity", vf <= vg + 1e-9, f"integral(f)={vf:.12g}, integral(g)={vg:.12g}"))
    return PropertyReport(tuple(checks))
