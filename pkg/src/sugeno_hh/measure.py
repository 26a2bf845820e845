"""Intervals, finite interval unions and Lebesgue-type fuzzy measures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import DomainError

# slack allowed when checking that a set lies inside a measure's domain
_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not self.lo <= self.hi:
            raise DomainError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, other: Interval, slack: float = 0.0) -> bool:
        return self.lo - slack <= other.lo and other.hi <= self.hi + slack

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted union of pairwise disjoint closed intervals.

    Build instances with :func:`normalize`; the constructor trusts its input.
    """

    parts: tuple[Interval, ...] = field(default_factory=tuple)

    @property
    def total_length(self) -> float:
        return sum(p.length for p in self.parts)

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


EMPTY = IntervalUnion()


def normalize(parts: Iterable[Interval | tuple[float, float]]) -> IntervalUnion:
    """Sort and merge overlapping or touching intervals.

    Degenerate (zero-length) intervals survive as parts of measure zero
    unless they touch a neighbour.
    """
    ivs = sorted(
        (p if isinstance(p, Interval) else Interval(*p) for p in parts),
        key=lambda iv: (iv.lo, iv.hi),
    )
    merged: list[Interval] = []
    for iv in ivs:
        if merged and iv.lo <= merged[-1].hi:
            last = merged[-1]
            merged[-1] = Interval(last.lo, max(last.hi, iv.hi))
        else:
            merged.append(iv)
    return IntervalUnion(tuple(merged))


@dataclass(frozen=True)
class FuzzyMeasure:
    """A monotone set function on subsets of ``domain``.

    Only ``kind="lebesgue"`` is implemented; the tag leaves room for
    distorted variants.
    """

    domain: Interval
    kind: str = "lebesgue"

    def __post_init__(self):
        if self.kind != "lebesgue":
            raise ValueError(f"unsupported measure kind {self.kind!r}")

    def __call__(self, s: IntervalUnion | Interval) -> float:
        return measure(self, s)


def lebesgue(lo: float, hi: float) -> FuzzyMeasure:
    return FuzzyMeasure(Interval(float(lo), float(hi)))


def measure(m: FuzzyMeasure, s: IntervalUnion | Interval) -> float:
    if isinstance(s, Interval):
        s = IntervalUnion((s,))
    for part in s:
        if not m.domain.contains(part, _DOMAIN_SLACK * max(1.0, m.domain.length)):
            raise DomainError(f"{part!r} is not inside the measure domain {m.domain!r}")
    return s.total_length
