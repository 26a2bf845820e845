"""Fixed and seeded random function corpora for regression and property runs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import RealFunction


@dataclass(frozen=True)
class Case:
    text: str
    a: float
    b: float

    def function(self) -> RealFunction:
        return RealFunction.from_text(self.text, self.a, self.b)


# Log-convex on [0, 1] and on the listed interval.
LOG_CONVEX = (
    Case("exp(x)", 0.0, 1.0),
    Case("exp(-x)", 0.0, 1.0),
    Case("exp(x^2-1)", 0.0, 1.0),
    Case("exp(-sin(x))", 0.0, 1.0),
    Case("exp(-cos(x)-1)", 0.0, 1.0),
    Case("exp(-sin(2*x))", math.pi / 4, math.pi / 2),
    Case("0.4*exp(3*x)", 0.0, 1.5),
    Case("2*exp(-2*x)", 0.2, 1.7),
    Case("1/(x+0.2)", 0.0, 2.0),
    Case("(x+0.5)^-2", 0.0, 1.0),
    Case("0.3/sin(x+0.3)", 0.0, 1.2),
    Case("0.5/cos(1.2*x)", 0.0, 1.0),
    Case("exp(x)+exp(-x)", 0.0, 0.8),
    Case("0.1*exp(abs(x-0.5))", 0.0, 1.0),
    Case("0.4*exp((x-0.3)^2)", 0.0, 1.0),
    Case("0.2/(1-x/2)", 0.0, 1.0),
    Case("0.7", 0.0, 1.0),
    Case("3", 0.0, 1.0),
    Case("exp(2*x)/3", 0.3, 0.9),
    Case("0.05*exp(5*x)", 0.0, 1.0),
)

# Five worked examples, keyed by a short name.
WORKED_EXAMPLES = {
    "exp_decay": Case("exp(-x)", 0.0, 1.0),
    "exp_neg_cos": Case("exp(-cos(x)-1)", 0.0, 1.0),
    "exp_square": Case("exp(x^2-1)", 0.0, 1.0),
    "exp_neg_sin": Case("exp(-sin(x))", 0.0, 1.0),
    "exp_neg_sin2x": Case("exp(-sin(2*x))", math.pi / 4, math.pi / 2),
}


def _f(v: float) -> str:
    return repr(round(float(v), 6))


def _interval(rng: np.random.Generator, lo=0.0, hi=2.0, min_len=0.05):
    a, b = sorted(rng.uniform(lo, hi, 2))
    if b - a < min_len:
        a = max(lo, min(a, hi - min_len))
        b = a + min_len
    return round(float(a), 6), round(float(b), 6)


def random_monotone(rng: np.random.Generator) -> Case:
    """A strictly monotone, positive expression on a random subinterval of [0, 2]."""
    kind = int(rng.integers(6))
    c = rng.uniform(0.1, 3.0)
    if kind == 0:
        k = rng.choice([-1, 1]) * rng.uniform(0.2, 3.0)
        text = f"{_f(c)}*exp({_f(k)}*x)"
    elif kind == 1:
        k = rng.choice([-1, 1]) * rng.uniform(0.1, 1.0) * c / 2.1
        text = f"{_f(c)}+{_f(k)}*x" if k > 0 else f"{_f(c)}-{_f(-k)}*x"
    elif kind == 2:
        text = f"{_f(c)}*sqrt(x+{_f(rng.uniform(0.05, 1.0))})"
    elif kind == 3:
        text = f"{_f(c)}*ln(x+{_f(rng.uniform(1.1, 3.0))})"
    elif kind == 4:
        text = f"{_f(c)}/(x+{_f(rng.uniform(0.1, 1.5))})"
    else:
        p = rng.choice([-1, 1]) * rng.uniform(0.3, 2.5)
        text = f"{_f(c)}*(x+{_f(rng.uniform(0.1, 1.0))})^{_f(p)}" if p > 0 else \
            f"{_f(c)}*(x+{_f(rng.uniform(0.1, 1.0))})^({_f(p)})"
    return Case(text, *_interval(rng))


def random_positive(rng: np.random.Generator) -> Case:
    """A positive expression on [0, 2] subintervals, monotone or not."""
    kind = int(rng.integers(4))
    if kind == 0:
        return random_monotone(rng)
    c = rng.uniform(0.05, 1.5)
    k = rng.uniform(0.1, 2.0)
    if kind == 1:
        text = f"{_f(c)}+{_f(k)}*abs(x-{_f(rng.uniform(0, 2))})"
    elif kind == 2:
        text = f"{_f(c)}+{_f(k)}*sin({_f(rng.uniform(1, 8))}*x+{_f(rng.uniform(0, 3))})^2"
    else:
        text = f"{_f(c)}*exp(-{_f(k)}*(x-{_f(rng.uniform(0, 2))})^2)"
    return Case(text, *_interval(rng))


def monotone_corpus(seed: int, n: int = 50) -> list[Case]:
    rng = np.random.default_rng(seed)
    return [random_monotone(rng) for _ in range(n)]


def positive_corpus(seed: int, n: int = 100) -> list[Case]:
    rng = np.random.default_rng(seed)
    return [random_positive(rng) for _ in range(n)]


def dominated_pairs(seed: int, n: int = 50) -> list[tuple[Case, Case]]:
    """Pairs ``(f, g)`` with ``f <= g`` everywhere by construction."""
    rng = np.random.default_rng(seed)
    pairs = []
    for i in range(n):
        f = random_positive(rng)
        shift = rng.uniform(0.0, 0.3)
        if i % 2:
            g_text = f"({f.text})*{_f(1 + shift)}"
        else:
            g_text = f"({f.text})+{_f(shift)}"
        pairs.append((f, Case(g_text, f.a, f.b)))
    return pairs
