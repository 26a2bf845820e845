import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, quad

from sugeno_hh import corpus
from sugeno_hh.analysis import RealFunction, classify, log_majorant, logarithmic_mean
from sugeno_hh.errors import EvaluationError, PreconditionError
from sugeno_hh.measure import Interval


def fn(text, a=0.0, b=1.0):
    return RealFunction.from_text(text, a, b)


class TestClassify:
    def test_decaying_exponential(self):
        r = classify(fn("exp(-x)"))
        assert (r.positive, r.monotone, r.log_convex) == (True, "decreasing", True)
        assert r.samples_used == 1025

    def test_exp_neg_sin2x_on_quarter_pi(self):
        r = classify(fn("exp(-sin(2*x))", math.pi / 4, math.pi / 2))
        assert (r.positive, r.monotone, r.log_convex) == (True, "increasing", True)

    def test_constant(self):
        r = classify(fn("1"))
        assert r.monotone == "constant" and r.log_convex
        assert r.worst_violation == 0

    def test_log_concave_function_fails(self):
        # log(1 + x) is concave, so exp(log(1+x)) = 1 + x is not log-convex
        r = classify(fn("sqrt(x+1)"))
        assert r.positive and not r.log_convex
        assert r.worst_violation > 1e-9

    def test_convex_but_not_log_convex(self):
        r = classify(fn("x^2+0.01", -1, 1))
        assert r.monotone == "none" and not r.log_convex

    def test_non_positive_sample(self):
        r = classify(fn("x-0.5"))
        assert not r.positive and not r.log_convex

    def test_invalid_function_raises(self):
        with pytest.raises(EvaluationError):
            classify(fn("ln(x-0.5)"))

    def test_needs_three_samples(self):
        with pytest.raises(ValueError):
            classify(fn("x+1"), n_samples=2)

    @pytest.mark.parametrize("case", corpus.LOG_CONVEX, ids=lambda c: c.text)
    def test_corpus_is_log_convex(self, case):
        assert classify(case.function()).log_convex


class TestMajorant:
    def test_equal_endpoints_give_constant(self):
        h = log_majorant(fn("0.3+(x-0.5)^2"), 0.0, 1.0)
        np.testing.assert_allclose(h(np.linspace(0, 1, 50)), 0.55, rtol=1e-15)

    def test_square_exponent_chord(self):
        # endpoints e^-1 and 1: the chord of x^2 - 1 is x - 1
        h = log_majorant(fn("exp(x^2-1)"), 0.0, 1.0)
        xs = np.linspace(0, 1, 201)
        np.testing.assert_allclose(h(xs), np.exp(xs - 1), rtol=1e-14)
        g = fn("exp(x^2-1)")
        assert np.all(h(xs) >= g(xs) - 1e-15)

    @given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(-2, 2), st.floats(0.05, 3))
    def test_interpolates_endpoints(self, p, q, a, width):
        b = a + width
        g = RealFunction(lambda x: p + (q - p) * (np.asarray(x) - a) / width, Interval(a, b))
        h = log_majorant(g, a, b)
        assert h(a) == pytest.approx(p, rel=1e-12)
        assert h(b) == pytest.approx(q, rel=1e-12)

    @pytest.mark.parametrize("case", corpus.LOG_CONVEX, ids=lambda c: c.text)
    def test_dominates_log_convex(self, case):
        g = case.function()
        h = log_majorant(g, case.a, case.b)
        xs = np.linspace(case.a, case.b, 1000)
        assert np.all(h(xs) >= g(xs) - 1e-9)

    def test_rejects_non_positive_endpoint(self):
        with pytest.raises(PreconditionError):
            log_majorant(fn("x"), 0.0, 1.0)


class TestLogarithmicMean:
    def test_diagonal(self):
        assert logarithmic_mean(0.37, 0.37) == 0.37

    def test_rounded_reference_value(self):
        p, q = math.exp(-2), math.exp(-math.cos(1) - 1)
        assert logarithmic_mean(p, q) == pytest.approx(0.1718, abs=1e-4)

    def test_against_quadrature(self):
        # L(1, e) is the mean of e^t over [0, 1]
        mp.dps = 25
        assert logarithmic_mean(1.0, math.e) == pytest.approx(float(quad(mp.exp, [0, 1])), rel=1e-15)
        assert logarithmic_mean(1.0, math.e) == pytest.approx(1.7183, abs=1e-4)

    @given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
    def test_between_min_and_max_and_symmetric(self, p, q):
        L = logarithmic_mean(p, q)
        assert min(p, q) <= L <= max(p, q)
        assert logarithmic_mean(q, p) == L

    @given(st.floats(1e-6, 1e6))
    def test_continuous_at_diagonal(self, p):
        assert abs(logarithmic_mean(p, p * (1 + 1e-8)) - p) <= 1e-6 * p

    def test_near_equal_branch(self):
        p = 2.0
        q = p * (1 + 1e-14)
        assert logarithmic_mean(p, q) == pytest.approx(p, rel=1e-13)

    @pytest.mark.parametrize("p, q", [(0, 1), (-1, 2), (1, 0)])
    def test_rejects_non_positive(self, p, q):
        with pytest.raises(PreconditionError):
            logarithmic_mean(p, q)


def test_scalar_only_callable_is_vectorised():
    f = RealFunction(lambda x: math.exp(-x), Interval(0, 1))
    np.testing.assert_allclose(f(np.array([0.0, 1.0])), [1.0, math.exp(-1)])
