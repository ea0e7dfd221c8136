"""Domain types, quadrature, and the bracketed root finder."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prompt_pricing import (
    Ambiguity,
    ConfigError,
    GaiModel,
    InvalidAmbiguity,
    InvalidDistribution,
    InvalidModel,
    InvalidPrice,
    ModelSet,
    NoBracket,
    NonFiniteIntegrand,
    PriceSchedule,
    QuadratureConfig,
    TabulatedAmbiguity,
    UniformAmbiguity,
    find_root_bracketed,
    integrate,
)


class TestTypes:
    def test_model_validation(self):
        with pytest.raises(InvalidModel):
            GaiModel("m", 0.0)
        with pytest.raises(InvalidModel):
            GaiModel("m", -1.0)
        with pytest.raises(InvalidModel):
            GaiModel("m", 1.0, -0.1)
        with pytest.raises(InvalidModel):
            GaiModel("", 1.0)

    def test_model_set_orders_by_utility(self):
        ms = ModelSet([GaiModel("b", 2.0), GaiModel("a", 1.0)])
        assert [m.id for m in ms] == ["a", "b"]
        assert ms.low.id == "a" and ms.high.id == "b"

    def test_model_set_rejects_duplicates_and_equal_pair(self):
        with pytest.raises(InvalidModel):
            ModelSet([GaiModel("a", 1.0), GaiModel("a", 2.0)])
        with pytest.raises(InvalidModel):
            ModelSet([GaiModel("a", 1.0), GaiModel("b", 1.0)])
        with pytest.raises(InvalidModel):
            ModelSet([])

    def test_price_schedule(self):
        sched = PriceSchedule({"a": 0.5})
        assert sched.price_for("a") == 0.5
        with pytest.raises(InvalidPrice):
            PriceSchedule({"a": -0.1})

    def test_ambiguity_range(self):
        assert float(Ambiguity(0.5)) == 0.5
        for bad in (0.0, 1.0, -0.2, 1.7, float("nan")):
            with pytest.raises(InvalidAmbiguity):
                Ambiguity(bad)

    def test_quadrature_config(self):
        with pytest.raises(ConfigError):
            QuadratureConfig(2)

    def test_uniform_support_validation(self):
        with pytest.raises(InvalidDistribution):
            UniformAmbiguity(0.5, 0.5)
        with pytest.raises(InvalidDistribution):
            UniformAmbiguity(-0.1, 0.5)
        with pytest.raises(InvalidDistribution):
            UniformAmbiguity(0.2, 1.1)

    def test_tabulated_validation(self):
        with pytest.raises(InvalidDistribution):
            TabulatedAmbiguity([0.0], [1.0])
        with pytest.raises(InvalidDistribution):
            TabulatedAmbiguity([0.0, 0.0], [1.0, 1.0])
        with pytest.raises(InvalidDistribution):
            TabulatedAmbiguity([0.0, 1.0], [-1.0, 1.0])
        with pytest.raises(InvalidDistribution):
            TabulatedAmbiguity([0.0, 1.0], [0.0, 0.0])

    def test_tabulated_renormalizes(self):
        dist = TabulatedAmbiguity([0.0, 0.5, 1.0], [2.0, 4.0, 1.0])
        assert dist.mass(0.0, 1.0) == pytest.approx(1.0, abs=1e-12)
        # piecewise-linear mass on a half interval, checked against the trapezoid formula
        y0, y1 = dist.values[0], dist.values[1]
        assert dist.mass(0.0, 0.5) == pytest.approx((y0 + y1) / 2 * 0.5, abs=1e-12)


class TestIntegrate:
    def test_density_normalization(self):
        assert integrate(lambda e: 1.0, UniformAmbiguity(0.0, 1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_uniform_mean(self):
        assert integrate(lambda e: e, UniformAmbiguity(0.0, 1.0)) == pytest.approx(0.5, abs=1e-6)

    def test_second_moment_on_subinterval(self):
        # closed form: int_{0.2}^{0.8} e^2 / 0.6 de = (0.8^3 - 0.2^3) / (3 * 0.6)
        expected = (0.8 ** 3 - 0.2 ** 3) / (3 * 0.6)
        assert expected == pytest.approx(0.28, abs=1e-15)
        got = integrate(lambda e: e * e, UniformAmbiguity(0.2, 0.8))
        assert got == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("dist", [
        UniformAmbiguity(0.0, 1.0),
        UniformAmbiguity(0.3, 0.7),
        TabulatedAmbiguity([0.1, 0.4, 0.9], [1.0, 3.0, 0.5]),
    ])
    def test_constant_one_integrates_to_one(self, dist):
        assert integrate(lambda e: 1.0, dist) == pytest.approx(1.0, abs=1e-6)

    def test_node_doubling_stability(self):
        # bounded piecewise-constant integrand with interior jumps
        f = lambda e: float(math.floor(3.0 * e)) / 2.0
        dist = UniformAmbiguity(0.0, 1.0)
        coarse = integrate(f, dist, QuadratureConfig(2001))
        fine = integrate(f, dist, QuadratureConfig(4001))
        assert abs(fine - coarse) < 1e-3

    def test_non_finite_rejected_with_node_index(self):
        def f(e):
            return float("inf") if e > 0.5 else 1.0

        with pytest.raises(NonFiniteIntegrand, match="node"):
            integrate(f, UniformAmbiguity(0.0, 1.0), QuadratureConfig(11))


class TestRootFinder:
    def test_linear(self):
        assert find_root_bracketed(lambda x: x - 0.5, 0.0, 1.0, 1e-12) == pytest.approx(0.5, abs=1e-10)

    def test_quadratic_both_branches(self):
        g = lambda e: e * (1 - e) - 0.1
        left = (1 - math.sqrt(0.6)) / 2
        right = (1 + math.sqrt(0.6)) / 2
        assert find_root_bracketed(g, 0.0, 0.5, 1e-12) == pytest.approx(left, abs=1e-9)
        assert find_root_bracketed(g, 0.5, 1.0, 1e-12) == pytest.approx(right, abs=1e-9)

    def test_no_bracket(self):
        with pytest.raises(NoBracket):
            find_root_bracketed(lambda x: x + 2.0, 0.0, 1.0, 1e-12)

    @given(st.floats(0.05, 0.95), st.floats(-3.0, 3.0), st.floats(0.1, 2.0))
    @settings(max_examples=200, deadline=None)
    def test_root_stays_inside_bracket(self, t, lo, width):
        hi = lo + width
        root = lo + t * width
        g = lambda x: x - root
        x = find_root_bracketed(g, lo, hi, 1e-12)
        assert lo <= x <= hi
        assert abs(x - root) < 1e-9
