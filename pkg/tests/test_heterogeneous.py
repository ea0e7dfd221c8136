"""Distribution-level pricing: quadrature payoffs, bounds, optimizers, benchmarks."""

import math

import numpy as np
import pytest

from prompt_pricing import (
    DegenerateCostBase,
    GaiModel,
    ModelSet,
    OppConfig,
    PriceSchedule,
    QuadratureConfig,
    UnboundedDemand,
    UniformAmbiguity,
    cost_based_pricing,
    grid_oracle,
    opp,
    optimal_homogeneous_price,
    optimal_prompt_count,
    platform_payoff,
    price_upper_bound,
    segment_roots,
    select_model,
    single_model_price,
    user_payoff,
    utility_based_pricing,
)

PAIR = ModelSet([GaiModel("ml", 1.0, 0.02), GaiModel("mh", 1.8, 0.04)])
U01 = UniformAmbiguity(0.0, 1.0)
FAST = QuadratureConfig(501)
FAST_OPP = OppConfig(step_alpha=0.01, quad=FAST)


class TestPlatformPayoff:
    def test_prohibitive_prices_sell_nothing(self):
        out = platform_payoff(PAIR, PriceSchedule({"ml": 1.0, "mh": 1.8}), U01, FAST)
        assert out.platform_payoff == 0.0
        assert all(v == 0.0 for v in out.prompt_volume.values())

    def test_zero_margin_zero_payoff(self):
        out = platform_payoff(PAIR, PriceSchedule({"ml": 0.02, "mh": 0.04}), U01, FAST)
        assert out.platform_payoff == 0.0
        assert out.prompt_volume["ml"] > 0  # prompts flow, margin does not

    def test_zero_price_rejected(self):
        with pytest.raises(UnboundedDemand):
            platform_payoff(PAIR, PriceSchedule({"ml": 0.0, "mh": 0.5}), U01, FAST)

    def test_payoff_is_margin_times_volume(self):
        out = platform_payoff(PAIR, PriceSchedule({"ml": 0.3, "mh": 0.6}), U01)
        recomputed = sum(
            (out.schedule.price_for(m) - m.cost) * out.prompt_volume[m.id] for m in PAIR)
        assert out.platform_payoff == pytest.approx(recomputed, abs=1e-9)

    def test_single_model_demand_against_monte_carlo(self):
        # price above a quarter of utility: each user sends at most one prompt,
        # exactly when ambiguity stays below 1 - price/utility = 0.4
        model = ModelSet([GaiModel("m", 1.0, 0.2)])
        out = platform_payoff(model, PriceSchedule({"m": 0.6}), U01)
        rng = np.random.RandomState(20240811)
        draws = rng.uniform(0.0, 1.0, 1_000_000)
        mc_volume = float(np.mean(draws < 0.4))
        assert out.prompt_volume["m"] == pytest.approx(mc_volume, abs=1e-3)
        assert out.platform_payoff == pytest.approx(0.4 * mc_volume, abs=1e-3)

    def test_matches_per_node_model_selection(self):
        nodes, weights = U01.quadrature(QuadratureConfig(301))
        sched = PriceSchedule({"ml": 0.22, "mh": 0.71})
        volumes = {"ml": 0.0, "mh": 0.0}
        for e, w in zip(nodes, weights):
            decision = select_model(PAIR, sched, float(e))
            if decision.selected_model is not None:
                volumes[decision.selected_model] += w * decision.prompt_count
        out = platform_payoff(PAIR, sched, U01, QuadratureConfig(301))
        assert out.prompt_volume["ml"] == pytest.approx(volumes["ml"], abs=1e-12)
        assert out.prompt_volume["mh"] == pytest.approx(volumes["mh"], abs=1e-12)


class TestSegmentRoots:
    def test_no_roots_above_curve_maximum(self):
        assert segment_roots(GaiModel("m", 1.0), 0.3, 2) is None

    def test_quadratic_case(self):
        roots = segment_roots(GaiModel("m", 1.0), 0.1, 2)
        assert roots.lower == pytest.approx((1 - math.sqrt(0.6)) / 2, abs=1e-9)
        assert roots.upper == pytest.approx((1 + math.sqrt(0.6)) / 2, abs=1e-9)

    def test_tangency_collapses_to_peak(self):
        price = 2 ** 2 / 3 ** 3  # curve maximum for three prompts
        roots = segment_roots(GaiModel("m", 1.0), price, 3)
        assert roots.lower == pytest.approx(2 / 3, abs=1e-6)
        assert roots.upper == pytest.approx(2 / 3, abs=1e-6)

    def test_roots_satisfy_equation(self):
        for price, k in [(0.05, 2), (0.1, 3), (0.02, 5)]:
            roots = segment_roots(GaiModel("m", 1.0), price, k)
            for x in (roots.lower, roots.upper):
                assert abs(x ** (k - 1) * (1 - x) * 1.0 - price) < 1e-10
            assert roots.lower <= (k - 1) / k <= roots.upper


class TestSingleModelPrice:
    @pytest.mark.parametrize("cost", [0.1, 0.2, 0.4])
    def test_uniform_full_support_closed_form(self, cost):
        out = single_model_price(GaiModel("m", 1.0, cost), U01)
        assert out.schedule.price_for("m") == pytest.approx((1.0 + cost) / 2, abs=1e-3)

    def test_restricted_support_matches_grid_oracle(self):
        model = GaiModel("m", 1.0, 0.2)
        dist = UniformAmbiguity(0.5, 0.9)
        out = single_model_price(model, dist)
        prices = np.arange(0.2001, 1.0, 1e-4)
        payoffs = [
            platform_payoff(ModelSet([model]), PriceSchedule({"m": float(p)}), dist,
                            QuadratureConfig(801)).platform_payoff
            for p in prices[:: 50]
        ]
        coarse_best = max(payoffs)
        assert out.platform_payoff >= coarse_best - 1e-3

    def test_hopeless_cost_gives_zero(self):
        out = single_model_price(GaiModel("m", 1.0, 1.4), U01)
        assert out.platform_payoff == 0.0
        assert out.schedule.price_for("m") == 1.0


class TestPriceUpperBound:
    LOW = GaiModel("ml", 1.0, 0.02)
    HIGH = GaiModel("mh", 1.8, 0.04)

    def test_vanishing_ambiguity_single_prompt_form(self):
        eps = 1e-3
        p_low = 0.3
        n = optimal_prompt_count(self.LOW, p_low, eps)
        rival = user_payoff(self.LOW, p_low, eps, n)
        expected = (1 - eps) * 1.8 - rival  # one high-tier prompt decides it
        assert price_upper_bound(self.HIGH, self.LOW, p_low, eps) == pytest.approx(
            expected, rel=1e-9)

    def test_dominated_model_gets_empty_demand(self):
        weak = GaiModel("w", 0.2)
        strong = GaiModel("s", 1.9, 0.0)
        # the strong rival at a token price leaves no room for the weak model
        assert price_upper_bound(weak, strong, 0.01, 0.5) == 0.0

    def test_flip_consistency_against_selection(self):
        models = ModelSet([self.LOW, self.HIGH])
        mismatches = 0
        total = 0
        for eps in np.linspace(0.03, 0.97, 25):
            for p_low in np.linspace(0.05, 0.95, 25):
                bound = price_upper_bound(self.HIGH, self.LOW, float(p_low), float(eps))
                if not 1e-6 < bound < 1.8 - 1e-6:
                    continue
                total += 1
                sched_under = PriceSchedule({"ml": float(p_low), "mh": bound - 1e-6})
                sched_over = PriceSchedule({"ml": float(p_low), "mh": bound + 1e-6})
                under = select_model(models, sched_under, float(eps)).selected_model
                over = select_model(models, sched_over, float(eps)).selected_model
                if not (under == "mh" and over != "mh"):
                    mismatches += 1
        assert total > 300
        assert mismatches <= 0.01 * total

    def test_positive_rival_price_required(self):
        from prompt_pricing import InvalidPrice
        with pytest.raises(InvalidPrice):
            price_upper_bound(self.HIGH, self.LOW, 0.0, 0.5)


class TestGainDecomposition:
    def test_partition_matches_direct_payoff(self):
        """Serving everyone at the low tier plus the high-tier gain equals the
        schedule payoff, wherever no node sits on a decision boundary."""
        from prompt_pricing.heterogeneous import _price_bounds_vec
        from prompt_pricing.user_strategy import _counts_vec, _payoffs_at_counts

        low, high = PAIR.require_pair()
        p_low = 0.3
        quad = QuadratureConfig(501)
        nodes, weights = U01.quadrature(quad)
        n_low = _counts_vec(low.utility, p_low, nodes)
        pay_low = _payoffs_at_counts(low.utility, p_low, nodes, n_low)
        bounds = _price_bounds_vec(high, low, p_low, nodes, n_low, pay_low)
        low_total = float((weights * (p_low - low.cost) * n_low).sum())

        for p_high in (0.41, 0.93, 1.37):
            margin = np.abs(bounds - p_high)
            if margin.min() <= 1e-9:
                continue
            mask = p_high <= bounds
            n_high = _counts_vec(high.utility, p_high, nodes)
            gain = float((mask * (weights * (p_high - high.cost) * n_high
                                  - weights * (p_low - low.cost) * n_low)).sum())
            direct = platform_payoff(
                PAIR, PriceSchedule({"ml": p_low, "mh": p_high}), U01, quad).platform_payoff
            assert low_total + gain == pytest.approx(direct, abs=1e-6)


class TestOpp:
    def test_both_tiers_unprofitable(self):
        models = ModelSet([GaiModel("ml", 1.0, 1.5), GaiModel("mh", 1.8, 2.2)])
        out = opp(models, U01, FAST_OPP)
        assert out.platform_payoff == 0.0

    def test_one_profitable_tier_falls_back_to_single_model(self):
        models = ModelSet([GaiModel("ml", 1.0, 1.5), GaiModel("mh", 1.8, 0.04)])
        out = opp(models, U01, FAST_OPP)
        assert out.schedule.price_for("ml") == 1.0
        assert out.prompt_volume["ml"] == 0.0
        solo = single_model_price(GaiModel("mh", 1.8, 0.04), U01, FAST)
        assert out.platform_payoff == pytest.approx(solo.platform_payoff, rel=5e-3)

    def test_beats_or_matches_lattice_oracle(self):
        dist = UniformAmbiguity(0.3, 1.0)
        got = opp(PAIR, dist, FAST_OPP)
        oracle = grid_oracle(PAIR, dist, grid_n=200, quad=FAST)
        assert got.platform_payoff >= oracle.platform_payoff - 1e-3 * 1.8
        assert abs(got.platform_payoff - oracle.platform_payoff) <= 2e-3 * 1.8

    def test_trace_has_one_row_per_sweep_step(self):
        trace = []
        opp(PAIR, U01, OppConfig(step_alpha=0.05, quad=FAST), trace_sink=trace)
        expected_steps = int(math.floor((1.0 - 0.02) / 0.05)) + 2  # grid plus the endpoint
        assert len(trace) == expected_steps

    def test_homogeneous_limit(self):
        eps0 = 0.5
        dist = UniformAmbiguity(eps0 - 1e-4, eps0 + 1e-4)
        got = opp(PAIR, dist, FAST_OPP)
        want = optimal_homogeneous_price(PAIR, eps0).platform_payoff
        assert got.platform_payoff == pytest.approx(want, rel=0.02)


class TestGridOracle:
    def test_degenerate_distribution_recovers_homogeneous(self):
        eps0 = 0.5
        dist = UniformAmbiguity(eps0 - 1e-4, eps0 + 1e-4)
        out = grid_oracle(PAIR, dist, grid_n=200, quad=FAST)
        want = optimal_homogeneous_price(PAIR, eps0).platform_payoff
        assert out.platform_payoff == pytest.approx(want, rel=0.02)

    def test_unsellable_models_zero(self):
        models = ModelSet([GaiModel("ml", 1.0, 1.5), GaiModel("mh", 1.8, 2.0)])
        out = grid_oracle(models, U01, grid_n=60, quad=FAST)
        assert out.platform_payoff == 0.0

    def test_two_resolutions_agree(self):
        a = grid_oracle(PAIR, U01, grid_n=100, quad=FAST)
        b = grid_oracle(PAIR, U01, grid_n=200, quad=FAST)
        assert b.platform_payoff >= a.platform_payoff - 1e-12
        assert abs(a.platform_payoff - b.platform_payoff) <= 5e-3 * 1.8


class TestBenchmarks:
    def test_utility_based_is_a_constrained_optimum(self):
        out = utility_based_pricing(PAIR, U01, FAST)
        beta = out.schedule.price_for("ml") / 1.0
        for shift in (-1e-3, 1e-3):
            b = beta + shift
            if not 0.0 < b < 1.0:
                continue
            neighbour = platform_payoff(
                PAIR, PriceSchedule({"ml": b * 1.0, "mh": b * 1.8}), U01, FAST).platform_payoff
            assert out.platform_payoff >= neighbour - 1e-12

    def test_cost_based_is_a_constrained_optimum(self):
        out = cost_based_pricing(PAIR, U01, FAST)
        mu = out.schedule.price_for("ml") / 0.02 - 1.0
        for shift in (-1e-3, 1e-3):
            m = mu + shift
            if m < 0.0:
                continue
            neighbour = platform_payoff(
                PAIR, PriceSchedule({"ml": (1 + m) * 0.02, "mh": (1 + m) * 0.04}),
                U01, FAST).platform_payoff
            assert out.platform_payoff >= neighbour - 1e-12

    def test_cost_based_needs_positive_costs(self):
        models = ModelSet([GaiModel("ml", 1.0, 0.0), GaiModel("mh", 1.8, 0.04)])
        with pytest.raises(DegenerateCostBase):
            cost_based_pricing(models, U01, FAST)

    def test_proportional_families_cannot_beat_free_pricing(self):
        # the free optimum is integrated analytically, the families by
        # quadrature; allow one node weight of integration slack
        model = ModelSet([GaiModel("m", 1.0, 0.2)])
        free = single_model_price(GaiModel("m", 1.0, 0.2), U01)
        util = utility_based_pricing(model, U01)
        cost = cost_based_pricing(model, U01)
        assert util.platform_payoff <= free.platform_payoff + 1e-3
        assert cost.platform_payoff <= free.platform_payoff + 1e-3

    def test_single_model_utility_family_hits_its_grid_max(self):
        model = ModelSet([GaiModel("m", 1.0, 0.2)])
        out = utility_based_pricing(model, U01, FAST)
        sampled = [
            platform_payoff(model, PriceSchedule({"m": b / 1000.0}), U01, FAST).platform_payoff
            for b in range(50, 1000, 50)
        ]
        assert out.platform_payoff >= max(sampled) - 1e-12
