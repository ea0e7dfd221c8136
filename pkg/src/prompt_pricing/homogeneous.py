"""Stage-1 pricing when every user shares one ambiguity level.

With a single ambiguity value the platform's problem has a closed form:
for each model, scan for the profit-maximizing induced prompt count and
quote the price that makes the user exactly indifferent at that count
(the user accepts the marginal prompt at indifference, so the platform
extracts the full marginal surplus).  Non-served models are priced at
their utility, which no user accepts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .core import GaiModel, InvalidAmbiguity, ModelSet, PriceSchedule, check_ambiguity
from .user_strategy import UNBOUNDED, marginal_expected_utility, optimal_prompt_count


class CostShape(enum.Enum):
    """How the served prompt count under optimal pricing moves with ambiguity."""

    INCREASING = "increasing"
    INVERSE_U_SHAPED = "inverse_u_shaped"
    DECREASING = "decreasing"
    ALWAYS_ZERO = "always_zero"


@dataclass(frozen=True)
class HomogeneousSolution:
    """Optimal schedule for one shared ambiguity level.

    ``best_model`` is the payoff-maximizing candidate; ``served_model``
    equals it when trade actually happens (induced count >= 1) and is
    None otherwise.  ``cost_free_unbounded`` flags a zero-cost winner,
    whose induced count grows without bound as ambiguity approaches one
    (and is capped if the scan limit is ever reached).
    """

    schedule: PriceSchedule
    best_model: str
    served_model: str | None
    induced_count: int
    platform_payoff: float
    cost_free_unbounded: bool = False


@dataclass(frozen=True)
class CurvePoint:
    """One ambiguity grid point of the optimal-pricing sweep."""

    eps: float
    price: float
    prompt_count: int
    payoff: float


def induced_prompt_count(model: GaiModel, eps: float, cap: int = 10_000) -> int:
    """Profit-maximizing prompt count for one model at ambiguity ``eps``.

    Ascending scan for the first ``k`` where the marginal induced profit
    drops below zero, i.e. ``(k+1)*eps**k - k*eps**(k-1) < C/((1-eps)*U)``.
    The left side decreases and eventually turns negative, so the scan
    terminates even at zero cost; ``cap`` guards ambiguity values within
    about 1e-4 of one, where the count grows like ``1/(1-eps)``.
    """
    eps = check_ambiguity(eps)
    threshold = model.cost / ((1.0 - eps) * model.utility)
    k = 0
    while k < cap:
        lhs = (k + 1) * eps ** k - k * eps ** (k - 1) if k >= 1 else 1.0
        if lhs < threshold:
            return k
        k += 1
    return cap


def classify_cost_shape(model: GaiModel) -> CostShape:
    """Classify the served-count-versus-ambiguity shape from cost/utility alone."""
    u = model.utility
    if model.cost == 0.0:
        return CostShape.INCREASING
    if model.cost <= u / 8.0:
        return CostShape.INVERSE_U_SHAPED
    if model.cost < u:
        return CostShape.DECREASING
    return CostShape.ALWAYS_ZERO


def optimal_homogeneous_price(
    models: ModelSet, eps: float, cap: int = 10_000
) -> HomogeneousSolution:
    """Optimal per-model prices and platform payoff for one ambiguity level.

    Each model's candidate payoff is ``(price_k - cost) * k`` at its own
    optimal induced count ``k``; the best candidate is served (ties go
    to higher utility, then smaller id) and every other model is priced
    at its utility.  A served count of zero means no trade: the quoted
    formula price exceeds what any user accepts, and the payoff is zero.
    """
    eps = check_ambiguity(eps)
    best: tuple[GaiModel, int, float, float] | None = None
    prices: dict[str, float] = {}
    for model in models:
        k = induced_prompt_count(model, eps, cap=cap)
        price = marginal_expected_utility(model.utility, eps, k)
        payoff = (price - model.cost) * k
        if best is None:
            best = (model, k, price, payoff)
            continue
        b_model, _, _, b_payoff = best
        wins = payoff > b_payoff
        if payoff == b_payoff:
            if model.utility != b_model.utility:
                wins = model.utility > b_model.utility
            else:
                wins = model.id < b_model.id
        if wins:
            best = (model, k, price, payoff)
    assert best is not None
    winner, k, price, payoff = best
    for model in models:
        prices[model.id] = price if model.id == winner.id else model.utility
    return HomogeneousSolution(
        schedule=PriceSchedule(prices),
        best_model=winner.id,
        served_model=winner.id if k >= 1 else None,
        induced_count=k,
        platform_payoff=payoff if k >= 1 else 0.0,
        cost_free_unbounded=(winner.cost == 0.0 or k >= cap),
    )


def homogeneous_payoff_curve(
    models: ModelSet, eps_grid: Sequence[float]
) -> list[CurvePoint]:
    """Optimal price, induced count, and payoff over an ascending ambiguity grid."""
    grid = [check_ambiguity(e) for e in eps_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidAmbiguity("ambiguity grid must be strictly ascending")
    points: list[CurvePoint] = []
    for eps in grid:
        sol = optimal_homogeneous_price(models, eps)
        winner = models[sol.best_model]
        price = sol.schedule.price_for(winner)
        if sol.served_model is None:
            points.append(CurvePoint(eps, price, 0, 0.0))
            continue
        n = optimal_prompt_count(winner, price, eps)
        count = sol.induced_count if n is UNBOUNDED else int(n)
        points.append(CurvePoint(eps, price, count, sol.platform_payoff))
    return points
