"""Shared oracles and sequence predicates for the test suite."""

from __future__ import annotations

from prompt_pricing import GaiModel, ModelSet, PriceSchedule, user_payoff


def brute_force_count(model: GaiModel, price: float, eps: float, cap: int = 200) -> int:
    """Independent argmax of the user payoff over n in [0, cap], smallest n on ties."""
    best_n = 0
    best = 0.0
    for n in range(1, cap + 1):
        pay = user_payoff(model, price, eps, n)
        if pay > best:
            best = pay
            best_n = n
    return best_n


def brute_force_decision(models: ModelSet, prices: PriceSchedule, eps: float,
                         cap: int = 200) -> tuple[str | None, int, float]:
    """Independent best (model, count, payoff) by exhaustive enumeration."""
    best: tuple[str | None, int, float] = (None, 0, 0.0)
    for model in models:
        price = prices.price_for(model)
        if price == 0.0:
            raise ValueError("brute force needs positive prices")
        n = brute_force_count(model, price, eps, cap)
        pay = user_payoff(model, price, eps, n)
        if n == 0:
            continue
        if pay > best[2]:
            best = (model.id, n, pay)
    return best


def is_non_increasing(seq, slack: float = 0.0) -> bool:
    return all(b <= a + slack for a, b in zip(seq, seq[1:]))


def is_non_decreasing(seq, slack: float = 0.0) -> bool:
    return all(b >= a - slack for a, b in zip(seq, seq[1:]))


def is_unimodal(seq) -> bool:
    """Never increases again after its first strict decrease."""
    decreased = False
    for a, b in zip(seq, seq[1:]):
        if b < a:
            decreased = True
        elif b > a and decreased:
            return False
    return True
