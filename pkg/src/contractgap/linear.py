"""Best single linear contract by breakpoint scan.

Per type, the profit of a linear contract with coefficient ``a`` is
(1 - a) times the slope of that type's utility at ``a`` (taking the
right slope, i.e. resolving agent ties toward the action the principal
prefers).  Between breakpoints the slope is constant, so the weighted
profit is maximized at a breakpoint or at 0, and coefficients above 1
can never beat 0; the scan over {0} plus breakpoints in (0, 1] is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .envelope import (
    Envelope,
    best_response,
    eval_utility,
    instance_envelopes,
    merged_breakpoints,
    right_slope,
)
from .model import Instance
from .rational import ONE, ZERO


@dataclass(frozen=True)
class LinearResult:
    alpha: Fraction
    value: Fraction
    per_type: Tuple[Tuple[int, Fraction], ...]  # (chosen action, profit term)


def _profit_terms(envs, alpha):
    return tuple(
        (best_response(env, alpha), (ONE - alpha) * right_slope(env, alpha))
        for env in envs
    )


def opt_linear(
    instance: Instance, weights: Optional[Sequence[Fraction]] = None
) -> LinearResult:
    """Maximize sum_t w_t (1-a) U'_t(a); ties go to the smallest a."""
    if weights is None:
        weights = instance.prior
    envs = instance_envelopes(instance)
    candidates = [ZERO] + [b for b in merged_breakpoints(instance) if 0 < b <= 1]
    best = None
    for alpha in candidates:
        terms = _profit_terms(envs, alpha)
        value = sum((w * p for w, (_, p) in zip(weights, terms)), ZERO)
        if best is None or value > best.value:
            best = LinearResult(alpha, value, terms)
    return best


def linear_profit_at(
    instance: Instance, alpha, weights: Optional[Sequence[Fraction]] = None
) -> Fraction:
    """Weighted profit of the single linear contract with coefficient alpha."""
    if weights is None:
        weights = instance.prior
    envs = instance_envelopes(instance)
    alpha = Fraction(alpha)
    return sum(
        (w * (ONE - alpha) * right_slope(env, alpha) for w, env in zip(weights, envs)),
        ZERO,
    )


def linear_menu_value(
    instance: Instance,
    alphas: Sequence[Fraction],
    weights: Optional[Sequence[Fraction]] = None,
) -> Fraction:
    """Profit when a finite set of coefficients is offered as a menu.

    Each type picks a utility-maximizing coefficient; among ties it picks
    the one yielding the most principal profit, then the smallest.  Offering
    menus of deterministic linear contracts adds nothing over the best
    single coefficient, which the suites verify through this function.
    """
    if weights is None:
        weights = instance.prior
    if not alphas:
        raise ValueError("empty menu")
    envs = instance_envelopes(instance)
    offered = sorted(set(Fraction(a) for a in alphas))
    total = ZERO
    for w, env in zip(weights, envs):
        best_key = None
        for alpha in offered:
            util = eval_utility(env, alpha)
            profit = (ONE - alpha) * right_slope(env, alpha)
            key = (util, profit, -alpha)
            if best_key is None or key > best_key:
                best_key = key
                best_profit = profit
        total += w * best_profit
    return total
