"""Optimal menus of randomized linear contracts via one concise LP.

A menu assigns each type a probability distribution over transfer
coefficients; the agent reports a type, a coefficient is drawn from that
type's distribution, and the agent best-responds to the draw.  Optimal
menus may place mass only on the merged breakpoints plus, per type, a
single point above the largest breakpoint.  The LP therefore tracks, for
each type, one mass variable per breakpoint, the mass above the last
breakpoint, and that mass's first moment z (mass times coefficient); the
tail's revenue and utility are linear in (mass, z), so everything stays
linear and the tail point is recovered afterwards as z / mass.

The bounded variant restricts support to coefficients at most 1 (the
breakpoints inside [0, 1] plus both endpoints) and needs no tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .envelope import eval_utility, instance_envelopes, merged_breakpoints, right_slope
from .model import Instance
from .rational import ONE, ZERO
from .simplex import EQ, GE, LE, LinearProgram, LpOutcome, constraint, solve

__all__ = [
    "RlcItem",
    "RlcMenu",
    "RlcEvaluation",
    "build_rlc_lp",
    "opt_rlc_menu",
    "evaluate_rlc_menu",
    "designated_rlc_values",
]


@dataclass(frozen=True)
class RlcItem:
    alpha: Fraction
    prob: Fraction


@dataclass(frozen=True)
class RlcMenu:
    items: Tuple[Tuple[RlcItem, ...], ...]  # one item list per type

    def check(self) -> None:
        for t, dist in enumerate(self.items):
            if any(it.prob < 0 or it.alpha < 0 for it in dist):
                raise ValueError(f"menu for type {t} has negative entries")
            if sum((it.prob for it in dist), ZERO) != 1:
                raise ValueError(f"menu for type {t} does not sum to 1")
            alphas = [it.alpha for it in dist]
            if len(set(alphas)) != len(alphas):
                raise ValueError(f"menu for type {t} repeats a coefficient")


@dataclass(frozen=True)
class RlcLpLayout:
    support: Tuple[Fraction, ...]
    has_tail: bool
    vars_per_type: int

    def mass_var(self, t: int, i: int) -> int:
        return t * self.vars_per_type + i

    def tail_var(self, t: int) -> int:
        return t * self.vars_per_type + len(self.support)

    def z_var(self, t: int) -> int:
        return t * self.vars_per_type + len(self.support) + 1


def build_rlc_lp(
    instance: Instance,
    weights: Optional[Sequence[Fraction]] = None,
    bounded: bool = False,
    extra_support: Sequence[Fraction] = (),
) -> Tuple[LinearProgram, RlcLpLayout]:
    """LP whose optimum is the best menu value under the given weights.

    ``extra_support`` adds mass variables at arbitrary extra coefficients
    (used to check that non-breakpoint support never helps).
    """
    if weights is None:
        weights = instance.prior
    envs = instance_envelopes(instance)
    T = instance.num_types
    bps = merged_breakpoints(instance)

    if bounded:
        support = sorted(set(b for b in bps if b <= 1) | {ZERO, ONE})
    else:
        support = sorted(set(bps) | set(Fraction(a) for a in extra_support))
    support = tuple(support)
    last = support[-1]

    layout = RlcLpLayout(
        support=support,
        has_tail=not bounded,
        vars_per_type=len(support) + (2 if not bounded else 0),
    )
    nvars = T * layout.vars_per_type

    # Utilities and right slopes of every type at every support point.
    util = [[eval_utility(env, a) for a in support] for env in envs]
    slope = [[right_slope(env, a) for a in support] for env in envs]
    tail_slope = [right_slope(env, last) for env in envs]
    tail_util = [eval_utility(env, last) for env in envs]

    objective = [ZERO] * nvars
    for t in range(T):
        w = weights[t]
        for i, a in enumerate(support):
            objective[layout.mass_var(t, i)] = w * slope[t][i] * (ONE - a)
        if layout.has_tail:
            # Revenue of tail mass g at point b: (1-b) * U'(last) * g,
            # linear in (g, z) through g - z with z = b * g.
            objective[layout.tail_var(t)] = w * tail_slope[t]
            objective[layout.z_var(t)] = -w * tail_slope[t]

    constraints = []
    for t in range(T):
        row = [ZERO] * nvars
        for i in range(len(support)):
            row[layout.mass_var(t, i)] = ONE
        if layout.has_tail:
            row[layout.tail_var(t)] = ONE
        constraints.append(constraint(row, EQ, ONE))
        if layout.has_tail:
            row = [ZERO] * nvars
            row[layout.tail_var(t)] = last
            row[layout.z_var(t)] = -ONE
            constraints.append(constraint(row, LE, ZERO))  # tail point >= last

    # Truthfulness: type t weakly prefers its own distribution to type u's.
    for t in range(T):
        for u in range(T):
            if u == t:
                continue
            row = [ZERO] * nvars
            for i in range(len(support)):
                row[layout.mass_var(t, i)] += util[t][i]
                row[layout.mass_var(u, i)] -= util[t][i]
            if layout.has_tail:
                # E[U_t under tail] = U_t(last) * g + U'_t(last) * (z - last * g)
                g_coeff = tail_util[t] - tail_slope[t] * last
                row[layout.tail_var(t)] += g_coeff
                row[layout.z_var(t)] += tail_slope[t]
                row[layout.tail_var(u)] -= g_coeff
                row[layout.z_var(u)] -= tail_slope[t]
            constraints.append(constraint(row, GE, ZERO))

    lp = LinearProgram(tuple(objective), tuple(constraints))
    return lp, layout


def _extract_menu(layout: RlcLpLayout, x: Sequence[Fraction], T: int) -> RlcMenu:
    items = []
    for t in range(T):
        masses = {}
        for i, a in enumerate(layout.support):
            p = x[layout.mass_var(t, i)]
            if p != 0:
                masses[a] = masses.get(a, ZERO) + p
        if layout.has_tail:
            g = x[layout.tail_var(t)]
            if g != 0:
                point = x[layout.z_var(t)] / g
                masses[point] = masses.get(point, ZERO) + g
        if not masses:
            masses[ZERO] = ONE
        items.append(
            tuple(RlcItem(a, p) for a, p in sorted(masses.items()))
        )
    return RlcMenu(tuple(items))


def opt_rlc_menu(
    instance: Instance,
    weights: Optional[Sequence[Fraction]] = None,
    bounded: bool = False,
) -> Tuple[RlcMenu, Fraction, LpOutcome]:
    """Solve for the optimal menu; returns (menu, value, raw LP outcome)."""
    lp, layout = build_rlc_lp(instance, weights, bounded=bounded)
    out = solve(lp)
    if out.status != "optimal":
        # The all-types point mass at 0 is always feasible, so anything else
        # indicates a malformed instance or solver defect.
        raise RuntimeError(f"menu LP unexpectedly {out.status}")
    menu = _extract_menu(layout, out.x, instance.num_types)
    menu.check()
    return menu, out.value, out


@dataclass(frozen=True)
class RlcEvaluation:
    value: Fraction
    chosen: Tuple[int, ...]  # item index picked by each type
    utilities: Tuple[Tuple[Fraction, ...], ...]  # type x item expected utility
    strict: bool  # every type's own item is its unique argmax


def _item_profit(env, dist) -> Fraction:
    return sum(
        (it.prob * (ONE - it.alpha) * right_slope(env, it.alpha) for it in dist),
        ZERO,
    )


def evaluate_rlc_menu(
    instance: Instance,
    menu: RlcMenu,
    weights: Optional[Sequence[Fraction]] = None,
) -> RlcEvaluation:
    """Play the menu: each type picks the item maximizing expected utility.

    Ties favor the principal (largest profit from that type), then the
    lowest item index.  The value is the weighted profit under the picks.
    """
    if weights is None:
        weights = instance.prior
    menu.check()
    envs = instance_envelopes(instance)
    T = instance.num_types
    if len(menu.items) != T:
        raise ValueError(f"menu has {len(menu.items)} items for {T} types")

    utilities = []
    chosen = []
    value = ZERO
    strict = True
    for t, env in enumerate(envs):
        row = tuple(
            sum((it.prob * eval_utility(env, it.alpha) for it in dist), ZERO)
            for dist in menu.items
        )
        utilities.append(row)
        best_u = max(row)
        tied = [u for u in range(T) if row[u] == best_u]
        if tied != [t]:
            strict = False
        pick = max(tied, key=lambda u: (_item_profit(env, menu.items[u]), -u))
        chosen.append(pick)
        value += weights[t] * _item_profit(env, menu.items[pick])
    return RlcEvaluation(value, tuple(chosen), tuple(utilities), strict)


def designated_rlc_values(
    instance: Instance, menu: RlcMenu, weights: Optional[Sequence[Fraction]] = None
) -> Tuple[Fraction, Tuple[Fraction, ...]]:
    """Value if every type is forced onto its own item (no self-selection):
    the per-item revenue decomposition quoted for the named constructions."""
    if weights is None:
        weights = instance.prior
    menu.check()
    envs = instance_envelopes(instance)
    per_type = tuple(
        _item_profit(env, dist) for env, dist in zip(envs, menu.items)
    )
    total = sum((w * p for w, p in zip(weights, per_type)), ZERO)
    return total, per_type
