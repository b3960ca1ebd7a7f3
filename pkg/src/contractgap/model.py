"""Typed principal-agent problem instances and slope-form conversions.

An instance is a reward vector over outcomes, per-type action sets (cost plus
an outcome-probability row), and a prior over types.  Every type carries a
null action: zero cost, probability one on some zero-reward outcome.

For linear-contract questions only the per-action expected rewards matter, so
an instance can equivalently be given in "slope form": each type's utility as
an increasing piecewise-linear function of the transfer coefficient.
`from_slopes` embeds a slope form into a canonical two-outcome instance and
`utilities_of` recovers the slope form; the pair is an exact round trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .envelope import instance_envelopes
from .rational import ONE, ZERO

__all__ = [
    "Action",
    "Instance",
    "TypeSlopes",
    "SlopeSpec",
    "validate",
    "from_slopes",
    "utilities_of",
]


@dataclass(frozen=True)
class Action:
    cost: Fraction
    row: Tuple[Fraction, ...]  # outcome probabilities

    def expected_reward(self, rewards: Sequence[Fraction]) -> Fraction:
        return sum((f * r for f, r in zip(self.row, rewards)), ZERO)


@dataclass(frozen=True)
class Instance:
    rewards: Tuple[Fraction, ...]
    actions: Tuple[Tuple[Action, ...], ...]  # per type; counts may differ
    prior: Tuple[Fraction, ...]
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def num_types(self) -> int:
        return len(self.actions)

    @property
    def num_outcomes(self) -> int:
        return len(self.rewards)

    def unit_weights(self) -> Tuple[Fraction, ...]:
        return (ONE,) * self.num_types

    def weights(self, convention: str) -> Tuple[Fraction, ...]:
        if convention == "prior":
            return self.prior
        if convention == "unit":
            return self.unit_weights()
        raise ValueError(f"unknown weight convention {convention!r}")


@dataclass(frozen=True)
class TypeSlopes:
    """One type's utility derivative: slopes[k] applies on
    [breakpoints[k-1], breakpoints[k]), with the last slope unbounded."""

    breakpoints: Tuple[Fraction, ...]
    slopes: Tuple[Fraction, ...]


@dataclass(frozen=True)
class SlopeSpec:
    types: Tuple[TypeSlopes, ...]
    prior: Optional[Tuple[Fraction, ...]] = None


def validate(instance: Instance) -> list[str]:
    """All invariant violations, as human-readable strings; [] when valid."""
    problems: list[str] = []
    m = instance.num_outcomes
    if m == 0:
        problems.append("instance has no outcomes")
    for j, r in enumerate(instance.rewards):
        if r < 0:
            problems.append(f"reward {j} is negative ({r})")
    if instance.num_types == 0:
        problems.append("instance has no types")
    if len(instance.prior) != instance.num_types:
        problems.append(
            f"prior length {len(instance.prior)} != {instance.num_types} types"
        )
    else:
        for t, p in enumerate(instance.prior):
            if p < 0:
                problems.append(f"prior of type {t} is negative ({p})")
        total = sum(instance.prior, ZERO)
        if total != 1:
            problems.append(f"prior sums to {total}")

    zero_reward = {j for j, r in enumerate(instance.rewards) if r == 0}
    for t, actions in enumerate(instance.actions):
        if not actions:
            problems.append(f"type {t} has no actions")
            continue
        has_null = False
        for i, act in enumerate(actions):
            if len(act.row) != m:
                problems.append(f"type {t} action {i} row has length {len(act.row)}")
                continue
            if act.cost < 0:
                problems.append(f"type {t} action {i} cost is negative ({act.cost})")
            bad_entry = False
            for j, f in enumerate(act.row):
                if f < 0:
                    problems.append(
                        f"type {t} action {i} outcome {j} probability is negative"
                    )
                    bad_entry = True
            row_sum = sum(act.row, ZERO)
            if row_sum != 1:
                problems.append(f"type {t} action {i} row sums to {row_sum}")
                bad_entry = True
            if (
                not bad_entry
                and act.cost == 0
                and any(act.row[j] == 1 for j in zero_reward)
            ):
                has_null = True
        if not has_null:
            problems.append(f"type {t} has no null action")
    return problems


def _check_slopes(ts: TypeSlopes, t: int) -> None:
    if not ts.slopes:
        raise ValueError(f"type {t}: empty slope list")
    if len(ts.slopes) != len(ts.breakpoints) + 1:
        raise ValueError(
            f"type {t}: {len(ts.slopes)} slopes need {len(ts.slopes) - 1} breakpoints"
        )
    if any(s < 0 for s in ts.slopes):
        raise ValueError(f"type {t}: negative slope")
    if any(b1 >= b2 for b1, b2 in zip(ts.slopes, ts.slopes[1:])):
        raise ValueError(f"type {t}: slopes not strictly increasing")
    if any(b <= 0 for b in ts.breakpoints):
        raise ValueError(f"type {t}: breakpoints must be positive")
    if any(a >= b for a, b in zip(ts.breakpoints, ts.breakpoints[1:])):
        raise ValueError(f"type {t}: breakpoints not strictly increasing")


def from_slopes(spec: SlopeSpec) -> Instance:
    """Canonical two-outcome instance realizing the given utility slopes.

    Outcome 0 carries reward r1 = the largest slope anywhere in the spec;
    outcome 1 is the null outcome.  Each slope segment becomes one action
    whose expected reward equals the slope, with costs chosen so consecutive
    lines intersect exactly at the stated breakpoints.
    """
    if not spec.types:
        raise ValueError("slope spec has no types")
    for t, ts in enumerate(spec.types):
        _check_slopes(ts, t)

    r1 = max(max(ts.slopes) for ts in spec.types)
    if r1 == 0:
        r1 = ONE  # all-zero slopes: any positive reward scale works
    per_type = []
    for ts in spec.types:
        actions = []
        if ts.slopes[0] > 0:
            actions.append(Action(ZERO, (ZERO, ONE)))
        cost = ZERO
        for k, slope in enumerate(ts.slopes):
            if k > 0:
                cost = cost + ts.breakpoints[k - 1] * (slope - ts.slopes[k - 1])
            p = slope / r1
            actions.append(Action(cost, (p, 1 - p)))
        per_type.append(tuple(actions))

    prior = spec.prior
    if prior is None:
        n = len(spec.types)
        prior = tuple(Fraction(1, n) for _ in spec.types)
    return Instance(rewards=(r1, ZERO), actions=tuple(per_type), prior=tuple(prior))


def utilities_of(instance: Instance) -> SlopeSpec:
    """Slope form of each type's utility envelope (dominated actions gone)."""
    types = []
    for env in instance_envelopes(instance):
        types.append(
            TypeSlopes(
                breakpoints=env.breakpoints,
                slopes=tuple(seg.rate for seg in env.segments),
            )
        )
    return SlopeSpec(types=tuple(types), prior=instance.prior)
