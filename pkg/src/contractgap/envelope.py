"""Piecewise-linear utility machinery for linear contracts.

An agent facing a linear contract with transfer coefficient ``a`` picks the
action maximizing ``rate * a - cost`` over its action set, so its utility is
the upper envelope of a family of lines.  The envelope is convex, piecewise
linear, starts at 0, and its slope-change points ("breakpoints") are where
the agent switches actions.  Ties at breakpoints are resolved toward the
higher-rate segment, so the active segment is the right-continuous one.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .rational import ZERO


@dataclass(frozen=True)
class Segment:
    action: int
    rate: Fraction  # expected reward of the action (the line's slope)
    cost: Fraction


@dataclass(frozen=True)
class Envelope:
    segments: Tuple[Segment, ...]
    breakpoints: Tuple[Fraction, ...]  # segment k is active on [bp[k-1], bp[k])

    @property
    def max_rate(self) -> Fraction:
        return self.segments[-1].rate


def upper_envelope(lines: Sequence[Tuple[int, Fraction, Fraction]]) -> Envelope:
    """Minimal set of segments realizing max_i (rate_i * a - cost_i) on [0, oo).

    ``lines`` are (action_id, rate, cost) triples and must include the
    opt-out line (rate 0, cost 0).  Identical lines collapse to the lowest
    action id; lines never strictly best anywhere are dropped.
    """
    if not lines:
        raise ValueError("empty line set")

    # Collapse duplicates, keeping the smallest action id.
    best_id: dict[tuple[Fraction, Fraction], int] = {}
    for action, rate, cost in lines:
        if rate < 0 or cost < 0:
            raise ValueError(f"action {action}: negative rate or cost")
        key = (Fraction(rate), Fraction(cost))
        if key not in best_id or action < best_id[key]:
            best_id[key] = action

    ordered = sorted(((r, c, a) for (r, c), a in best_id.items()))

    hull: list[tuple[Fraction, Fraction, int]] = []
    for rate, cost, action in ordered:
        # Lines arrive in increasing (rate, cost); equal rate keeps the first
        # (cheapest) one only.
        if hull and hull[-1][0] == rate:
            continue
        while hull and hull[-1][1] >= cost:
            hull.pop()  # cheaper at 0 and flatter: dominated everywhere
        # Pop lines that lose their interval: the new line must intersect the
        # current top strictly after the top's own left endpoint.
        while len(hull) >= 2:
            r1, c1, _ = hull[-2]
            r2, c2, _ = hull[-1]
            left = (c2 - c1) / (r2 - r1)
            here = (cost - c2) / (rate - r2)
            if here <= left:
                hull.pop()
            else:
                break
        hull.append((rate, cost, action))

    segments = tuple(Segment(a, r, c) for r, c, a in hull)
    breakpoints = tuple(
        (segments[k + 1].cost - segments[k].cost)
        / (segments[k + 1].rate - segments[k].rate)
        for k in range(len(segments) - 1)
    )
    return Envelope(segments, breakpoints)


def _segment_index(env: Envelope, alpha: Fraction) -> int:
    # Right-continuous: at a breakpoint the next segment is active.
    return bisect_right(env.breakpoints, alpha)


def eval_utility(env: Envelope, alpha) -> Fraction:
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("negative transfer coefficient")
    seg = env.segments[_segment_index(env, alpha)]
    return seg.rate * alpha - seg.cost


def right_slope(env: Envelope, alpha) -> Fraction:
    """Slope of the segment active on [alpha, alpha + d) for small d."""
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("negative transfer coefficient")
    return env.segments[_segment_index(env, alpha)].rate


def best_response(env: Envelope, alpha) -> int:
    """Utility-maximizing action; ties go to the largest rate."""
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("negative transfer coefficient")
    return env.segments[_segment_index(env, alpha)].action


def instance_envelopes(instance) -> Tuple[Envelope, ...]:
    """One utility envelope per type, from expected rewards and costs."""
    envs = []
    for actions in instance.actions:
        lines = []
        for idx, act in enumerate(actions):
            rate = sum(
                (f * r for f, r in zip(act.row, instance.rewards)), ZERO
            )
            lines.append((idx, rate, act.cost))
        envs.append(upper_envelope(lines))
    return tuple(envs)


def merged_breakpoints(instance) -> Tuple[Fraction, ...]:
    """Sorted union of every type's breakpoints, with 0 prepended."""
    points = {ZERO}
    for env in instance_envelopes(instance):
        points.update(env.breakpoints)
    return tuple(sorted(points))
