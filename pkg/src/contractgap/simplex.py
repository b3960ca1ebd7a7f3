"""Exact two-phase simplex over rationals.

Maximizes c.x subject to rows (a, rel, b) with rel in {"<=", "==", ">="};
variables are nonnegative unless listed as free (free variables are split
into differences of nonnegatives).  Bland's smallest-index rule is used for
both the entering and the leaving choice, so the method terminates on the
highly degenerate programs produced by the gap constructions and is fully
deterministic for a fixed program.

On an optimal outcome the solver also reports one exact dual price per
constraint, read off the columns of the initial identity basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .rational import ONE, ZERO

LE, EQ, GE = "<=", "==", ">="


@dataclass(frozen=True)
class Constraint:
    coeffs: Tuple[Fraction, ...]
    relation: str
    rhs: Fraction


@dataclass(frozen=True)
class LinearProgram:
    objective: Tuple[Fraction, ...]  # maximize objective . x
    constraints: Tuple[Constraint, ...]
    free_vars: frozenset = frozenset()

    def __post_init__(self):
        for k, con in enumerate(self.constraints):
            if len(con.coeffs) != len(self.objective):
                raise ValueError(f"constraint {k} has {len(con.coeffs)} coefficients")
            if con.relation not in (LE, EQ, GE):
                raise ValueError(f"constraint {k}: bad relation {con.relation!r}")


def constraint(coeffs: Sequence, relation: str, rhs) -> Constraint:
    return Constraint(tuple(Fraction(c) for c in coeffs), relation, Fraction(rhs))


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    x: Optional[Tuple[Fraction, ...]] = None
    duals: Optional[Tuple[Fraction, ...]] = None
    pivots: int = 0


OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


class _Tableau:
    def __init__(self, rows: List[List[Fraction]], basis: List[int], ncols: int):
        self.rows = rows  # each row: ncols coefficients then the rhs
        self.basis = basis
        self.ncols = ncols
        self.pivots = 0

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        inv = ONE / row[j]
        if inv != 1:
            self.rows[r] = row = [v * inv for v in row]
        for i, other in enumerate(self.rows):
            if i != r and other[j] != 0:
                f = other[j]
                self.rows[i] = [u - f * v for u, v in zip(other, row)]
        self.basis[r] = j
        self.pivots += 1

    def reduced_costs(self, cost: List[Fraction]) -> List[Fraction]:
        red = list(cost) + [ZERO]  # trailing slot accumulates the objective
        for r, j in enumerate(self.basis):
            cb = cost[j]
            if cb != 0:
                row = self.rows[r]
                red = [u - cb * v for u, v in zip(red, row)]
        return red

    def run(self, red: List[Fraction], banned: frozenset) -> Tuple[str, List[Fraction]]:
        """Bland iterations until optimal or unbounded; red is updated in place."""
        while True:
            enter = -1
            for j in range(self.ncols):
                if red[j] > 0 and j not in banned:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL, red
            leave = -1
            best = None
            for r, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[r] < self.basis[leave])
                    ):
                        best = ratio
                        leave = r
            if leave < 0:
                return UNBOUNDED, red
            self.pivot(leave, enter)
            f = red[enter]
            if f != 0:
                row = self.rows[leave]
                for j in range(self.ncols + 1):
                    if row[j] != 0:
                        red[j] -= f * row[j]
        # not reached


def solve(lp: LinearProgram) -> LpOutcome:
    nvars = len(lp.objective)

    # Column layout: one column per nonnegative variable, two (plus, minus)
    # per free variable, then one identity column per constraint (slack for
    # "<=", artificial for "==" and ">="; ">=" also gets a surplus column).
    col_of: List[List[int]] = []
    ncols = 0
    for j in range(nvars):
        if j in lp.free_vars:
            col_of.append([ncols, ncols + 1])
            ncols += 2
        else:
            col_of.append([ncols])
            ncols += 1
    nstruct = ncols

    sigma: List[int] = []  # row orientation applied to make rhs nonnegative
    oriented: List[Tuple[List[Fraction], str, Fraction]] = []
    for con in lp.constraints:
        coeffs = [Fraction(c) for c in con.coeffs]
        rel, rhs = con.relation, Fraction(con.rhs)
        if rhs < 0 or (rhs == 0 and rel == GE):
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
            sigma.append(-1)
        else:
            sigma.append(1)
        oriented.append((coeffs, rel, rhs))

    surplus_cols = sum(1 for _, rel, _ in oriented if rel == GE)
    id_col: List[int] = []  # the identity column created for each row
    art_cols: List[int] = []
    rows: List[List[Fraction]] = []
    basis: List[int] = []
    next_surplus = nstruct
    next_id = nstruct + surplus_cols
    total = nstruct + surplus_cols + len(oriented)
    keep_row: List[bool] = []

    for coeffs, rel, rhs in oriented:
        expanded = [ZERO] * total
        zero_row = True
        for j, c in enumerate(coeffs):
            if c == 0:
                continue
            zero_row = False
            cols = col_of[j]
            expanded[cols[0]] += c
            if len(cols) == 2:
                expanded[cols[1]] -= c
        if zero_row:
            # Presolve: identically-zero rows are dropped or fatal.
            if (rel == LE and rhs >= 0) or (rel in (EQ, GE) and rhs == 0):
                id_col.append(-1)
                keep_row.append(False)
                continue
            return LpOutcome(INFEASIBLE)
        if rel == GE:
            expanded[next_surplus] = -ONE
            next_surplus += 1
        expanded[next_id] = ONE
        if rel != LE:
            art_cols.append(next_id)
        id_col.append(next_id)
        basis.append(next_id)
        next_id += 1
        expanded.append(rhs)
        rows.append(expanded)
        keep_row.append(True)

    tab = _Tableau(rows, basis, total)
    banned = frozenset(art_cols)

    if art_cols:
        cost1 = [ZERO] * total
        for j in art_cols:
            cost1[j] = -ONE
        red = tab.reduced_costs(cost1)
        status, red = tab.run(red, frozenset())
        assert status == OPTIMAL  # phase 1 is always bounded
        if red[-1] != 0:  # reduced row tracks -objective; nonzero means infeasible
            return LpOutcome(INFEASIBLE, pivots=tab.pivots)
        # Drive artificials out of the (degenerate) basis where possible; a
        # row whose artificial cannot leave is redundant and simply stays
        # basic at level zero, with the artificial banned from re-entering.
        for r in range(len(tab.basis)):
            if tab.basis[r] in banned:
                row = tab.rows[r]
                enter = next(
                    (j for j in range(total) if j not in banned and row[j] != 0),
                    None,
                )
                if enter is not None:
                    tab.pivot(r, enter)

    cost2 = [ZERO] * total
    for j in range(nvars):
        c = Fraction(lp.objective[j])
        cols = col_of[j]
        cost2[cols[0]] = c
        if len(cols) == 2:
            cost2[cols[1]] = -c
    red = tab.reduced_costs(cost2)
    status, red = tab.run(red, banned)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED, pivots=tab.pivots)

    xcols = [ZERO] * total
    for r, j in enumerate(tab.basis):
        xcols[j] = tab.rows[r][-1]
    x = []
    for j in range(nvars):
        cols = col_of[j]
        val = xcols[cols[0]]
        if len(cols) == 2:
            val -= xcols[cols[1]]
        x.append(val)
    value = -red[-1]

    duals = []
    for i, keep in enumerate(keep_row):
        if not keep:
            duals.append(ZERO)
            continue
        y = -red[id_col[i]]  # c of slack/artificial columns is 0 in phase 2
        duals.append(sigma[i] * y)
    return LpOutcome(OPTIMAL, value, tuple(x), tuple(duals), tab.pivots)
