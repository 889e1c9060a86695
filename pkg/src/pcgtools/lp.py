"""Exact rational linear programming.

Two-phase tableau simplex with Bland's rule, so it terminates without any
tolerance.  Arithmetic runs on ``gmpy2.mpq`` when it is installed, else on
``fractions.Fraction``; ``PCGTOOLS_PURE_FRACTIONS=1`` forces the latter.
Results are always returned as ``Fraction``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .rational import to_fraction

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = None

if _mpq is not None and os.environ.get("PCGTOOLS_PURE_FRACTIONS", "") not in ("1", "true", "yes"):
    NUMBER_BACKEND = "gmpy2"
    Q = _mpq
else:
    NUMBER_BACKEND = "fraction"
    Q = Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[int, object]
    sense: str  # "<=", ">=" or "=="
    rhs: object

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((to_fraction(c) * x[j] for j, c in self.coeffs.items()), Fraction(0))
        rhs = to_fraction(self.rhs)
        if self.sense == "<=":
            return lhs <= rhs
        if self.sense == ">=":
            return lhs >= rhs
        return lhs == rhs


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[list], basis: list[int], ncols: int):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols
        self.obj: list = []
        self.pivots = 0

    def set_objective(self, cost: dict[int, object]) -> None:
        obj = [Q(0)] * (self.ncols + 1)
        for j, c in cost.items():
            obj[j] = -c
        for i, b in enumerate(self.basis):
            cb = cost.get(b)
            if cb:
                row = self.rows[i]
                for k, val in enumerate(row):
                    if val:
                        obj[k] += cb * val
        self.obj = obj

    def pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        piv = prow[j]
        if piv != 1:
            inv = 1 / piv
            prow = [v * inv if v else v for v in prow]
            self.rows[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[j]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
        f = self.obj[j]
        if f:
            obj = self.obj
            for k in nz:
                obj[k] -= f * prow[k]
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed: int) -> str:
        """Maximize the current objective over columns ``< allowed``."""
        rhs = self.ncols
        while True:
            obj = self.obj
            j = next((k for k in range(allowed) if obj[k] < 0), None)
            if j is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[j]
                if a > 0:
                    key = (row[rhs] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], j)


def solve(
    n_vars: int,
    constraints: Sequence[Constraint],
    objective: Mapping[int, object],
    maximize: bool = True,
) -> LPResult:
    """Optimize ``objective . x`` subject to ``constraints`` and ``x >= 0``."""
    m = len(constraints)
    sign = 1 if maximize else -1
    senses = []
    normalized = []
    for con in constraints:
        coeffs = {j: Q(to_fraction(c)) for j, c in con.coeffs.items() if c}
        rhs = Q(to_fraction(con.rhs))
        sense = con.sense
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"unknown constraint sense {sense!r}")
        if rhs < 0:
            coeffs = {j: -c for j, c in coeffs.items()}
            rhs = -rhs
            sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
        senses.append(sense)
        normalized.append((coeffs, rhs))

    n_slack = sum(s != "==" for s in senses)
    n_art = sum(s != "<=" for s in senses)
    first_slack = n_vars
    first_art = n_vars + n_slack
    ncols = first_art + n_art
    zero = Q(0)
    one = Q(1)
    rows, basis = [], []
    slack = first_slack
    art = first_art
    for (coeffs, rhs), sense in zip(normalized, senses):
        row = [zero] * (ncols + 1)
        for j, c in coeffs.items():
            row[j] = c
        row[ncols] = rhs
        if sense == "<=":
            row[slack] = one
            basis.append(slack)
            slack += 1
        else:
            if sense == ">=":
                row[slack] = -one
                slack += 1
            row[art] = one
            basis.append(art)
            art += 1
        rows.append(row)

    tab = _Tableau(rows, basis, ncols)
    if n_art:
        tab.set_objective({j: Q(-1) for j in range(first_art, ncols)})
        tab.run(ncols)
        if tab.obj[ncols] < 0:
            return LPResult(INFEASIBLE, pivots=tab.pivots)
        for i in range(m - 1, -1, -1):
            if tab.basis[i] < first_art:
                continue
            row = tab.rows[i]
            j = next((k for k in range(first_art) if row[k]), None)
            if j is None:
                del tab.rows[i]
                del tab.basis[i]
            else:
                tab.pivot(i, j)

    cost = {j: Q(sign * to_fraction(c)) for j, c in objective.items() if c}
    tab.set_objective(cost)
    status = tab.run(first_art)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = [Fraction(0)] * n_vars
    for i, b in enumerate(tab.basis):
        if b < n_vars:
            x[b] = to_fraction(tab.rows[i][ncols])
    value = to_fraction(tab.obj[ncols]) * sign
    return LPResult(OPTIMAL, value, tuple(x), tab.pivots)
