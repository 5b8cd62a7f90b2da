"""Exact rational simplex for the region queries.

Solves max c.x subject to A x <= b, x >= 0, over Fractions.  The regions
handled here always have b >= 0 after the emptiness screen (coefficients
are 0/1 and variables are nonnegative, so any negative bound certifies an
empty region), which makes the slack basis feasible and removes the need
for a phase-1 start.  Bland's pivoting rule keeps termination guaranteed
under degeneracy, which these polytopes have plenty of.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class InfeasibleError(ValueError):
    """Raised when the constraint system has no nonnegative solution."""


def simplex_max(
    objective: Sequence[Fraction],
    rows: Sequence[Sequence[Fraction]],
    bounds: Sequence[Fraction],
) -> tuple[Fraction, list[Fraction]]:
    """Maximize objective.x over {x >= 0 : rows.x <= bounds}.

    Requires bounds >= 0 (the origin must be feasible) and a bounded
    optimum; both hold for every constraint set built in this package
    once emptiness has been screened out.  Returns (optimum, argmax).
    """
    n = len(objective)
    m = len(rows)
    for b in bounds:
        if b < 0:
            raise InfeasibleError(f"negative bound {b}: origin infeasible")

    tableau: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(v) for v in rows[i]]
        if len(row) != n:
            raise ValueError(f"row {i} has {len(row)} coefficients, expected {n}")
        row.extend(Fraction(int(i == k)) for k in range(m))
        row.append(Fraction(bounds[i]))
        tableau.append(row)
    # Reduced-cost row; last entry accumulates the objective value.
    cost = [-Fraction(c) for c in objective] + [Fraction(0)] * (m + 1)
    basis = list(range(n, n + m))

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave = -1
        best_ratio: Fraction | None = None
        for i in range(m):
            coeff = tableau[i][enter]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            raise ValueError("unbounded objective; every variable must carry an upper bound")
        pivot = tableau[leave][enter]
        tableau[leave] = [v / pivot for v in tableau[leave]]
        pivot_row = tableau[leave]
        for i in range(m):
            if i != leave:
                factor = tableau[i][enter]
                if factor:
                    tableau[i] = [a - factor * b for a, b in zip(tableau[i], pivot_row)]
        factor = cost[enter]
        if factor:
            cost = [a - factor * b for a, b in zip(cost, pivot_row)]
        basis[leave] = enter

    solution = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            solution[var] = tableau[i][-1]
    return cost[-1], solution
