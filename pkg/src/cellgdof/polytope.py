"""H-representation of the cycle-bound GDoF polytope and exact queries on it.

The region is cut out by two constraint families over nonnegative GDoF
tuples: per-cell nested sum bounds (the in-cell successive decoding
budget), and one bound per directed cell cycle and participating rank
choice (what survives of each cell's budget after its predecessor on the
cycle has interfered).  All coefficients are 0 or 1; bounds are exact
rationals.  Redundant constraints are kept deliberately: every inequality
carries its provenance, which the CLI and the verification reports expose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .cycles import Cycle, enumerate_cycles, rank_tuples
from .network import CellNetwork, GdofPoint, UserId, rational_str
from .simplex import simplex_max


class EmptyRegionError(ValueError):
    """Raised when a query needs a feasible region but a bound is negative.

    Possible only outside the CTIN regime, where cycle bounds can drop
    below zero and the region collapses to nothing.
    """


@dataclass(frozen=True)
class SingleCell:
    """Provenance of an in-cell budget constraint: first `rank` users of `cell`."""

    cell: int
    rank: int

    @property
    def label(self) -> str:
        return f"single:cell={self.cell},rank={self.rank}"


@dataclass(frozen=True)
class CycleBound:
    """Provenance of a cycle constraint: rank choice per visited cell."""

    cycle: Cycle
    ranks: tuple[int, ...]

    @property
    def label(self) -> str:
        ranks = ",".join(str(r) for r in self.ranks)
        return f"cycle:{self.cycle}:ranks={ranks}"


Provenance = Union[SingleCell, CycleBound]


@dataclass(frozen=True)
class LinearConstraint:
    """sum of d over `support` <= bound (all coefficients are 0/1)."""

    support: frozenset[UserId]
    bound: Fraction
    provenance: Provenance

    def coefficient(self, user: UserId) -> Fraction:
        return Fraction(1) if user in self.support else Fraction(0)

    def evaluate(self, point: GdofPoint) -> Fraction:
        return sum((point[u] for u in self.support), Fraction(0))

    def satisfied_by(self, point: GdofPoint) -> bool:
        return self.evaluate(point) <= self.bound

    @property
    def label(self) -> str:
        return self.provenance.label


@dataclass(frozen=True)
class ConstraintSet:
    """All region constraints for one network, plus implicit d >= 0."""

    net: CellNetwork
    constraints: tuple[LinearConstraint, ...]

    def __len__(self) -> int:
        return len(self.constraints)

    @property
    def is_empty(self) -> bool:
        """True when the region has no nonnegative point (negative bound)."""
        return any(c.bound < 0 for c in self.constraints)


def build_constraints(net: CellNetwork) -> ConstraintSet:
    """Instantiate every in-cell and cycle constraint for the network.

    Row order is deterministic: single-cell constraints by (cell, rank),
    then cycle constraints in cycle enumeration order with rank tuples in
    product order.  Count is sum_k L_k + sum_cycles prod_m L_(cell at m).
    """
    net.require_canonical()
    constraints: list[LinearConstraint] = []
    for k in range(1, net.cell_count + 1):
        for rank in range(1, net.user_counts[k - 1] + 1):
            support = frozenset(UserId(k, s) for s in range(1, rank + 1))
            bound = net.strength(UserId(k, rank), k)
            constraints.append(LinearConstraint(support, bound, SingleCell(k, rank)))
    for cycle in enumerate_cycles(net.cell_count):
        for ranks in rank_tuples(net, cycle):
            support: set[UserId] = set()
            bound = Fraction(0)
            for m in range(1, cycle.length + 1):
                cell = cycle.at(m)
                pred = cycle.at(m - 1)
                rank = ranks[m - 1]
                user = UserId(cell, rank)
                bound += net.strength(user, cell) - net.strength(user, pred)
                support.update(UserId(cell, s) for s in range(1, rank + 1))
            constraints.append(
                LinearConstraint(frozenset(support), bound, CycleBound(cycle, ranks))
            )
    return ConstraintSet(net, tuple(constraints))


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    violated: tuple[LinearConstraint, ...]


def is_member(cs: ConstraintSet, point: GdofPoint) -> MembershipReport:
    """Exact membership check; lists every violated constraint.

    Nonnegativity is structural: GdofPoint refuses negative coordinates.
    """
    if not point.matches(cs.net):
        raise ValueError("point indexed by different users than the constraint set")
    violated = tuple(c for c in cs.constraints if not c.satisfied_by(point))
    return MembershipReport(not violated, violated)


def max_weighted(
    cs: ConstraintSet, weights: Mapping[UserId, Fraction]
) -> tuple[Fraction, GdofPoint]:
    """Exact maximum of sum(w * d) over the region, with an attaining point.

    Weights must be nonnegative and not all zero.  Raises EmptyRegionError
    when the region has no feasible point at all.
    """
    users = cs.net.users()
    if set(weights) != set(users):
        raise ValueError("weights indexed by different users than the constraint set")
    w = [weights[u] for u in users]
    if any(v < 0 for v in w):
        raise ValueError("negative weight")
    if all(v == 0 for v in w):
        raise ValueError("weights must not all be zero")
    if cs.is_empty:
        raise EmptyRegionError("region is empty: some constraint bound is negative")
    index = {u: i for i, u in enumerate(users)}
    rows = []
    for c in cs.constraints:
        row = [Fraction(0)] * len(users)
        for u in c.support:
            row[index[u]] = Fraction(1)
        rows.append(row)
    bounds = [c.bound for c in cs.constraints]
    optimum, solution = simplex_max(w, rows, bounds)
    return optimum, GdofPoint(dict(zip(users, solution)))


def sum_gdof(net: CellNetwork) -> Fraction:
    """Maximum total GDoF over the region (all-ones weights)."""
    cs = build_constraints(net)
    weights = {u: Fraction(1) for u in net.users()}
    optimum, _ = max_weighted(cs, weights)
    return optimum


def to_csv(cs: ConstraintSet) -> str:
    """Render the constraint set as CSV.

    Columns: provenance, one 0/1 coefficient per user in canonical order,
    bound as "p/q".  Header names the user columns.
    """
    users = cs.net.users()
    header = ["provenance"] + [f"d_{u.cell}_{u.rank}" for u in users] + ["bound"]
    lines = [",".join(header)]
    for c in cs.constraints:
        cells = [c.label]
        cells += ["1" if u in c.support else "0" for u in users]
        cells.append(rational_str(c.bound))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
