"""Regime classification and converse-step arithmetic.

Two nested strength-exponent regimes are decided here.  In the convex-TIN
regime (tag prefix CTIN) the TIN-achievable GDoF region is already a convex
polyhedron and coincides with the cycle-bound polytope; the smaller TIN
regime (tag prefix TIN) is where treating interference as noise is GDoF
optimal outright.  Both are finite conjunctions of non-strict linear
inequalities over strength exponents, so verdicts are exact.

`verify_converse_steps` instantiates the per-cycle inequality chains that
the outer-bound argument reduces to, so the CTIN conditions can be checked
to actually carry each proof step on a concrete network.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .cycles import Cycle
from .network import CellNetwork, UserId

CTIN_INTRA = "CTIN-intra"
CTIN_CROSS = "CTIN-cross"
TIN_INTRA = "TIN-intra"
TIN_CROSS = "TIN-cross"


@dataclass(frozen=True)
class Violation:
    """One failed regime inequality with the indices that instantiate it.

    Index fields not used by a condition are None.  `variant` separates the
    two branches of the intra-cell TIN disjunction (0 when the condition
    has a single form).
    """

    tag: str
    i: int
    j: int
    k: Optional[int]
    l_i: Optional[int]
    l_i_prime: Optional[int]
    l_k: Optional[int]
    lhs: Fraction
    rhs: Fraction
    variant: int = 0

    def __post_init__(self) -> None:
        if self.lhs >= self.rhs:
            raise ValueError(
                f"not a violation: {self.lhs} >= {self.rhs} ({self.tag})"
            )


@dataclass(frozen=True)
class RegimeReport:
    regime: str
    violations: tuple[Violation, ...]

    @property
    def regime_holds(self) -> bool:
        return not self.violations


def _a(net: CellNetwork, cell: int, rank: int, tx: int) -> Fraction:
    return net.strength(UserId(cell, rank), tx)


def recompute_violation(net: CellNetwork, v: Violation) -> tuple[Fraction, Fraction]:
    """Re-evaluate the inequality a Violation records, from its indices."""
    if v.tag == CTIN_INTRA:
        lhs = _a(net, v.i, v.l_i, v.i)
        rhs = _a(net, v.i, v.l_i, v.j) + _a(net, v.i, v.l_i_prime, v.i) - _a(
            net, v.i, v.l_i_prime, v.j
        )
    elif v.tag == CTIN_CROSS:
        lhs = _a(net, v.i, 1, v.i)
        rhs = _a(net, v.i, 1, v.j) + _a(net, v.k, v.l_k, v.i)
        if v.k != v.j:
            rhs -= _a(net, v.k, v.l_k, v.j)
    elif v.tag == TIN_INTRA:
        lhs = _a(net, v.i, v.l_i, v.i)
        if v.variant == 1:
            rhs = _a(net, v.i, v.l_i, v.j) + _a(net, v.i, v.l_i_prime, v.i)
        else:
            rhs = (
                2 * _a(net, v.i, v.l_i, v.j)
                + _a(net, v.i, v.l_i_prime, v.i)
                - _a(net, v.i, v.l_i_prime, v.j)
            )
    elif v.tag == TIN_CROSS:
        lhs = _a(net, v.i, 1, v.i)
        rhs = _a(net, v.i, 1, v.j) + _a(net, v.k, v.l_k, v.i)
    else:
        raise ValueError(f"unknown condition tag {v.tag!r}")
    return lhs, rhs


def _cross_triples(K: int) -> Iterator[tuple[int, int, int]]:
    # j = k allowed; only i must differ from both.
    for i in range(1, K + 1):
        for j in range(1, K + 1):
            if j == i:
                continue
            for k in range(1, K + 1):
                if k == i:
                    continue
                yield i, j, k


def is_ctin(net: CellNetwork) -> RegimeReport:
    """Decide convex-TIN regime membership; exhaustive violation list."""
    net.require_canonical()
    K = net.cell_count
    violations: list[Violation] = []
    for i in range(1, K + 1):
        for j in range(1, K + 1):
            if j == i:
                continue
            for l_i in range(2, net.user_counts[i - 1] + 1):
                for l_p in range(1, l_i):
                    lhs = _a(net, i, l_i, i)
                    rhs = _a(net, i, l_i, j) + _a(net, i, l_p, i) - _a(net, i, l_p, j)
                    if lhs < rhs:
                        violations.append(
                            Violation(CTIN_INTRA, i, j, None, l_i, l_p, None, lhs, rhs)
                        )
    for i, j, k in _cross_triples(K):
        for l_k in range(1, net.user_counts[k - 1] + 1):
            lhs = _a(net, i, 1, i)
            rhs = _a(net, i, 1, j) + _a(net, k, l_k, i)
            if k != j:
                rhs -= _a(net, k, l_k, j)
            if lhs < rhs:
                violations.append(
                    Violation(CTIN_CROSS, i, j, k, None, None, l_k, lhs, rhs)
                )
    return RegimeReport("mc-CTIN", tuple(violations))


def is_tin(net: CellNetwork) -> RegimeReport:
    """Decide TIN regime membership.

    The intra-cell condition is a disjunction per index tuple; when both
    branches fail, both appear in the violation list.
    """
    net.require_canonical()
    K = net.cell_count
    violations: list[Violation] = []
    for i in range(1, K + 1):
        for j in range(1, K + 1):
            if j == i:
                continue
            for l_i in range(2, net.user_counts[i - 1] + 1):
                for l_p in range(1, l_i):
                    lhs = _a(net, i, l_i, i)
                    rhs1 = _a(net, i, l_i, j) + _a(net, i, l_p, i)
                    rhs2 = (
                        2 * _a(net, i, l_i, j)
                        + _a(net, i, l_p, i)
                        - _a(net, i, l_p, j)
                    )
                    if lhs < rhs1 and lhs < rhs2:
                        violations.append(
                            Violation(TIN_INTRA, i, j, None, l_i, l_p, None, lhs, rhs1, 1)
                        )
                        violations.append(
                            Violation(TIN_INTRA, i, j, None, l_i, l_p, None, lhs, rhs2, 2)
                        )
    for i, j, k in _cross_triples(K):
        for l_k in range(1, net.user_counts[k - 1] + 1):
            lhs = _a(net, i, 1, i)
            rhs = _a(net, i, 1, j) + _a(net, k, l_k, i)
            if lhs < rhs:
                violations.append(
                    Violation(TIN_CROSS, i, j, k, None, None, l_k, lhs, rhs)
                )
    return RegimeReport("mc-TIN", tuple(violations))


@dataclass(frozen=True)
class ConverseCheck:
    """One instantiated proof-step inequality: passes when lhs >= rhs."""

    family: str
    m: int
    j: Optional[int]
    s: Optional[int]
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs >= self.rhs


@dataclass(frozen=True)
class ConverseReport:
    cycle: Cycle
    ranks: tuple[int, ...]
    checks: tuple[ConverseCheck, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[ConverseCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def verify_converse_steps(
    net: CellNetwork, cycle: Cycle, ranks: tuple[int, ...]
) -> ConverseReport:
    """Instantiate every inequality the cycle-bound derivations lean on.

    `ranks[m-1]` picks the participating-user rank for the cell at cycle
    position m.  Families:

    - intra-gap: within each participating cell, the direct-strength gap
      between consecutive ranks dominates the gap seen at any other
      participating base station.
    - downlink-cycle-gap / downlink-cycle-level: the per-position slack of
      the downlink chain dominates the cross terms a genie comparison
      leaves behind (all other positions j, and the next cell's rank-1
      level respectively).
    - uplink-rank-gap / uplink-cycle-gap / uplink-cross-level: the chosen
      rank's direct-minus-predecessor gap dominates the rank-1 gap of the
      same cell, every other participating cell's per-rank gap, and every
      level the predecessor cell contributes.

    All six families are consequences of the CTIN conditions, so all_pass
    is guaranteed whenever is_ctin(net) holds; outside CTIN individual
    instances can fail and are reported with both sides.
    """
    net.require_canonical()
    M = cycle.length
    if len(ranks) != M:
        raise ValueError(f"{len(ranks)} ranks for a length-{M} cycle")
    for m in range(1, M + 1):
        cell = cycle.at(m)
        if not 1 <= ranks[m - 1] <= net.user_counts[cell - 1]:
            raise ValueError(
                f"rank {ranks[m - 1]} out of range for cell {cell} "
                f"(serves {net.user_counts[cell - 1]})"
            )

    def rank_at(m: int) -> int:
        return ranks[(m - 1) % M]

    checks: list[ConverseCheck] = []

    for m in range(1, M + 1):
        i = cycle.at(m)
        for s in range(2, rank_at(m) + 1):
            for pos_j in range(1, M + 1):
                j = cycle.at(pos_j)
                if j == i:
                    continue
                checks.append(
                    ConverseCheck(
                        "intra-gap",
                        m,
                        pos_j,
                        s,
                        _a(net, i, s, i) - _a(net, i, s - 1, i),
                        _a(net, i, s, j) - _a(net, i, s - 1, j),
                    )
                )

    for m in range(1, M + 1):
        cm, cn = cycle.at(m), cycle.at(m + 1)
        l_next = rank_at(m + 1)
        lhs = _a(net, cm, 1, cm) - _a(net, cn, l_next, cm)
        for pos_j in range(1, M + 1):
            if pos_j == (m % M) + 1:
                continue
            cj = cycle.at(pos_j)
            checks.append(
                ConverseCheck(
                    "downlink-cycle-gap",
                    m,
                    pos_j,
                    None,
                    lhs,
                    _a(net, cm, 1, cj) - _a(net, cn, l_next, cj),
                )
            )
        checks.append(
            ConverseCheck(
                "downlink-cycle-level", m, None, None, lhs, _a(net, cm, 1, cn)
            )
        )

    for m in range(1, M + 1):
        cm, cp = cycle.at(m), cycle.at(m - 1)
        l_m = rank_at(m)
        lhs = _a(net, cm, l_m, cm) - _a(net, cm, l_m, cp)
        checks.append(
            ConverseCheck(
                "uplink-rank-gap",
                m,
                None,
                None,
                lhs,
                _a(net, cm, 1, cm) - _a(net, cm, 1, cp),
            )
        )
        for pos_j in range(1, M + 1):
            if pos_j == ((m - 2) % M) + 1:
                continue
            cj = cycle.at(pos_j)
            for s in range(1, rank_at(pos_j) + 1):
                checks.append(
                    ConverseCheck(
                        "uplink-cycle-gap",
                        m,
                        pos_j,
                        s,
                        lhs,
                        _a(net, cj, s, cm) - _a(net, cj, s, cp),
                    )
                )
        for s in range(1, rank_at(m - 1) + 1):
            checks.append(
                ConverseCheck(
                    "uplink-cross-level", m, None, s, lhs, _a(net, cp, s, cm)
                )
            )

    return ConverseReport(cycle, tuple(ranks), tuple(checks))
