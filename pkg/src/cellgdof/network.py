"""Data model for multi-cell interference networks.

A network is a set of K cells, cell k serving L_k users, together with the
channel strength exponent between every user and every base station.  All
strengths are exact rationals (`fractions.Fraction`): regime boundaries and
polytope face coincidences sit on knife edges (non-strict inequalities), so
floating point is never used in any region or regime computation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping


class NetworkFormatError(ValueError):
    """Raised when a network document or construction argument is invalid."""


class NotCanonicalError(ValueError):
    """Raised when an operation requires users sorted by direct strength."""


RationalLike = Fraction | int | str


def as_rational(value: RationalLike) -> Fraction:
    """Convert a value to an exact Fraction.

    Accepts Fractions, ints, and strings of the form "p/q" or a finite
    decimal ("0.35" becomes exactly 7/20).  Floats are rejected: they have
    already lost exactness at the call site.
    """
    if isinstance(value, float):
        raise NetworkFormatError(
            f"float {value!r} rejected: pass rationals as strings or Fractions"
        )
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise NetworkFormatError(f"not a rational: {value!r}") from exc


def rational_str(value: Fraction) -> str:
    """Render a Fraction as "p/q" (denominator always present)."""
    return f"{value.numerator}/{value.denominator}"


def decimal_str(value: Fraction, max_digits: int = 12) -> str:
    """Render a Fraction as an exact decimal when one terminates within
    `max_digits` digits, otherwise as "p/q"."""
    den = value.denominator
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    digits = max(twos, fives)
    if den != 1 or digits > max_digits:
        return rational_str(value)
    if digits == 0:
        return str(value.numerator)
    scaled = value.numerator * 10**digits // value.denominator
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


@dataclass(frozen=True, order=True)
class UserId:
    """User (rank `rank` in cell `cell`); both indices are 1-based."""

    cell: int
    rank: int

    def __str__(self) -> str:
        return f"({self.rank},{self.cell})"


@dataclass(frozen=True)
class CellNetwork:
    """K-cell network with per-user channel strength exponents.

    `alpha[k-1][l-1][i-1]` is the strength exponent between the rank-l user
    of cell k and the base station of cell i.  Values are immutable after
    construction; all operations on networks are pure.
    """

    user_counts: tuple[int, ...]
    alpha: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self) -> None:
        K = len(self.user_counts)
        if K < 1:
            raise NetworkFormatError("network needs at least one cell")
        for k, count in enumerate(self.user_counts, start=1):
            if not isinstance(count, int) or count < 1:
                raise NetworkFormatError(f"cell {k} must serve at least one user")
        if len(self.alpha) != K:
            raise NetworkFormatError(
                f"strength table has {len(self.alpha)} cells, expected {K}"
            )
        for k, block in enumerate(self.alpha, start=1):
            if len(block) != self.user_counts[k - 1]:
                raise NetworkFormatError(
                    f"cell {k}: {len(block)} strength rows for "
                    f"{self.user_counts[k - 1]} users"
                )
            for l, row in enumerate(block, start=1):
                if len(row) != K:
                    raise NetworkFormatError(
                        f"user ({l},{k}): {len(row)} strengths, expected {K}"
                    )
                for i, value in enumerate(row, start=1):
                    if not isinstance(value, Fraction):
                        raise NetworkFormatError(
                            f"strength for user ({l},{k}) from cell {i} "
                            f"is not a Fraction: {value!r}"
                        )
                    if value < 0:
                        raise NetworkFormatError(
                            f"negative strength {value} for user ({l},{k}) "
                            f"from cell {i}"
                        )

    @classmethod
    def build(
        cls,
        user_counts: Iterable[int],
        strength: Callable[[int, int, int], RationalLike],
    ) -> "CellNetwork":
        """Construct from a callable (cell k, rank l, tx cell i) -> rational."""
        counts = tuple(user_counts)
        K = len(counts)
        alpha = tuple(
            tuple(
                tuple(as_rational(strength(k, l, i)) for i in range(1, K + 1))
                for l in range(1, counts[k - 1] + 1)
            )
            for k in range(1, K + 1)
        )
        return cls(counts, alpha)

    @property
    def cell_count(self) -> int:
        return len(self.user_counts)

    @property
    def n_users(self) -> int:
        return sum(self.user_counts)

    def users(self) -> tuple[UserId, ...]:
        """All users in canonical order (by cell, then rank)."""
        return tuple(
            UserId(k, l)
            for k in range(1, self.cell_count + 1)
            for l in range(1, self.user_counts[k - 1] + 1)
        )

    def strength(self, user: UserId, tx_cell: int) -> Fraction:
        """Strength exponent between `user` and the base station of `tx_cell`."""
        if not 1 <= user.cell <= self.cell_count:
            raise NetworkFormatError(f"no cell {user.cell}")
        if not 1 <= user.rank <= self.user_counts[user.cell - 1]:
            raise NetworkFormatError(f"no user {user}")
        if not 1 <= tx_cell <= self.cell_count:
            raise NetworkFormatError(f"no cell {tx_cell}")
        return self.alpha[user.cell - 1][user.rank - 1][tx_cell - 1]

    def direct(self, user: UserId) -> Fraction:
        return self.strength(user, user.cell)

    @property
    def max_strength(self) -> Fraction:
        return max(v for block in self.alpha for row in block for v in row)

    @property
    def is_canonical(self) -> bool:
        """True when each cell's direct strengths are nondecreasing in rank."""
        for k in range(1, self.cell_count + 1):
            directs = [self.alpha[k - 1][l][k - 1] for l in range(self.user_counts[k - 1])]
            if any(a > b for a, b in zip(directs, directs[1:])):
                return False
        return True

    def require_canonical(self) -> None:
        if not self.is_canonical:
            raise NotCanonicalError(
                "network not canonicalized: direct strengths must be "
                "nondecreasing in rank within each cell (use canonicalize)"
            )


def canonicalize(net: CellNetwork) -> tuple[CellNetwork, tuple[tuple[int, ...], ...]]:
    """Reorder users within each cell so direct strengths are nondecreasing.

    The sort is stable (ties keep input order).  Returns the reordered
    network and, per cell, the tuple of original ranks in their new order,
    so results can be mapped back to the input numbering.  A user's cross
    strengths move together with the user.
    """
    new_alpha: list[tuple[tuple[Fraction, ...], ...]] = []
    perms: list[tuple[int, ...]] = []
    for k in range(1, net.cell_count + 1):
        block = net.alpha[k - 1]
        order = sorted(range(len(block)), key=lambda l: block[l][k - 1])
        new_alpha.append(tuple(block[l] for l in order))
        perms.append(tuple(l + 1 for l in order))
    canon = CellNetwork(net.user_counts, tuple(new_alpha))
    return canon, tuple(perms)


def symmetric_two_cell(alpha: RationalLike, beta: RationalLike) -> CellNetwork:
    """Two-cell network with two users per cell and direct strengths 1.

    The rank-1 user of each cell hears the other base station at `alpha`
    and the rank-2 user at `beta`, with 0 <= beta <= alpha <= 1.
    """
    a = as_rational(alpha)
    b = as_rational(beta)
    if not (0 <= b <= a <= 1):
        raise NetworkFormatError(
            f"symmetric family requires 0 <= beta <= alpha <= 1, got "
            f"alpha={a}, beta={b}"
        )
    cross = {1: a, 2: b}

    def strength(k: int, l: int, i: int) -> Fraction:
        return Fraction(1) if i == k else cross[l]

    return CellNetwork.build((2, 2), strength)


@dataclass
class GdofPoint:
    """A candidate GDoF tuple, one nonnegative rational per user."""

    values: dict[UserId, Fraction]

    def __post_init__(self) -> None:
        for user, value in self.values.items():
            if value < 0:
                raise NetworkFormatError(f"negative GDoF {value} for user {user}")

    @classmethod
    def from_sequence(
        cls, net: CellNetwork, values: Iterable[RationalLike]
    ) -> "GdofPoint":
        """Build from values listed in canonical user order."""
        vals = [as_rational(v) for v in values]
        users = net.users()
        if len(vals) != len(users):
            raise NetworkFormatError(
                f"{len(vals)} values for {len(users)} users"
            )
        return cls(dict(zip(users, vals)))

    @classmethod
    def zero(cls, net: CellNetwork) -> "GdofPoint":
        return cls({user: Fraction(0) for user in net.users()})

    def __getitem__(self, user: UserId) -> Fraction:
        return self.values[user]

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def matches(self, net: CellNetwork) -> bool:
        return set(self.values) == set(net.users())


def parse_network(text: str) -> CellNetwork:
    """Parse a network JSON document.

    Schema: object with `cells` (K), `users` (K positive integers) and
    `alpha` (nested array [receiver cell][rank][transmitter cell] of
    rationals, written as "p/q" strings, finite decimals, or integers).
    Decimal literals convert exactly; nothing is rounded.
    """
    try:
        doc = json.loads(text, parse_float=Fraction, parse_int=int)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"malformed network document: {exc}") from exc
    if not isinstance(doc, dict):
        raise NetworkFormatError("network document must be a JSON object")
    for field in ("cells", "users", "alpha"):
        if field not in doc:
            raise NetworkFormatError(f"missing field {field!r}")
    cells = doc["cells"]
    users = doc["users"]
    if not isinstance(cells, int) or cells < 1:
        raise NetworkFormatError("`cells` must be a positive integer")
    if not isinstance(users, list) or len(users) != cells:
        raise NetworkFormatError("`users` must list one user count per cell")
    raw = doc["alpha"]
    if not isinstance(raw, list) or len(raw) != cells:
        raise NetworkFormatError("`alpha` must have one entry per cell")
    alpha: list[tuple[tuple[Fraction, ...], ...]] = []
    for k, block in enumerate(raw, start=1):
        count = users[k - 1]
        if not isinstance(count, int) or count < 1:
            raise NetworkFormatError(f"cell {k} must serve at least one user")
        if not isinstance(block, list) or len(block) != count:
            raise NetworkFormatError(
                f"alpha[{k - 1}] must list {count} rows (one per user)"
            )
        rows = []
        for l, row in enumerate(block, start=1):
            if not isinstance(row, list) or len(row) != cells:
                raise NetworkFormatError(
                    f"alpha[{k - 1}][{l - 1}] must list {cells} strengths"
                )
            rows.append(tuple(as_rational(v) for v in row))
        alpha.append(tuple(rows))
    return CellNetwork(tuple(users), tuple(alpha))


def serialize_network(net: CellNetwork) -> str:
    """Serialize to the network JSON schema with "p/q" strength strings."""
    doc = {
        "cells": net.cell_count,
        "users": list(net.user_counts),
        "alpha": [
            [[rational_str(v) for v in row] for row in block]
            for block in net.alpha
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
