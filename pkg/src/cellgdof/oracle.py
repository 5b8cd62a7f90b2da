"""Achievability oracle for power-controlled TIN with natural decoding orders.

Independently of the polytope module, this computes the GDoF tuples that
single-cell superposition coding with explicit power exponents actually
attains, for the uplink (per-user exponents, base station decodes its own
users strongest-rank first) and the downlink (per-message exponents, each
user decodes messages up to its own rank in ascending order).  Sampling
these maps over an exponent grid yields point clouds that are compared
against the polytope: inclusion, support-function match, and
uplink-downlink agreement.  Those comparisons are the executable form of
the region-coincidence and duality claims.

Grid sampling is exact: all strengths and grid values are scaled by a
common denominator to integers and evaluated with vectorized integer
arithmetic; results never pass through floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .network import CellNetwork, GdofPoint, UserId, rational_str
from .polytope import ConstraintSet, LinearConstraint, max_weighted

IMAC = "IMAC"
IBC = "IBC"

GRID_EVAL_LIMIT = 10**7
DEFAULT_GRID_STEP = Fraction(1, 20)


class GridTooLargeError(ValueError):
    """Raised when a requested exponent grid exceeds the evaluation budget."""


def default_floor(net: CellNetwork) -> Fraction:
    """Deepest exponent worth sampling: one step past silencing every link."""
    return -(1 + net.max_strength)


def default_tolerance(grid_step: Fraction) -> Fraction:
    """Support-match slack covering per-coordinate grid quantization."""
    return 4 * grid_step


@dataclass(frozen=True)
class PowerAllocation:
    """Transmit power exponents, one per user slot, all <= 0.

    Uplink: the exponent of user (l,k) scales that user's transmit power.
    Downlink: the exponent of slot (l,k) scales the power BS-k spends on
    the message intended for its rank-l user; per-slot exponents <= 0
    bound the total cell power on the GDoF scale, so no sum constraint is
    imposed.
    """

    exponent: dict[UserId, Fraction]

    def __post_init__(self) -> None:
        for user, value in self.exponent.items():
            if value > 0:
                raise ValueError(f"positive exponent {value} for {user}")

    @classmethod
    def from_sequence(
        cls, net: CellNetwork, values: Iterable[Fraction]
    ) -> "PowerAllocation":
        vals = list(values)
        users = net.users()
        if len(vals) != len(users):
            raise ValueError(f"{len(vals)} exponents for {len(users)} users")
        return cls(dict(zip(users, vals)))

    @classmethod
    def full_power(cls, net: CellNetwork) -> "PowerAllocation":
        return cls({u: Fraction(0) for u in net.users()})

    def __getitem__(self, user: UserId) -> Fraction:
        return self.exponent[user]

    def validate_for(self, net: CellNetwork) -> None:
        if set(self.exponent) != set(net.users()):
            raise ValueError("allocation indexed by different users than the network")


def imac_gdof(net: CellNetwork, p: PowerAllocation) -> GdofPoint:
    """Uplink GDoF tuple under exponents `p`.

    BS-k decodes its own users in descending rank order, so rank l sees
    in-cell ranks below l plus every other-cell user as noise; each GDoF
    is the clipped gap between received signal level and the strongest
    noise level (never below the unit noise floor at level 0).
    """
    net.require_canonical()
    p.validate_for(net)
    d: dict[UserId, Fraction] = {}
    for k in range(1, net.cell_count + 1):
        for l in range(1, net.user_counts[k - 1] + 1):
            user = UserId(k, l)
            signal = net.strength(user, k) + p[user]
            noise = Fraction(0)
            for s in range(1, l):
                other = UserId(k, s)
                noise = max(noise, net.strength(other, k) + p[other])
            for j in range(1, net.cell_count + 1):
                if j == k:
                    continue
                for s in range(1, net.user_counts[j - 1] + 1):
                    other = UserId(j, s)
                    noise = max(noise, net.strength(other, k) + p[other])
            d[user] = max(Fraction(0), signal - noise)
    return GdofPoint(d)


def ibc_gdof(net: CellNetwork, p: PowerAllocation) -> GdofPoint:
    """Downlink GDoF tuple under per-message exponents `p`.

    Under the ascending order, the message for rank s must be decoded by
    every in-cell receiver of rank l >= s, each seeing in-cell messages
    above s plus all other-cell transmissions as noise; the message rate
    is set by the weakest such receiver.
    """
    net.require_canonical()
    p.validate_for(net)
    d: dict[UserId, Fraction] = {}
    for k in range(1, net.cell_count + 1):
        L_k = net.user_counts[k - 1]
        for s in range(1, L_k + 1):
            slot = UserId(k, s)
            rate: Optional[Fraction] = None
            for l in range(s, L_k + 1):
                rx = UserId(k, l)
                signal = net.strength(rx, k) + p[slot]
                noise = Fraction(0)
                for u in range(s + 1, L_k + 1):
                    noise = max(noise, net.strength(rx, k) + p[UserId(k, u)])
                for j in range(1, net.cell_count + 1):
                    if j == k:
                        continue
                    for u in range(1, net.user_counts[j - 1] + 1):
                        noise = max(noise, net.strength(rx, j) + p[UserId(j, u)])
                value = max(Fraction(0), signal - noise)
                rate = value if rate is None else min(rate, value)
            d[slot] = rate if rate is not None else Fraction(0)
    return GdofPoint(d)


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Deduplicated GDoF points from a grid sweep, stored as scaled integers.

    `matrix[r, c] / scale` is the GDoF of user `users[c]` at point r; rows
    are unique and lexicographically sorted, so identical sweeps produce
    identical clouds.
    """

    net: CellNetwork
    mode: str
    grid_step: Fraction
    floor: Fraction
    scale: int
    matrix: np.ndarray

    @property
    def count(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def users(self) -> tuple[UserId, ...]:
        return self.net.users()

    def points(self) -> Iterator[GdofPoint]:
        users = self.users
        for row in self.matrix:
            yield GdofPoint(
                {u: Fraction(int(v), self.scale) for u, v in zip(users, row)}
            )

    def point_at(self, row: int) -> GdofPoint:
        return GdofPoint(
            {
                u: Fraction(int(v), self.scale)
                for u, v in zip(self.users, self.matrix[row])
            }
        )

    def best_in_direction(
        self, weights: Mapping[UserId, Fraction]
    ) -> tuple[Fraction, GdofPoint]:
        """Exact maximum of sum(w * d) over the cloud, with the attaining point."""
        users = self.users
        if set(weights) != set(users):
            raise ValueError("weights indexed by different users than the cloud")
        w = [weights[u] for u in users]
        if any(v < 0 for v in w):
            raise ValueError("negative weight")
        if self.count == 0:
            raise ValueError("empty cloud has no maximum")
        wscale = lcm(*(v.denominator for v in w)) if w else 1
        w_int = [int(v * wscale) for v in w]
        bound = max(1, int(np.abs(self.matrix).max())) * max(
            1, max(abs(v) for v in w_int)
        ) * len(w)
        if bound < 2**62:
            dots = self.matrix @ np.asarray(w_int, dtype=np.int64)
        else:
            dots = self.matrix.astype(object) @ np.asarray(w_int, dtype=object)
        idx = int(np.argmax(dots))
        value = Fraction(int(dots[idx]), self.scale * wscale)
        return value, self.point_at(idx)

    def with_point(self, point: GdofPoint) -> "PointCloud":
        """Cloud with one extra row appended (used as a negative control)."""
        if set(point.values) != set(self.users):
            raise ValueError("point indexed by different users than the cloud")
        extra_scale = lcm(self.scale, *(v.denominator for v in point.values.values()))
        factor = extra_scale // self.scale
        if factor == 1:
            matrix = self.matrix
        elif self.matrix.dtype == object or (
            int(np.abs(self.matrix).max(initial=0)) * factor < 2**62
        ):
            matrix = self.matrix * factor
        else:
            matrix = self.matrix.astype(object) * factor
        row = np.asarray(
            [int(point[u] * extra_scale) for u in self.users], dtype=np.int64
        ).reshape(1, -1)
        stacked = np.vstack([matrix, row])
        if stacked.dtype == object:
            unique_rows = sorted({tuple(int(v) for v in r) for r in stacked.tolist()})
            stacked = np.empty((len(unique_rows), stacked.shape[1]), dtype=object)
            for i, values in enumerate(unique_rows):
                stacked[i, :] = values
        else:
            stacked = np.unique(stacked, axis=0)
        return PointCloud(
            self.net,
            self.mode,
            self.grid_step,
            self.floor,
            extra_scale,
            stacked,
        )


def _grid_values(floor: Fraction, step: Fraction) -> list[Fraction]:
    if step <= 0:
        raise ValueError(f"grid step must be positive, got {step}")
    if floor >= 0:
        raise ValueError(f"grid floor must be negative, got {floor}")
    values = []
    v = floor
    while v <= 0:
        values.append(v)
        v += step
    if values[-1] != 0:
        values.append(Fraction(0))
    return values


def _imac_matrix_int(
    net: CellNetwork, R: np.ndarray, A: list[list[int]], cells: list[int], ranks: list[int]
) -> np.ndarray:
    """Vectorized uplink map on scaled-integer exponent rows R."""
    n = R.shape[1]
    D = np.empty_like(R)
    for k in range(1, net.cell_count + 1):
        toward_k = np.asarray([A[c][k - 1] for c in range(n)], dtype=R.dtype)
        lvl = R + toward_k
        for c in range(n):
            if cells[c] != k:
                continue
            mask = [
                j
                for j in range(n)
                if cells[j] != k or (cells[j] == k and ranks[j] < ranks[c])
            ]
            if mask:
                noise = lvl[:, mask].max(axis=1)
                np.maximum(noise, 0, out=noise)
            else:
                noise = 0
            D[:, c] = np.maximum(lvl[:, c] - noise, 0)
    return D


def sample_region(
    net: CellNetwork,
    mode: str,
    grid_step: Fraction = DEFAULT_GRID_STEP,
    floor: Optional[Fraction] = None,
) -> PointCloud:
    """Evaluate the mode's GDoF map over the full exponent grid.

    The grid per user is {floor, floor+step, ..., 0} (0 is always
    included).  Grids above the evaluation budget are rejected rather
    than silently subsampled: coarsen the step or raise the floor.
    """
    net.require_canonical()
    if mode not in (IMAC, IBC):
        raise ValueError(f"mode must be {IMAC} or {IBC}, got {mode!r}")
    if floor is None:
        floor = default_floor(net)
    values = _grid_values(floor, grid_step)
    n = net.n_users
    g = len(values)
    total = g**n
    if total > GRID_EVAL_LIMIT:
        raise GridTooLargeError(
            f"{g}^{n} = {total} grid evaluations exceed the {GRID_EVAL_LIMIT} "
            f"budget; coarsen --step or raise --floor"
        )
    users = net.users()
    scale = lcm(
        *(net.strength(u, i).denominator for u in users for i in range(1, net.cell_count + 1)),
        *(v.denominator for v in values),
    )
    cells = [u.cell for u in users]
    ranks = [u.rank for u in users]
    A = [
        [int(net.strength(u, i) * scale) for i in range(1, net.cell_count + 1)]
        for u in users
    ]
    vals_int = [int(v * scale) for v in values]
    max_abs = max(
        max(abs(v) for v in vals_int),
        max((abs(a) for row in A for a in row), default=0),
    )
    if 4 * max_abs * max(n, 1) >= 2**62:
        return _sample_region_fractions(net, mode, grid_step, floor, values, scale)

    vals_arr = np.asarray(vals_int, dtype=np.int64)
    chunk = 1 << 17
    pending: list[np.ndarray] = []
    merged: Optional[np.ndarray] = None
    pow_g = [g ** (n - 1 - j) for j in range(n)]
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        ids = np.arange(start, stop, dtype=np.int64)
        R = np.empty((stop - start, n), dtype=np.int64)
        for j in range(n):
            R[:, j] = vals_arr[(ids // pow_g[j]) % g]
        if mode == IMAC:
            D = _imac_matrix_int(net, R, A, cells, ranks)
        else:
            D = _ibc_matrix_scaled(net, R, A, cells, ranks)
        pending.append(np.unique(D, axis=0))
        if sum(p.shape[0] for p in pending) > 2_000_000:
            stack = ([merged] if merged is not None else []) + pending
            merged = np.unique(np.vstack(stack), axis=0)
            pending = []
    stack = ([merged] if merged is not None else []) + pending
    matrix = (
        np.unique(np.vstack(stack), axis=0)
        if stack
        else np.empty((0, n), dtype=np.int64)
    )
    return PointCloud(net, mode, grid_step, floor, scale, matrix)


def _ibc_matrix_scaled(
    net: CellNetwork, R: np.ndarray, A: list[list[int]], cells: list[int], ranks: list[int]
) -> np.ndarray:
    n = R.shape[1]
    D = np.empty_like(R)
    col = {(cells[c], ranks[c]): c for c in range(n)}
    for k in range(1, net.cell_count + 1):
        L_k = net.user_counts[k - 1]
        # cand[s] accumulates the min over receivers l >= s
        cand: dict[int, np.ndarray] = {}
        for l in range(1, L_k + 1):
            rx_col = col[(k, l)]
            toward = np.asarray(
                [A[rx_col][cells[c] - 1] for c in range(n)], dtype=R.dtype
            )
            lvl = R + toward
            cross_cols = [c for c in range(n) if cells[c] != k]
            if cross_cols:
                cross = lvl[:, cross_cols].max(axis=1)
                np.maximum(cross, 0, out=cross)
            else:
                cross = np.zeros(R.shape[0], dtype=R.dtype)
            # suffix maxima over in-cell slots strictly above s
            suffix = cross
            for s in range(L_k, 0, -1):
                if s <= l:
                    value = np.maximum(lvl[:, col[(k, s)]] - suffix, 0)
                    if s in cand:
                        np.minimum(cand[s], value, out=cand[s])
                    else:
                        cand[s] = value
                suffix = np.maximum(suffix, lvl[:, col[(k, s)]])
        for s in range(1, L_k + 1):
            D[:, col[(k, s)]] = cand[s]
    return D


def _sample_region_fractions(
    net: CellNetwork,
    mode: str,
    grid_step: Fraction,
    floor: Fraction,
    values: list[Fraction],
    scale: int,
) -> PointCloud:
    """Exact fallback when scaled integers would not fit machine words."""
    users = net.users()
    fn = imac_gdof if mode == IMAC else ibc_gdof
    seen: set[tuple[int, ...]] = set()
    for combo in product(values, repeat=len(users)):
        p = PowerAllocation(dict(zip(users, combo)))
        d = fn(net, p)
        seen.add(tuple(int(d[u] * scale) for u in users))
    matrix = np.asarray(sorted(seen), dtype=object).reshape(len(seen), len(users))
    return PointCloud(net, mode, grid_step, floor, scale, matrix)


@dataclass(frozen=True)
class InclusionReport:
    """Worst constraint excess over a cloud; ok means every point is a member."""

    points_checked: int
    ok: bool
    worst_excess: Optional[Fraction]
    point: Optional[GdofPoint]
    constraint: Optional[LinearConstraint]


def check_inclusion(cloud: PointCloud, cs: ConstraintSet) -> InclusionReport:
    """Exact membership of every cloud point in the region."""
    if cloud.net != cs.net:
        raise ValueError("cloud and constraint set come from different networks")
    if cloud.count == 0:
        return InclusionReport(0, True, None, None, None)
    users = cloud.users
    index = {u: i for i, u in enumerate(users)}
    worst: Optional[Fraction] = None
    worst_row = -1
    worst_constraint: Optional[LinearConstraint] = None
    for c in cs.constraints:
        cols = [index[u] for u in c.support]
        sums = cloud.matrix[:, cols].sum(axis=1)
        row = int(np.argmax(sums))
        excess = Fraction(int(sums[row]), cloud.scale) - c.bound
        if worst is None or excess > worst:
            worst = excess
            worst_row = row
            worst_constraint = c
    assert worst is not None
    if worst <= 0:
        return InclusionReport(cloud.count, True, None, None, None)
    return InclusionReport(
        cloud.count, False, worst, cloud.point_at(worst_row), worst_constraint
    )


@dataclass(frozen=True)
class SupportRecord:
    weights: dict[UserId, Fraction]
    region_max: Fraction
    cloud_max: Fraction
    gap: Fraction


@dataclass(frozen=True)
class SupportReport:
    tolerance: Fraction
    records: tuple[SupportRecord, ...]

    @property
    def ok(self) -> bool:
        return all(r.gap <= self.tolerance for r in self.records)

    def failures(self) -> tuple[SupportRecord, ...]:
        return tuple(r for r in self.records if r.gap > self.tolerance)


def check_support_match(
    cloud: PointCloud,
    cs: ConstraintSet,
    directions: Sequence[Mapping[UserId, Fraction]],
    tolerance: Fraction,
) -> SupportReport:
    """Compare region and cloud support functions along each direction.

    The cloud sits inside the region (inclusion direction), so each gap
    is nonnegative up to grid effects; a gap above the tolerance means
    the cloud fails to reach some face the region promises.
    """
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    records = []
    for w in directions:
        region_max, _ = max_weighted(cs, w)
        cloud_max, _ = cloud.best_in_direction(w)
        records.append(
            SupportRecord(dict(w), region_max, cloud_max, region_max - cloud_max)
        )
    return SupportReport(tolerance, tuple(records))


@dataclass(frozen=True)
class DualityRecord:
    weights: dict[UserId, Fraction]
    uplink_max: Fraction
    downlink_max: Fraction

    @property
    def gap(self) -> Fraction:
        return abs(self.uplink_max - self.downlink_max)


@dataclass(frozen=True)
class DualityReport:
    tolerance: Fraction
    records: tuple[DualityRecord, ...]

    @property
    def ok(self) -> bool:
        return all(r.gap <= self.tolerance for r in self.records)

    def failures(self) -> tuple[DualityRecord, ...]:
        return tuple(r for r in self.records if r.gap > self.tolerance)


def check_duality(
    net: CellNetwork,
    grid_step: Fraction = DEFAULT_GRID_STEP,
    floor: Optional[Fraction] = None,
    directions: Optional[Sequence[Mapping[UserId, Fraction]]] = None,
    tolerance: Optional[Fraction] = None,
) -> DualityReport:
    """Compare uplink and downlink cloud support maxima per direction.

    The two achievable regions are claimed to coincide; on a grid the
    comparison holds up to quantization on both sides, hence the doubled
    default tolerance.
    """
    if tolerance is None:
        tolerance = 2 * default_tolerance(grid_step)
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    if directions is None:
        directions = default_directions(net)
    up = sample_region(net, IMAC, grid_step, floor)
    down = sample_region(net, IBC, grid_step, floor)
    records = []
    for w in directions:
        u_max, _ = up.best_in_direction(w)
        d_max, _ = down.best_in_direction(w)
        records.append(DualityRecord(dict(w), u_max, d_max))
    return DualityReport(tolerance, tuple(records))


def default_directions(
    net: CellNetwork, extra: int = 0, seed: int = 0
) -> list[dict[UserId, Fraction]]:
    """Deterministic direction set: unit vectors, all-ones, `extra` seeded draws."""
    import random

    users = net.users()
    directions = []
    for u in users:
        directions.append(
            {v: Fraction(1) if v == u else Fraction(0) for v in users}
        )
    directions.append({v: Fraction(1) for v in users})
    rng = random.Random(seed)
    while len(directions) < len(users) + 1 + extra:
        w = {v: Fraction(rng.randint(0, 40), 20) for v in users}
        if any(x > 0 for x in w.values()):
            directions.append(w)
    return directions


def cloud_to_csv(cloud: PointCloud) -> str:
    """CSV export: "#"-prefixed metadata, then one "p/q" row per point."""
    users = cloud.users
    lines = [
        f"# mode: {cloud.mode}",
        f"# grid_step: {rational_str(cloud.grid_step)}",
        f"# floor: {rational_str(cloud.floor)}",
        f"# points: {cloud.count}",
        ",".join(f"d_{u.cell}_{u.rank}" for u in users),
    ]
    for row in cloud.matrix:
        lines.append(
            ",".join(rational_str(Fraction(int(v), cloud.scale)) for v in row)
        )
    return "\n".join(lines) + "\n"
