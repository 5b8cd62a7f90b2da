"""Region construction, membership, and exact weighted maxima."""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cellgdof import (
    CellNetwork,
    EmptyRegionError,
    GdofPoint,
    NotCanonicalError,
    UserId,
    build_constraints,
    cycle_count,
    is_ctin,
    is_member,
    max_weighted,
    sum_gdof,
    symmetric_two_cell,
)
from cellgdof.polytope import to_csv
from netgen import ctin_network, random_network
from reference_lp import brute_force_max

SYMMETRIC_BOUNDS = {
    "single:cell=1,rank=1": Fraction(1),
    "single:cell=1,rank=2": Fraction(1),
    "single:cell=2,rank=1": Fraction(1),
    "single:cell=2,rank=2": Fraction(1),
    "cycle:1->2:ranks=1,1": Fraction(1),
    "cycle:1->2:ranks=1,2": Fraction(11, 10),
    "cycle:1->2:ranks=2,1": Fraction(11, 10),
    "cycle:1->2:ranks=2,2": Fraction(6, 5),
}


@pytest.fixture(scope="module")
def sym_cs():
    return build_constraints(symmetric_two_cell("1/2", "2/5"))


class TestBuildConstraints:
    def test_symmetric_bounds_and_labels(self, sym_cs):
        assert len(sym_cs) == 8
        assert {c.label: c.bound for c in sym_cs.constraints} == SYMMETRIC_BOUNDS
        assert [c.label for c in sym_cs.constraints] == list(SYMMETRIC_BOUNDS)

    def test_symmetric_supports(self, sym_cs):
        by_label = {c.label: c for c in sym_cs.constraints}
        u = {
            (rank, cell): UserId(cell=cell, rank=rank)
            for cell in (1, 2)
            for rank in (1, 2)
        }
        assert by_label["single:cell=1,rank=2"].support == frozenset(
            {u[1, 1], u[2, 1]}
        )
        assert by_label["cycle:1->2:ranks=1,2"].support == frozenset(
            {u[1, 1], u[1, 2], u[2, 2]}
        )
        assert by_label["cycle:1->2:ranks=2,2"].support == frozenset(u.values())

    def test_single_cell_network_has_prefix_rows(self):
        net = CellNetwork.build(
            (2,), lambda k, l, i: Fraction(1, 2) if l == 1 else Fraction(1)
        )
        cs = build_constraints(net)
        assert [c.label for c in cs.constraints] == [
            "single:cell=1,rank=1",
            "single:cell=1,rank=2",
        ]
        assert [c.bound for c in cs.constraints] == [Fraction(1, 2), Fraction(1)]

    def test_count_formula(self):
        rng = random.Random(31)
        for _ in range(30):
            net = random_network(rng)
            cs = build_constraints(net)
            singles = sum(net.user_counts)
            cycles = 0
            from cellgdof import enumerate_cycles, rank_tuples

            for cycle in enumerate_cycles(net.cell_count):
                cycles += len(list(rank_tuples(net, cycle)))
            assert len(cs) == singles + cycles

    def test_requires_canonical(self):
        bad = CellNetwork.build((2,), lambda k, l, i: Fraction(3 - l))
        with pytest.raises(NotCanonicalError):
            build_constraints(bad)

    def test_two_user_interference_channel_reduction(self):
        rng = random.Random(32)
        for _ in range(20):
            a11, a22 = rng.randint(1, 10), rng.randint(1, 10)
            a12, a21 = rng.randint(0, 10), rng.randint(0, 10)
            net = CellNetwork.build(
                (1, 1),
                lambda k, l, i: Fraction(
                    {(1, 1): a11, (2, 2): a22, (1, 2): a12, (2, 1): a21}[(k, i)], 10
                ),
            )
            cs = build_constraints(net)
            bounds = {c.label: c.bound for c in cs.constraints}
            assert bounds == {
                "single:cell=1,rank=1": Fraction(a11, 10),
                "single:cell=2,rank=1": Fraction(a22, 10),
                "cycle:1->2:ranks=1,1": Fraction(a11 - a12 + a22 - a21, 10),
            }

    def test_ctin_networks_have_nonnegative_bounds(self):
        rng = random.Random(33)
        for _ in range(60):
            net = ctin_network(rng)
            cs = build_constraints(net)
            assert not cs.is_empty
            assert all(c.bound >= 0 for c in cs.constraints)

    def test_emptiness_iff_negative_bound(self):
        rng = random.Random(34)
        seen_empty = 0
        for _ in range(80):
            net = random_network(rng)
            cs = build_constraints(net)
            assert cs.is_empty == any(c.bound < 0 for c in cs.constraints)
            seen_empty += cs.is_empty
        assert seen_empty > 5


class TestMembership:
    def test_origin_is_member(self, sym_cs):
        report = is_member(sym_cs, GdofPoint.zero(sym_cs.net))
        assert report.member and not report.violated

    def test_supported_corner_is_member_with_tight_cycle(self, sym_cs):
        point = GdofPoint.from_sequence(sym_cs.net, [0, "3/5", 0, "3/5"])
        assert is_member(sym_cs, point).member
        top = next(
            c for c in sym_cs.constraints if c.label == "cycle:1->2:ranks=2,2"
        )
        assert top.evaluate(point) == top.bound

    def test_uniform_half_point_violates_mixed_cycles(self, sym_cs):
        point = GdofPoint.from_sequence(sym_cs.net, ["1/2"] * 4)
        report = is_member(sym_cs, point)
        assert not report.member
        assert [c.label for c in report.violated] == [
            "cycle:1->2:ranks=1,2",
            "cycle:1->2:ranks=2,1",
            "cycle:1->2:ranks=2,2",
        ]

    def test_point_from_other_network_rejected(self, sym_cs):
        other = CellNetwork.build((1,), lambda k, l, i: Fraction(1))
        with pytest.raises(ValueError):
            is_member(sym_cs, GdofPoint.zero(other))

    def test_downward_closure(self, sym_cs):
        rng = random.Random(35)
        for _ in range(40):
            weights = {
                u: Fraction(rng.randint(0, 8), 4) for u in sym_cs.net.users()
            }
            if not any(weights.values()):
                continue
            _, argmax = max_weighted(sym_cs, weights)
            shrunk = GdofPoint(
                {
                    u: argmax[u] * Fraction(rng.randint(0, 6), 6)
                    for u in sym_cs.net.users()
                }
            )
            assert is_member(sym_cs, shrunk).member

    def test_empty_region_excludes_origin(self):
        net = CellNetwork.build(
            (1, 1), lambda k, l, i: Fraction(1, 4) if k == i else Fraction(2)
        )
        cs = build_constraints(net)
        assert cs.is_empty
        report = is_member(cs, GdofPoint.zero(net))
        assert not report.member
        assert [c.bound for c in report.violated] == [Fraction(-7, 2)]


class TestMaxWeighted:
    def test_all_ones(self, sym_cs):
        optimum, argmax = max_weighted(
            sym_cs, {u: Fraction(1) for u in sym_cs.net.users()}
        )
        assert optimum == Fraction(6, 5)
        assert argmax.total() == optimum
        assert is_member(sym_cs, argmax).member

    def test_single_user_indicator(self, sym_cs):
        weights = {u: Fraction(int(u == UserId(cell=1, rank=1))) for u in sym_cs.net.users()}
        optimum, argmax = max_weighted(sym_cs, weights)
        assert optimum == 1
        assert argmax[UserId(cell=1, rank=1)] == 1

    def test_one_cell_two_ranks(self):
        net = CellNetwork.build(
            (2,), lambda k, l, i: Fraction(1, 2) if l == 1 else Fraction(1)
        )
        cs = build_constraints(net)
        optimum, _ = max_weighted(cs, {u: Fraction(1) for u in net.users()})
        assert optimum == 1

    def test_weight_validation(self, sym_cs):
        users = sym_cs.net.users()
        with pytest.raises(ValueError):
            max_weighted(sym_cs, {u: Fraction(-1) for u in users})
        with pytest.raises(ValueError):
            max_weighted(sym_cs, {u: Fraction(0) for u in users})
        with pytest.raises(ValueError):
            max_weighted(sym_cs, {users[0]: Fraction(1)})

    def test_empty_region_raises(self):
        net = CellNetwork.build(
            (1, 1), lambda k, l, i: Fraction(1, 4) if k == i else Fraction(2)
        )
        cs = build_constraints(net)
        with pytest.raises(EmptyRegionError):
            max_weighted(cs, {u: Fraction(1) for u in net.users()})

    def test_matches_brute_force_on_small_networks(self):
        rng = random.Random(36)
        compared = 0
        while compared < 30:
            net = random_network(rng, max_cells=3, max_users=3)
            if net.n_users > 5:
                continue
            cs = build_constraints(net)
            weights = {
                u: Fraction(rng.randint(0, 6), 3) for u in net.users()
            }
            if not any(weights.values()):
                continue
            expected = brute_force_max(cs, weights)
            if expected is None:
                assert cs.is_empty
            else:
                optimum, argmax = max_weighted(cs, weights)
                assert optimum == expected[0]
                assert is_member(cs, argmax).member
            compared += 1

    @given(st.integers(0, 10**6))
    def test_argmax_attains_optimum(self, seed):
        rng = random.Random(seed)
        net = ctin_network(rng)
        cs = build_constraints(net)
        weights = {u: Fraction(rng.randint(0, 8), 4) for u in net.users()}
        if not any(weights.values()):
            weights = {u: Fraction(1) for u in net.users()}
        optimum, argmax = max_weighted(cs, weights)
        assert sum(weights[u] * argmax[u] for u in net.users()) == optimum
        assert is_member(cs, argmax).member


class TestSumGdof:
    def test_symmetric_values(self):
        assert sum_gdof(symmetric_two_cell("1/2", "2/5")) == Fraction(6, 5)
        assert sum_gdof(symmetric_two_cell("1/2", "1/2")) == 1

    def test_zero_cross_sums_top_directs(self):
        net = CellNetwork.build(
            (2, 1), lambda k, l, i: Fraction(l, 2) if k == i else Fraction(0)
        )
        assert sum_gdof(net) == Fraction(3, 2)

    def test_zero_direct_pins_prefix(self):
        net = CellNetwork.build(
            (2,), lambda k, l, i: Fraction(0) if l == 1 else Fraction(1)
        )
        cs = build_constraints(net)
        optimum, argmax = max_weighted(cs, {u: Fraction(1) for u in net.users()})
        assert optimum == 1
        assert argmax[UserId(cell=1, rank=1)] == 0


class TestCsvExport:
    def test_symmetric_golden(self, sym_cs):
        assert to_csv(sym_cs).splitlines() == [
            "provenance,d_1_1,d_1_2,d_2_1,d_2_2,bound",
            "single:cell=1,rank=1,1,0,0,0,1/1",
            "single:cell=1,rank=2,1,1,0,0,1/1",
            "single:cell=2,rank=1,0,0,1,0,1/1",
            "single:cell=2,rank=2,0,0,1,1,1/1",
            "cycle:1->2:ranks=1,1,1,0,1,0,1/1",
            "cycle:1->2:ranks=1,2,1,0,1,1,11/10",
            "cycle:1->2:ranks=2,1,1,1,1,0,11/10",
            "cycle:1->2:ranks=2,2,1,1,1,1,6/5",
        ]

    def test_header_tracks_user_count(self):
        net = CellNetwork.build((1, 2), lambda k, l, i: Fraction(1) if k == i else 0)
        header = to_csv(build_constraints(net)).splitlines()[0]
        assert header == "provenance,d_1_1,d_2_1,d_2_2,bound"
