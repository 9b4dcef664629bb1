import random
from fractions import Fraction

import pytest

import oracles
from ecta.core import (
    ClockMismatch,
    NotEquivalent,
    PreconditionViolated,
    Valuation,
    weak_successor_contains,
)
from ecta.edbm import Edbm, zone_from_constraints
from ecta.regions import (
    CLASSIC,
    REFINED,
    Region,
    decompose,
    equivalent,
    region_of,
    region_to_zone,
    weak_successor_witness,
)


class TestRegionOf:
    def test_classes(self, ab):
        v = Valuation.of(ab, {"h.a": 1, "h.b": "3/2", "p.a": 5})
        r = region_of(v, 2)
        assert r.classes == (("at", 1), ("in", 1), ("above",), ("bot",))
        assert r.variant == CLASSIC
        assert r.diagonals == ()

    def test_value_at_cmax_is_not_above(self, ab):
        v = Valuation.of(ab, {"h.a": 2})
        assert region_of(v, 2).classes[0] == ("at", 2)

    def test_boundary_distance_groups(self, ab):
        # h.a at 7/4 crosses 2 after 1/4; p.a at 7/4 crosses 1 after 3/4
        v = Valuation.of(ab, {"h.a": "7/4", "p.a": "7/4", "p.b": "3/4"})
        r = region_of(v, 2)
        assert r.fracs == ((0,), (2, 3))

    def test_refined_diagonals_only_for_high_pairs(self, ab):
        v = Valuation.of(ab, {"h.a": 1, "h.b": "1/2", "p.a": 5})
        r = region_of(v, 2, REFINED)
        pairs = {(i, j) for i, j, _ in r.diagonals}
        assert pairs == {(0, 2), (1, 2)}

    def test_refined_far_classes(self, ab):
        v = Valuation.of(ab, {"h.a": 9, "p.a": 9})
        r = region_of(v, 2, REFINED)
        # sv(h.a) - sv(p.a) = 9 + 9 = 18 > 4
        assert (0, 2, ("far", 1)) in r.diagonals
        w = Valuation.of(ab, {"h.a": 0, "h.b": 9})
        assert (0, 1, ("far", -1)) in region_of(w, 2, REFINED).diagonals

    def test_initial_final_flags(self, ab):
        assert region_of(Valuation.undefined(ab), 1).is_initial()
        assert region_of(Valuation.undefined(ab), 1).is_final()
        started = region_of(Valuation.of(ab, {"h.a": 0}), 1)
        assert not started.is_initial()
        assert started.is_final()
        pending = region_of(Valuation.of(ab, {"p.a": 0}), 1)
        assert pending.is_initial()
        assert not pending.is_final()

    def test_argument_validation(self, ab):
        v = Valuation.undefined(ab)
        with pytest.raises(ValueError):
            region_of(v, -1)
        with pytest.raises(ValueError):
            region_of(v, 1, "sharp")


class TestEquivalent:
    def test_matches_region_encoding(self, ab):
        rng = random.Random(11)
        for cmax in (1, 2):
            for variant in (CLASSIC, REFINED):
                for _ in range(150):
                    v = oracles.random_valuation(ab, rng, cmax)
                    w = oracles.random_valuation(ab, rng, cmax)
                    assert equivalent(v, w, cmax, variant) == (
                        region_of(v, cmax, variant)
                        == region_of(w, cmax, variant)
                    )

    def test_generated_mates_are_equivalent(self, ab):
        rng = random.Random(13)
        for cmax in (1, 2, 3):
            for _ in range(100):
                v = oracles.random_valuation(ab, rng, cmax)
                assert equivalent(v, oracles.region_mate(v, rng, cmax), cmax)

    def test_interval_disagreement(self, ab):
        v = Valuation.of(ab, {"h.a": "1/2"})
        w = Valuation.of(ab, {"h.a": "3/2"})
        assert not equivalent(v, w, 2)
        assert equivalent(v, w, 0)

    def test_bot_pattern_disagreement(self, ab):
        v = Valuation.of(ab, {"h.a": 1})
        w = Valuation.of(ab, {"h.a": 1, "h.b": 1})
        assert not equivalent(v, w, 1)

    def test_boundary_order_disagreement(self, ab):
        v = Valuation.of(ab, {"h.a": "1/4", "h.b": "1/2"})
        w = Valuation.of(ab, {"h.a": "1/2", "h.b": "1/4"})
        assert not equivalent(v, w, 1)
        # ties must be preserved as ties
        u = Valuation.of(ab, {"h.a": "1/4", "h.b": "1/4"})
        assert not equivalent(v, u, 1)

    def test_refined_separates_signed_distances(self, ab):
        # both have p.a above cmax, so the classic relation merges them,
        # but the signed difference h.a + p.a lands in different classes
        v = Valuation.of(ab, {"h.a": 0, "p.a": 5})
        w = Valuation.of(ab, {"h.a": 0, "p.a": 2})
        assert equivalent(v, w, 1, CLASSIC)
        assert not equivalent(v, w, 1, REFINED)

    def test_alphabet_mismatch(self, ab):
        from ecta.core import Alphabet

        other = Valuation.undefined(Alphabet(("a", "c")))
        with pytest.raises(ClockMismatch):
            equivalent(Valuation.undefined(ab), other, 1)


class TestRegionToZone:
    def test_zone_membership_is_region_membership(self, ab):
        rng = random.Random(17)
        for cmax in (1, 2):
            for variant in (CLASSIC, REFINED):
                for _ in range(80):
                    v = oracles.random_valuation(ab, rng, cmax)
                    zone = region_to_zone(region_of(v, cmax, variant))
                    assert zone.contains(v)
                    w = oracles.random_valuation(ab, rng, cmax)
                    assert zone.contains(w) == equivalent(
                        v, w, cmax, variant
                    )

    def test_zone_sample_round_trips(self, ab):
        rng = random.Random(19)
        for _ in range(80):
            v = oracles.random_valuation(ab, rng, 2)
            r = region_of(v, 2, REFINED)
            assert region_of(region_to_zone(r).sample(), 2, REFINED) == r


class TestDecompose:
    def test_partition_of_a_box(self, ab):
        rng = random.Random(23)
        from ecta.core import Clock

        zone = zone_from_constraints(
            ab,
            atoms=[
                (Clock.history("a"), "<=", 1),
                (Clock.prophecy("b"), "<=", 1),
            ],
            undefined=[Clock.history("b"), Clock.prophecy("a")],
        )
        regions = decompose(zone, 1)
        assert len(regions) == len(set(regions))
        for r in regions:
            # every capped clock of this box lies within cmax, so each
            # region meeting the box is wholly inside it
            assert zone.includes(region_to_zone(r))
        for _ in range(200):
            v = oracles.grid_points(ab, rng, 1)[0]
            if zone.contains(v):
                assert region_of(v, 1) in regions

    def test_random_zones_are_covered(self, ab):
        # zones with many unbounded clocks meet combinatorially many
        # regions, so keep at most one clock unbounded per draw
        rng = random.Random(29)
        for variant in (CLASSIC, REFINED):
            for _ in range(20):
                zone = self._bounded_zone(ab, rng)
                regions = decompose(zone, 1, variant)
                if zone.is_empty():
                    assert regions == ()
                    continue
                assert regions
                for r in regions:
                    assert not region_to_zone(r).intersect(zone).is_empty()
                for v in oracles.nudged_points(zone, rng, 8):
                    if zone.contains(v):
                        assert region_of(v, 1, variant) in regions

    @staticmethod
    def _bounded_zone(ab, rng):
        atoms = []
        undefined = []
        free_budget = 1
        for clock in ab.clocks:
            roll = rng.random()
            if roll < 0.3:
                undefined.append(clock)
            elif roll < 0.85 or free_budget == 0:
                lo = rng.randint(0, 1)
                op = rng.choice((">=", ">"))
                atoms.append((clock, op, lo))
                atoms.append((clock, "<=", lo + rng.randint(0, 1)))
            else:
                free_budget -= 1
                atoms.append((clock, ">", 0))
        return zone_from_constraints(ab, atoms=atoms, undefined=undefined)

    def test_needs_cmax_at_least_constants(self, ab):
        from ecta.core import Clock

        zone = zone_from_constraints(ab, atoms=[(Clock.history("a"), "=", 3)])
        regions = decompose(zone, 3)
        sampled = region_to_zone(regions[0]).sample()
        assert sampled.value(Clock.history("a")) == 3


class TestWeakSuccessorWitness:
    def test_identity_pair_small_delay(self, ab):
        v = Valuation.of(ab, {"h.a": 0, "p.b": "3/2"})
        t2, v2 = weak_successor_witness(v, v, "1/2", 1)
        assert equivalent(v.elapse(Fraction(1, 2)), v2, 1)
        assert weak_successor_contains(v, t2, v2, 1)

    def test_prophecy_above_cap_is_reseeded(self, ab):
        # the delay drags p.b from above cmax to 1/2; the witness must
        # do the same from a different starting point above cmax
        v1 = Valuation.of(ab, {"h.a": 0, "p.b": "5/2"})
        v2 = Valuation.of(ab, {"h.a": 0, "p.b": 9})
        t2, w = weak_successor_witness(v1, v2, 2, 1)
        assert equivalent(v1.elapse(2), w, 1)
        assert weak_successor_contains(v2, t2, w, 1)

    def test_zero_delay(self, ab):
        v1 = Valuation.of(ab, {"h.b": "1/3"})
        v2 = Valuation.of(ab, {"h.b": "1/5"})
        t2, w = weak_successor_witness(v1, v2, 0, 1)
        assert equivalent(v1, w, 1)
        assert weak_successor_contains(v2, t2, w, 1)

    def test_random_pairs(self, ab):
        rng = random.Random(31)
        for cmax in (1, 2):
            for _ in range(100):
                v1 = oracles.random_valuation(ab, rng, cmax)
                v2 = oracles.region_mate(v1, rng, cmax)
                caps = [
                    val
                    for x, val in zip(ab.clocks, v1.values)
                    if x.is_prophecy and val is not None
                ]
                top = min([Fraction(3)] + caps)
                t1 = top * Fraction(rng.randint(0, 8), 8)
                t2, w = weak_successor_witness(v1, v2, t1, cmax)
                assert equivalent(v1.elapse(t1), w, cmax)
                assert weak_successor_contains(v2, t2, w, cmax)

    def test_rejects_non_equivalent_pairs(self, ab):
        v1 = Valuation.of(ab, {"h.a": 0})
        v2 = Valuation.of(ab, {"h.a": "1/2"})
        with pytest.raises(NotEquivalent):
            weak_successor_witness(v1, v2, 1, 1)

    def test_rejects_undefined_elapse(self, ab):
        v = Valuation.of(ab, {"p.a": "1/2"})
        with pytest.raises(PreconditionViolated):
            weak_successor_witness(v, v, 1, 1)
