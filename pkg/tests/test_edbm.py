import random
from fractions import Fraction

import pytest

import oracles
from ecta.core import Clock, EmptyZone, UnknownClock, Valuation, parse_guard
from ecta.edbm import (
    ANY,
    BOT,
    INF,
    B_ANY,
    B_BOT,
    B_INF,
    B_ZERO,
    Edbm,
    bound_le,
    bound_min,
    guard_to_zones,
    subtract_all,
    zone_from_constraints,
)

H_A = Clock.history("a")
H_B = Clock.history("b")
P_A = Clock.prophecy("a")
P_B = Clock.prophecy("b")

# The running normalization example: matrix as entered, and its tightest
# equivalent form.  Clock order is h.a, h.b, p.a, p.b after the zero row.
EXAMPLE_INPUT = [
    ["<=0", "?", "?", "bot", "?"],
    ["?", "<=0", "<1", "?", "?"],
    ["?", "<0", "<=0", "?", "<=2"],
    ["bot", "?", "?", "?", "?"],
    ["<=0", "?", "?", "?", "<=0"],
]
EXAMPLE_TIGHT = [
    ["<=0", "<0", "<=0", "bot", "<=2"],
    ["<3", "<=0", "<1", "?", "<3"],
    ["<=2", "<0", "<=0", "?", "<=2"],
    ["bot", "?", "?", "?", "?"],
    ["<=0", "<0", "<=0", "?", "<=0"],
]


class TestBoundOrder:
    def test_any_is_top(self):
        for b in (B_BOT, B_ZERO, B_INF, (3, True)):
            assert bound_le(b, B_ANY)
            assert not bound_le(B_ANY, b)
        assert bound_le(B_ANY, B_ANY)

    def test_numeric_order(self):
        assert bound_le((1, True), (1, False))
        assert not bound_le((1, False), (1, True))
        assert bound_le((-2, False), (1, True))
        assert bound_le((3, False), B_INF)

    def test_bot_incomparable_with_numerics(self):
        assert bound_le(B_BOT, B_BOT)
        for b in (B_ZERO, B_INF, (-1, True)):
            assert not bound_le(B_BOT, b)
            assert not bound_le(b, B_BOT)

    def test_bound_min(self):
        assert bound_min((1, True), (1, False)) == (1, True)
        assert bound_min(B_ANY, (2, False)) == (2, False)
        assert bound_min(B_BOT, B_ANY) == B_BOT
        assert bound_min(B_BOT, (2, False)) is None


class TestTokens:
    def test_round_trip(self, ab):
        D = Edbm.from_tokens(ab, EXAMPLE_INPUT)
        assert D.to_tokens() == [list(r) for r in EXAMPLE_INPUT]

    def test_bad_token(self, ab):
        with pytest.raises(ValueError):
            Edbm.from_tokens(ab, [["<=x"] * 5] * 5)


class TestNormalize:
    def test_running_example_tightens_exactly(self, ab):
        got = Edbm.from_tokens(ab, EXAMPLE_INPUT).normalize()
        assert got.to_tokens() == EXAMPLE_TIGHT

    def test_idempotent_on_example(self, ab):
        once = Edbm.from_tokens(ab, EXAMPLE_INPUT).normalize()
        assert once.normalize().cells == once.cells

    def test_preserves_membership(self, ab):
        rng = random.Random(101)
        for _ in range(150):
            raw = oracles.random_zone(ab, rng)
            # re-enter the cells unnormalized through from_tokens
            D = Edbm.from_tokens(ab, raw.to_tokens())
            N = D.normalize()
            for v in oracles.grid_points(ab, rng, 8) + oracles.nudged_points(
                raw, rng, 8
            ):
                assert oracles.in_zone(D, v) == oracles.in_zone(N, v)

    def test_unsatisfiable_single_bound_is_empty(self, ab):
        # a history below -1 is impossible for real values
        D = Edbm.unconstrained(ab).with_cells([(1, 0, (-1, True))])
        assert D.is_empty()

    def test_negative_cycle_is_empty(self, ab):
        D = Edbm.unconstrained(ab).with_cells(
            [(1, 2, (0, False)), (2, 1, (-1, False))]
        )
        assert D.is_empty()

    def test_bot_with_numeric_partner_is_empty(self, ab):
        D = Edbm.unconstrained(ab).with_cells(
            [(1, 0, (BOT, False)), (0, 1, (0, False))]
        )
        assert D.is_empty()

    def test_bot_with_constrained_interior_is_empty(self, ab):
        D = Edbm.unconstrained(ab).with_cells(
            [(1, 0, (BOT, False)), (1, 2, (1, False))]
        )
        assert D.is_empty()

    def test_sign_bound_is_restored_over_looser_cells(self, ab):
        # v-hat of a prophecy clock never exceeds 0; a looser explicit
        # cell must not survive normalization, or closure misses the
        # pair constraints that keep the time operations exact
        D = Edbm.unconstrained(ab).with_cells(
            [(4, 0, (2, True)), (0, 4, (0, False))]
        )
        assert D.cells[4][0] == (0, False)

    def test_normal_form_shape(self, ab):
        rng = random.Random(202)
        for _ in range(200):
            Z = oracles.random_zone(ab, rng)
            if Z.is_empty():
                continue
            for i in range(1, 5):
                lower, upper = Z.cells[i][0], Z.cells[0][i]
                assert (lower[0] is BOT) == (upper[0] is BOT)
                assert (lower[0] is ANY) == (upper[0] is ANY)
                if lower[0] is BOT or lower[0] is ANY:
                    assert all(
                        Z.cells[i][j][0] is ANY and Z.cells[j][i][0] is ANY
                        for j in range(1, 5)
                        if j != i
                    )
                else:
                    assert Z.cells[i][i] == (0, False)


class TestContains:
    def test_bot_cell_requires_bot(self, ab):
        D = Edbm.unconstrained(ab).with_cells([(1, 0, B_BOT), (0, 1, B_BOT)])
        assert D.contains(Valuation.undefined(ab))
        assert not D.contains(Valuation.of(ab, {"h.a": 0}))

    def test_numeric_cell_requires_real(self, ab):
        D = zone_from_constraints(ab, atoms=[(H_A, "<", 2)])
        assert D.contains(Valuation.of(ab, {"h.a": 1}))
        assert not D.contains(Valuation.undefined(ab))

    def test_any_cells_allow_everything(self, ab):
        D = Edbm.unconstrained(ab)
        assert D.contains(Valuation.undefined(ab))
        assert D.contains(Valuation.of(ab, {"h.a": 7, "p.b": "1/3"}))

    def test_empty_contains_nothing(self, ab):
        assert not Edbm.empty(ab).contains(Valuation.undefined(ab))


class TestTimeOperations:
    def test_future_exact_when_every_clock_is_pinned(self, ab):
        rng = random.Random(303)
        for _ in range(150):
            Z = oracles.full_zone(ab, rng)
            F = Z.future()
            P = Z.past()
            for v in oracles.grid_points(ab, rng, 6) + oracles.nudged_points(
                Z, rng, 6
            ):
                assert F.contains(v) == oracles.in_future(Z, v)
                assert P.contains(v) == oracles.in_past(Z, v)

    def test_free_rows_only_widen(self, ab):
        # on zones with completely free clocks the rewrites may admit
        # extra valuations, but never lose one
        rng = random.Random(404)
        for _ in range(150):
            Z = oracles.random_zone(ab, rng)
            F = Z.future()
            P = Z.past()
            for v in oracles.grid_points(ab, rng, 5) + oracles.nudged_points(
                Z, rng, 5
            ):
                if oracles.in_future(Z, v):
                    assert F.contains(v)
                if oracles.in_past(Z, v):
                    assert P.contains(v)

    def test_future_is_idempotent(self, ab):
        rng = random.Random(505)
        for _ in range(60):
            Z = oracles.random_zone(ab, rng)
            assert Z.future().future().cells == Z.future().cells
            assert Z.past().past().cells == Z.past().cells

    def test_membership_shifts_along_elapse(self, ab):
        Z = zone_from_constraints(
            ab, atoms=[(H_A, "=", 1), (P_B, "=", 2)], undefined=[H_B, P_A]
        )
        v = Valuation.of(ab, {"h.a": 1, "p.b": 2})
        assert Z.future().contains(v.elapse(Fraction(3, 2)))
        assert Z.past().contains(Valuation.of(ab, {"h.a": 0, "p.b": 3}))
        assert not Z.past().contains(Valuation.of(ab, {"h.a": 0, "p.b": 2}))


class TestIntersect:
    def test_agrees_pointwise(self, ab):
        rng = random.Random(606)
        prev = oracles.random_zone(ab, rng)
        for _ in range(120):
            Z = oracles.random_zone(ab, rng)
            I = Z.intersect(prev)
            for v in oracles.nudged_points(Z, rng, 6) + oracles.nudged_points(
                prev, rng, 6
            ):
                assert I.contains(v) == (Z.contains(v) and prev.contains(v))
            prev = Z

    def test_bot_conflict_is_empty(self, ab):
        undef = zone_from_constraints(ab, undefined=[H_A])
        real = zone_from_constraints(ab, atoms=[(H_A, ">", 0)])
        assert undef.intersect(real).is_empty()

    def test_alphabet_mismatch(self, ab):
        from ecta.core import Alphabet

        other = Edbm.unconstrained(Alphabet(("a", "c")))
        with pytest.raises(UnknownClock):
            Edbm.unconstrained(ab).intersect(other)


class TestRelease:
    def test_agrees_with_definition(self, ab):
        rng = random.Random(707)
        for k in range(120):
            Z = oracles.random_zone(ab, rng)
            clock = ab.clocks[k % 4]
            R = Z.release(clock)
            for v in oracles.grid_points(ab, rng, 5) + oracles.nudged_points(
                Z, rng, 5
            ):
                assert R.contains(v) == oracles.in_release(Z, clock, v)

    def test_release_clears_row_and_column(self, ab):
        Z = zone_from_constraints(ab, atoms=[(H_A, "=", 1), (H_B, "=", 2)])
        R = Z.release(H_A)
        assert all(R.cells[1][j] == B_ANY for j in range(5))
        assert all(R.cells[j][1] == B_ANY for j in range(5))
        assert R.contains(Valuation.of(ab, {"h.b": 2}))
        assert R.contains(Valuation.of(ab, {"h.a": 9, "h.b": 2}))


class TestIncludes:
    def test_reflexive_and_extremes(self, ab):
        rng = random.Random(808)
        for _ in range(60):
            Z = oracles.random_zone(ab, rng)
            assert Z.includes(Z)
            assert Edbm.unconstrained(ab).includes(Z)
            assert Z.includes(Edbm.empty(ab))
            if not Z.is_empty():
                assert not Edbm.empty(ab).includes(Z)

    def test_intersection_is_included(self, ab):
        rng = random.Random(909)
        prev = oracles.random_zone(ab, rng)
        for _ in range(80):
            Z = oracles.random_zone(ab, rng)
            I = Z.intersect(prev)
            assert Z.includes(I)
            assert prev.includes(I)
            prev = Z

    def test_no_false_verdicts(self, ab):
        rng = random.Random(111)
        prev = oracles.random_zone(ab, rng)
        for _ in range(120):
            Z = oracles.random_zone(ab, rng)
            if Z.includes(prev):
                for v in oracles.nudged_points(prev, rng, 10):
                    if oracles.in_zone(prev, v):
                        assert oracles.in_zone(Z, v)
            else:
                pieces = prev.subtract(Z)
                assert pieces, "non-inclusion must have a witness region"
                w = pieces[0].sample()
                assert oracles.in_zone(prev, w)
                assert not oracles.in_zone(Z, w)
            prev = Z


class TestSubtract:
    def test_self_and_empty(self, ab):
        rng = random.Random(121)
        for _ in range(40):
            Z = oracles.random_zone(ab, rng)
            assert Z.subtract(Z) == []
            if not Z.is_empty():
                assert Z.subtract(Edbm.empty(ab)) == [Z]
            assert Edbm.empty(ab).subtract(Z) == []

    def test_disjoint_exact_cover(self, ab):
        rng = random.Random(131)
        prev = oracles.random_zone(ab, rng)
        for _ in range(120):
            Z = oracles.random_zone(ab, rng)
            pieces = Z.subtract(prev)
            pts = (
                oracles.grid_points(ab, rng, 5)
                + oracles.nudged_points(Z, rng, 6)
                + oracles.nudged_points(prev, rng, 4)
            )
            for v in pts:
                want = oracles.in_zone(Z, v) and not oracles.in_zone(prev, v)
                hits = sum(1 for p in pieces if oracles.in_zone(p, v))
                assert hits == (1 if want else 0)
            prev = Z

    def test_subtract_all(self, ab):
        Z = zone_from_constraints(ab, atoms=[(H_A, "<", 3)])
        parts = [
            zone_from_constraints(ab, atoms=[(H_A, "<", 1)]),
            zone_from_constraints(ab, atoms=[(H_A, ">", 1)]),
        ]
        rest = subtract_all(Z, parts)
        # what is left is h.a = 1 (with the matching realness demands)
        assert rest
        for piece in rest:
            assert piece.sample().value(H_A) == 1
        assert subtract_all(Z, [Z]) == []


class TestWithCells:
    def test_incomparable_update_empties(self, ab):
        D = zone_from_constraints(ab, undefined=[H_A])
        assert D.with_cells([(1, 0, (1, False))]).is_empty()

    def test_updates_are_glb(self, ab):
        D = Edbm.unconstrained(ab).with_cells([(1, 0, (2, False))])
        tightened = D.with_cells([(1, 0, (3, False))])
        assert tightened.cells[1][0] == (2, False)


class TestSample:
    def test_empty_raises(self, ab):
        with pytest.raises(EmptyZone):
            Edbm.empty(ab).sample()

    def test_respects_bot_and_bounds(self, ab):
        Z = zone_from_constraints(
            ab,
            atoms=[(H_A, ">", 1), (H_A, "<", 2), (P_B, "=", 0)],
            undefined=[P_A],
        )
        v = Z.sample()
        assert Z.contains(v)
        assert 1 < v.value(H_A) < 2
        assert v.value(P_A) is None
        assert v.value(P_B) == 0


class TestGuardZones:
    def test_atom_tables(self, ab):
        cases = [
            ("h.a < 2", {"h.a": 1}, True),
            ("h.a < 2", {"h.a": 2}, False),
            ("h.a = 2", {"h.a": 2}, True),
            ("h.a > 2", {"h.a": "5/2"}, True),
            ("p.a < 2", {"p.a": "3/2"}, True),
            ("p.a > 2", {"p.a": 2}, False),
        ]
        for text, entries, expect in cases:
            zones = guard_to_zones(parse_guard(text), ab)
            v = Valuation.of(ab, entries)
            assert any(z.contains(v) for z in zones) == expect, text

    def test_union_matches_guard_satisfaction(self, ab):
        rng = random.Random(141)
        for _ in range(200):
            g = oracles.random_guard(ab, rng)
            zones = guard_to_zones(g, ab)
            for v in oracles.grid_points(ab, rng, 10):
                assert any(z.contains(v) for z in zones) == v.satisfies(g)

    def test_negated_atom_includes_bot_branch(self, ab):
        zones = guard_to_zones(parse_guard("!(h.a = 1)"), ab)
        undef = Valuation.undefined(ab)
        assert any(z.contains(undef) for z in zones)
        assert not any(z.contains(Valuation.of(ab, {"h.a": 1})) for z in zones)
        assert any(z.contains(Valuation.of(ab, {"h.a": 2})) for z in zones)
