"""Difference bound matrices over event clocks, with two extra markers.

A matrix over the clocks ``x_1 .. x_n`` of an alphabet has ``n + 1`` rows
and columns; index 0 stands for the constant 0.  Cell ``(i, j)`` bounds
the signed difference ``sv(x_i) - sv(x_j)``, where ``sv`` is the signed
reading of a valuation (history clocks as is, prophecy clocks negated,
``sv(x_0) = 0``).  Signed differences do not change as time elapses,
which is what makes these matrices closed under the operations below.

Besides ordinary bounds ``(c, <)`` and ``(c, <=)`` with integer ``c``,
and the trivial bound ``(inf, <)``, a cell may hold two markers:

* ``bot`` (only in row 0 or column 0): the clock on that border must be
  undefined.  An ordinary bound is false on an undefined clock, so any
  numeric cell forces both of its clocks to be real.
* ``?``: no constraint at all; the clock may be anything, undefined
  included.

Diagonal cells never constrain a valuation; they only witness global
emptiness after closure.  The canonical empty matrix has ``(-1, <)`` at
``(0, 0)`` and ``?`` everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (
    Alphabet,
    Atom,
    Clock,
    EmptyZone,
    Guard,
    Not,
    Or,
    And,
    TrueGuard,
    UnknownClock,
    Valuation,
)


class _Marker:
    """A singleton cell marker; compares and hashes by identity."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


BOT = _Marker("bot")
ANY = _Marker("?")
INF = float("inf")

#: A bound is ``(value, strict)``; ``strict=True`` means ``<``.
Bound = tuple
B_BOT: Bound = (BOT, False)
B_ANY: Bound = (ANY, False)
B_INF: Bound = (INF, True)
B_ZERO: Bound = (0, False)


def bound_le(b1: Bound, b2: Bound) -> bool:
    """The cell order: smaller means tighter.

    ``?`` is the top element.  ``bot`` is comparable only with itself
    and ``?``; in particular ``bot`` and numeric bounds are incomparable,
    which makes the intersection of "undefined" with "real" empty.
    """
    m1, s1 = b1
    m2, s2 = b2
    if m2 is ANY:
        return True
    if m1 is ANY:
        return False
    if m1 is BOT or m2 is BOT:
        return m1 is BOT and m2 is BOT
    if m1 < m2:
        return True
    return m1 == m2 and (s1 == s2 or not s2)


def bound_min(b1: Bound, b2: Bound) -> Optional[Bound]:
    """Greatest lower bound of two cells, or None when incomparable."""
    if bound_le(b1, b2):
        return b1
    if bound_le(b2, b1):
        return b2
    return None


def _bound_add(b1: Bound, b2: Bound) -> Bound:
    """Sum of two numeric bounds (used only inside closure)."""
    return (b1[0] + b2[0], b1[1] or b2[1])


def _bound_lt(b1: Bound, b2: Bound) -> bool:
    """Strict order on numeric bounds."""
    return b1[0] < b2[0] or (b1[0] == b2[0] and b1[1] and not b2[1])


def _numeric(b: Bound) -> bool:
    return b[0] is not BOT and b[0] is not ANY


def _token(b: Bound) -> str:
    m, s = b
    if m is BOT:
        return "bot"
    if m is ANY:
        return "?"
    if m == INF:
        return "<inf"
    return f"<{m}" if s else f"<={m}"


def _parse_token(text: str) -> Bound:
    if text == "bot":
        return B_BOT
    if text == "?":
        return B_ANY
    if text == "<inf":
        return B_INF
    if text.startswith("<="):
        return (int(text[2:]), False)
    if text.startswith("<"):
        return (int(text[1:]), True)
    raise ValueError(f"bad bound token {text!r}")


@dataclass(frozen=True)
class Edbm:
    """An event-clock zone as a difference bound matrix.

    Instances are immutable; all operations return fresh matrices.  The
    operations assume normalized inputs and return normalized outputs
    unless noted otherwise.
    """

    alphabet: Alphabet
    cells: tuple

    def __post_init__(self) -> None:
        n = len(self.alphabet.clocks)
        cells = tuple(tuple(row) for row in self.cells)
        if len(cells) != n + 1 or any(len(row) != n + 1 for row in cells):
            raise ValueError(f"expected a {n + 1}x{n + 1} matrix")
        for i, row in enumerate(cells):
            for j, cell in enumerate(row):
                m, s = cell
                if m is BOT:
                    if i != 0 and j != 0:
                        raise ValueError(f"bot outside row/column 0 at {(i, j)}")
                    if s:
                        raise ValueError("bot bound must be nonstrict")
                elif m is ANY:
                    if s:
                        raise ValueError("? bound must be nonstrict")
                elif m == INF:
                    if not s:
                        raise ValueError("infinite bound must be strict")
                elif not isinstance(m, int):
                    raise ValueError(f"bad bound value {m!r} at {(i, j)}")
        object.__setattr__(self, "cells", cells)

    # -- construction -------------------------------------------------

    @staticmethod
    def unconstrained(alphabet: Alphabet) -> "Edbm":
        """The zone of all valuations."""
        n = len(alphabet.clocks)
        cells = [[B_ANY] * (n + 1) for _ in range(n + 1)]
        cells[0][0] = B_ZERO
        return Edbm(alphabet, tuple(tuple(row) for row in cells))

    @staticmethod
    def empty(alphabet: Alphabet) -> "Edbm":
        """The canonical empty zone."""
        n = len(alphabet.clocks)
        cells = [[B_ANY] * (n + 1) for _ in range(n + 1)]
        cells[0][0] = (-1, True)
        return Edbm(alphabet, tuple(tuple(row) for row in cells))

    def is_empty(self) -> bool:
        return self.cells == Edbm.empty(self.alphabet).cells

    def _clock(self, i: int) -> Clock:
        return self.alphabet.clocks[i - 1]

    def _is_prophecy(self, i: int) -> bool:
        return i != 0 and self._clock(i).is_prophecy

    def _is_history(self, i: int) -> bool:
        return i != 0 and self._clock(i).is_history

    # -- membership ---------------------------------------------------

    def contains(self, v: Valuation) -> bool:
        """Exact membership of a valuation."""
        if v.alphabet != self.alphabet:
            return False
        sv = (Fraction(0),) + v.plmin()
        n1 = len(sv)
        for i in range(n1):
            for j in range(n1):
                m, s = self.cells[i][j]
                if m is ANY:
                    continue
                if i == j:
                    # a diagonal cell only constrains the constant 0
                    if m is BOT or m < 0 or (m == 0 and s):
                        return False
                    continue
                if m is BOT:
                    if (sv[i] if j == 0 else sv[j]) is not None:
                        return False
                    continue
                if sv[i] is None or sv[j] is None:
                    return False
                if m == INF:
                    continue
                diff = sv[i] - sv[j]
                if not (diff < m if s else diff <= m):
                    return False
        return True

    # -- normalization ------------------------------------------------

    def normalize(self) -> "Edbm":
        """Canonical form: detect emptiness, then tighten.

        Undefined clocks get ``bot`` on both borders and ``?`` elsewhere;
        constrained real clocks get defaulted borders and an all-pairs
        shortest-path closure; untouched clocks keep all-``?`` rows.  The
        result is the identity on already-normalized matrices, and two
        matrices denote the same zone iff they normalize to equal cells.
        """
        size = len(self.cells)
        work = [list(row) for row in self.cells]

        for i in range(size):
            m, s = work[i][i]
            if m is BOT or (m is not ANY and (m < 0 or (m == 0 and s))):
                return Edbm.empty(self.alphabet)

        bot_rows: set[int] = set()
        for i in range(1, size):
            lower = work[i][0]
            upper = work[0][i]
            if lower[0] is BOT or upper[0] is BOT:
                other = upper if lower[0] is BOT else lower
                if _numeric(other):
                    return Edbm.empty(self.alphabet)
                for j in range(1, size):
                    if j != i and (work[i][j][0] is not ANY or work[j][i][0] is not ANY):
                        return Edbm.empty(self.alphabet)
                bot_rows.add(i)
        for i in bot_rows:
            work[i][0] = B_BOT
            work[0][i] = B_BOT
            work[i][i] = B_ANY

        constrained = {0}
        for i in range(size):
            for j in range(size):
                if i != j and _numeric(work[i][j]):
                    constrained.add(i)
                    constrained.add(j)
        order = sorted(constrained)

        # Among real clocks a signed history value is at least 0 and a
        # signed prophecy value is at most 0, so a difference of the
        # form prophecy-side minus history-side never exceeds 0.  That
        # bound must be merged in even over an explicit looser cell:
        # the closure below can only propagate constraints that appear
        # as cells, and future/past rely on the closure being tight.
        for i in order:
            for j in order:
                if i == j:
                    continue
                lo = (i == 0 or self._is_prophecy(i)) and (
                    j == 0 or self._is_history(j)
                )
                if work[i][j][0] is ANY:
                    work[i][j] = B_ZERO if lo else B_INF
                elif lo and _bound_lt(B_ZERO, work[i][j]):
                    work[i][j] = B_ZERO

        for i in order:
            work[i][i] = B_ZERO
        for k in order:
            for i in order:
                row = work[i]
                ik = row[k]
                if ik[0] == INF:
                    continue
                for j in order:
                    cand = _bound_add(ik, work[k][j])
                    if cand[0] != INF and _bound_lt(cand, row[j]):
                        row[j] = cand
        for i in order:
            m, s = work[i][i]
            if m < 0 or (m == 0 and s):
                return Edbm.empty(self.alphabet)

        for i in range(1, size):
            if i not in constrained and i not in bot_rows:
                work[i][i] = B_ANY

        return Edbm(self.alphabet, tuple(tuple(row) for row in work))

    # -- zone operations ----------------------------------------------

    def future(self) -> "Edbm":
        """Time successors: drop upper bounds on signed values.

        A history clock loses its upper bound; a prophecy clock's upper
        bound relaxes to 0, its largest signed value.  Lower bounds and
        pairwise cells do not change as time elapses.

        The rewrite is exact when every clock is either undefined or
        constrained.  A clock left completely free (an all-``?`` row)
        admits no cellwise bound tying it to the elapsed time, so the
        result can strictly contain the set of true time successors;
        the exact set is then a union of two zones, which one matrix
        cannot express.  Zones reached from the initial zone through
        edge successors never have a free history row, so forward
        reachability is unaffected.
        """
        if self.is_empty():
            return self
        work = [list(row) for row in self.cells]
        for i in range(1, len(work)):
            if _numeric(work[i][0]):
                work[i][0] = B_ZERO if self._is_prophecy(i) else B_INF
        return Edbm(self.alphabet, tuple(tuple(row) for row in work)).normalize()

    def past(self) -> "Edbm":
        """Time predecessors: drop lower bounds on signed values.

        Mirror image of :meth:`future`, with the mirror-image caveat:
        the rewrite can strictly contain the set of true predecessors
        when some prophecy clock has an all-``?`` row.  Zones reached
        from the final zone through edge predecessors never have one,
        so backward reachability is unaffected.
        """
        if self.is_empty():
            return self
        work = [list(row) for row in self.cells]
        for i in range(1, len(work)):
            if _numeric(work[0][i]):
                work[0][i] = B_INF if self._is_prophecy(i) else B_ZERO
        return Edbm(self.alphabet, tuple(tuple(row) for row in work)).normalize()

    def intersect(self, other: "Edbm") -> "Edbm":
        """Cellwise greatest lower bound; incomparable cells mean empty."""
        if self.alphabet != other.alphabet:
            raise UnknownClock("intersection across different alphabets")
        if self.is_empty():
            return self
        if other.is_empty():
            return other
        merged = []
        for row1, row2 in zip(self.cells, other.cells):
            row = []
            for b1, b2 in zip(row1, row2):
                b = bound_min(b1, b2)
                if b is None:
                    return Edbm.empty(self.alphabet)
                row.append(b)
            merged.append(tuple(row))
        return Edbm(self.alphabet, tuple(merged)).normalize()

    def release(self, clock: Clock) -> "Edbm":
        """Forget everything about one clock.

        The clock's whole row and column, diagonal included, become
        ``?``; the result allows any value for it, undefined included.
        """
        if self.is_empty():
            return self
        i = self.alphabet.index_of(clock) + 1
        work = [list(row) for row in self.cells]
        for j in range(len(work)):
            work[i][j] = B_ANY
            work[j][i] = B_ANY
        return Edbm(self.alphabet, tuple(tuple(row) for row in work)).normalize()

    def includes(self, other: "Edbm") -> bool:
        """True iff every valuation of ``other`` belongs to ``self``.

        Both matrices must be normalized; inclusion is then the cellwise
        bound order.
        """
        if self.alphabet != other.alphabet:
            raise UnknownClock("inclusion across different alphabets")
        if other.is_empty():
            return True
        if self.is_empty():
            return False
        return all(
            bound_le(b2, b1)
            for row1, row2 in zip(self.cells, other.cells)
            for b1, b2 in zip(row1, row2)
        )

    def subtract(self, other: "Edbm") -> list["Edbm"]:
        """The set difference ``self minus other`` as disjoint zones.

        Each non-trivial cell of ``other`` is refuted in turn while the
        previously processed cells are asserted, so the returned zones
        are pairwise disjoint and cover the difference exactly.
        """
        if self.alphabet != other.alphabet:
            raise UnknownClock("subtraction across different alphabets")
        if self.is_empty() or other.is_empty():
            return [] if self.is_empty() else [self]
        size = len(self.cells)
        pieces: list[Edbm] = []
        base = self
        seen_bot: set[int] = set()
        for i in range(size):
            for j in range(size):
                if i == j or base.is_empty():
                    continue
                m, s = other.cells[i][j]
                if m is ANY:
                    continue
                if m is BOT:
                    k = i if j == 0 else j
                    if k in seen_bot:
                        continue
                    seen_bot.add(k)
                    pieces.append(base._with_real(k))
                    base = base.with_cells([(k, 0, B_BOT), (0, k, B_BOT)])
                    continue
                if m != INF:
                    flipped = (-m, not s)
                    piece = base.with_cells([(j, i, flipped)])
                    pieces.append(piece)
                branches = []
                if i != 0:
                    branches.append(base._with_bot(i))
                if j != 0:
                    extra = base._with_bot(j)
                    if i != 0:
                        extra = extra._with_real(i)
                    branches.append(extra)
                pieces.extend(branches)
                base = base.with_cells([(i, j, (m, s))])
        return [p for p in pieces if not p.is_empty()]

    def with_cells(self, updates: Iterable[tuple]) -> "Edbm":
        """Tighten the given cells (greatest lower bound) and normalize.

        ``updates`` holds ``(row, column, bound)`` triples.  A bound
        incomparable with the present cell yields the empty zone.
        """
        work = [list(row) for row in self.cells]
        for i, j, bound in updates:
            cur = bound_min(work[i][j], bound)
            if cur is None:
                return Edbm.empty(self.alphabet)
            work[i][j] = cur
        return Edbm(self.alphabet, tuple(tuple(row) for row in work)).normalize()

    def _with_bot(self, i: int) -> "Edbm":
        return self.with_cells([(i, 0, B_BOT), (0, i, B_BOT)])

    def _with_real(self, i: int) -> "Edbm":
        if self._is_prophecy(i):
            return self.with_cells([(i, 0, B_ZERO), (0, i, B_INF)])
        return self.with_cells([(i, 0, B_INF), (0, i, B_ZERO)])

    # -- sampling -----------------------------------------------------

    def sample(self) -> Valuation:
        """A concrete valuation inside the zone.

        Clocks whose rows are ``bot`` or all-``?`` come out undefined;
        constrained clocks get exact rational values chosen row by row
        inside their remaining intervals.  Raises EmptyZone on the empty
        matrix.  Deterministic.
        """
        if self.is_empty():
            raise EmptyZone("cannot sample from the empty zone")
        size = len(self.cells)
        real = [False] * size
        real[0] = True
        for i in range(1, size):
            real[i] = _numeric(self.cells[i][0])
        assigned: dict[int, Fraction] = {0: Fraction(0)}
        for i in range(1, size):
            if not real[i]:
                continue
            lo: Optional[tuple[Fraction, bool]] = None
            hi: Optional[tuple[Fraction, bool]] = None
            for j, dj in assigned.items():
                up = self.cells[i][j]
                if _numeric(up) and up[0] != INF:
                    cand = (dj + up[0], up[1])
                    if hi is None or cand[0] < hi[0] or (cand[0] == hi[0] and cand[1]):
                        hi = cand
                down = self.cells[j][i]
                if _numeric(down) and down[0] != INF:
                    cand = (dj - down[0], down[1])
                    if lo is None or cand[0] > lo[0] or (cand[0] == lo[0] and cand[1]):
                        lo = cand
            # signed values of history clocks are nonnegative, of
            # prophecy clocks nonpositive
            if self._is_history(i):
                if lo is None or lo[0] < 0:
                    lo = (Fraction(0), False)
            else:
                if hi is None or hi[0] > 0:
                    hi = (Fraction(0), False)
            assigned[i] = self._pick(lo, hi)
        values: list[Optional[Fraction]] = []
        for i in range(1, size):
            if not real[i]:
                values.append(None)
            elif self._is_history(i):
                values.append(assigned[i])
            else:
                values.append(-assigned[i])
        return Valuation(self.alphabet, tuple(values))

    @staticmethod
    def _pick(
        lo: Optional[tuple[Fraction, bool]], hi: Optional[tuple[Fraction, bool]]
    ) -> Fraction:
        if lo is None and hi is None:
            return Fraction(0)
        if lo is None:
            return hi[0] if not hi[1] else hi[0] - 1
        if hi is None:
            return lo[0] if not lo[1] else lo[0] + 1
        if lo[0] == hi[0]:
            if lo[1] or hi[1]:
                raise EmptyZone("empty interval in a nonempty zone")
            return lo[0]
        if lo[0] > hi[0]:
            raise EmptyZone("crossed interval in a nonempty zone")
        if not lo[1]:
            return lo[0]
        if not hi[1]:
            return hi[0]
        return (lo[0] + hi[0]) / 2

    # -- display ------------------------------------------------------

    def to_tokens(self) -> list[list[str]]:
        """Row-major debug tokens: ``bot``, ``?``, ``<inf``, ``<c``, ``<=c``."""
        return [[_token(b) for b in row] for row in self.cells]

    @staticmethod
    def from_tokens(alphabet: Alphabet, rows: Sequence[Sequence[str]]) -> "Edbm":
        return Edbm(
            alphabet, tuple(tuple(_parse_token(t) for t in row) for row in rows)
        )

    def brief(self) -> str:
        if self.is_empty():
            return "empty"
        return " | ".join(" ".join(row) for row in self.to_tokens())


# -- constraint helpers ----------------------------------------------


_RelOp = str  # one of < <= = >= >


def _atom_cells(alphabet: Alphabet, clock: Clock, op: _RelOp, c: int) -> list[tuple]:
    """Matrix cells for one comparison of a clock against a constant."""
    i = alphabet.index_of(clock) + 1
    if clock.is_history:
        table = {
            "<": [(i, 0, (c, True))],
            "<=": [(i, 0, (c, False))],
            "=": [(i, 0, (c, False)), (0, i, (-c, False))],
            ">=": [(0, i, (-c, False))],
            ">": [(0, i, (-c, True))],
        }
    else:
        table = {
            "<": [(0, i, (c, True))],
            "<=": [(0, i, (c, False))],
            "=": [(0, i, (c, False)), (i, 0, (-c, False))],
            ">=": [(i, 0, (-c, False))],
            ">": [(i, 0, (-c, True))],
        }
    return table[op]


def zone_from_constraints(
    alphabet: Alphabet,
    atoms: Iterable[tuple] = (),
    undefined: Iterable[Clock] = (),
) -> Edbm:
    """A zone from comparisons ``(clock, op, c)`` plus undefined clocks.

    ``op`` ranges over ``<``, ``<=``, ``=``, ``>=``, ``>``.  Clocks in
    ``undefined`` are forced to bot; unmentioned clocks stay free.
    """
    updates: list[tuple] = []
    for clock, op, c in atoms:
        updates.extend(_atom_cells(alphabet, clock, op, c))
    for clock in undefined:
        i = alphabet.index_of(clock) + 1
        updates.extend([(i, 0, B_BOT), (0, i, B_BOT)])
    return Edbm.unconstrained(alphabet).with_cells(updates)


def _literal_zones(atom: Atom, positive: bool) -> list[list[tuple]]:
    """A literal as a union of primitive constraint lists.

    Each inner list mixes ``(clock, op, c)`` comparisons with
    ``("bot", clock)`` items.  A negated comparison is satisfied both by
    the reversed comparison and by an undefined clock.
    """
    x, op, c = atom.clock, atom.op, atom.bound
    if positive:
        return [[(x, op, c)]]
    reverse = {"<": [">="], ">": ["<="], "=": ["<", ">"]}
    out: list[list[tuple]] = [[(x, rop, c)] for rop in reverse[op]]
    out.append([("bot", x)])
    return out


def guard_to_zones(g: Guard, alphabet: Alphabet) -> list[Edbm]:
    """A guard as a finite union of zones.

    The guard is put in disjunctive normal form; negated comparisons
    expand into the reversed comparison plus the undefined case, since a
    comparison is false on an undefined clock.
    """

    def expand(g: Guard, negated: bool) -> list[list[tuple]]:
        if isinstance(g, TrueGuard):
            return [] if negated else [[]]
        if isinstance(g, Not):
            return expand(g.inner, not negated)
        if isinstance(g, (And, Or)):
            conjunctive = isinstance(g, And) != negated
            left = expand(g.left, negated)
            right = expand(g.right, negated)
            if conjunctive:
                return [a + b for a in left for b in right]
            return left + right
        if isinstance(g, Atom):
            return _literal_zones(g, not negated)
        raise TypeError(f"not a guard: {g!r}")

    zones: list[Edbm] = []
    seen = set()
    for conj in expand(g, False):
        atoms = [item for item in conj if item[0] != "bot"]
        undefined = [item[1] for item in conj if item[0] == "bot"]
        zone = zone_from_constraints(alphabet, atoms, undefined)
        if not zone.is_empty() and zone.cells not in seen:
            seen.add(zone.cells)
            zones.append(zone)
    return zones


def subtract_all(zone: Edbm, removed: Iterable[Edbm]) -> list[Edbm]:
    """Subtract a union of zones, keeping the pieces disjoint."""
    pieces = [zone] if not zone.is_empty() else []
    for other in removed:
        pieces = [frag for piece in pieces for frag in piece.subtract(other)]
    return pieces
