"""Finite abstractions of an automaton over location-region pairs.

An abstract edge connects two location-region pairs over a letter.  In
the existential automaton the edge exists when some valuation of the
source region can take some matching concrete step into the target
region; in the universal automaton every valuation of the source region
must admit such a step.  The existential automaton accepts exactly the
untimed language of the underlying automaton; the universal one accepts
a subset of it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Optional

from .core import CmaxTooSmall
from .automaton import Ecta
from .edbm import Edbm, subtract_all
from .analysis import initial_zone, post_edge, pre_edge
from .regions import CLASSIC, Region, decompose, region_to_zone

EXISTS = "exists"
FORALL = "forall"

#: A state of the abstraction: a location paired with a region.
RaState = tuple[str, Region]


@dataclass(frozen=True)
class RegionAutomaton:
    """A finite automaton over location-region pairs.

    ``states`` lists every reachable state in discovery order;
    ``accepting`` holds the reachable states whose location accepts and
    whose region has every prophecy clock undefined.
    """

    automaton: Ecta
    cmax: int
    variant: str
    quantifier: str
    states: tuple[RaState, ...]
    initials: tuple[RaState, ...]
    edges: tuple[tuple[RaState, str, RaState], ...]
    accepting: tuple[RaState, ...]


def regions_bound(clock_count: int, constant: int) -> int:
    """An upper bound on the number of regions over the given clocks."""
    return (
        factorial(clock_count)
        * 2**clock_count
        * (2 * constant + 2) ** clock_count
    )


def state_count_bound(A: Ecta, cmax: int) -> int:
    """An upper bound on the reachable states of any built abstraction."""
    return len(A.locations) * regions_bound(2 * len(A.alphabet.letters), cmax + 1)


def build(
    A: Ecta, cmax: int, quantifier: str = EXISTS, variant: str = CLASSIC
) -> RegionAutomaton:
    """Construct the reachable part of the abstraction.

    ``cmax`` must dominate every constant in the guards.  The build is
    deterministic: breadth first from the initial regions, letters in
    alphabet order, edges in declaration order.
    """
    if quantifier not in (EXISTS, FORALL):
        raise ValueError(f"quantifier must be {EXISTS!r} or {FORALL!r}")
    if cmax < A.max_constant():
        raise CmaxTooSmall(
            f"cmax={cmax} is below the largest guard constant {A.max_constant()}"
        )
    alphabet = A.alphabet
    initials = tuple(
        (A.initial, r) for r in decompose(initial_zone(alphabet), cmax, variant)
    )
    states: list[RaState] = list(initials)
    state_set = set(states)
    edges: list[tuple[RaState, str, RaState]] = []
    pre_cache: dict[tuple, tuple[Edbm, ...]] = {}
    queue = deque(initials)
    while queue:
        s1 = queue.popleft()
        q1, r1 = s1
        z1 = region_to_zone(r1)
        for letter in alphabet.letters:
            letter_edges = A.edges_from(q1, letter)
            candidates: list[RaState] = []
            cand_seen = set()
            for e in letter_edges:
                for z in post_edge(alphabet, e, z1):
                    for r2 in decompose(z, cmax, variant):
                        s2 = (e.target, r2)
                        if s2 not in cand_seen:
                            cand_seen.add(s2)
                            candidates.append(s2)
            if quantifier == EXISTS:
                targets = candidates
            else:
                targets = []
                for s2 in candidates:
                    q2, r2 = s2
                    pres: list[Edbm] = []
                    for e in letter_edges:
                        if e.target != q2:
                            continue
                        key = (e, r2)
                        if key not in pre_cache:
                            pre_cache[key] = tuple(
                                pre_edge(alphabet, e, region_to_zone(r2))
                            )
                        pres.extend(pre_cache[key])
                    if not subtract_all(z1, pres):
                        targets.append(s2)
            for s2 in targets:
                edges.append((s1, letter, s2))
                if s2 not in state_set:
                    state_set.add(s2)
                    states.append(s2)
                    queue.append(s2)
    accepting = tuple(
        s for s in states if s[0] in A.accepting and s[1].is_final()
    )
    return RegionAutomaton(
        automaton=A,
        cmax=cmax,
        variant=variant,
        quantifier=quantifier,
        states=tuple(states),
        initials=initials,
        edges=tuple(edges),
        accepting=accepting,
    )


def _adjacency(R: RegionAutomaton) -> dict[tuple[RaState, str], tuple[RaState, ...]]:
    adj: dict[tuple[RaState, str], list[RaState]] = {}
    for s1, letter, s2 in R.edges:
        adj.setdefault((s1, letter), []).append(s2)
    return {key: tuple(val) for key, val in adj.items()}


def ra_accepts(R: RegionAutomaton, word: Iterable[str]) -> bool:
    """Untimed word membership, by the usual subset construction."""
    adj = _adjacency(R)
    current = set(R.initials)
    for letter in word:
        R.automaton.alphabet.require_letter(letter)
        current = {
            s2 for s1 in current for s2 in adj.get((s1, letter), ())
        }
        if not current:
            return False
    accepting = set(R.accepting)
    return any(s in accepting for s in current)


def language_empty(R: RegionAutomaton) -> bool:
    """True iff no accepting state is reachable from an initial state."""
    adj: dict[RaState, list[RaState]] = {}
    for s1, _, s2 in R.edges:
        adj.setdefault(s1, []).append(s2)
    accepting = set(R.accepting)
    seen = set(R.initials)
    queue = deque(R.initials)
    while queue:
        s = queue.popleft()
        if s in accepting:
            return False
        for s2 in adj.get(s, ()):
            if s2 not in seen:
                seen.add(s2)
                queue.append(s2)
    return True


def ra_bounded_language(R: RegionAutomaton, k: int) -> set[tuple[str, ...]]:
    """All accepted untimed words of length at most ``k``."""
    adj = _adjacency(R)
    accepting = set(R.accepting)
    words: set[tuple[str, ...]] = set()
    frontier: list[tuple[tuple[str, ...], frozenset]] = [
        ((), frozenset(R.initials))
    ]
    while frontier:
        word, current = frontier.pop()
        if any(s in accepting for s in current):
            words.add(word)
        if len(word) >= k:
            continue
        for letter in R.automaton.alphabet.letters:
            nxt = frozenset(
                s2 for s1 in current for s2 in adj.get((s1, letter), ())
            )
            if nxt:
                frontier.append((word + (letter,), nxt))
    return words


def _state_ids(R: RegionAutomaton) -> dict[RaState, int]:
    return {s: i for i, s in enumerate(R.states)}


def to_dot(R: RegionAutomaton) -> str:
    """Graphviz rendering with one node per location-region pair."""
    ids = _state_ids(R)
    accepting = set(R.accepting)
    lines = [
        "digraph region_automaton {",
        "  rankdir=LR;",
        '  node [shape=circle, fontsize=10];',
    ]
    for s, i in ids.items():
        q, r = s
        label = f"{q} | {r}".replace('"', '\\"')
        shape = "doublecircle" if s in accepting else "circle"
        lines.append(f'  s{i} [label="{label}", shape={shape}];')
    for j, s in enumerate(R.initials):
        lines.append(f"  init{j} [shape=point, width=0.05];")
        lines.append(f"  init{j} -> s{ids[s]};")
    for s1, letter, s2 in R.edges:
        lines.append(f'  s{ids[s1]} -> s{ids[s2]} [label="{letter}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_dict(R: RegionAutomaton) -> dict:
    """A serializable summary with stable state identifiers."""
    ids = _state_ids(R)
    initials = set(R.initials)
    accepting = set(R.accepting)
    return {
        "cmax": R.cmax,
        "variant": R.variant,
        "quantifier": R.quantifier,
        "state_count": len(R.states),
        "edge_count": len(R.edges),
        "state_bound": state_count_bound(R.automaton, R.cmax),
        "states": [
            {
                "id": ids[s],
                "location": s[0],
                "region": str(s[1]),
                "initial": s in initials,
                "accepting": s in accepting,
            }
            for s in R.states
        ],
        "edges": [
            {"from": ids[s1], "letter": letter, "to": ids[s2]}
            for s1, letter, s2 in R.edges
        ],
    }
