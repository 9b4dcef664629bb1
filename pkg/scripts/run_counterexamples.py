#!/usr/bin/env python3
"""Reproduce the three counterexample analyses from the library.

* An automaton whose untimed language counts arbitrarily high, so no
  finite time-abstract equivalence captures it: the universal region
  abstraction provably misses accepted words, while the existential one
  reproduces the bounded language exactly.
* An automaton whose exact backward zone iteration grows a fresh lower
  bound at every unrolling of its loop, so the set of predecessor zones
  never stabilizes.
* The time reversal of that automaton, which makes the forward
  iteration diverge the same way.

Run as ``python3 scripts/run_counterexamples.py``; pass ``--pre-depth``
to print more backward iterates.
"""

import argparse

from ecta import (
    CLASSIC,
    EXISTS,
    FORALL,
    REFINED,
    Alphabet,
    Edbm,
    TimedWord,
    accepts,
    back_exact,
    bounded_untimed_language,
    build,
    final_zone,
    forw_exact,
    get_example,
    mirror,
    pre_edge,
    ra_accepts,
    ra_bounded_language,
    state_count_bound,
)


def counting_automaton() -> None:
    A = get_example("ainf")
    cmax = 2
    print("== unbounded counting ==")
    print(f"bounded untimed language, length <= 6: "
          f"{sorted(''.join(w) for w in bounded_untimed_language(A, 6))}")
    bound = state_count_bound(A, cmax)
    for variant in (CLASSIC, REFINED):
        exists = build(A, cmax, EXISTS, variant)
        universal = build(A, cmax, FORALL, variant)
        lang = sorted("".join(w) for w in ra_bounded_language(exists, 6))
        print(f"{variant}: existential {len(exists.states)} states, "
              f"universal {len(universal.states)} states, bound {bound}")
        print(f"  existential bounded language: {lang}")
        for n in range(6):
            word = ("b",) * n + ("a",)
            timed = TimedWord.of([[x, i] for i, x in enumerate(word)])
            if accepts(A, timed) and not ra_accepts(universal, word):
                print(f"  universal abstraction misses accepted word "
                      f"{''.join(word)}")
                break
        else:
            print("  universal abstraction missed nothing up to b^5 a")


def backward_divergence(depth: int) -> None:
    A = get_example("backdiv")
    ab = A.alphabet
    print("== backward divergence ==")
    loop = A.edges_from("q1", "a")[0]
    close = A.edges_from("q1", "a")[1]
    b_loop = A.edges_from("q2", "b")[0]
    (at_q2,) = pre_edge(ab, b_loop, final_zone(ab))
    (zone,) = pre_edge(ab, close, at_q2)
    print(f"zone before the closing edge: {zone.brief()}")
    for n in range(1, depth + 1):
        (zone,) = pre_edge(ab, loop, zone)
        target = Edbm.unconstrained(ab).with_cells(
            [(4, 0, (-n, False)), (4, 1, (-(n + 1), False))]
        )
        entailed = target.includes(zone)
        print(f"after {n} loop predecessor(s): {zone.brief()}  "
              f"[p.b >= {n} and p.b + h.a >= {n + 1}: "
              f"{'holds' if entailed else 'FAILS'}]")
    result = back_exact(A, fuel=50)
    print(f"backward search, fuel 50: {result.verdict} after "
          f"{result.steps_used} steps")
    if result.witness:
        print("  witness chain: " + " -> ".join(str(s) for s in result.witness))
    print("  the divergent branch never closes, but the search accepts as")
    print("  soon as a zone at the initial location meets the initial zone,")
    print("  which happens before the divergence matters")


def forward_divergence() -> None:
    A = mirror(get_example("backdiv"))
    print("== forward divergence (mirrored automaton) ==")
    result = forw_exact(A, fuel=50)
    print(f"forward search, fuel 50: {result.verdict} after "
          f"{result.steps_used} steps")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--pre-depth",
        type=int,
        default=6,
        metavar="N",
        help="how many backward loop iterates to print (default 6)",
    )
    args = parser.parse_args()
    counting_automaton()
    print()
    backward_divergence(args.pre_depth)
    print()
    forward_divergence()


if __name__ == "__main__":
    main()
