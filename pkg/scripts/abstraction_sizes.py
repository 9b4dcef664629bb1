#!/usr/bin/env python3
"""Tabulate region-abstraction sizes for a chosen automaton.

For each maximal constant, region variant, and edge quantifier the
script builds the finite abstraction, reports its size next to the a
priori state bound, and lists the bounded untimed language so the
existential and universal abstractions can be compared.

Run as ``python3 scripts/abstraction_sizes.py`` for the built-in
counting automaton, or pass a file in the textual automaton format.
"""

import argparse

from ecta import (
    CLASSIC,
    EXISTS,
    FORALL,
    REFINED,
    build,
    get_example,
    parse_ecta,
    ra_bounded_language,
    state_count_bound,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "automaton",
        nargs="?",
        default=None,
        help="automaton file (default: the built-in counting example)",
    )
    parser.add_argument(
        "--cmax",
        type=int,
        nargs="+",
        default=[1, 2, 3],
        metavar="C",
        help="maximal constants to tabulate (default 1 2 3)",
    )
    parser.add_argument(
        "--word-length",
        type=int,
        default=6,
        metavar="K",
        help="length bound for the listed untimed language (default 6)",
    )
    args = parser.parse_args()
    if args.automaton is None:
        A = get_example("ainf")
        name = "ainf"
    else:
        with open(args.automaton, encoding="utf-8") as handle:
            A = parse_ecta(handle.read())
        name = args.automaton

    print(f"automaton: {name}, {len(A.locations)} locations, "
          f"{len(A.edges)} edges, max constant {A.max_constant()}")
    header = (f"{'cmax':>4}  {'variant':<8}{'quantifier':<11}"
              f"{'states':>7}{'edges':>7}{'bound':>12}  language")
    print(header)
    print("-" * len(header))
    for cmax in args.cmax:
        if cmax < A.max_constant():
            print(f"{cmax:>4}  skipped: below the automaton's max constant")
            continue
        bound = state_count_bound(A, cmax)
        for variant in (CLASSIC, REFINED):
            for quantifier in (EXISTS, FORALL):
                R = build(A, cmax, quantifier, variant)
                words = sorted(
                    "".join(w)
                    for w in ra_bounded_language(R, args.word_length)
                )
                lang = ", ".join(words) if words else "(empty)"
                print(f"{cmax:>4}  {variant:<8}{quantifier:<11}"
                      f"{len(R.states):>7}{len(R.edges):>7}{bound:>12}  "
                      f"{lang}")


if __name__ == "__main__":
    main()
