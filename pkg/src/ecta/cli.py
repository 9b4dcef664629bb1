"""Command line front end.

Subcommands:

``check``
    Decide untimed-language emptiness of an automaton, by the finite
    region abstraction or by the forward or backward zone search.
``untime``
    Build a region abstraction and print it as JSON or Graphviz.
``member``
    Test whether a timed word is accepted.
``bounded-lang``
    Enumerate the untimed words of bounded length that are accepted.
``demo``
    Run one of the built-in example analyses and report what the
    implementation observes against the documented expectation.

Exit status is 0 when the requested computation completed (even with an
``unknown`` verdict), 2 on malformed input or unsatisfiable options.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .core import EctaError
from .automaton import Ecta, TimedWord, accepts, format_ecta, get_example, parse_ecta
from .analysis import (
    EMPTY,
    NON_EMPTY,
    UNKNOWN,
    back_exact,
    bounded_untimed_language,
    forw_exact,
    mirror,
)
from .regions import CLASSIC, REFINED
from . import region_automaton as ra
from .region_automaton import EXISTS, FORALL, build


def _add_input_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "automaton",
        help="path to an automaton in JSON form, or the name of a "
        "built-in example (ainf, backdiv)",
    )


def _add_region_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--cmax",
        type=int,
        default=None,
        help="region granularity; defaults to the value stored in the "
        "input file, else to the largest guard constant",
    )
    variant = p.add_mutually_exclusive_group()
    variant.add_argument(
        "--classic",
        dest="variant",
        action="store_const",
        const=CLASSIC,
        help="use the coarser equivalence (default)",
    )
    variant.add_argument(
        "--refined",
        dest="variant",
        action="store_const",
        const=REFINED,
        help="use the finer equivalence that also tracks differences "
        "involving large values",
    )
    p.set_defaults(variant=CLASSIC)
    quant = p.add_mutually_exclusive_group()
    quant.add_argument(
        "--exists",
        dest="quantifier",
        action="store_const",
        const=EXISTS,
        help="edge when some valuation of the source region can step "
        "(default; exact for emptiness)",
    )
    quant.add_argument(
        "--forall",
        dest="quantifier",
        action="store_const",
        const=FORALL,
        help="edge only when every valuation of the source region can "
        "step (under-approximates the language)",
    )
    p.set_defaults(quantifier=EXISTS)


def _load(name_or_path: str) -> tuple[Ecta, Optional[int]]:
    from .automaton import builtin_examples

    if name_or_path in builtin_examples():
        return get_example(name_or_path), None
    with open(name_or_path, "r", encoding="utf-8") as fh:
        return parse_ecta(fh.read())


def _resolve_cmax(A: Ecta, file_cmax: Optional[int], flag: Optional[int]) -> int:
    if flag is not None:
        return flag
    if file_cmax is not None:
        return file_cmax
    return A.max_constant()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_check(args: argparse.Namespace) -> int:
    A, file_cmax = _load(args.automaton)
    payload: dict = {"method": args.method}
    if args.method == "region":
        cmax = _resolve_cmax(A, file_cmax, args.cmax)
        R = build(A, cmax, quantifier=args.quantifier, variant=args.variant)
        empty = ra.language_empty(R)
        verdict = EMPTY if empty else NON_EMPTY
        payload.update(
            verdict=verdict,
            cmax=cmax,
            variant=args.variant,
            quantifier=args.quantifier,
            states=len(R.states),
        )
    else:
        run = forw_exact if args.method == "forward" else back_exact
        result = run(A, fuel=args.fuel, literal_accept=args.literal_accept)
        verdict = result.verdict
        payload.update(verdict=verdict, steps=result.steps_used, fuel=args.fuel)
        if result.witness is not None:
            payload["witness"] = [
                {"location": s.location, "zone": s.zone.brief()}
                for s in result.witness
            ]
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(verdict)
    return 0


def _cmd_untime(args: argparse.Namespace) -> int:
    A, file_cmax = _load(args.automaton)
    cmax = _resolve_cmax(A, file_cmax, args.cmax)
    R = build(A, cmax, quantifier=args.quantifier, variant=args.variant)
    if args.dot:
        _emit(ra.to_dot(R), args.output)
    else:
        _emit(json.dumps(ra.to_json_dict(R), indent=2), args.output)
    return 0


def _parse_word(text: str) -> TimedWord:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EctaError(f"word is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise EctaError("word must be a JSON list of [letter, time] pairs")
    for item in raw:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not isinstance(item[0], str)
            or not isinstance(item[1], (str, int))
            or isinstance(item[1], bool)
        ):
            raise EctaError(
                "each event must be a [letter, time] pair with the time "
                'an integer or a string such as "3/2"'
            )
    return TimedWord.of(raw)


def _cmd_member(args: argparse.Namespace) -> int:
    A, _ = _load(args.automaton)
    word = _parse_word(args.word)
    verdict = accepts(A, word)
    if args.json:
        print(json.dumps({"word": str(word), "accepted": verdict}))
    else:
        print("accepted" if verdict else "rejected")
    return 0


def _cmd_bounded_lang(args: argparse.Namespace) -> int:
    A, _ = _load(args.automaton)
    words = sorted(bounded_untimed_language(A, args.length))
    if args.json:
        print(json.dumps({"length": args.length, "words": ["".join(w) for w in words]}))
    else:
        for w in words:
            print("".join(w) if w else "(empty word)")
    return 0


def _cmd_show(args: argparse.Namespace) -> int:
    A, file_cmax = _load(args.automaton)
    _emit(format_ecta(A, cmax=file_cmax), args.output)
    return 0


def _demo_line(label: str, expected: str, observed: str) -> bool:
    ok = expected == observed
    tag = "pass" if ok else "FAIL"
    print(f"[{tag}] {label}: expected {expected}, observed {observed}")
    return ok


def _cmd_demo(args: argparse.Namespace) -> int:
    if args.name == "ainf":
        A = get_example("ainf")
        print("Automaton with an unbounded-counting untimed language:")
        print("the finite abstractions stay within their size bound, and the")
        print("universal abstraction misses words the automaton accepts.")
        bound = ra.state_count_bound(A, 2)
        for variant in (CLASSIC, REFINED):
            Re = build(A, 2, quantifier=EXISTS, variant=variant)
            Rf = build(A, 2, quantifier=FORALL, variant=variant)
            print(
                f"  {variant}: exists-states={len(Re.states)} "
                f"forall-states={len(Rf.states)} bound={bound}"
            )
            missed = None
            for n in range(0, 6):
                word = ("b",) * n + ("a",)
                timed = TimedWord.of(
                    [[letter, i] for i, letter in enumerate(word)]
                )
                if accepts(A, timed) and not ra.ra_accepts(Rf, word):
                    missed = "".join(word)
                    break
            if missed:
                print(f"    (first missed word: {missed})")
            _demo_line(
                f"  {variant} universal abstraction misses an accepted word",
                "a miss",
                "a miss" if missed else "no miss",
            )
        return 0
    if args.name == "backdiv":
        A = get_example("backdiv")
        print("Automaton built to make the backward zone search diverge:")
        print("its pre-images grow a fresh constraint at every unrolling, so")
        print("no finite set of zones is closed under predecessors.")
        result = back_exact(A, fuel=50)
        _demo_line(
            "  backward search within 50 steps",
            UNKNOWN,
            result.verdict,
        )
        print(
            "  (the pinned search discharges the divergent branch through"
        )
        print(
            "   subsumption and finds an accepting prefix instead; see the"
        )
        print("   project notes on the emptiness demos)")
        return 0
    if args.name == "forwdiv":
        A = mirror(get_example("backdiv"))
        print("Mirrored automaton, making the forward zone search diverge:")
        result = forw_exact(A, fuel=50)
        _demo_line(
            "  forward search within 50 steps",
            UNKNOWN,
            result.verdict,
        )
        print("  (same caveat as the backdiv demo)")
        return 0
    raise EctaError(f"unknown demo {args.name!r}")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecta",
        description="analyze automata whose clocks record and predict "
        "event times",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide untimed-language emptiness")
    _add_input_arg(p_check)
    p_check.add_argument(
        "--method",
        choices=("region", "forward", "backward"),
        default="region",
        help="region abstraction (always terminates) or a zone search "
        "(exact but may run out of fuel)",
    )
    p_check.add_argument(
        "--fuel",
        type=int,
        default=10000,
        help="step budget for the zone searches",
    )
    p_check.add_argument(
        "--literal-accept",
        action="store_true",
        help="accept only when a reached zone is contained in the goal "
        "zone, not merely overlapping it",
    )
    _add_region_args(p_check)
    p_check.add_argument("--json", action="store_true", help="machine-readable output")
    p_check.set_defaults(func=_cmd_check)

    p_untime = sub.add_parser(
        "untime", help="build and print a region abstraction"
    )
    _add_input_arg(p_untime)
    _add_region_args(p_untime)
    p_untime.add_argument(
        "--dot", action="store_true", help="emit Graphviz instead of JSON"
    )
    p_untime.add_argument("-o", "--output", default=None, help="write to a file")
    p_untime.set_defaults(func=_cmd_untime)

    p_member = sub.add_parser("member", help="test timed-word membership")
    _add_input_arg(p_member)
    p_member.add_argument(
        "word",
        help='timed word as JSON, e.g. \'[["b", 0], ["a", "3/2"]]\'',
    )
    p_member.add_argument("--json", action="store_true", help="machine-readable output")
    p_member.set_defaults(func=_cmd_member)

    p_blang = sub.add_parser(
        "bounded-lang", help="list accepted untimed words up to a length"
    )
    _add_input_arg(p_blang)
    p_blang.add_argument("-k", "--length", type=int, required=True)
    p_blang.add_argument("--json", action="store_true", help="machine-readable output")
    p_blang.set_defaults(func=_cmd_bounded_lang)

    p_show = sub.add_parser(
        "show", help="print an automaton (e.g. a built-in example) as JSON"
    )
    _add_input_arg(p_show)
    p_show.add_argument("-o", "--output", default=None, help="write to a file")
    p_show.set_defaults(func=_cmd_show)

    p_demo = sub.add_parser("demo", help="run a built-in demonstration")
    p_demo.add_argument("name", choices=("ainf", "backdiv", "forwdiv"))
    p_demo.set_defaults(func=_cmd_demo)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EctaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
