"""Command-line front end.

Exit codes: 0 positive verdict, 1 negative verdict, 2 input error,
3 resource limit.  All output is deterministic: identical inputs give
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .automata import (
    Dfa,
    FormatError,
    ResourceLimitError,
    UnknownSymbolError,
    decide,
    format_automaton,
    format_word,
    parse_automaton,
    parse_word,
    to_dfa,
    to_dot,
)
from .decompose import DecompositionReport, decompose, search
from .hausdorff import format_table, normal_form, parse_table, render_dnf
from .logic import (
    ClassificationError,
    NonRegularAtomError,
    ParseError,
    compile_sentence,
    eval_sentence,
    load_sentence,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_automaton(path: str) -> Dfa:
    return to_dfa(parse_automaton(_read(path)))


def _looks_like_automaton(text: str) -> bool:
    return any(line.strip().startswith("states:") for line in text.splitlines())


def _load_language(path: str) -> Dfa:
    """An automaton file or a sentence file, compiled either way to a Dfa."""
    text = _read(path)
    if _looks_like_automaton(text):
        return to_dfa(parse_automaton(text))
    return compile_sentence(load_sentence(text))


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_dot(d: Dfa, dot: str | None) -> None:
    if dot:
        Path(dot).write_text(to_dot(d), encoding="utf-8")


def _automaton_arg(d: Dfa | None) -> str | None:
    return format_automaton(d) if d is not None else None


def _report_json(report: DecompositionReport, alphabet) -> str:
    skeleton = None
    if report.skeleton is not None:
        skeleton = [
            {
                "d": report.d,
                "disjuncts": [
                    {
                        "letters": list(p.letters),
                        "predicate": format_automaton(p.automaton),
                    }
                    for p in link.disjuncts
                ],
            }
            for link in report.skeleton
        ]
    payload = {
        "verdict": report.verdict,
        "d": report.d,
        "k": report.k,
        "chain": [format_automaton(c) for c in report.chain] if report.chain else None,
        "residual": _automaton_arg(report.residual),
        "witness": format_word(alphabet, report.witness) if report.witness is not None else None,
        "epsilon_note": report.epsilon_note,
        "skeleton": skeleton,
    }
    return json.dumps(payload, indent=2) + "\n"


def cmd_ceiling(args) -> int:
    from .ceiling import pi1_ceiling_language

    lang = _load_automaton(args.automaton)
    result = pi1_ceiling_language(lang, args.vars)
    _write_output(format_automaton(result), args.out)
    _write_dot(result, args.dot)
    return EXIT_OK


def cmd_decompose(args) -> int:
    lang = _load_automaton(args.automaton)
    report = decompose(lang, args.vars, args.terms)
    if report.success:
        sizes = " ".join(str(c.n_states) for c in report.chain)
        print(f"success: chain of {report.k} links (d={report.d}); link states: {sizes}")
    else:
        witness = format_word(lang.alphabet, report.witness)
        print(
            f"failure: residual has {report.residual.n_states} states; "
            f"witness: '{witness}'; epsilon_note: {str(report.epsilon_note).lower()}"
        )
    if args.json:
        Path(args.json).write_text(_report_json(report, lang.alphabet), encoding="utf-8")
    return EXIT_OK if report.success else EXIT_NEGATIVE


def cmd_search(args) -> int:
    lang = _load_automaton(args.automaton)
    result = search(lang, args.max_vars, args.max_terms)
    if result.found:
        d, k = result.found
        print(f"found: d={d} k={k}")
    else:
        print("exhausted")
    for (d, k) in sorted(result.residual_states, key=lambda dk: (dk[1], dk[0])):
        print(f"  d={d} k={k}: residual states {result.residual_states[(d, k)]}")
    for (d, k) in sorted(result.errors, key=lambda dk: (dk[1], dk[0])):
        print(f"  d={d} k={k}: resource limit")
    if args.json:
        payload = {
            "found": list(result.found) if result.found else None,
            "cells": [
                {
                    "d": d,
                    "k": k,
                    "residual_states": result.residual_states.get((d, k)),
                    "error": result.errors.get((d, k)),
                }
                for k in range(1, args.max_terms + 1)
                for d in range(1, args.max_vars + 1)
            ],
        }
        Path(args.json).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK if result.found else EXIT_NEGATIVE


def cmd_hausdorff(args) -> int:
    table = parse_table(_read(args.table))
    chain = normal_form(table)
    for i, link in enumerate(chain.links, start=1):
        rows = " ".join(link.strings()) if link.members else "(empty)"
        print(f"link {i}: {rows}")
        print(f"  dnf: {render_dnf(link)}")
    return EXIT_OK


def cmd_compile(args) -> int:
    sentence = load_sentence(_read(args.sentence))
    result = compile_sentence(sentence)
    _write_output(format_automaton(result), args.out)
    _write_dot(result, args.dot)
    return EXIT_OK


def cmd_eval(args) -> int:
    sentence = load_sentence(_read(args.sentence))
    word = parse_word(sentence.alphabet, args.word)
    value = eval_sentence(sentence, word)
    print("true" if value else "false")
    return EXIT_OK if value else EXIT_NEGATIVE


def cmd_equiv(args) -> int:
    lhs = _load_language(args.lhs)
    rhs = _load_language(args.rhs)
    equal, witness = decide("equiv", lhs, rhs)
    if equal:
        print("equivalent")
        return EXIT_OK
    print(f"not equivalent; witness: '{format_word(lhs.alphabet, witness)}'")
    return EXIT_NEGATIVE


def cmd_dot(args) -> int:
    lang = _load_automaton(args.automaton)
    _write_output(to_dot(lang), args.out)
    return EXIT_OK


def cmd_table(args) -> int:  # pragma: no cover - small debugging helper
    table = parse_table(_read(args.table))
    _write_output(format_table(table), args.out)
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diffchain",
        description=(
            "Decide whether a regular language is an iterated difference of "
            "universal first-order sentences with regular numerical predicates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ceiling", help="universal closure of the d-ceiling of a language")
    p.add_argument("automaton")
    p.add_argument("--vars", type=_positive, required=True, help="block length d")
    p.add_argument("--out", help="write the automaton here instead of stdout")
    p.add_argument("--dot", help="also write a DOT rendering here")
    p.set_defaults(fn=cmd_ceiling)

    p = sub.add_parser("decompose", help="decide the (d, k) decomposition and report")
    p.add_argument("automaton")
    p.add_argument("--vars", type=_positive, required=True, help="block length d")
    p.add_argument("--terms", type=_positive, required=True, help="number of difference terms k")
    p.add_argument("--json", help="write the machine-readable report here")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("search", help="sweep (d, k) up to bounds, fewest terms first")
    p.add_argument("automaton")
    p.add_argument("--max-vars", type=_positive, required=True)
    p.add_argument("--max-terms", type=_positive, required=True)
    p.add_argument("--json", help="write the sweep table here")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("hausdorff", help="difference-chain normal form of a truth table")
    p.add_argument("table")
    p.set_defaults(fn=cmd_hausdorff)

    p = sub.add_parser("compile", help="compile a sentence file to an automaton")
    p.add_argument("sentence")
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("eval", help="evaluate a sentence on a word")
    p.add_argument("sentence")
    p.add_argument("word", help="the word; '' is the empty word")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("equiv", help="language equivalence of two automaton/sentence files")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("dot", help="DOT rendering of an automaton")
    p.add_argument("automaton")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_dot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (
        FormatError,
        ParseError,
        NonRegularAtomError,
        ClassificationError,
        UnknownSymbolError,
        ValueError,
        OSError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
