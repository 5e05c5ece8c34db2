"""Command-line front end.

Machine results are printed as compact JSON with sorted keys, so
identical invocations produce byte-identical stdout.  Exit codes: 0 for
any determined outcome (halted, certified non-halting, undefined), 2
for unknown, 1 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import asm, coding, generic
from .corpus import standard_corpus
from .harness import Trial, bounded_halting_set, check_recognizer
from .machine import Budget, run
from .numeric import BitSet
from .ordinal import render
from .programs import TMTable, bitscan_recognizer, clocker, compile_tm, const_recognizer


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _load_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_program(path: str):
    return asm.parse(_load_text(path))


def _parse_input(text: str) -> Fraction:
    if text.startswith("pre:"):
        return BitSet.from_literal(text).to_real()
    return Fraction(text)


def _budget(args) -> Budget:
    return Budget(
        max_successor_steps=args.budget_steps,
        max_limit_events=args.budget_limits,
    )


def _add_budget_flags(sub) -> None:
    sub.add_argument("--budget-steps", type=int, default=200_000)
    sub.add_argument("--budget-limits", type=int, default=1_000)


def _verdict_exit(verdict) -> int:
    return 2 if verdict.kind == "unknown" else 0


def _cmd_run(args) -> int:
    program = _load_program(args.path)
    result = run(
        program,
        _parse_input(args.input),
        budget=_budget(args),
        record_trace=args.trace is not None,
    )
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for event in result.trace:
                fh.write(json.dumps(event.to_json(), sort_keys=True) + "\n")
    _emit(result.verdict.to_json())
    return _verdict_exit(result.verdict)


def _cmd_trace(args) -> int:
    program = _load_program(args.path)
    result = run(program, _parse_input(args.input), budget=_budget(args), record_trace=True)
    for event in result.trace:
        print(json.dumps(event.to_json(), sort_keys=True, separators=(",", ":")))
    return _verdict_exit(result.verdict)


def _cmd_clock(args) -> int:
    program = _load_program(args.path)
    verdict = run(program, _parse_input(args.input), budget=_budget(args)).verdict
    if verdict.kind == "halted":
        print(render(verdict.time))
        return 0
    _emit(verdict.to_json())
    return _verdict_exit(verdict)


def _cmd_parse(args) -> int:
    program = _load_program(args.path)
    if args.json:
        _emit(
            {
                "text": asm.serialize(program),
                "lines": len(program),
                "nodes": program.node_count,
                "registers": program.register_count,
            }
        )
    else:
        text = asm.serialize(program)
        if text:
            print(text)
    return 0


def _cmd_gen(args) -> int:
    if args.kind == "clocker":
        program = clocker(int(args.arg))
    elif args.kind == "tm":
        table = TMTable.from_json(json.loads(_load_text(args.arg)))
        program = compile_tm(table)
    elif args.kind == "recognizer":
        if args.arg == "even_bits_zero":
            program = bitscan_recognizer(args.arg)
        else:
            program = const_recognizer(Fraction(args.arg))
    else:  # corpus entry by name
        program = standard_corpus()[args.arg]
    print(asm.serialize(program))
    return 0


def _cmd_code(args) -> int:
    code, mapping = coding.code_level_even_ordinals(args.level)
    _emit(
        {
            "level": args.level,
            "bits": code.bits.to_json(),
            "universe": list(code.universe),
            "elements": {str(i): str(mapping[i]) for i in sorted(mapping)},
        }
    )
    return 0


def _cmd_decode(args) -> int:
    bits = BitSet.from_literal(args.code)
    universe = tuple(range(args.size))
    try:
        ranks = coding.decode_order(coding.StructureCode(bits, universe))
    except coding.NotAWellOrder as exc:
        print(f"not a well-order code: {exc}", file=sys.stderr)
        return 1
    _emit({"ranks": ranks})
    return 0


def _cmd_truth(args) -> int:
    code, _ = coding.code_level_even_ordinals(args.level)
    structure, positions = code.to_structure()
    position_of = {idx: p for p, idx in enumerate(positions)}
    formula, names = coding.parse_formula(args.formula)
    assignment = {}
    if args.assign:
        for item in args.assign.split(","):
            name, _, value = item.partition("=")
            if name not in names:
                print(f"unknown variable {name!r}", file=sys.stderr)
                return 1
            assignment[names[name]] = position_of[int(value)]
    holds = coding.eval_formula(structure, formula, assignment)
    _emit({"holds": holds})
    return 0


def _cmd_identify(args) -> int:
    code, _ = coding.code_level_even_ordinals(args.level)
    index = coding.identify_natural(code, args.k)
    _emit({"index": index})
    return 0


def _cmd_generic(args) -> int:
    family = generic.family_from_json(json.loads(_load_text(args.family)))
    if args.action == "build":
        _emit({"generic": generic.build_generic(family, args.bits)})
        return 0
    if args.action == "encode":
        word = generic.encode(BitSet.from_literal(args.x), family)
        _emit({"word": word})
        return 0
    try:
        bits = generic.decode(args.word, family)
    except generic.Undetermined as exc:
        _emit({"undetermined_stage": exc.stage})
        return 2
    _emit({"bits": bits.to_json()})
    return 0


def _cmd_recognize(args) -> int:
    program = _load_program(args.program)
    target = BitSet.from_literal(args.target)
    candidates = tuple(
        BitSet.from_json(item) for item in json.loads(_load_text(args.candidates))
    )
    report = check_recognizer(Trial(program, target, candidates, _budget(args)))
    _emit(report.to_json())
    return 2 if report.status == "inconclusive" else 0


def _cmd_halting(args) -> int:
    indices = [int(x) for x in args.indices.split(",") if x]
    table = bounded_halting_set(indices, _budget(args))
    out = {}
    for i, entry in table.items():
        status, detail = entry
        if status == "halts":
            out[str(i)] = {"status": status, "time": render(detail)}
        else:
            out[str(i)] = {"status": status, "reason": detail}
    _emit(out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itbm",
        description="Virtual machine and toolkit for infinite time BSS computation",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("run", help="run a program and print the verdict")
    p.add_argument("path")
    p.add_argument("--input", default="0")
    p.add_argument("--trace", default=None, help="write a JSONL trace to this file")
    _add_budget_flags(p)
    p.set_defaults(handler=_cmd_run)

    p = subs.add_parser("trace", help="run and stream the trace as JSON lines")
    p.add_argument("path")
    p.add_argument("--input", default="0")
    _add_budget_flags(p)
    p.set_defaults(handler=_cmd_trace)

    p = subs.add_parser("clock", help="print the exact halting time")
    p.add_argument("path")
    p.add_argument("--input", default="0")
    _add_budget_flags(p)
    p.set_defaults(handler=_cmd_clock)

    p = subs.add_parser("parse", help="validate and canonicalize a program")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_parse)

    p = subs.add_parser("gen", help="emit a generated program")
    p.add_argument("kind", choices=("clocker", "tm", "recognizer", "corpus"))
    p.add_argument("arg", help="level, table file, rational/pattern, or corpus name")
    p.set_defaults(handler=_cmd_gen)

    p = subs.add_parser("code", help="canonical even-ordinal level code as JSON")
    p.add_argument("level", type=int)
    p.set_defaults(handler=_cmd_code)

    p = subs.add_parser("decode", help="decode an order code into ranks")
    p.add_argument("--code", required=True, help='bitset literal "pre:...;per:..."')
    p.add_argument("--size", type=int, required=True)
    p.set_defaults(handler=_cmd_decode)

    p = subs.add_parser("truth", help="evaluate a formula over a level code")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", default="", help='e.g. "x=0,y=2" (universe indices)')
    p.set_defaults(handler=_cmd_truth)

    p = subs.add_parser("identify", help="find the index coding a natural number")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=_cmd_identify)

    p = subs.add_parser("generic", help="forcing toys: build, encode, decode")
    p.add_argument("action", choices=("build", "encode", "decode"))
    p.add_argument("--family", required=True, help="JSON family description file")
    p.add_argument("--bits", type=int, default=16)
    p.add_argument("--x", default=None, help="bitset literal to encode")
    p.add_argument("--word", default=None, help="condition to decode")
    p.set_defaults(handler=_cmd_generic)

    p = subs.add_parser("recognize", help="run a recognizability trial")
    p.add_argument("--program", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--candidates", required=True, help="JSON list of bitset objects")
    _add_budget_flags(p)
    p.set_defaults(handler=_cmd_recognize)

    p = subs.add_parser("halting", help="bounded halting set over program indices")
    p.add_argument("--indices", required=True, help="comma-separated naturals")
    _add_budget_flags(p)
    p.set_defaults(handler=_cmd_halting)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except asm.ParseError as exc:
        path = getattr(args, "path", None) or getattr(args, "program", "<input>")
        print(f"{path}:{exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, generic.FuelExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
