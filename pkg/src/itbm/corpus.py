"""The shipped program corpus: every generator output plus hand examples.

Used by the round-trip and halting-bound checks; anything added here is
automatically swept by those tests.
"""

from __future__ import annotations

from fractions import Fraction

from .asm import parse
from .machine import Program
from .programs import TMTable, bitscan_recognizer, clocker, compile_tm, const_recognizer

TM_IMMEDIATE = TMTable(1, ())
TM_TWO_STEPS = TMTable(2, ((0, 0, 1, 1, "R"),))
TM_MOVE_RIGHT = TMTable(1, ((0, 0, 0, 0, "R"),))
TM_BOUNCER = TMTable(2, ((0, 0, 1, 0, "R"), (1, 0, 0, 0, "R")))
TM_ONES_WRITER = TMTable(1, ((0, 0, 0, 1, "R"),))
TM_ZIGZAG = TMTable(2, ((0, 0, 1, 0, "R"), (1, 0, 0, 0, "L")))
TM_THREE_COUNT = TMTable(
    3, ((0, 0, 1, 1, "R"), (1, 0, 2, 1, "R"), (2, 1, 2, 1, "R"))
)

_HAND_SOURCES = {
    "empty": "",
    "increment": "0: R0 := (R0 + 1)/(1)",
    "square": "0: R0 := (R0^2)/(1)",
    "affine_pair": "0: R1 := (2*R0 + 1)/(3)\n1: R0 := (R0*R1)/(1)",
    "geometric_exit": (
        "0: R0 := (R0 + 2)/(2)\n"
        "1: IF (2 - R0)/(1) > 0 GOTO 0 ELSE 2"
    ),
    "divergent_counter": (
        "0: R0 := (R0 + 1)/(1)\n"
        "1: IF (1)/(1) > 0 GOTO 0 ELSE 0"
    ),
    "stationary_loop": "0: IF (1)/(1) > 0 GOTO 0 ELSE 0",
    "countdown": (
        "0: R0 := (R0 - 1)/(1)\n"
        "1: IF (R0)/(1) > 0 GOTO 0 ELSE 2"
    ),
    "finite_alternator": (
        "0: R1 := (1 - R1)/(1)\n"
        "1: IF (R1)/(1) > 0 GOTO 0 ELSE 2"
    ),
    "divergent_alternator": (
        "0: R1 := (1 - R1)/(1)\n"
        "1: IF (1)/(1) > 0 GOTO 0 ELSE 0"
    ),
    "halving_loop": (
        "0: R1 := (1)/(1)\n"
        "1: R1 := (R1)/(2)\n"
        "2: IF (R1)/(1) > 0 GOTO 1 ELSE 3"
    ),
}


def standard_corpus() -> dict[str, Program]:
    corpus: dict[str, Program] = {}
    for k in (1, 2, 3):
        corpus[f"clocker_{k}"] = clocker(k)
    for name, q in (
        ("const_rec_zero", 0),
        ("const_rec_half", Fraction(1, 2)),
        ("const_rec_third", Fraction(1, 3)),
        ("const_rec_two_sevenths", Fraction(2, 7)),
    ):
        corpus[name] = const_recognizer(q)
    corpus["bitscan_even"] = bitscan_recognizer()
    for name, table in (
        ("tm_immediate", TM_IMMEDIATE),
        ("tm_two_steps", TM_TWO_STEPS),
        ("tm_move_right", TM_MOVE_RIGHT),
        ("tm_bouncer", TM_BOUNCER),
        ("tm_ones_writer", TM_ONES_WRITER),
        ("tm_zigzag", TM_ZIGZAG),
        ("tm_three_count", TM_THREE_COUNT),
    ):
        corpus[name] = compile_tm(table)
    for name, source in _HAND_SOURCES.items():
        corpus[name] = parse(source)
    return corpus
