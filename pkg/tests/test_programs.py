import random
from fractions import Fraction

import pytest

from itbm import asm
from itbm.corpus import (
    TM_BOUNCER,
    TM_IMMEDIATE,
    TM_MOVE_RIGHT,
    TM_TWO_STEPS,
    standard_corpus,
)
from itbm.machine import Budget, run
from itbm.numeric import BitSet
from itbm.ordinal import omega_pow, parse as parse_ordinal
from itbm.programs import (
    CompileError,
    TMTable,
    bitscan_recognizer,
    clocker,
    compile_tm,
    const_recognizer,
)

from helpers import all_tables, fueled_tm, random_table

F = Fraction


def test_clocker_golden_times():
    expected = {1: "w + 2", 2: "w^2 + w + 4", 3: "w^3 + w^2 + w + 6"}
    for k, want in expected.items():
        p = clocker(k)
        v = run(p, 0).verdict
        assert v.kind == "halted"
        assert v.time == parse_ordinal(want)
        assert v.time.leading_exponent == k
        assert v.time < omega_pow(p.node_count + 1)
    with pytest.raises(ValueError):
        clocker(4)


def test_const_recognizer():
    p = const_recognizer(F(1, 3))
    assert p.node_count == 2
    for value, want in ((F(1, 3), 1), (F(1, 2), 0), (F(0), 0), (F(2, 3), 0)):
        v = run(p, value).verdict
        assert v.kind == "halted" and v.output == want
        assert v.time.is_finite()


def test_bitscan_recognizer_cases():
    p = bitscan_recognizer()
    cases = [
        (BitSet(), 1),
        (BitSet((1,), (0,)), 0),  # bit 0 set
        (BitSet((), (0, 1)), 1),  # odd positions only
        (BitSet((0, 1), (0,)), 1),  # just bit 1
        (BitSet((0, 0, 1), (0,)), 0),  # bit 2
        (BitSet((), (1, 0)), 0),  # all even positions
    ]
    for x, want in cases:
        v = run(p, x.to_real()).verdict
        assert v.kind == "halted", (x, v)
        assert v.output == want, (x, v.output)
        if x.to_real() == 0:
            continue
    # the empty input passes through the limit stage
    v = run(p, 0).verdict
    assert v.time == parse_ordinal("w + 4")
    with pytest.raises(ValueError):
        bitscan_recognizer("odd_bits_zero")


def test_compile_tm_examples():
    v = run(compile_tm(TM_IMMEDIATE), 0).verdict
    assert v.kind == "halted" and v.output == 1 and v.time.is_finite()
    v = run(compile_tm(TM_TWO_STEPS), 0).verdict
    assert v.kind == "halted" and v.output == 1 and v.time.is_finite()
    for tm in (TM_MOVE_RIGHT, TM_BOUNCER):
        v = run(compile_tm(tm), 0).verdict
        assert v.kind == "halted" and v.output == 0
        assert not v.time.is_finite()  # w + c
        assert v.time.terms[0] == (1, 1)


def test_compile_tm_rejects_malformed():
    with pytest.raises(CompileError):
        TMTable(0, ())
    with pytest.raises(CompileError):
        TMTable(1, ((0, 0, 1, 0, "R"),))  # next state out of range
    with pytest.raises(CompileError):
        TMTable(1, ((0, 0, 0, 0, "R"), (0, 0, 0, 1, "L")))  # duplicate
    with pytest.raises(CompileError):
        TMTable.from_json({"states": 1, "rules": [[0, 0, 0]]})


def test_tm_table_json_round_trip():
    assert TMTable.from_json(TM_BOUNCER.to_json()) == TM_BOUNCER


def test_compile_tm_against_oracle_one_state_exhaustive():
    budget = Budget(100_000, 200)
    for tm in all_tables(1):
        status, _ = fueled_tm(tm)
        if status == "unsettled":
            continue
        v = run(compile_tm(tm), 0, budget).verdict
        assert v.kind == "halted", (tm.rules, v)
        assert v.output == (1 if status == "halts" else 0), tm.rules


def test_compile_tm_against_oracle_random_two_three_state():
    rng = random.Random(20240817)
    budget = Budget(100_000, 200)
    settled = 0
    for _ in range(250):
        tm = random_table(rng, rng.choice((2, 3)))
        status, _ = fueled_tm(tm)
        if status == "unsettled":
            continue
        settled += 1
        v = run(compile_tm(tm), 0, budget).verdict
        assert v.kind == "halted", (tm.rules, v)
        assert v.output == (1 if status == "halts" else 0), tm.rules
    assert settled > 100


def test_generated_programs_round_trip_and_bound():
    for name, p in standard_corpus().items():
        assert asm.parse(asm.serialize(p)) == p, name
        v = run(p, 0).verdict
        assert v.kind != "unknown", (name, v.reason)
        if v.kind == "halted":
            assert v.time < omega_pow(p.node_count + 1), name
