from fractions import Fraction

import pytest

from itbm import asm
from itbm.machine import (
    Budget,
    NonHaltingError,
    Program,
    Snapshot,
    clock,
    detect_cycle,
    resolve_limit,
    run,
    step,
)
from itbm.numeric import DivisionByZero
from itbm.ordinal import OMEGA, ZERO, Ordinal, omega_pow, render
from itbm.rfn import Polynomial

F = Fraction


def prog(text: str) -> Program:
    return asm.parse(text)


OMEGA_LOOP = prog(
    "0: R1 := (1)/(1)\n"
    "1: R1 := (R1)/(2)\n"
    "2: IF (R1)/(1) > 0 GOTO 1 ELSE 3"
)
DIVERGENT = prog("0: R0 := (R0 + 1)/(1)\n1: IF (1)/(1) > 0 GOTO 0 ELSE 0")
GEOMETRIC_EXIT = prog(
    "0: R0 := (R0 + 2)/(2)\n1: IF (2 - R0)/(1) > 0 GOTO 0 ELSE 2"
)


def test_step_assign():
    p = prog("0: R0 := (R0 + 1)/(1)")
    s = Snapshot(ZERO, 0, (F(1, 3),))
    out = step(p, s)
    assert out == Snapshot(Ordinal.from_int(1), 1, (F(4, 3),))


def test_step_node_zero_is_not_positive():
    p = prog("0: IF (R0)/(1) > 0 GOTO 0 ELSE 1")
    out = step(p, Snapshot(ZERO, 0, (F(0),)))
    assert out.line == 1


def test_empty_program_halts_immediately():
    v = run(Program(()), F(1, 3)).verdict
    assert v.kind == "halted" and v.output == F(1, 3) and v.time == ZERO


def test_omega_loop_halts_at_omega_plus_two():
    v = run(OMEGA_LOOP, 0).verdict
    assert v.kind == "halted"
    assert v.output == 0
    assert render(v.time) == "w + 2"


def test_divergent_counter_undefined_at_omega():
    v = run(DIVERGENT, 0).verdict
    assert v.kind == "undefined"
    assert v.reason == "register_divergence"
    assert v.time == OMEGA


def test_geometric_limit_is_exactly_two():
    v = run(GEOMETRIC_EXIT, 0).verdict
    assert v.kind == "halted"
    assert v.output == F(2)
    assert render(v.time) == "w + 2"


def test_division_by_zero_is_undefined():
    p = prog("0: R0 := (1)/(R0)")
    v = run(p, 0).verdict
    assert v.kind == "undefined" and v.reason == "division_by_zero"
    assert v.time == ZERO


def test_stationary_cycle_certified():
    p = prog("0: IF (1)/(1) > 0 GOTO 0 ELSE 0")
    v = run(p, 0).verdict
    assert v.kind == "nonhalting" and v.reason == "stationary_cycle"
    assert v.time == OMEGA


def test_stationary_after_register_settles():
    p = prog("0: R0 := (1)/(1)\n1: IF (1)/(1) > 0 GOTO 0 ELSE 0")
    v = run(p, 5).verdict
    assert v.kind == "nonhalting" and v.reason == "stationary_cycle"


def test_unresolvable_limit_reported():
    # squaring is outside the affine class
    p = prog("0: R0 := (R0^2)/(1)\n1: IF (1)/(1) > 0 GOTO 0 ELSE 0")
    v = run(p, F(1, 2)).verdict
    assert v.kind == "unknown" and v.reason == "unresolvable_limit"


def test_step_budget_exhaustion():
    p = prog(
        "0: R0 := (R0 - 1)/(1)\n1: IF (R0)/(1) > 0 GOTO 0 ELSE 2"
    )
    v = run(p, 10_000, Budget(max_successor_steps=50)).verdict
    assert v.kind == "unknown" and v.reason == "step_budget"
    ok = run(p, 10_000, Budget(max_successor_steps=100_000)).verdict
    assert ok.kind == "halted"


def test_determinism():
    a = run(OMEGA_LOOP, 0, record_trace=True)
    b = run(OMEGA_LOOP, 0, record_trace=True)
    assert a.verdict == b.verdict
    assert a.trace == b.trace


def test_trace_time_strictly_monotone():
    result = run(OMEGA_LOOP, 0, record_trace=True)
    times = [e.time for e in result.trace if e.event in ("step", "limit")]
    assert all(s < t for s, t in zip(times, times[1:]))


def test_trace_limit_event_records_liminf_line():
    result = run(OMEGA_LOOP, 0, record_trace=True)
    limits = [e for e in result.trace if e.event == "limit"]
    assert len(limits) == 1
    assert limits[0].line == 1  # min of the loop body {1, 2}
    assert limits[0].time == OMEGA
    assert limits[0].registers[1] == 0


def test_trace_json_schema():
    result = run(OMEGA_LOOP, 0, record_trace=True)
    for event in result.trace:
        obj = event.to_json()
        assert set(obj) == {"t", "line", "regs", "event"}
        assert obj["event"] in ("step", "limit", "verdict")
        assert all("/" in r for r in obj["regs"])


def test_successor_only_equivalence():
    # node-free programs agree with plain finite evaluation
    p = prog("0: R1 := (R0 + 1)/(2)\n1: R0 := (R0*R1)/(1)\n2: R0 := (R0 - 1)/(1)")
    v = run(p, F(3)).verdict
    snap = Snapshot(ZERO, 0, (F(3), F(0)))
    for _ in range(len(p)):
        snap = step(p, snap)
    assert v.kind == "halted"
    assert v.output == snap.registers[0]
    assert v.time == Ordinal.from_int(len(p))


def test_clock_and_bound():
    assert clock(Program(())) == ZERO
    assert clock(OMEGA_LOOP) == parse_ordinal("w + 2")
    assert clock(OMEGA_LOOP) < omega_pow(OMEGA_LOOP.node_count + 1)
    with pytest.raises(NonHaltingError):
        clock(DIVERGENT)


def parse_ordinal(text):
    from itbm.ordinal import parse

    return parse(text)


def test_program_validation():
    from itbm.machine import Assign, Node
    from itbm.rfn import RationalFn

    fn = RationalFn(Polynomial.const(1), Polynomial.const(1))
    with pytest.raises(ValueError):
        Program((Node(fn, 5, 0),))  # target beyond program length
    with pytest.raises(ValueError):
        Program((Assign(-1, fn),))


def test_register_count_and_node_count():
    assert OMEGA_LOOP.register_count == 2
    assert OMEGA_LOOP.node_count == 1
    assert Program(()).register_count == 1


# ---- public cycle API ------------------------------------------------------


def collect_heads(p: Program, input_value, head_line: int, limit: int = 40):
    snap = Snapshot(ZERO, 0, tuple([F(input_value)] + [F(0)] * (p.register_count - 1)))
    heads = []
    for _ in range(limit):
        if snap.line == head_line:
            heads.append(snap)
        if snap.line >= len(p):
            break
        snap = step(p, snap)
    return heads


def test_detect_cycle_halving_loop():
    heads = collect_heads(OMEGA_LOOP, 0, 1, 12)
    ev = detect_cycle(OMEGA_LOOP, heads)
    assert ev is not None
    assert ev.register_map == {1: Polynomial.var(1).scale(F(1, 2))}
    assert ev.sign_pattern == (True,)


def test_detect_cycle_counter():
    heads = collect_heads(DIVERGENT, 0, 0, 12)
    ev = detect_cycle(DIVERGENT, heads)
    assert ev.register_map == {0: Polynomial.var(0) + Polynomial.const(1)}


def test_detect_cycle_none_for_straight_line():
    p = prog("0: R0 := (R0 + 1)/(1)")
    assert detect_cycle(p, [Snapshot(ZERO, 0, (F(0),))]) is None


def test_resolve_limit_outcomes():
    heads = collect_heads(OMEGA_LOOP, 0, 1, 12)
    ev = detect_cycle(OMEGA_LOOP, heads)
    out = resolve_limit(OMEGA_LOOP, ev, heads[-1])
    assert out.kind == "limit"
    assert out.snapshot.registers[1] == 0
    assert out.snapshot.line == 1
    assert out.snapshot.time == OMEGA

    heads = collect_heads(DIVERGENT, 0, 0, 12)
    ev = detect_cycle(DIVERGENT, heads)
    out = resolve_limit(DIVERGENT, ev, heads[-1])
    assert out.kind == "diverged" and out.register == 0

    heads = collect_heads(GEOMETRIC_EXIT, 0, 0, 12)
    ev = detect_cycle(GEOMETRIC_EXIT, heads)
    out = resolve_limit(GEOMETRIC_EXIT, ev, heads[-1])
    assert out.kind == "limit"
    assert out.snapshot.registers[0] == 2
