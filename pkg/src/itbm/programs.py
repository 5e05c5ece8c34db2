"""Generated programs exercising the transfinite semantics.

Clockers halt with leading clock term w^k by nesting flag-halving loops;
recognizers compare the input against a constant in finite time or scan
its binary expansion through a limit stage; and the table compiler turns
a Turing machine into a program that decides its halting on blank tape
by running it through one limit stage.

All generators keep loop bodies inside the certified class: every
register either is untouched, contracts geometrically, or is driven by
the halving scale, so the limit resolver never answers unknown on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .machine import Assign, Node, Program
from .rfn import Polynomial, RationalFn


def _lin(const=0, coeffs: dict[int, int] | None = None) -> Polynomial:
    p = Polynomial.const(const)
    for reg, c in (coeffs or {}).items():
        p = p + Polynomial.var(reg).scale(c)
    return p


def _fn(num: Polynomial, den: int = 1) -> RationalFn:
    return RationalFn(num, Polynomial.const(den))


class _Builder:
    """Tiny label-resolving assembler for the generators."""

    def __init__(self) -> None:
        self.items: list = []
        self.labels: dict[str, int] = {}
        self._pending: list[str] = []

    def mark(self, name: str) -> None:
        self._pending.append(name)

    def _flush(self) -> None:
        for name in self._pending:
            if name in self.labels:
                raise ValueError(f"duplicate label {name}")
            self.labels[name] = len(self.items)
        self._pending.clear()

    def assign(self, target: int, num: Polynomial, den: int = 1) -> None:
        self._flush()
        self.items.append(Assign(target, _fn(num, den)))

    def branch(self, test: Polynomial, pos, neg, den: int = 1) -> None:
        self._flush()
        self.items.append((Node, _fn(test, den), pos, neg))

    def goto(self, label) -> None:
        self.branch(Polynomial.const(1), label, label)

    def build(self) -> Program:
        self._flush()
        end = len(self.items)

        def resolve(ref) -> int:
            if isinstance(ref, int):
                return ref
            if ref == "END":
                return end
            return self.labels[ref]

        commands = []
        for item in self.items:
            if isinstance(item, Assign):
                commands.append(item)
            else:
                _, fn, pos, neg = item
                commands.append(Node(fn, resolve(pos), resolve(neg)))
        return Program(tuple(commands))


def clocker(k: int) -> Program:
    """Halts (input 0) at a time with leading clock term w^k.

    Level 1 is the flag-halving loop; each further level re-arms the one
    below it under its own halving flag.  clocker(1) halts at exactly
    w + 2.
    """
    if k not in (1, 2, 3):
        raise ValueError("clockers are generated for k in {1, 2, 3}")
    b = _Builder()
    for i in range(k):
        b.assign(k - i, Polynomial.const(1))  # flags R_k .. R_1
    b.assign(1, _lin(coeffs={1: 1}), den=2)  # line k: R1 := R1/2
    b.branch(_lin(coeffs={1: 1}), k, k + 2)  # loop on R1 > 0
    for level in range(2, k + 1):
        b.assign(level, _lin(coeffs={level: 1}), den=2)
        next_line = k + 2 * level
        b.branch(_lin(coeffs={level: 1}), k - level + 1, next_line)
    return b.build()


def const_recognizer(q) -> Program:
    """Outputs 1 exactly on the rational q, 0 elsewhere; finite time."""
    q = Fraction(q)
    b = _Builder()
    above = _lin(-q.numerator, {0: q.denominator})  # den*y - num
    below = _lin(q.numerator, {0: -q.denominator})
    b.assign(1, Polynomial.const(0))
    b.branch(above, "differ", 2)
    b.branch(below, "differ", 3)
    b.assign(1, Polynomial.const(1))
    b.mark("differ")
    b.assign(0, _lin(coeffs={1: 1}))
    return b.build()


def bitscan_recognizer(pattern: str = "even_bits_zero") -> Program:
    """Outputs 1 iff no even-position bit of the input's expansion is set.

    Registers: R1 the remaining tail value, R2 the scale 2^-k, R3 the
    violation flag.  The bit at the current position is set exactly when
    the tail reaches half the scale (ties read as 1, matching the
    expansion produced for dyadic inputs).  Tail and scale vanish at the
    limit and the flag is eventually constant, so the loop certifies;
    the gate on the scale sits at the least body line and routes the
    post-limit continuation to the verdict on the flag.
    """
    if pattern != "even_bits_zero":
        raise ValueError(f"unknown bit pattern {pattern!r}")
    b = _Builder()
    tail, scale, flag = 1, 2, 3
    bit_is_zero = _lin(coeffs={scale: 1, tail: -2})  # s - 2A > 0  <=>  bit 0
    b.assign(tail, _lin(coeffs={0: 1}))
    b.assign(scale, Polynomial.const(1))
    b.assign(flag, Polynomial.const(0))
    b.mark("gate")
    b.branch(_lin(coeffs={scale: 1}), "even", "verdict")
    b.mark("even")
    b.branch(bit_is_zero, "even_done", "violate")
    b.mark("violate")
    b.assign(flag, Polynomial.const(1))
    b.assign(tail, _lin(coeffs={tail: 2, scale: -1}), den=2)  # A -= s/2
    b.mark("even_done")
    b.assign(scale, _lin(coeffs={scale: 1}), den=2)
    b.branch(bit_is_zero, "odd_done", "odd_one")
    b.mark("odd_one")
    b.assign(tail, _lin(coeffs={tail: 2, scale: -1}), den=2)
    b.mark("odd_done")
    b.assign(scale, _lin(coeffs={scale: 1}), den=2)
    b.goto("gate")
    b.mark("verdict")
    b.branch(_lin(-1, {flag: 2}), "reject", "accept")  # V > 1/2
    b.mark("accept")
    b.assign(0, Polynomial.const(1))
    b.goto("END")
    b.mark("reject")
    b.assign(0, Polynomial.const(0))
    return b.build()


# --------------------------------------------------------------------------
# Turing machine compilation


class CompileError(Exception):
    pass


@dataclass(frozen=True)
class TMTable:
    """Deterministic table over alphabet {0,1}; a missing rule halts.

    Rules are (state, read, next_state, write, move) with move L or R;
    state 0 is initial and the tape starts blank.
    """

    states: int
    rules: tuple[tuple[int, int, int, int, str], ...]

    def __post_init__(self) -> None:
        if self.states < 1:
            raise CompileError("at least one state")
        seen = set()
        for q, sym, q2, w, move in self.rules:
            if not (0 <= q < self.states and 0 <= q2 < self.states):
                raise CompileError(f"state out of range in rule {(q, sym)}")
            if sym not in (0, 1) or w not in (0, 1):
                raise CompileError("alphabet is {0,1}")
            if move not in ("L", "R"):
                raise CompileError("moves are L and R")
            if (q, sym) in seen:
                raise CompileError(f"duplicate rule for {(q, sym)}")
            seen.add((q, sym))
        object.__setattr__(self, "rules", tuple(sorted(self.rules)))

    def transition(self, q: int, sym: int):
        for rq, rsym, q2, w, move in self.rules:
            if rq == q and rsym == sym:
                return q2, w, move
        return None

    def to_json(self) -> dict:
        return {
            "states": self.states,
            "rules": [list(r) for r in self.rules],
        }

    @staticmethod
    def from_json(obj: dict) -> "TMTable":
        try:
            rules = tuple(
                (int(q), int(s), int(q2), int(w), str(m))
                for q, s, q2, w, m in obj["rules"]
            )
            return TMTable(int(obj["states"]), rules)
        except (KeyError, TypeError, ValueError) as exc:
            raise CompileError(f"malformed table: {exc}") from exc


def compile_tm(tm: TMTable) -> Program:
    """Program deciding whether the table halts on blank tape.

    The configuration is carried in registers scaled by a halving factor:
    left tape, right tape (head cell first), and state are all multiples
    of the scale, so every register converges at the limit.  A halt exits
    with output 1 after finitely many steps; otherwise the scale and flag
    vanish at the limit and the gate routes to output 0.

    The input register is read-only oracle space: the table alphabet has
    no oracle queries here, so it is simply preserved until the output
    overwrites it.
    """
    L, R, Q, S, F = 1, 2, 3, 4, 5
    b = _Builder()
    b.assign(S, Polynomial.const(1))
    b.assign(F, Polynomial.const(1))
    b.mark("gate")
    b.branch(_lin(coeffs={F: 1}), "work", "fail")
    b.mark("work")
    b.assign(F, _lin(coeffs={F: 1}), den=2)
    for q in range(tm.states - 1):
        b.mark(f"chain{q}")
        taken = f"chain{q + 1}" if q + 1 < tm.states - 1 else f"state{tm.states - 1}"
        b.branch(_lin(coeffs={Q: 2, S: -(2 * q + 1)}), taken, f"state{q}")
    for q in range(tm.states):
        b.mark(f"state{q}")
        b.branch(_lin(coeffs={S: 1, R: -2}), f"case{q}_0", f"case{q}_1")
        for bit in (0, 1):
            b.mark(f"case{q}_{bit}")
            trans = tm.transition(q, bit)
            if trans is None:
                b.assign(F, Polynomial.const(1))
                b.goto("success")
                continue
            q2, w, move = trans
            if move == "R":
                b.assign(L, _lin(coeffs={L: 1, S: w}), den=4)
                b.assign(R, _lin(coeffs={R: 2, S: -bit}), den=2)
                b.assign(Q, _lin(coeffs={S: q2}), den=2)
                b.assign(S, _lin(coeffs={S: 1}), den=2)
                b.goto("gate")
            else:
                b.branch(_lin(coeffs={S: 1, L: -2}), f"case{q}_{bit}L0", f"case{q}_{bit}L1")
                for c in (0, 1):
                    b.mark(f"case{q}_{bit}L{c}")
                    b.assign(R, _lin(coeffs={R: 2, S: 2 * c + w - bit}), den=8)
                    b.assign(L, _lin(coeffs={L: 2, S: -c}), den=2)
                    b.assign(Q, _lin(coeffs={S: q2}), den=2)
                    b.assign(S, _lin(coeffs={S: 1}), den=2)
                    b.goto("gate")
    b.mark("fail")
    b.assign(0, Polynomial.const(0))
    b.goto("END")
    b.mark("success")
    b.assign(0, Polynomial.const(1))
    return b.build()
