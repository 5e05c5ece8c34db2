"""Exact rationals for register contents, and eventually periodic bit sets.

Registers hold ``fractions.Fraction`` values, re-exported as ``Rational``.
Every command applies a rational function and every shipped input is
eventually periodic, so runs never leave the rationals.

A ``BitSet`` is an eventually periodic subset of the naturals given by a
preperiod and a nonempty period, kept canonical (minimal period, minimal
preperiod).  It doubles as a real number input through the embedding
i -> 2^-(i+1), which keeps all values in [0, 1).  Sets whose tail is all
ones share their real value with the terminating expansion of the same
number (the usual dual binary expansions); ``from_real`` always returns
the terminating representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction


class DivisionByZero(ZeroDivisionError):
    """Division by zero inside a machine step; the run becomes undefined."""


def add(a: Rational, b: Rational) -> Rational:
    return a + b


def sub(a: Rational, b: Rational) -> Rational:
    return a - b


def mul(a: Rational, b: Rational) -> Rational:
    return a * b


def div(a: Rational, b: Rational) -> Rational:
    if b == 0:
        raise DivisionByZero("division by zero")
    return a / b


def format_rational(q: Rational) -> str:
    """Always "num/den", e.g. "0/1" and "-3/4"."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Rational:
    return Fraction(text.strip())


def _minimize_period(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for p in range(1, n + 1):
        if n % p == 0 and period == period[:p] * (n // p):
            return period[:p]
    return period


@dataclass(frozen=True)
class BitSet:
    """Eventually periodic subset of the naturals (canonical form)."""

    pre: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("period must be nonempty")
        if any(b not in (0, 1) for b in self.pre + self.period):
            raise ValueError("bits must be 0 or 1")
        period = _minimize_period(self.period)
        pre = self.pre
        # Shift the boundary left while the last preperiod bit matches the
        # last period bit; this makes the preperiod minimal.
        while pre and pre[-1] == period[-1]:
            pre = pre[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @staticmethod
    def from_support(support) -> "BitSet":
        """Finite set from an iterable of naturals."""
        elems = sorted(set(support))
        if any(i < 0 for i in elems):
            raise ValueError("naturals only")
        if not elems:
            return BitSet()
        bits = [0] * (elems[-1] + 1)
        for i in elems:
            bits[i] = 1
        return BitSet(tuple(bits), (0,))

    def membership(self, i: int) -> bool:
        if i < 0:
            raise ValueError("naturals only")
        if i < len(self.pre):
            return self.pre[i] == 1
        return self.period[(i - len(self.pre)) % len(self.period)] == 1

    __contains__ = membership

    def is_finite(self) -> bool:
        return self.period == (0,)

    def support(self) -> list[int]:
        if not self.is_finite():
            raise ValueError("infinite set has no finite support")
        return [i for i, b in enumerate(self.pre) if b]

    def to_real(self) -> Rational:
        """Sum of 2^-(i+1) over the members; exact, in [0, 1)."""
        m = len(self.pre)
        value = Fraction(0)
        for i, b in enumerate(self.pre):
            if b:
                value += Fraction(1, 2 ** (i + 1))
        p = len(self.period)
        packed = 0
        for b in self.period:
            packed = packed * 2 + b
        if packed:
            value += Fraction(packed, 2**p - 1) / 2**m
        return value

    @staticmethod
    def from_real(q: Rational) -> "BitSet":
        """Binary expansion by long division with cycle detection.

        Requires 0 <= q < 1.  Dyadic rationals get the terminating
        expansion.
        """
        if not 0 <= q < 1:
            raise ValueError("value must satisfy 0 <= q < 1")
        seen: dict[Rational, int] = {}
        bits: list[int] = []
        state = Fraction(q)
        while state not in seen:
            seen[state] = len(bits)
            state *= 2
            bit = 1 if state >= 1 else 0
            bits.append(bit)
            state -= bit
        start = seen[state]
        return BitSet(tuple(bits[:start]), tuple(bits[start:]))

    def to_json(self) -> dict:
        return {
            "pre": "".join(map(str, self.pre)),
            "period": "".join(map(str, self.period)),
        }

    @staticmethod
    def from_json(obj: dict) -> "BitSet":
        return BitSet(
            tuple(int(c) for c in obj.get("pre", "")),
            tuple(int(c) for c in obj["period"]),
        )

    def to_literal(self) -> str:
        """CLI literal form "pre:0101;per:10"."""
        pre = "".join(map(str, self.pre))
        per = "".join(map(str, self.period))
        return f"pre:{pre};per:{per}"

    @staticmethod
    def from_literal(text: str) -> "BitSet":
        pre_part, _, per_part = text.partition(";")
        if not pre_part.startswith("pre:") or not per_part.startswith("per:"):
            raise ValueError(f"bad bitset literal {text!r}")
        pre = tuple(int(c) for c in pre_part[4:])
        per = tuple(int(c) for c in per_part[4:])
        return BitSet(pre, per if per else (0,))


def bitset_to_real(x: BitSet) -> Rational:
    return x.to_real()


def real_to_bitset(q: Rational) -> BitSet:
    return BitSet.from_real(q)


def membership(x: BitSet, i: int) -> bool:
    return x.membership(i)
