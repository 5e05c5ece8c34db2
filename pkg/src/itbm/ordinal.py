"""Ordinals below w^w in Cantor normal form.

The machine clock lives here.  An ordinal is a finite sum of terms
w^e * c with strictly decreasing natural exponents and positive natural
coefficients; the empty sum is 0.  Every halting time of a program with
n branch nodes is below w^(n+1), so exponents never need to exceed a
natural number and all arithmetic stays exact.

Comparison is plain lexicographic comparison of the term tuples, which
agrees with the ordinal order for normal forms.  Addition absorbs the
low terms of the left argument, as ordinal addition does.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """An ordinal below w^w as a tuple of (exponent, coefficient) terms."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        prev = None
        for exp, coeff in self.terms:
            if exp < 0 or coeff < 1:
                raise ValueError(f"bad CNF term (w^{exp})*{coeff}")
            if prev is not None and exp >= prev:
                raise ValueError("CNF exponents must strictly decrease")
            prev = exp

    @staticmethod
    def from_int(n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return Ordinal(((0, n),)) if n else Ordinal()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def leading_exponent(self) -> int:
        """Exponent of the largest term; -1 for zero."""
        return self.terms[0][0] if self.terms else -1

    def is_limit(self) -> bool:
        """True for nonzero ordinals whose last term has exponent >= 1."""
        return bool(self.terms) and self.terms[-1][0] >= 1

    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0] == 0

    def finite_part(self) -> int:
        """Coefficient of the w^0 term (0 if absent)."""
        if self.terms and self.terms[-1][0] == 0:
            return self.terms[-1][1]
        return 0

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __lt__(self, other: "Ordinal") -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms < other.terms

    def __add__(self, other: "Ordinal | int") -> "Ordinal":
        if isinstance(other, int):
            other = Ordinal.from_int(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        k = other.terms[0][0]
        kept = [t for t in self.terms if t[0] > k]
        if self.terms and any(e == k for e, _ in self.terms):
            c = next(c for e, c in self.terms if e == k)
            merged = (k, c + other.terms[0][1])
            return Ordinal(tuple(kept) + (merged,) + other.terms[1:])
        return Ordinal(tuple(kept) + other.terms)

    def succ(self) -> "Ordinal":
        return self + 1

    def __str__(self) -> str:
        return render(self)

    __repr__ = __str__


ZERO = Ordinal()
ONE = Ordinal.from_int(1)
OMEGA = Ordinal(((1, 1),))


def omega_pow(k: int) -> Ordinal:
    """w^k; w^0 is 1."""
    if k < 0:
        raise ValueError("exponent must be a natural number")
    return Ordinal(((k, 1),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """-1, 0 or 1 for less, equal, greater."""
    if a.terms < b.terms:
        return -1
    return 0 if a.terms == b.terms else 1


def round_up_to_limit(t: Ordinal, level: int) -> Ordinal:
    """The least positive multiple of w^level strictly greater than t.

    A limit of level k happening after stage t lands exactly here: the
    head part of t with exponents >= level, plus one more w^level.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    head = tuple(term for term in t.terms if term[0] >= level)
    return Ordinal(head) + omega_pow(level)


def render(t: Ordinal) -> str:
    """Text form like "w^2*3 + w + 5"; coefficient 1 is elided."""
    if t.is_zero:
        return "0"
    parts = []
    for exp, coeff in t.terms:
        if exp == 0:
            parts.append(str(coeff))
        else:
            base = "w" if exp == 1 else f"w^{exp}"
            parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return " + ".join(parts)


def parse(text: str) -> Ordinal:
    """Inverse of render; also accepts explicit "*1" coefficients."""
    s = text.strip()
    if s == "0":
        return Ordinal()
    terms = []
    for chunk in s.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"empty term in ordinal literal {text!r}")
        if chunk[0] == "w":
            rest = chunk[1:]
            exp = 1
            if rest.startswith("^"):
                rest = rest[1:]
                digits = ""
                while rest and rest[0].isdigit():
                    digits += rest[0]
                    rest = rest[1:]
                if not digits:
                    raise ValueError(f"missing exponent in {chunk!r}")
                exp = int(digits)
            if rest.startswith("*"):
                coeff = int(rest[1:])
            elif rest == "":
                coeff = 1
            else:
                raise ValueError(f"bad ordinal term {chunk!r}")
        else:
            exp = 0
            coeff = int(chunk)
        terms.append((exp, coeff))
    return Ordinal(tuple(terms))
