"""Multivariate polynomials and rational functions over register variables.

Commands apply rational functions to register contents.  A ``Polynomial``
maps monomials (sorted tuples of (register, exponent)) to Fraction
coefficients; a ``RationalFn`` is a pair of polynomials with a nonzero
denominator, canonicalized so that all coefficients are integers with
overall content 1 and the denominator's leading coefficient is positive.
Canonical form makes structural equality meaningful and lets the
assembler round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .numeric import DivisionByZero

Monomial = tuple[tuple[int, int], ...]


def _mono_key(mono: Monomial) -> tuple:
    # graded order: total degree first, then the exponent layout
    return (sum(e for _, e in mono), mono)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[int, int] = {}
    for var, e in a + b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial; terms sorted by graded order, no zero coefficients."""

    terms: tuple[tuple[Monomial, Fraction], ...] = ()

    @staticmethod
    def from_dict(d: dict[Monomial, Fraction]) -> "Polynomial":
        items = [(m, Fraction(c)) for m, c in d.items() if c != 0]
        items.sort(key=lambda t: _mono_key(t[0]), reverse=True)
        return Polynomial(tuple(items))

    @staticmethod
    def const(c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial((((), c),)) if c else Polynomial()

    @staticmethod
    def var(i: int, exp: int = 1) -> "Polynomial":
        if i < 0 or exp < 1:
            raise ValueError("variable index and exponent must be natural")
        return Polynomial(((((i, exp),), Fraction(1)),))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, Fraction(0)) + c
        return Polynomial.from_dict(d)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(Fraction(-1))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        d: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, Fraction(0)) + c1 * c2
        return Polynomial.from_dict(d)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial()
        return Polynomial(tuple((m, k * c) for m, k in self.terms))

    def pow(self, n: int) -> "Polynomial":
        out = Polynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == ())

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms[0][1] if self.terms else Fraction(0)

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e for _, e in m) for m, _ in self.terms)

    def variables(self) -> set[int]:
        return {var for m, _ in self.terms for var, _ in m}

    def evaluate(self, values) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms:
            val = c
            for var, e in m:
                val *= values[var] ** e
            total += val
        return total

    def substitute(self, mapping: dict[int, "Polynomial"]) -> "Polynomial":
        """Plug polynomials in for variables; unmapped variables stay."""
        out = Polynomial()
        for m, c in self.terms:
            term = Polynomial.const(c)
            for var, e in m:
                repl = mapping.get(var)
                if repl is None:
                    repl = Polynomial.var(var)
                term = term * repl.pow(e)
            out = out + term
        return out

    def affine_parts(self) -> "tuple[Fraction, dict[int, Fraction]] | None":
        """(constant, {var: coeff}) when degree <= 1, else None."""
        const = Fraction(0)
        coeffs: dict[int, Fraction] = {}
        for m, c in self.terms:
            if m == ():
                const = c
            elif len(m) == 1 and m[0][1] == 1:
                coeffs[m[0][0]] = c
            else:
                return None
        return const, coeffs


def _clear_denominators(num: Polynomial, den: Polynomial):
    coeffs = [c for _, c in num.terms] + [c for _, c in den.terms]
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    num, den = num.scale(lcm), den.scale(lcm)
    content = 0
    for c in [c for _, c in num.terms] + [c for _, c in den.terms]:
        content = gcd(content, abs(c.numerator))
    if content > 1:
        num = num.scale(Fraction(1, content))
        den = den.scale(Fraction(1, content))
    if den.terms and den.terms[0][1] < 0:
        num, den = num.scale(-1), den.scale(-1)
    return num, den


@dataclass(frozen=True)
class RationalFn:
    """Quotient of polynomials; denominator not identically zero."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ValueError("denominator is identically zero")
        num, den = _clear_denominators(self.num, self.den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def from_polynomial(p: Polynomial) -> "RationalFn":
        return RationalFn(p, Polynomial.const(1))

    @staticmethod
    def const(c) -> "RationalFn":
        return RationalFn(Polynomial.const(c), Polynomial.const(1))

    def evaluate(self, values) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise DivisionByZero("denominator evaluated to zero")
        return self.num.evaluate(values) / d

    def variables(self) -> set[int]:
        return self.num.variables() | self.den.variables()
