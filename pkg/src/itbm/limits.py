"""Exponential-polynomial closed forms for certified loop analysis.

A certified loop iterates an affine map, so every register value and
every branch test along the loop has a closed form

    s(m) = sum over bases g of  P_g(m) * g^m        (m = iteration index)

with rational bases and rational polynomial coefficients.  This module
solves the defining recurrences exactly and decides questions of the
shape "s(m) rel 0 for all m >= 0" with no approximation: negative bases
are removed by splitting into even and odd subsequences, and the sign of
the tail is certified by exact dominant-term bounds, with the finite
prefix checked value by value.

Base 0 terms contribute only at m = 0 and are eliminated by raising the
validity threshold ``start``; callers supply concrete values below it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

Poly = tuple[Fraction, ...]  # coefficients in m, ascending degree

RELATIONS = (">0", ">=0", "<=0", "<0", "==0")


def _poly_norm(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _poly_norm(
        [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    )


def _poly_scale(p: Poly, c: Fraction) -> Poly:
    if c == 0:
        return ()
    return tuple(k * c for k in p)


def _poly_shift_arg(p: Poly, delta: Fraction) -> Poly:
    """Coefficients of p(m + delta)."""
    out = [Fraction(0)] * len(p)
    for e, c in enumerate(p):
        if c == 0:
            continue
        for k in range(e + 1):
            out[k] += c * comb(e, k) * delta ** (e - k)
    return _poly_norm(out)


def _poly_scale_arg(p: Poly, factor: int) -> Poly:
    """Coefficients of p(factor * m)."""
    return _poly_norm([c * Fraction(factor) ** e for e, c in enumerate(p)])


def _poly_eval(p: Poly, m) -> Fraction:
    total = Fraction(0)
    for c in reversed(p):
        total = total * m + c
    return total


@dataclass
class ClosedForm:
    """s(m) = sum of P_g(m) * g^m, valid for m >= start."""

    terms: dict[Fraction, Poly] = field(default_factory=dict)
    start: int = 0

    def __post_init__(self) -> None:
        self.terms = {g: _poly_norm(p) for g, p in self.terms.items() if _poly_norm(p)}

    @staticmethod
    def constant(v) -> "ClosedForm":
        v = Fraction(v)
        return ClosedForm({Fraction(1): (v,)} if v else {})

    def add(self, other: "ClosedForm") -> "ClosedForm":
        terms = dict(self.terms)
        for g, p in other.terms.items():
            terms[g] = _poly_add(terms.get(g, ()), p)
        return ClosedForm(terms, max(self.start, other.start))

    def scale(self, c) -> "ClosedForm":
        c = Fraction(c)
        return ClosedForm({g: _poly_scale(p, c) for g, p in self.terms.items()}, self.start)

    def evaluate(self, m: int) -> Fraction:
        if m < self.start:
            raise ValueError("closed form not valid below its start")
        total = Fraction(0)
        for g, p in self.terms.items():
            if g == 0:
                if m == 0:
                    total += _poly_eval(p, 0)
                continue
            total += _poly_eval(p, m) * g**m
        return total

    def shifted_back(self) -> "ClosedForm":
        """Closed form of m -> s(m - 1); base-0 terms drop with a start bump."""
        terms: dict[Fraction, Poly] = {}
        start = self.start + 1
        for g, p in self.terms.items():
            if g == 0:
                start = max(start, 2)
                continue
            terms[g] = _poly_scale(_poly_shift_arg(p, Fraction(-1)), 1 / g)
        return ClosedForm(terms, start)

    def drop_zero_base(self) -> "ClosedForm":
        if Fraction(0) not in self.terms:
            return self
        terms = {g: p for g, p in self.terms.items() if g != 0}
        return ClosedForm(terms, max(self.start, 1))

    def converges(self) -> bool:
        for g, p in self.terms.items():
            if not p:
                continue
            if abs(g) > 1:
                return False
            if g == 1 and len(p) > 1:
                return False
            if g == -1:
                return False
        return True

    def limit(self) -> Fraction:
        if not self.converges():
            raise ValueError("divergent closed form has no limit")
        p = self.terms.get(Fraction(1), ())
        return p[0] if p else Fraction(0)


def solve_recurrence(alpha: Fraction, forcing: ClosedForm, get_value) -> ClosedForm:
    """Exact solution of R(m+1) = alpha * R(m) + forcing(m).

    ``get_value(m)`` must return the true R(m); it anchors the solution at
    the validity threshold.  Resonance (a forcing base equal to alpha)
    raises the polynomial degree as usual.
    """
    alpha = Fraction(alpha)
    if alpha == 0:
        return forcing.shifted_back()

    forcing = forcing.drop_zero_base()
    start = forcing.start
    particular: dict[Fraction, Poly] = {}
    for g, p in forcing.terms.items():
        q = _solve_particular(alpha, g, p)
        particular[g] = _poly_add(particular.get(g, ()), q)
    part = ClosedForm(particular, start)
    anchor = get_value(start)
    part_at = part.evaluate(start) if part.terms else Fraction(0)
    c_hom = (anchor - part_at) / alpha**start
    if c_hom:
        terms = dict(part.terms)
        terms[alpha] = _poly_add(terms.get(alpha, ()), (c_hom,))
        return ClosedForm(terms, start)
    return part


def _solve_particular(alpha: Fraction, g: Fraction, p: Poly) -> Poly:
    """q with q(m+1)*g - alpha*q(m) = p(m), as coefficients of base g."""
    d = len(p) - 1
    if g != alpha:
        q = [Fraction(0)] * (d + 1)
        for k in range(d, -1, -1):
            upper = sum(q[e] * comb(e, k) for e in range(k + 1, d + 1))
            q[k] = (p[k] - g * upper) / (g - alpha)
        return _poly_norm(q)
    # resonance: degree rises by one, constant term free (set to 0)
    q = [Fraction(0)] * (d + 2)
    for k in range(d, -1, -1):
        upper = sum(q[e] * comb(e, k) for e in range(k + 2, d + 2))
        q[k + 1] = (p[k] / g - upper) / comb(k + 1, k)
    return _poly_norm(q)


def _check(value: Fraction, rel: str) -> bool:
    if rel == ">0":
        return value > 0
    if rel == ">=0":
        return value >= 0
    if rel == "<=0":
        return value <= 0
    if rel == "<0":
        return value < 0
    if rel == "==0":
        return value == 0
    raise ValueError(f"unknown relation {rel}")


def _positive_base_terms(cf: ClosedForm, offset: int, stride: int):
    """Terms of i -> s(offset + stride*i) with all bases positive.

    Returns a dict base -> poly in i; stride 2 after an even/odd split
    turns every nonzero base into its positive square.
    """
    out: dict[Fraction, Poly] = {}
    for g, p in cf.terms.items():
        base = g**stride
        composed = _poly_scale_arg(_poly_shift_arg(p, Fraction(offset)), stride)
        scaled = _poly_scale(composed, g**offset)
        out[base] = _poly_add(out.get(base, ()), scaled)
    return {b: p for b, p in out.items() if p}


def _decide_positive_bases(terms: dict[Fraction, Poly], rel: str, cap: int):
    """Decide "f(i) rel 0 for all i >= 0" for positive bases.

    Exact: finds an index from which the dominant term provably fixes the
    sign (with a persistence certificate), and checks everything below it
    value by value.  Returns True, False, or None when the search budget
    is exhausted.
    """
    if not terms:
        return rel in (">=0", "<=0", "==0")
    if rel == "==0":
        return False  # a nontrivial exp-poly is eventually nonzero

    rho_star = max(terms)
    p_star = terms[rho_star]
    d_star = len(p_star) - 1
    lead = p_star[-1]
    sigma = 1 if lead > 0 else -1
    if rel in (">0", ">=0") and sigma < 0:
        return False  # the dominant term eventually forces the wrong sign
    if rel in ("<0", "<=0") and sigma > 0:
        return False

    rest = [(rho, p) for rho, p in terms.items() if rho != rho_star]
    s_norm = sum(abs(c) for c in p_star[:-1])

    # Find J with a persistence certificate, then check i < J directly.
    powers = {rho: Fraction(1) for rho, _ in rest}
    pow_star = Fraction(1)
    j = 1
    # advance powers to j = 1
    for rho, _ in rest:
        powers[rho] *= rho
    pow_star *= rho_star
    J = None
    while j <= cap:
        lower = abs(lead) * Fraction(j) ** d_star - s_norm * Fraction(j) ** max(d_star - 1, 0)
        lower_next = abs(lead) * Fraction(j + 1) ** d_star - s_norm * Fraction(j + 1) ** max(
            d_star - 1, 0
        )
        ok = lower > 0 and lower_next >= lower
        if ok:
            bound = Fraction(0)
            for rho, p in rest:
                bound += sum(abs(c) for c in p) * Fraction(j) ** (len(p) - 1) * powers[rho]
            ok = lower * pow_star > bound
        if ok:
            for rho, p in rest:
                d_rho = len(p) - 1
                if rho * Fraction(j + 1) ** d_rho > rho_star * Fraction(j) ** d_rho:
                    ok = False
                    break
        if ok:
            J = j
            break
        for rho, _ in rest:
            powers[rho] *= rho
        pow_star *= rho_star
        j += 1
    if J is None:
        return None

    # prefix check, i = 0 .. J-1
    powers = {rho: Fraction(1) for rho in terms}
    for i in range(J):
        value = Fraction(0)
        for rho, p in terms.items():
            value += _poly_eval(p, i) * powers[rho]
        if not _check(value, rel):
            return False
        for rho in powers:
            powers[rho] *= rho
    return True


def decide_for_all(cf: ClosedForm, rel: str, eval_prefix, cap: int = 4096):
    """Decide "s(m) rel 0 for every m >= 0".

    ``eval_prefix(m)`` must return the true value for m below the closed
    form's validity threshold.  Returns True, False, or None when the
    dominance search exceeds ``cap``.
    """
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel}")
    work = cf.drop_zero_base()
    for m in range(work.start):
        if not _check(eval_prefix(m), rel):
            return False
    s = work.start
    for residue in (0, 1):
        terms = _positive_base_terms(work, s + residue, 2)
        verdict = _decide_positive_bases(terms, rel, cap)
        if verdict is not True:
            return verdict
    return True
