"""Shared test utilities: oracles and random generators.

The oracles here are deliberately independent of the package internals:
the Turing-machine simulator runs tables directly with fuel, and the
naive formula evaluator expands quantifiers into ground connective trees
before evaluating, a different recursion order from the library's.
"""

from __future__ import annotations

import random
from fractions import Fraction

from itbm.coding import And, Eq, Exists, FinStructure, ForAll, Iff, Implies, Member, Not, Or
from itbm.machine import Assign, Node, Program
from itbm.programs import TMTable
from itbm.rfn import Polynomial, RationalFn

# --------------------------------------------------------------------------
# fueled Turing machine oracle

_OFFSET = 1100  # fuel plus slack; positions stay within +-fuel of the start


def fueled_tm(tm: TMTable, fuel: int = 1000):
    """('halts', n) | ('loops', n) | ('unsettled', fuel).

    Loop detection: exact repetition of (state, written-ones pattern,
    head offset from the lowest one), which is invariant under tape
    translation, so drifting machines with a repeating neighborhood are
    still caught.
    """
    table = {(q, s): (q2, w, m) for q, s, q2, w, m in tm.rules}
    ones = 0
    pos = _OFFSET
    q = 0
    seen = set()
    for step in range(fuel):
        if ones:
            low = (ones & -ones).bit_length() - 1
            key = (q, ones >> low, pos - low)
        else:
            key = (q, 0, 0)
        if key in seen:
            return ("loops", step)
        seen.add(key)
        sym = (ones >> pos) & 1
        tr = table.get((q, sym))
        if tr is None:
            return ("halts", step)
        q2, w, move = tr
        if w:
            ones |= 1 << pos
        else:
            ones &= ~(1 << pos)
        pos += 1 if move == "R" else -1
        q = q2
    return ("unsettled", fuel)


def all_tables(states: int):
    """Every deterministic table with the given number of states."""
    from itertools import product

    options = [None] + [
        (q2, w, m) for q2 in range(states) for w in (0, 1) for m in "LR"
    ]
    slots = [(q, s) for q in range(states) for s in (0, 1)]
    for combo in product(options, repeat=len(slots)):
        rules = tuple((q, s, *tr) for (q, s), tr in zip(slots, combo) if tr)
        yield TMTable(states, rules)


def random_table(rng: random.Random, states: int) -> TMTable:
    rules = []
    for q in range(states):
        for s in (0, 1):
            if rng.random() < 0.8:
                rules.append((q, s, rng.randrange(states), rng.randrange(2), rng.choice("LR")))
    return TMTable(states, tuple(rules))


# --------------------------------------------------------------------------
# random programs (for assembler round-trips)


def _random_poly(rng: random.Random, allow_zero: bool = True) -> Polynomial:
    terms = {}
    for _ in range(rng.randrange(0 if allow_zero else 1, 3)):
        mono = tuple(
            sorted(
                {rng.randrange(4): rng.randrange(1, 3) for _ in range(rng.randrange(3))}.items()
            )
        )
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        terms[mono] = Fraction(coeff)
    p = Polynomial.from_dict(terms)
    if not allow_zero and p.is_zero():
        return Polynomial.const(rng.randrange(1, 4))
    return p


def random_program(rng: random.Random, max_lines: int = 6) -> Program:
    n = rng.randrange(0, max_lines + 1)
    commands = []
    for _ in range(n):
        fn = RationalFn(_random_poly(rng), _random_poly(rng, allow_zero=False))
        if rng.random() < 0.4:
            commands.append(Node(fn, rng.randrange(n + 1), rng.randrange(n + 1)))
        else:
            commands.append(Assign(rng.randrange(4), fn))
    return Program(tuple(commands))


# --------------------------------------------------------------------------
# naive formula evaluation oracle


def naive_eval(structure: FinStructure, formula, assignment) -> bool:
    """Ground-expansion evaluator: quantifiers become explicit connective
    lists over the whole universe first, then the tree is folded."""

    def expand(node, env):
        if isinstance(node, Member):
            return ("lit", (env[node.left], env[node.right]) in structure.relation)
        if isinstance(node, Eq):
            return ("lit", env[node.left] == env[node.right])
        if isinstance(node, Not):
            return ("not", [expand(node.body, env)])
        if isinstance(node, And):
            return ("all", [expand(node.left, env), expand(node.right, env)])
        if isinstance(node, Or):
            return ("any", [expand(node.left, env), expand(node.right, env)])
        if isinstance(node, Implies):
            return ("any", [("not", [expand(node.left, env)]), expand(node.right, env)])
        if isinstance(node, Iff):
            a, b = expand(node.left, env), expand(node.right, env)
            return ("any", [("all", [a, b]), ("all", [("not", [a]), ("not", [b])])])
        if isinstance(node, ForAll):
            return (
                "all",
                [expand(node.body, {**env, node.var: v}) for v in range(structure.size)],
            )
        return (
            "any",
            [expand(node.body, {**env, node.var: v}) for v in range(structure.size)],
        )

    def fold(tree) -> bool:
        kind, payload = tree
        if kind == "lit":
            return payload
        values = [fold(t) for t in payload]
        if kind == "not":
            return not values[0]
        if kind == "all":
            return all(values)
        return any(values)

    return fold(expand(formula, dict(assignment)))


def random_formula(rng: random.Random, depth: int, nvars: int = 3):
    if depth == 0 or rng.random() < 0.3:
        a, b = rng.randrange(nvars), rng.randrange(nvars)
        return Member(a, b) if rng.random() < 0.7 else Eq(a, b)
    kind = rng.randrange(7)
    if kind == 0:
        return Not(random_formula(rng, depth - 1, nvars))
    if kind <= 4:
        ctor = (And, Or, Implies, Iff)[kind - 1]
        return ctor(
            random_formula(rng, depth - 1, nvars), random_formula(rng, depth - 1, nvars)
        )
    ctor = ForAll if kind == 5 else Exists
    return ctor(rng.randrange(nvars), random_formula(rng, depth - 1, nvars))


def random_structure(rng: random.Random, size: int) -> FinStructure:
    relation = frozenset(
        (i, j) for i in range(size) for j in range(size) if rng.random() < 0.3
    )
    return FinStructure(size, relation)
