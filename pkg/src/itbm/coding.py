"""Structure coding at finite scale.

Cantor pairing, codes of finite structures as bit sets of pair numbers,
decoding of well-order codes from their initial-segment characterization,
hereditarily finite sets with a canonical element order, finite levels of
the constructible hierarchy (where definable subsets are all subsets),
the element-defining formulas psi_k, and the staged recognition pipeline
for level codes with the ordinals-on-even-indices convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .numeric import BitSet


def pair(i: int, j: int) -> int:
    """Cantor pairing (i+j)(i+j+1)/2 + j, a bijection of pairs onto w."""
    if i < 0 or j < 0:
        raise ValueError("naturals only")
    return (i + j) * (i + j + 1) // 2 + j


def unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("naturals only")
    w = (isqrt(8 * n + 1) - 1) // 2
    j = n - w * (w + 1) // 2
    return w - j, j


# --------------------------------------------------------------------------
# formulas of the language with membership and equality


@dataclass(frozen=True)
class Member:
    left: int
    right: int


@dataclass(frozen=True)
class Eq:
    left: int
    right: int


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Formula"


Formula = Member | Eq | Not | And | Or | Implies | Iff | ForAll | Exists


class UnboundVariable(Exception):
    pass


def free_vars(formula: Formula) -> frozenset[int]:
    if isinstance(formula, (Member, Eq)):
        return frozenset((formula.left, formula.right))
    if isinstance(formula, Not):
        return free_vars(formula.body)
    if isinstance(formula, (And, Or, Implies, Iff)):
        return free_vars(formula.left) | free_vars(formula.right)
    return free_vars(formula.body) - {formula.var}


@dataclass(frozen=True)
class FinStructure:
    """Finite structure (universe 0..size-1, binary relation)."""

    size: int
    relation: frozenset[tuple[int, int]]
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        for i, j in self.relation:
            if not (0 <= i < self.size and 0 <= j < self.size):
                raise ValueError("relation pair outside the universe")


def eval_formula(structure: FinStructure, formula: Formula, assignment=None) -> bool:
    """Tarskian evaluation; quantifiers range over the finite universe.

    Subformula values are cached per relevant-assignment projection, so
    repeated subterms (as in the psi_k family) stay affordable.
    """
    env = dict(assignment or {})
    fv_memo: dict[int, frozenset[int]] = {}
    val_memo: dict = {}

    def fv(node) -> frozenset[int]:
        got = fv_memo.get(id(node))
        if got is None:
            got = free_vars(node)
            fv_memo[id(node)] = got
        return got

    missing = fv(formula) - env.keys()
    if missing:
        raise UnboundVariable(f"unassigned variables {sorted(missing)}")

    rel = structure.relation
    size = structure.size

    def ev(node, scope) -> bool:
        if isinstance(node, Member):
            return (scope[node.left], scope[node.right]) in rel
        if isinstance(node, Eq):
            return scope[node.left] == scope[node.right]
        key = (id(node), tuple((v, scope[v]) for v in sorted(fv(node))))
        got = val_memo.get(key)
        if got is not None:
            return got
        if isinstance(node, Not):
            result = not ev(node.body, scope)
        elif isinstance(node, And):
            result = ev(node.left, scope) and ev(node.right, scope)
        elif isinstance(node, Or):
            result = ev(node.left, scope) or ev(node.right, scope)
        elif isinstance(node, Implies):
            result = (not ev(node.left, scope)) or ev(node.right, scope)
        elif isinstance(node, Iff):
            result = ev(node.left, scope) == ev(node.right, scope)
        elif isinstance(node, ForAll):
            result = True
            for value in range(size):
                inner = dict(scope)
                inner[node.var] = value
                if not ev(node.body, inner):
                    result = False
                    break
        else:  # Exists
            result = False
            for value in range(size):
                inner = dict(scope)
                inner[node.var] = value
                if ev(node.body, inner):
                    result = True
                    break
        val_memo[key] = result
        return result

    return ev(formula, env)


# ---- prefix text syntax: atoms "IN y x" / "EQ y x", quantifiers
# "ALL v ..." / "EX v ...", infix connectives with the usual precedence.


def parse_formula(text: str) -> tuple[Formula, dict[str, int]]:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    names: dict[str, int] = {}
    pos = 0

    def var_index(name: str) -> int:
        if name not in names:
            names[name] = len(names)
        return names[name]

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ValueError("unexpected end of formula")
        pos += 1
        return tok

    def parse_expr():
        return parse_iff()

    def parse_iff():
        left = parse_imp()
        while peek() == "IFF":
            take()
            left = Iff(left, parse_imp())
        return left

    def parse_imp():
        left = parse_or()
        if peek() == "IMP":
            take()
            return Implies(left, parse_imp())
        return left

    def parse_or():
        left = parse_and()
        while peek() == "OR":
            take()
            left = Or(left, parse_and())
        return left

    def parse_and():
        left = parse_unary()
        while peek() == "AND":
            take()
            left = And(left, parse_unary())
        return left

    def parse_unary():
        tok = peek()
        if tok == "NOT":
            take()
            return Not(parse_unary())
        if tok in ("ALL", "EX"):
            take()
            var = var_index(take())
            body = parse_unary()
            return ForAll(var, body) if tok == "ALL" else Exists(var, body)
        if tok == "(":
            take()
            inner = parse_expr()
            if take() != ")":
                raise ValueError("missing ')'")
            return inner
        if tok in ("IN", "EQ"):
            take()
            a = var_index(take())
            b = var_index(take())
            return Member(a, b) if tok == "IN" else Eq(a, b)
        raise ValueError(f"unexpected token {tok!r}")

    formula = parse_expr()
    if peek() is not None:
        raise ValueError(f"trailing tokens from {peek()!r}")
    return formula, names


# --------------------------------------------------------------------------
# structure codes


@dataclass(frozen=True)
class StructureCode:
    """Code of a finite structure: the set {pair(i,j) : element_i in element_j}.

    The universe lists the indices actually carrying elements; it need
    not be an initial segment (the even-ordinal convention leaves gaps).
    """

    bits: BitSet
    universe: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits.is_finite():
            raise ValueError("structure codes have finite support")
        object.__setattr__(self, "universe", tuple(sorted(set(self.universe))))
        legal = {pair(i, j) for i in self.universe for j in self.universe}
        if set(self.bits.support()) - legal:
            raise ValueError("code bit outside the universe")

    @property
    def size(self) -> int:
        return len(self.universe)

    def relation_pairs(self) -> set[tuple[int, int]]:
        support = set(self.bits.support())
        return {
            (i, j)
            for i in self.universe
            for j in self.universe
            if pair(i, j) in support
        }

    def to_structure(self) -> tuple[FinStructure, tuple[int, ...]]:
        """Re-index to a contiguous universe; returns (structure, positions)."""
        position = {idx: p for p, idx in enumerate(self.universe)}
        rel = frozenset(
            (position[i], position[j]) for i, j in self.relation_pairs()
        )
        return FinStructure(self.size, rel), self.universe


def code_structure(s: FinStructure, f) -> StructureCode:
    """Bits {pair(i,j) : (f(i), f(j)) in relation} for a permutation f."""
    f = tuple(f)
    if sorted(f) != list(range(s.size)):
        raise ValueError("f must be a permutation of the universe indices")
    bits = {
        pair(i, j)
        for i in range(s.size)
        for j in range(s.size)
        if (f[i], f[j]) in s.relation
    }
    return StructureCode(BitSet.from_support(bits), tuple(range(s.size)))


class NotAWellOrder(Exception):
    pass


def decode_order(c: StructureCode) -> list[int]:
    """Ranks of the universe indices, from the order code.

    Builds the increasing enumeration (a_0, a_1, ...) where each next
    element's strict predecessors are exactly the ones already listed,
    then verifies i < j iff pair(a_i, a_j) is in the code.  Anything
    that fails this characterization is not a well-order code.
    """
    uni = c.universe
    rel = c.relation_pairs()
    preds = {i: {j for j in uni if (j, i) in rel} for i in uni}
    listed: list[int] = []
    placed: set[int] = set()
    while len(listed) < len(uni):
        candidates = [i for i in uni if i not in placed and preds[i] == placed]
        if len(candidates) != 1:
            raise NotAWellOrder(
                "no unique next element; the code is not a strict linear order"
            )
        listed.append(candidates[0])
        placed.add(candidates[0])
    for a_pos, a in enumerate(listed):
        for b_pos, b in enumerate(listed):
            if ((a, b) in rel) != (a_pos < b_pos):
                raise NotAWellOrder("order characterization fails")
    rank = {elem: r for r, elem in enumerate(listed)}
    return [rank[i] for i in uni]


# --------------------------------------------------------------------------
# hereditarily finite sets and finite constructible levels


@dataclass(frozen=True)
class HFSet:
    elements: tuple["HFSet", ...] = ()

    def __post_init__(self) -> None:
        unique = sorted(set(self.elements), key=_hf_key)
        object.__setattr__(self, "elements", tuple(unique))

    def __contains__(self, other: "HFSet") -> bool:
        return other in self.elements

    @property
    def rank(self) -> int:
        return _hf_key(self)[0]

    def __str__(self) -> str:
        return _hf_key(self)[1]

    __repr__ = __str__


def _hf_key(h: HFSet) -> tuple[int, str]:
    """Canonical sort key: (rank, brace text with children in key order)."""
    got = getattr(h, "_key", None)
    if got is None:
        child_keys = [_hf_key(e) for e in h.elements]
        rank = 1 + max((k[0] for k in child_keys), default=-1)
        text = "{" + ",".join(k[1] for k in child_keys) + "}"
        got = (rank, text)
        object.__setattr__(h, "_key", got)
    return got


def von_neumann(n: int) -> HFSet:
    current = HFSet()
    chain = [current]
    for _ in range(n):
        current = HFSet(tuple(chain))
        chain.append(current)
    return chain[n]


def is_ordinal(h: HFSet) -> bool:
    return h == von_neumann(len(h.elements))


class SizeGuard(Exception):
    pass


def build_L(n: int) -> list[HFSet]:
    """Levels by powerset iteration, canonically ordered.

    Over a finite extensional structure every subset is definable with
    parameters, so the definable powerset is the full powerset.
    """
    if n > 5:
        raise SizeGuard("levels beyond 5 are out of desk range (|L_5| = 65536)")
    if n < 0:
        raise ValueError("level must be a natural number")
    level: list[HFSet] = []
    for _ in range(n):
        subsets = []
        for mask in range(2 ** len(level)):
            subsets.append(
                HFSet(tuple(level[i] for i in range(len(level)) if mask >> i & 1))
            )
        level = sorted(set(subsets), key=_hf_key)
    return level


def psi_formula(k: int, var: int = 0) -> Formula:
    """The element-defining formulas: psi_0(x) is x != x, and
    psi_{k+1}(x) is ALL y (y in x IFF (EX z (psi_k(z) AND y in z) OR psi_k(y))).

    The unique satisfier of psi_k over a transitive structure is the
    von Neumann natural k-1 shifted by the recursion; concretely psi_1
    picks out the empty set and psi_{k+1} the successor of psi_k's pick.
    """
    if k == 0:
        return Not(Eq(var, var))
    y, z = var + 1, var + 2
    return ForAll(
        y,
        Iff(
            Member(y, var),
            Or(
                Exists(z, And(psi_formula(k - 1, z), Member(y, z))),
                psi_formula(k - 1, y),
            ),
        ),
    )


def identify_natural(s, k: int):
    """Index of the element coding k, or None when k is absent.

    Accepts a FinStructure (returns a universe position) or a
    StructureCode (returns the original universe index).  Searches with
    the psi formulas; because psi_{j+1} falls back to the empty set when
    psi_j has no satisfier at all, the whole chain 0..k is walked and
    each stage must produce a fresh witness.  That keeps the finite-scale
    answer honest at the top of the structure.
    """
    if isinstance(s, StructureCode):
        structure, positions = s.to_structure()
    else:
        structure, positions = s, tuple(range(s.size))
    seen: list[int] = []
    for j in range(k + 1):
        psi = psi_formula(j + 1, 0)
        found = None
        for pos in range(structure.size):
            if eval_formula(structure, psi, {0: pos}):
                found = pos
                break
        if found is None or found in seen:
            return None
        seen.append(found)
    return positions[seen[-1]]


def code_level_even_ordinals(n: int):
    """Code of L_n with ordinals exactly at the even indices.

    Index 2i carries the i-th ordinal, index 2i+1 the i-th non-ordinal
    in canonical order; whichever pool is shorter leaves gaps, so the
    universe need not be contiguous.  Returns (code, index -> element).
    """
    if n > 4:
        raise SizeGuard("even-ordinal codes are built for levels up to 4")
    elems = build_L(n)
    ordinals = [e for e in elems if is_ordinal(e)]
    others = [e for e in elems if not is_ordinal(e)]
    f: dict[int, HFSet] = {}
    for i, e in enumerate(ordinals):
        f[2 * i] = e
    for i, e in enumerate(others):
        f[2 * i + 1] = e
    bits = {pair(a, b) for a in f for b in f if f[a] in f[b]}
    code = StructureCode(BitSet.from_support(bits), tuple(sorted(f)))
    return code, f


def extract_order_code(code: StructureCode) -> StructureCode:
    """The order code {pair(i,j) : pair(2i,2j) in code} on the even part."""
    support = set(code.bits.support())
    evens = sorted(i // 2 for i in code.universe if i % 2 == 0)
    bits = {
        pair(i, j) for i in evens for j in evens if pair(2 * i, 2 * j) in support
    }
    return StructureCode(BitSet.from_support(bits), tuple(evens))


def canonical_order_code(n: int) -> StructureCode:
    bits = {pair(i, j) for i in range(n) for j in range(n) if i < j}
    return StructureCode(BitSet.from_support(bits), tuple(range(n)))


@dataclass(frozen=True)
class RecognitionResult:
    accepted: bool
    stage: str | None = None  # failing stage when rejected

    def __bool__(self) -> bool:
        return self.accepted


def _collapse(code: StructureCode):
    """Transitive collapse of the coded relation, or None when it is not
    extensional and well-founded."""
    members = {i: set() for i in code.universe}
    for i, j in code.relation_pairs():
        members[j].add(i)
    assigned: dict[int, HFSet] = {}
    while len(assigned) < len(code.universe):
        progressed = False
        for i in code.universe:
            if i in assigned:
                continue
            if members[i] <= assigned.keys():
                assigned[i] = HFSet(tuple(assigned[j] for j in members[i]))
                progressed = True
        if not progressed:
            return None  # ill-founded
    values = list(assigned.values())
    if len(set(values)) != len(values):
        return None  # two indices collapse to the same set
    return assigned


def recognize_level_code(
    y: StructureCode, n: int, phi: Formula
) -> RecognitionResult:
    """Staged check that y is the canonical even-ordinal code of level n.

    Stages: the coded structure collapses exactly to L_n; ordinals sit
    exactly at even indices; the extracted order code is the canonical
    code of the level's ordinal height; and finally the phi-defined set
    computed over y matches the one computed over the canonical code,
    with the codes themselves equal.
    """
    if free_vars(phi) != frozenset({0}):
        raise ValueError("phi must have exactly variable 0 free")
    collapse = _collapse(y)
    if collapse is None:
        return RecognitionResult(False, "structure")
    if sorted(collapse.values(), key=_hf_key) != build_L(n):
        return RecognitionResult(False, "structure")
    for idx, element in collapse.items():
        if is_ordinal(element) != (idx % 2 == 0):
            return RecognitionResult(False, "ordinal-parity")
    n_ord = sum(1 for e in collapse.values() if is_ordinal(e))
    if extract_order_code(y) != canonical_order_code(n_ord):
        return RecognitionResult(False, "order-code")
    canonical, _ = code_level_even_ordinals(n)
    if _defined_set(y, n, phi) != _defined_set(canonical, n, phi) or y != canonical:
        return RecognitionResult(False, "final-compare")
    return RecognitionResult(True)


def _defined_set(code: StructureCode, n: int, phi: Formula) -> set[int]:
    """{k : the element coding k satisfies phi in the coded structure}."""
    structure, positions = code.to_structure()
    position_of = {idx: p for p, idx in enumerate(positions)}
    out = set()
    for k in range(n):
        idx = identify_natural(code, k)
        if idx is None:
            continue
        if eval_formula(structure, phi, {0: position_of[idx]}):
            out.add(k)
    return out
