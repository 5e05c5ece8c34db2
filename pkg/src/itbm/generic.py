"""Cohen forcing at desk scale.

Conditions are finite binary strings ordered by extension; a dense set
is given by a predicate plus a fuel bound on how far past a condition
the shortlex search may look.  The generic-filter construction walks a
finite family of dense sets taking shortlex-minimal extensions; the
encode/decode pair hides a bit string in the choice between the minimal
proper extension and the minimal one incompatible with it, which makes
decoding a matter of re-running the same search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .numeric import BitSet

Condition = str


class FuelExhausted(Exception):
    """No member found within the fuel bound; the set may not be dense."""


class DecodeError(ValueError):
    """The word is incompatible with every stage choice."""


class Undetermined(Exception):
    """The word is too short to settle the given stage."""

    def __init__(self, stage: int) -> None:
        super().__init__(f"stage {stage} not settled")
        self.stage = stage


def extends(t: Condition, p: Condition) -> bool:
    return t.startswith(p)


def incompatible(a: Condition, b: Condition) -> bool:
    return not (a.startswith(b) or b.startswith(a))


@dataclass(frozen=True)
class DenseSet:
    descriptor: str
    predicate: Callable[[Condition], bool] = field(compare=False)
    fuel: int = 16

    def __contains__(self, s: Condition) -> bool:
        return self.predicate(s)


def min_extension(
    dense: DenseSet,
    p: Condition,
    proper: bool = False,
    avoid: Condition | None = None,
) -> Condition:
    """Shortlex-minimal member of the dense set extending p.

    With ``proper`` the extension must be strict; with ``avoid`` it must
    also be incompatible with that condition.  Shortlex search cannot
    miss a member, so exhausting the fuel means the predicate is not
    dense within reach.
    """
    first = len(p) + (1 if proper else 0)
    for length in range(first, len(p) + dense.fuel + 1):
        for suffix in product("01", repeat=length - len(p)):
            t = p + "".join(suffix)
            if avoid is not None and not incompatible(t, avoid):
                continue
            if dense.predicate(t):
                return t
    raise FuelExhausted(f"{dense.descriptor}: nothing within fuel {dense.fuel} above {p!r}")


def build_generic(family, out_bits: int) -> Condition:
    """Meets every listed dense set by chaining minimal extensions.

    Starts from the empty condition and returns the first ``out_bits``
    bits, zero padded when the final condition is shorter.
    """
    p: Condition = ""
    for dense in family:
        p = min_extension(dense, p)
    return (p + "0" * out_bits)[:out_bits]


def encode(x: BitSet, family) -> Condition:
    """Hide the first len(family) bits of x in a generic condition.

    At stage i the minimal proper extension inside the i-th set encodes
    a one bit; the minimal proper extension incompatible with it encodes
    a zero bit.  The result meets every set of the family and is
    injective in the encoded bits.
    """
    c: Condition = ""
    for i, dense in enumerate(family):
        e = min_extension(dense, c, proper=True)
        if x.membership(i):
            c = e
        else:
            c = min_extension(dense, c, proper=True, avoid=e)
    return c


def decode(word: Condition, family) -> BitSet:
    """Invert ``encode`` by recomputing each stage's minimal extensions.

    Raises Undetermined(i) when the word is a strict prefix of stage i's
    choice, and DecodeError when it is incompatible with both choices.
    """
    c: Condition = ""
    members: set[int] = set()
    for i, dense in enumerate(family):
        e = min_extension(dense, c, proper=True)
        if word.startswith(e):
            members.add(i)
            c = e
            continue
        if e.startswith(word):
            raise Undetermined(i)
        alt = min_extension(dense, c, proper=True, avoid=e)
        if word.startswith(alt):
            c = alt
            continue
        if alt.startswith(word):
            raise Undetermined(i)
        raise DecodeError(f"word incompatible with both choices at stage {i}")
    return BitSet.from_support(members)


# --------------------------------------------------------------------------
# standard dense families and their JSON descriptors


def decide_bit(i: int) -> DenseSet:
    return DenseSet(f"decide_bit({i})", lambda s: len(s) > i, fuel=i + 4)


def require_pattern(pattern: str) -> DenseSet:
    if not pattern or set(pattern) - {"0", "1"}:
        raise ValueError("pattern must be a nonempty binary string")
    return DenseSet(
        f"require_pattern({pattern})", lambda s: pattern in s, fuel=len(pattern) + 8
    )


def min_length(n: int) -> DenseSet:
    return DenseSet(f"min_length({n})", lambda s: len(s) >= n, fuel=n + 4)


_KINDS = {
    "decide_bit": lambda arg: decide_bit(int(arg)),
    "require_pattern": lambda arg: require_pattern(str(arg)),
    "min_length": lambda arg: min_length(int(arg)),
}


def family_from_json(items) -> list[DenseSet]:
    family = []
    for item in items:
        kind = item["kind"]
        if kind not in _KINDS:
            raise ValueError(f"unknown dense-set kind {kind!r}")
        family.append(_KINDS[kind](item["arg"]))
    return family
