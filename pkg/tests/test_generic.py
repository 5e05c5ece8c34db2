import random
from itertools import product

import pytest

from itbm.generic import (
    DecodeError,
    DenseSet,
    FuelExhausted,
    Undetermined,
    build_generic,
    decide_bit,
    decode,
    encode,
    extends,
    family_from_json,
    incompatible,
    min_extension,
    min_length,
    require_pattern,
)
from itbm.numeric import BitSet


def shortlex_before(t: str):
    """All binary strings strictly shortlex-smaller than t."""
    for length in range(len(t) + 1):
        for tup in product("01", repeat=length):
            s = "".join(tup)
            if length == len(t) and s >= t:
                return
            yield s


def test_extension_relations():
    assert extends("0110", "01")
    assert not extends("01", "0110")
    assert incompatible("00", "01")
    assert not incompatible("0", "01")


def test_min_extension_examples():
    assert min_extension(min_length(1), "") == "0"
    assert min_extension(require_pattern("11"), "0") == "011"
    assert min_extension(min_length(1), "", avoid="0") == "1"
    assert min_extension(min_length(2), "1") == "10"
    assert min_extension(min_length(1), "0") == "0"  # non-proper keeps p
    assert min_extension(min_length(1), "0", proper=True) == "00"


def test_min_extension_minimality_exhaustive():
    pool = [min_length(3), require_pattern("101"), decide_bit(2)]
    for dense in pool:
        for p in ("", "0", "1", "01", "110"):
            got = min_extension(dense, p)
            for smaller in shortlex_before(got):
                assert not (extends(smaller, p) and dense.predicate(smaller))


def test_fuel_exhausted():
    never = DenseSet("never", lambda s: False, fuel=4)
    with pytest.raises(FuelExhausted):
        min_extension(never, "")


def test_build_generic():
    assert build_generic([min_length(1), min_length(2)], 2) == "00"
    assert build_generic([], 4) == "0000"
    family = [require_pattern("11"), min_length(4), decide_bit(5)]
    word = build_generic(family, 8)
    # meets every member: some stage prefix of the final condition is inside
    p = ""
    for dense in family:
        p = min_extension(dense, p)
        assert dense.predicate(p)
        assert word.startswith(p[: len(word)])


def test_encode_examples():
    family = [min_length(1)]
    assert encode(BitSet.from_support({0}), family) == "0"
    assert encode(BitSet(), family) == "1"
    assert decode("0", family) == BitSet.from_support({0})
    assert decode("1", family) == BitSet()


def test_decode_undetermined_and_error():
    family = [min_length(1), min_length(3)]
    with pytest.raises(Undetermined) as err:
        decode("", family)
    assert err.value.stage == 0
    word = encode(BitSet.from_support({0, 1}), family)
    with pytest.raises(Undetermined):
        decode(word[:-1], family)
    # a word incompatible with both stage choices is not an encoding
    with pytest.raises(DecodeError):
        decode("11", [min_length(2)])


def _random_family(rng: random.Random, size: int):
    family = []
    for i in range(size):
        kind = rng.randrange(3)
        if kind == 0:
            family.append(decide_bit(i))
        elif kind == 1:
            family.append(require_pattern(bin(rng.randrange(1, 16))[2:]))
        else:
            family.append(min_length(rng.randrange(1, 14)))
    return family


def test_round_trip_injectivity_genericity():
    rng = random.Random(99)
    trials = 0
    for _ in range(20):
        family = _random_family(rng, 16)
        seen = {}
        for _ in range(10):
            x = BitSet.from_support({i for i in range(16) if rng.random() < 0.5})
            word = encode(x, family)
            trials += 1
            assert decode(word, family) == x
            # injectivity within the family
            if word in seen:
                assert seen[word] == x
            seen[word] = x
            # genericity: each stage condition lands inside its dense set
            c = ""
            for i, dense in enumerate(family):
                e = min_extension(dense, c, proper=True)
                c = e if x.membership(i) else min_extension(dense, c, proper=True, avoid=e)
                assert dense.predicate(c)
                assert extends(word, c)
        # distinct inputs got distinct words (injectivity)
        assert len(set(seen.values())) == len(seen)
    assert trials == 200


def test_family_from_json():
    family = family_from_json(
        [
            {"kind": "decide_bit", "arg": 3},
            {"kind": "require_pattern", "arg": "101"},
            {"kind": "min_length", "arg": 5},
        ]
    )
    assert [d.descriptor for d in family] == [
        "decide_bit(3)",
        "require_pattern(101)",
        "min_length(5)",
    ]
    with pytest.raises(ValueError):
        family_from_json([{"kind": "nope", "arg": 1}])
