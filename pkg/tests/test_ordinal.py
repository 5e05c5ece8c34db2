import pytest
from hypothesis import given, strategies as st

from itbm.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    compare,
    omega_pow,
    parse,
    render,
    round_up_to_limit,
)


def o(*terms) -> Ordinal:
    return Ordinal(tuple(terms))


def test_compare_basics():
    assert compare(ZERO, ZERO) == 0
    assert compare(OMEGA, omega_pow(2)) == -1
    # w^2 + w*3  vs  w^2 + w*2 + 7
    assert compare(o((2, 1), (1, 3)), o((2, 1), (1, 2), (0, 7))) == 1


def test_add_basics():
    assert ZERO + o((2, 1)) == o((2, 1))
    assert ONE + OMEGA == OMEGA  # left absorption
    assert o((2, 1), (1, 1)) + OMEGA == o((2, 1), (1, 2))
    assert o((1, 1)) + 2 == o((1, 1), (0, 2))


def test_round_up_to_limit():
    assert round_up_to_limit(ZERO, 1) == OMEGA
    assert round_up_to_limit(o((1, 2), (0, 5)), 1) == o((1, 3))
    assert round_up_to_limit(omega_pow(2), 2) == o((2, 2))
    with pytest.raises(ValueError):
        round_up_to_limit(ZERO, 0)


def test_limits_and_successors():
    assert OMEGA.is_limit()
    assert not ZERO.is_limit()
    assert not o((1, 1), (0, 3)).is_limit()
    assert omega_pow(2).succ() == o((2, 1), (0, 1))
    assert omega_pow(0) == ONE


def test_invalid_forms_rejected():
    with pytest.raises(ValueError):
        Ordinal(((1, 0),))
    with pytest.raises(ValueError):
        Ordinal(((1, 1), (1, 1)))
    with pytest.raises(ValueError):
        Ordinal(((1, 1), (2, 1)))


def test_render_parse():
    examples = [
        (ZERO, "0"),
        (o((1, 1), (0, 2)), "w + 2"),
        (o((2, 3), (1, 1), (0, 5)), "w^2*3 + w + 5"),
        (o((3, 1)), "w^3"),
    ]
    for value, text in examples:
        assert render(value) == text
        assert parse(text) == value
    # explicit *1 coefficients are accepted on input
    assert parse("w^2*3 + w*1 + 5") == o((2, 3), (1, 1), (0, 5))


# ---- property tests -------------------------------------------------------

ordinals = st.builds(
    lambda d: Ordinal(tuple(sorted(d.items(), reverse=True))),
    st.dictionaries(st.integers(0, 5), st.integers(1, 9), max_size=4),
)


@given(ordinals, ordinals, ordinals)
def test_add_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(ordinals, ordinals, ordinals)
def test_add_right_monotone(a, b, c):
    if b < c:
        assert a + b < a + c


@given(ordinals, ordinals)
def test_total_order(a, b):
    assert (compare(a, b) == 0) == (a == b)
    assert sum(1 for r in (a < b, a == b, b < a) if r) == 1


@given(ordinals, st.integers(1, 4))
def test_round_up_minimal(t, level):
    up = round_up_to_limit(t, level)
    assert t < up
    assert up.terms and up.terms[-1][0] >= level  # a multiple of w^level
    # nothing strictly between: stepping one w^level back leaves <= t
    shrunk = list(up.terms)
    exp, coeff = shrunk[-1]
    if coeff > 1:
        shrunk[-1] = (exp, coeff - 1)
        smaller = Ordinal(tuple(shrunk))
    else:
        smaller = Ordinal(tuple(shrunk[:-1]))
    assert not t < smaller


# ---- oracle: ordinals below w^3 as lexicographic triples ------------------

triples = st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))


def from_triple(t):
    c2, c1, c0 = t
    terms = [(2, c2), (1, c1), (0, c0)]
    return Ordinal(tuple((e, c) for e, c in terms if c))


def triple_add(a, b):
    if b[0]:
        return (a[0] + b[0], b[1], b[2])
    if b[1]:
        return (a[0], a[1] + b[1], b[2])
    return (a[0], a[1], a[2] + b[2])


@given(triples, triples)
def test_triple_oracle_compare(a, b):
    assert compare(from_triple(a), from_triple(b)) == (a > b) - (a < b)


@given(triples, triples)
def test_triple_oracle_add(a, b):
    assert from_triple(a) + from_triple(b) == from_triple(triple_add(a, b))
