import pytest
from hypothesis import given, settings, strategies as st

from kummer_census.ffield import (char_exponent, embedding, is_prime, make_field, prime_factors,
                                  prime_power)

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (5, 2)]


def test_prime_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_factors(360) == [2, 3, 5]
    assert prime_power(81) == (3, 4)
    with pytest.raises(ValueError):
        prime_power(12)


def test_examples():
    F5 = make_field(5)
    assert F5.q == 5 and F5.exp(1) == 2 and F5.dlog(4) == 2
    F3 = make_field(3)
    assert F3.exp(1) == 2 and F3.dlog(1) == 0
    F4 = make_field(2, 2)
    assert sorted(F4.dlog(x) for x in range(1, 4)) == [0, 1, 2]


def test_characters():
    F5 = make_field(5)
    assert char_exponent(F5, 2, 4).value == 0
    assert char_exponent(F5, 2, 2).value == 1
    for r in (1, 2, 4):
        assert char_exponent(F5, r, 1).value == 0
    with pytest.raises(ValueError):
        char_exponent(F5, 3, 2)


@pytest.mark.parametrize("p,e", FIELDS)
def test_field_axioms_exhaustive(p, e):
    F = make_field(p, e)
    els = list(F.elements())
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.exp(F.dlog(a)) == a
    assert sorted(F.exp(k) for k in range(F.q - 1)) == els[1:]
    assert all(F.frobenius(a) == F.pow(a, p) for a in els)


@pytest.mark.parametrize("p,e", FIELDS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_ring_laws(p, e, data):
    F = make_field(p, e)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    if b:
        assert F.mul(F.div(a, b), b) == a
        assert F.dlog(F.mul(b, b)) == (2 * F.dlog(b)) % (F.q - 1)


def test_rth_powers():
    F7 = make_field(7)
    cubes = {F7.pow(x, 3) for x in range(1, 7)}
    assert all(F7.is_rth_power(x, 3) == (x in cubes) for x in range(1, 7))


@pytest.mark.parametrize("p,e,m", [(3, 1, 2), (2, 1, 3), (2, 2, 2), (5, 1, 2)])
def test_embedding_is_homomorphism(p, e, m):
    small, big = make_field(p, e), make_field(p, e * m)
    emb = embedding(small, big)
    assert len(set(emb)) == small.q
    for a in small.elements():
        for b in small.elements():
            assert emb[small.add(a, b)] == big.add(emb[a], emb[b])
            assert emb[small.mul(a, b)] == big.mul(emb[a], emb[b])


def test_bad_input():
    with pytest.raises(ValueError):
        make_field(4)
    with pytest.raises(ValueError):
        make_field(3, 0)
