import pytest
from hypothesis import given, strategies as st

from lzpath.laurent import LaurentPolynomial as L

polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(L)


def test_format():
    assert str(L()) == "0"
    assert str(L({0: 1})) == "1"
    assert str(L({-1: 1})) == "q^-1"
    assert str(L({1: 1})) == "q"
    assert str(L({0: 1, 3: 2})) == "1 + 2q^3"
    assert str(L({0: -1, 2: -3})) == "-1 - 3q^2"


def test_zero_coefficients_dropped():
    assert L({2: 0}).is_zero()
    assert L({1: 2}) - L({1: 2}) == L()
    assert L({0: 3}) == 3


def test_json():
    p = L({-2: 1, 4: -3})
    assert p.to_json() == {"-2": 1, "4": -3}
    assert L.from_json(p.to_json()) == p


def test_rejects_non_integers():
    with pytest.raises(TypeError):
        L({0: 1.5})


@given(polys)
def test_roundtrip_text(p):
    assert L.parse(str(p)) == p


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + L() == a and a * L({0: 1}) == a
    assert a - a == L()


@given(polys, polys, st.integers(-4, 4))
def test_shift_and_invert(a, b, k):
    assert a.shift(k) == a * L({k: 1})
    assert a.invert().invert() == a
    assert (a * b).invert() == a.invert() * b.invert()
    assert a(1) == sum(a.coeffs.values())
