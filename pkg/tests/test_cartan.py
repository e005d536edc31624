from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from lzpath.cartan import (
    DominantWeight,
    UnsupportedTypeError,
    WeightError,
    anti_dominant,
    cl_form,
    datum_for,
    dominant,
    finite_orbit,
    fundamental_cl,
    is_antidominant,
    is_dominant,
    reflect,
)

TYPES = [("A", 2), ("A", 3), ("A", 4), ("A", 6), ("B", 3), ("B", 4), ("C", 2), ("C", 3), ("D", 4), ("D", 5)]


def test_a1_table():
    d = datum_for("A", 2)
    assert d.cartan == ((2, -2), (-2, 2))
    assert d.marks == (1, 1) and d.comarks == (1, 1) and d.a0 == 1
    assert list(d.index_set) == [0, 1]


def test_a2_table_is_cyclic():
    d = datum_for("A", 3)
    for i in range(3):
        for j in range(3):
            want = 2 if i == j else (-1 if (i - j) % 3 in (1, 2) else 0)
            assert d.cartan[i][j] == want
    assert d.marks == (1, 1, 1)


@pytest.mark.parametrize("fam,rank", [("A", 1), ("A", 0), ("B", 2), ("C", 1), ("D", 3), ("E", 6), ("G", 2)])
def test_unsupported(fam, rank):
    with pytest.raises(UnsupportedTypeError) as err:
        datum_for(fam, rank)
    assert "supported" in str(err.value)


@pytest.mark.parametrize("fam,rank", TYPES)
def test_kernel_identities(fam, rank):
    d = datum_for(fam, rank)
    n = len(d.cartan)
    for i in range(n):
        assert d.cartan[i][i] == 2
        assert sum(d.cartan[i][j] * d.marks[j] for j in range(n)) == 0
        assert sum(d.comarks[k] * d.cartan[k][i] for k in range(n)) == 0
        for j in range(n):
            if i != j:
                assert d.cartan[i][j] <= 0
                assert (d.cartan[i][j] == 0) == (d.cartan[j][i] == 0)
            assert d.root_form[i][j] == d.root_form[j][i]
            # 2 (a_i, a_j) / (a_j, a_j) = a_ji
            assert Fraction(2 * d.root_form[i][j], d.root_form[j][j]) == d.cartan[j][i]
        assert d.root_form[i][i] > 0
    assert d.a0 == 1


# Kac's marks for the untwisted types, as a literal cross-check of the generated tables.
KAC_MARKS = {
    ("B", 3): (1, 1, 2, 2),
    ("B", 4): (1, 1, 2, 2, 2),
    ("C", 2): (1, 2, 1),
    ("C", 3): (1, 2, 2, 1),
    ("D", 4): (1, 1, 2, 1, 1),
    ("D", 5): (1, 1, 2, 2, 1, 1),
}


@pytest.mark.parametrize("key", sorted(KAC_MARKS))
def test_marks_match_kac(key):
    assert datum_for(*key).marks == KAC_MARKS[key]


def test_fundamental_cl_examples():
    assert fundamental_cl(datum_for("A", 2), 1) == (-1, 1)
    assert fundamental_cl(datum_for("A", 3), 2) == (-1, 0, 1)
    with pytest.raises(WeightError):
        fundamental_cl(datum_for("A", 3), 0)
    with pytest.raises(WeightError):
        fundamental_cl(datum_for("A", 3), 3)


@pytest.mark.parametrize("fam,rank", TYPES)
def test_fundamentals_level_zero(fam, rank):
    d = datum_for(fam, rank)
    for i in d.classical_index_set:
        w = fundamental_cl(d, i)
        assert d.level(w) == 0
        assert w[1:] == tuple(int(k == i) for k in d.classical_index_set)
        assert w[0] == -d.comarks[i]


def test_reflect_examples():
    d = datum_for("A", 2)
    assert reflect(d, 1, (-1, 1)) == (1, -1)
    assert reflect(d, 0, (0, 0)) == (0, 0)


def test_orbit_examples():
    d = datum_for("A", 2)
    assert finite_orbit(d, (-1, 1)) == {(-1, 1), (1, -1)}
    assert len(finite_orbit(datum_for("A", 3), (-1, 1, 0))) == 3
    assert anti_dominant(d, (-1, 1)) == (1, -1)
    assert anti_dominant(d, (1, -1)) == (1, -1)
    assert anti_dominant(datum_for("A", 3), (-1, 1, 0)) == (1, 0, -1)


def test_orbit_rejects_nonzero_level():
    with pytest.raises(WeightError):
        finite_orbit(datum_for("A", 3), (1, 1, 0))


def test_orbit_cap():
    with pytest.raises(WeightError):
        finite_orbit(datum_for("A", 5), (-2, 1, 0, 1, 0), cap=10)


def _eps_coords(mu):
    """Type A oracle: level-zero weight -> gl_l coordinates with zero sum."""
    ell = len(mu)
    x = [Fraction(0)]
    for m in mu[1:]:
        x.append(x[-1] - m)
    shift = sum(x) / ell
    return [v - shift for v in x]


def test_cl_form_a1_value():
    d = datum_for("A", 2)
    assert cl_form(d, (-1, 1), (-1, 1)) == Fraction(1, 2)


@st.composite
def level_zero(draw, types=TYPES):
    fam, rank = draw(st.sampled_from(types))
    d = datum_for(fam, rank)
    rest = draw(st.lists(st.integers(-4, 4), min_size=len(d.cartan) - 1, max_size=len(d.cartan) - 1))
    # solve for h_0 so that the level vanishes; skip if not integral
    s = sum(a * m for a, m in zip(d.comarks[1:], rest))
    h0 = -s
    return d, (h0,) + tuple(rest)


@given(level_zero(types=[t for t in TYPES if t[0] == "A"]), st.data())
def test_cl_form_matches_gl_oracle(dm, data):
    d, mu = dm
    _, nu = data.draw(level_zero(types=[("A", d.rank)]))
    x, y = _eps_coords(mu), _eps_coords(nu)
    assert cl_form(d, mu, nu) == sum(a * b for a, b in zip(x, y))


@given(level_zero(), st.data())
def test_reflection_properties(dm, data):
    d, mu = dm
    j = data.draw(st.sampled_from(list(d.index_set)))
    r = reflect(d, j, mu)
    assert reflect(d, j, r) == mu
    assert d.level(r) == d.level(mu) == 0
    if mu[j] == 0:
        assert r == mu
    if j:
        assert cl_form(d, r, r) == cl_form(d, mu, mu)


@given(level_zero(), st.data())
def test_cl_form_positive_and_symmetric(dm, data):
    d, mu = dm
    _, nu = data.draw(level_zero(types=[(d.family, d.rank)]))
    q = cl_form(d, mu, mu)
    assert q >= 0 and (q == 0) == (not any(mu))
    assert cl_form(d, mu, nu) == cl_form(d, nu, mu)


@pytest.mark.parametrize("fam,rank", TYPES[:8])
def test_orbit_structure(fam, rank):
    d = datum_for(fam, rank)
    for i in d.classical_index_set:
        orb = finite_orbit(d, fundamental_cl(d, i))
        assert sum(is_dominant(d, m) for m in orb) == 1
        assert sum(is_antidominant(d, m) for m in orb) == 1
        assert finite_orbit(d, fundamental_cl(d, i), indices=d.index_set) == orb
        for j in d.index_set:
            assert {reflect(d, j, m) for m in orb} == orb
        assert dominant(d, anti_dominant(d, fundamental_cl(d, i))) == fundamental_cl(d, i)


@pytest.mark.parametrize("ell", [2, 3, 4, 5, 6])
def test_type_a_orbit_sizes(ell):
    from math import comb

    d = datum_for("A", ell)
    for i in range(1, ell):
        assert len(finite_orbit(d, fundamental_cl(d, i))) == comb(ell, i)


def test_dominant_weight_helpers():
    d = datum_for("A", 4)
    lam = DominantWeight.from_sequence(d, (3, 1, 1))
    assert lam.mults == (2, 0, 1)
    assert lam.as_sequence() == (3, 1, 1)
    assert str(lam) == "2w1+w3"
    assert lam.cl(d) == (-3, 2, 0, 1)
    assert (lam + DominantWeight.fundamental(d, 2)).mults == (2, 1, 1)
    with pytest.raises(WeightError):
        DominantWeight((-1, 0, 0))
