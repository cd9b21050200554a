import itertools
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from octadet.combi import (
    Parity,
    Permutation,
    Subset,
    all_permutations,
    all_subsets,
    complement,
    induced_set,
    l1_parity,
    subsets_of_size,
    sym_diff,
)
from octadet.errors import DomainError, GuardError


def S(n, *members):
    return Subset(n, members)


@st.composite
def subsets(draw, n=None):
    n = draw(st.integers(1, 9)) if n is None else n
    return Subset.of(n, draw(st.sets(st.integers(1, n))))


@st.composite
def permutation_pairs(draw):
    n = draw(st.integers(1, 7))
    a = draw(st.permutations(range(1, n + 1)))
    b = draw(st.permutations(range(1, n + 1)))
    return Permutation(tuple(a)), Permutation(tuple(b))


def _inversions(image):
    return sum(1 for i, j in itertools.combinations(range(len(image)), 2) if image[i] > image[j])


@pytest.mark.parametrize("n", range(1, 7))
def test_l1_parity_is_additive_under_symmetric_difference(n):
    for s, t in itertools.product(all_subsets(n), repeat=2):
        assert l1_parity(s) ^ l1_parity(t) == l1_parity(sym_diff(s, t))


@given(permutation_pairs())
def test_parity_multiplicative(pair):
    s, t = pair
    assert (s * t).parity == s.parity ^ t.parity
    assert s.inverse().parity == s.parity


@given(permutation_pairs())
def test_parity_matches_inversion_count(pair):
    s, _ = pair
    assert int(s.parity) == _inversions(s.image) % 2


@given(permutation_pairs())
def test_composition_convention(pair):
    s, t = pair
    for i in range(1, s.n + 1):
        assert (s * t)(i) == t(s(i))
    assert (s * s.inverse()) == Permutation.identity(s.n)


@pytest.mark.parametrize("n", range(0, 7))
def test_subsets_of_size_counts(n):
    for k in range(n + 2):
        got = list(subsets_of_size(n, k))
        assert len(got) == comb(n, k) == len(set(got))
        assert got == sorted(got)


def test_subsets_of_size_examples():
    assert list(subsets_of_size(3, 2)) == [S(3, 1, 2), S(3, 1, 3), S(3, 2, 3)]
    assert list(subsets_of_size(5, 0)) == [S(5)]
    assert list(subsets_of_size(4, 4)) == [S(4, 1, 2, 3, 4)]
    assert list(subsets_of_size(2, 3)) == []


def test_all_permutations_examples():
    two = list(all_permutations(2))
    assert [p.image for p in two] == [(1, 2), (2, 1)]
    assert [p.parity for p in two] == [Parity.EVEN, Parity.ODD]
    three = list(all_permutations(3))
    assert len(three) == 6
    assert sum(p.parity is Parity.EVEN for p in three) == 3
    (one,) = all_permutations(1)
    assert one.parity is Parity.EVEN
    assert len(list(all_permutations(5))) == factorial(5)


def test_all_permutations_guard():
    with pytest.raises(GuardError, match="40320"):
        all_permutations(9)


def test_induced_set():
    R = S(9, 1, 4, 7, 9)
    assert induced_set(S(4, 2, 3), R) == S(9, 4, 7)
    assert induced_set(S(4), R) == S(9)
    assert induced_set(S(4, 1, 2, 3, 4), R) == R
    with pytest.raises(DomainError):
        induced_set(S(5, 5), R)


@given(subsets(), subsets())
def test_induced_set_order_preserving_and_injective(r, t_raw):
    t = Subset.of(len(r), [i for i in t_raw.members if i <= len(r)])
    image = induced_set(t, r)
    assert len(image) == len(t)
    assert list(image.members) == sorted(image.members)
    for u in all_subsets(len(r)) if len(r) <= 5 else []:
        if u != t:
            assert induced_set(u, r) != image


def test_sym_diff_examples():
    assert sym_diff(S(3, 1, 2), S(3, 2, 3)) == S(3, 1, 3)
    s = S(5, 2, 4)
    assert sym_diff(s, s) == S(5)
    assert sym_diff(s, S(5)) == s
    with pytest.raises(DomainError):
        sym_diff(S(3, 1), S(4, 1))


def test_l1_parity_examples():
    assert l1_parity(S(3, 1, 3)) is Parity.EVEN
    assert l1_parity(S(3, 1, 2)) is Parity.ODD
    assert l1_parity(S(3)) is Parity.EVEN


@given(subsets())
def test_complement_involution(s):
    assert complement(complement(s)) == s
    assert len(complement(s)) == s.n - len(s)


def test_complement_examples():
    assert complement(S(4, 1, 3)) == S(4, 2, 4)
    assert complement(S(3)) == S(3, 1, 2, 3)


@pytest.mark.parametrize("members", [(2, 1), (1, 1), (0,), (5,)])
def test_subset_validation(members):
    with pytest.raises(DomainError):
        Subset(4, members)


def test_permutation_validation():
    with pytest.raises(DomainError):
        Permutation((1, 1, 2))
    with pytest.raises(DomainError):
        Permutation((1, 2)) * Permutation((1, 2, 3))


def test_json_round_trip():
    s = S(4, 1, 3)
    assert s.to_json() == {"n": 4, "members": [1, 3]}
    assert Subset.from_json(s.to_json()) == s
    p = Permutation((2, 1, 3))
    assert p.to_json() == {"image": [2, 1, 3]}
    assert Permutation.from_json(p.to_json()) == p


def test_subset_order_and_apply():
    assert S(3, 1, 3) < S(3, 2) < S(3, 2, 3)
    assert Permutation((3, 1, 2)).apply(S(3, 1, 2)) == S(3, 1, 3)
    assert S(4, 2, 3).label() == "2-3"
    assert S(4, 2, 3).index == (1, 2)


def test_parity_parse():
    assert Parity.parse("even") is Parity.EVEN
    assert Parity.parse(1) is Parity.ODD
    assert Parity.ODD ^ Parity.ODD is Parity.EVEN
