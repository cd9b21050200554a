import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ALL_RINGS, rand_mat
from octadet import prng
from octadet.combi import Permutation, Subset, all_permutations, all_subsets, subsets_of_size, sym_diff
from octadet.errors import DomainError, GuardError
from octadet.matrices import (
    CharPolyCoeffs,
    Matrix,
    binomial_charpoly,
    cauchy_binet,
    charpoly,
    charpoly_by_poly_det,
    det,
    det_add_expansion,
    det_berkowitz,
    det_leibniz,
    identity,
    mat_add,
    mat_mul,
    mat_neg,
    minor,
    permutation_matrix,
    principal_minor_sum,
    sign_matrix,
    zeros,
)
from octadet.rings import Integers, IntegersMod, Poly, ring_from_spec

Z = Integers()


def M(rows, ring=Z):
    return Matrix.from_rows(ring, rows)


A22 = M([[1, 2], [3, 4]])


@st.composite
def square(draw, max_n=5, specs=ALL_RINGS):
    spec = draw(st.sampled_from(specs))
    n = draw(st.integers(1, max_n))
    rng = prng.SplitMix64(draw(st.integers(0, 2**64 - 1)))
    return rand_mat(spec, n, n, rng)


@st.composite
def square_pair(draw, max_n=4):
    spec = draw(st.sampled_from(ALL_RINGS))
    n = draw(st.integers(1, max_n))
    rng = prng.SplitMix64(draw(st.integers(0, 2**64 - 1)))
    return rand_mat(spec, n, n, rng), rand_mat(spec, n, n, rng)


# ---- examples


def test_mat_mul_by_identity():
    assert mat_mul(A22, identity(2, Z)) == A22
    assert A22 @ identity(2, Z) == A22


def test_arith_errors():
    with pytest.raises(DomainError):
        mat_mul(A22, M([[1, 2, 3]]))
    with pytest.raises(DomainError):
        mat_add(A22, identity(2, IntegersMod(5)))
    with pytest.raises(DomainError):
        mat_add(A22, M([[1, 2]]))
    assert mat_neg(A22) == M([[-1, -2], [-3, -4]])
    assert A22 - A22 == zeros(Z, 2, 2)


def test_permutation_and_sign_matrices():
    assert permutation_matrix(Permutation.identity(3), Z) == identity(3, Z)
    assert permutation_matrix(Permutation((2, 1)), Z) == M([[0, 1], [1, 0]])
    assert sign_matrix(Subset(3, ()), Z) == identity(3, Z)
    assert sign_matrix(Subset(2, (1,)), Z) == M([[-1, 0], [0, 1]])


def test_determinant_examples():
    for n in range(1, 6):
        assert det_leibniz(identity(n, Z)) == Z(1)
        assert det_berkowitz(identity(n, Z)) == Z(1)
    assert det_leibniz(A22) == Z(-2)
    assert det_berkowitz(A22) == Z(-2)
    repeated = M([[1, 2, 3], [4, 5, 6], [1, 2, 3]])
    assert det_leibniz(repeated).is_zero() and det_berkowitz(repeated).is_zero()


def test_determinant_errors():
    with pytest.raises(DomainError):
        det_leibniz(M([[1, 2]]))
    with pytest.raises(DomainError):
        det_berkowitz(M([[1, 2]]))
    with pytest.raises(GuardError, match="9 exceeds|362880"):
        det_leibniz(identity(9, Z))
    # the Berkowitz route has no such limit
    assert det_berkowitz(identity(12, Z)) == Z(1)


def test_minor_examples():
    assert minor(A22, [], []) == Z(1)
    assert minor(A22, Subset(2, (1,)), Subset(2, (2,))) == Z(2)
    assert minor(A22, [1, 2], [1, 2]) == Z(-2)
    with pytest.raises(DomainError):
        minor(A22, [1], [1, 2])
    with pytest.raises(DomainError):
        minor(A22, [3], [1])
    with pytest.raises(DomainError):
        minor(A22, [2, 1], [1, 2])


def test_principal_minor_sum_examples():
    assert principal_minor_sum(A22, 0) == Z(1)
    assert principal_minor_sum(A22, 1) == Z(5)
    assert principal_minor_sum(A22, 2) == Z(-2)
    assert principal_minor_sum(A22, 3) == Z(0)


def test_charpoly_examples():
    assert [c.value for c in charpoly(M([[7]]))] == [1, 7]
    assert charpoly(A22).to_json() == {"ring": "int", "degree": 2, "coeffs": [1, 5, -2]}
    F5 = IntegersMod(5)
    assert [c.value for c in charpoly(identity(3, F5))] == [1, 3, 3, 1]
    for spec in ALL_RINGS:
        R = ring_from_spec(spec)
        for n in range(1, 5):
            assert charpoly(identity(n, R)) == binomial_charpoly(n, R)


def test_det_add_examples():
    assert det_add_expansion(A22, zeros(Z, 2, 2)) == det(A22)
    assert det_add_expansion(identity(1, Z), identity(1, Z)) == Z(2)
    with pytest.raises(DomainError):
        det_add_expansion(A22, identity(3, Z))
    with pytest.raises(GuardError):
        det_add_expansion(identity(7, Z), identity(7, Z))


def test_cauchy_binet_examples():
    B = M([[1, 0, 2], [0, 1, 1]])
    assert cauchy_binet(A22, B, [], []) == Z(1)
    # rank two product: every 3x3 minor would need three inner indices; k = 2 sizes only
    C = M([[1], [2]])
    assert cauchy_binet(C, M([[3, 4]]), [1, 2], [1, 2]) == Z(0)
    assert minor(C @ M([[3, 4]]), [1, 2], [1, 2]) == Z(0)
    with pytest.raises(DomainError):
        cauchy_binet(A22, B, [1], [1, 2])


# ---- invariants


@settings(max_examples=150)
@given(square(max_n=6))
def test_berkowitz_matches_leibniz(A):
    assert det_berkowitz(A) == det_leibniz(A)


@given(square())
def test_charpoly_is_principal_minor_sums(A):
    cp = charpoly(A)
    assert cp.degree == A.rows
    assert cp[0].value == A.ring.one
    for k in range(A.rows + 1):
        assert cp[k] == principal_minor_sum(A, k)


@given(square(max_n=4))
def test_charpoly_matches_polynomial_determinant(A):
    assert charpoly(A) == charpoly_by_poly_det(A)


@settings(max_examples=60)
@given(st.sampled_from(ALL_RINGS), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**64 - 1))
def test_cauchy_binet_all_subsets(spec, m, n, p, seed):
    rng = prng.SplitMix64(seed)
    A, B = rand_mat(spec, m, n, rng), rand_mat(spec, n, p, rng)
    AB = mat_mul(A, B)
    for k in range(min(m, p) + 1):
        for S, T in itertools.product(subsets_of_size(m, k), subsets_of_size(p, k)):
            assert cauchy_binet(A, B, S, T) == minor(AB, S, T)


@given(square_pair())
def test_additive_expansion(pair):
    A, B = pair
    assert det_add_expansion(A, B) == det(mat_add(A, B))


@given(square_pair(max_n=5))
def test_det_multiplicative(pair):
    A, B = pair
    assert det(A @ B) == det(A) * det(B)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_permutation_homomorphism(n):
    perms = list(all_permutations(n))
    mats = {s: permutation_matrix(s, Z) for s in perms}
    for s, t in itertools.product(perms, repeat=2):
        assert mats[s * t] == mats[s] @ mats[t]
    for s in perms:
        assert mats[s] @ mats[s.inverse()] == identity(n, Z)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sign_homomorphism(n):
    subs = all_subsets(n)
    for s, t in itertools.product(subs, repeat=2):
        assert sign_matrix(s, Z) @ sign_matrix(t, Z) == sign_matrix(sym_diff(s, t), Z)
    for s in subs:
        assert sign_matrix(s, Z) @ sign_matrix(s, Z) == identity(n, Z)


def test_boolean_ring_sign_matrices_trivial():
    for R in (IntegersMod(2), Poly(IntegersMod(2))):
        for s in all_subsets(3):
            assert sign_matrix(s, R) == identity(3, R)


# ---- serialization


def test_matrix_json_round_trip():
    P = Poly(IntegersMod(3))
    A = Matrix.from_rows(P, [[[1, 2], [0]], [[], [2, 0, 1]]])
    obj = json.loads(json.dumps(A.to_json()))
    assert obj == {"ring": "poly:mod:3", "rows": 2, "cols": 2, "entries": [[[1, 2], []], [[], [2, 0, 1]]]}
    assert Matrix.from_json(obj) == A


def test_matrix_json_errors():
    with pytest.raises(DomainError, match="explicit ring"):
        Matrix.from_json([[1]])
    with pytest.raises(DomainError, match="declares ring"):
        Matrix.from_json({"ring": "int", "entries": [[1]]}, IntegersMod(3))
    with pytest.raises(DomainError, match="rows=3"):
        Matrix.from_json({"ring": "int", "rows": 3, "entries": [[1]]})
    with pytest.raises(DomainError, match=r"entry \(1, 2\)"):
        Matrix.from_json({"ring": "int", "entries": [[1, "x"]]})
    with pytest.raises(DomainError, match="ragged"):
        Matrix.from_json({"ring": "int", "entries": [[1, 2], [3]]})
    with pytest.raises(DomainError):
        Matrix(Z, [])


def test_charpoly_json_round_trip():
    cp = charpoly(A22)
    assert CharPolyCoeffs.from_json(cp.to_json()) == cp
    assert not cp.is_zero()


def test_entry_is_one_based():
    assert A22.entry(2, 1) == Z(3)
    with pytest.raises(DomainError):
        A22.entry(0, 1)
