"""Sums over sign matrices, permutation matrices and the hyperoctahedral group.

The hyperoctahedral group ``B_n`` is enumerated as pairs ``(S, sigma)``
standing for ``Q_S @ P_sigma``, in lexicographic order of the pair.  Group
elements act on matrices by signed index permutation rather than by matrix
multiplication::

    (Q P X)[i, :]       = q_i * X[sigma(i), :]
    (X (Q P)^-1)[:, j]  = q_j * X[:, sigma(j)]

so no inverse is ever computed.  Every ``*_group_sum`` and ``conv_*_lhs``
function is a literal enumeration; the closed forms they are compared with
live in the ``predict_*`` functions here and in :mod:`octadet.freeconv`.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Any, Iterator, Sequence

from ._coverage import tracked
from .combi import (
    MAX_PERM_N,
    Permutation,
    Subset,
    _perm_table,
    all_permutations,
    all_subsets,
    subsets_of_size,
)
from .errors import DomainError, GuardError
from .matrices import (
    CharPolyCoeffs,
    Matrix,
    charpoly_raw,
    mat_mul,
    matadd_raw,
    matmul_raw,
    minor_raw,
    permutation_matrix,
    principal_minor_sum,
    sign_matrix,
)
from .rings import Integers, Ring, RingElement

__all__ = [
    "GroupElement",
    "FourSetTable",
    "max_terms",
    "group_order",
    "enumerate_signs",
    "enumerate_perms",
    "enumerate_group",
    "cancel_sum_q",
    "cancel_sum_p",
    "four_set_table",
    "symm_group_sum",
    "symm_group_sums",
    "asymm_group_sum",
    "asymm_group_sums",
    "conv_mult_lhs",
    "conv_add_lhs",
    "conv_rect_lhs",
    "predict_cancel_q",
    "predict_cancel_p",
    "predict_symm",
    "predict_asymm",
]

DEFAULT_MAX_TERMS = 10**7
MAX_SIGN_N = 12
MAX_TABLE_N = 6


def max_terms() -> int:
    """Group-sum term budget; ``OCTADET_MAX_TERMS`` raises it at the caller's risk."""
    raw = os.environ.get("OCTADET_MAX_TERMS")
    if raw is None:
        return DEFAULT_MAX_TERMS
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"OCTADET_MAX_TERMS must be an integer, got {raw!r}") from None
    if value < 1:
        raise DomainError(f"OCTADET_MAX_TERMS must be positive, got {value}")
    return value


def group_order(n: int) -> int:
    return 2**n * factorial(n)


def check_terms(what: str, count: int) -> None:
    limit = max_terms()
    if count > limit:
        raise GuardError(what, count, limit)


def _check_group_dim(n: int, what: str) -> None:
    if n < 1:
        raise DomainError(f"{what}: dimension must be positive, got {n}")
    if n > MAX_PERM_N:
        raise GuardError(f"{what}: permutations of [{n}]", factorial(n), factorial(MAX_PERM_N))


@dataclass(frozen=True)
class GroupElement:
    """The signed permutation matrix ``Q_{sign_set} @ P_{perm}``."""

    sign_set: Subset
    perm: Permutation

    def __post_init__(self):
        if self.sign_set.n != self.perm.n:
            raise DomainError(f"sign set over [{self.sign_set.n}] with permutation of [{self.perm.n}]")

    @property
    def n(self) -> int:
        return self.perm.n

    def matrix(self, ring: Ring) -> Matrix:
        return mat_mul(sign_matrix(self.sign_set, ring), permutation_matrix(self.perm, ring))

    def inverse_matrix(self, ring: Ring) -> Matrix:
        """``P_{perm^-1} @ Q_{sign_set}``."""
        return mat_mul(permutation_matrix(self.perm.inverse(), ring), sign_matrix(self.sign_set, ring))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.perm.apply(self.sign_set), self.perm.inverse())

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        # P_s Q_T = Q_{s^-1(T)} P_s
        pulled = self.perm.inverse().apply(other.sign_set)
        signs = Subset.of(self.n, set(self.sign_set.members) ^ set(pulled.members))
        return GroupElement(signs, self.perm * other.perm)

    def flags(self) -> tuple[bool, ...]:
        return tuple(i + 1 in self.sign_set for i in range(self.n))

    def index(self) -> tuple[int, ...]:
        return tuple(s - 1 for s in self.perm.image)

    def act_left(self, X: Matrix) -> Matrix:
        """``(Q P) @ X``."""
        if X.rows != self.n:
            raise DomainError(f"group element of [{self.n}] acting on {X.rows} rows")
        return Matrix(X.ring, _act_rows(X.ring, X.data, self.flags(), self.index()))

    def act_right_inverse(self, X: Matrix) -> Matrix:
        """``X @ (Q P)^-1``."""
        if X.cols != self.n:
            raise DomainError(f"group element of [{self.n}] acting on {X.cols} columns")
        return Matrix(X.ring, _act_cols(X.ring, X.data, self.flags(), self.index()))

    def sort_key(self) -> tuple:
        return self.sign_set.members, self.perm.image

    def to_json(self) -> dict:
        return {"sign_set": self.sign_set.to_json(), "perm": self.perm.to_json()}


# ---------------------------------------------------------------- raw actions


@lru_cache(maxsize=None)
def _group_raw(n: int) -> tuple[tuple[tuple[bool, ...], tuple[int, ...]], ...]:
    out = []
    for s in all_subsets(n):
        flags = tuple(i + 1 in s for i in range(n))
        for p, _ in _perm_table(n):
            out.append((flags, p))
    return tuple(out)


def _act_rows(R: Ring, X, flags, p):
    neg = R.neg
    return tuple(tuple(neg(v) for v in X[p[i]]) if flags[i] else X[p[i]] for i in range(len(p)))


def _act_cols(R: Ring, X, flags, p):
    neg = R.neg
    n = len(p)
    return tuple(tuple(neg(row[p[j]]) if flags[j] else row[p[j]] for j in range(n)) for row in X)


def _two_sided(R: Ring, X, fl, pl, fr, pr):
    """``(Q P) X (Q' P')^-1`` for left element ``(fl, pl)`` and right ``(fr, pr)``."""
    neg = R.neg
    out = []
    for i, src_i in enumerate(pl):
        src = X[src_i]
        fi = fl[i]
        out.append(tuple(neg(src[pr[j]]) if fi ^ fr[j] else src[pr[j]] for j in range(len(pr))))
    return tuple(out)


def _add_into(R: Ring, acc: list, vec: Sequence) -> None:
    add = R.add
    for i, v in enumerate(vec):
        acc[i] = add(acc[i], v)


# ---------------------------------------------------------------- enumeration


@tracked
def enumerate_signs(n: int, ring: Ring | None = None) -> Iterator[Matrix]:
    """All ``2^n`` sign matrices, in lexicographic order of their sign sets."""
    ring = ring or Integers()
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if n > MAX_SIGN_N:
        raise GuardError(f"sign matrices of [{n}]", 2**n, 2**MAX_SIGN_N)
    return (sign_matrix(s, ring) for s in all_subsets(n))


@tracked
def enumerate_perms(n: int, ring: Ring | None = None) -> Iterator[Matrix]:
    ring = ring or Integers()
    return (permutation_matrix(p, ring) for p in all_permutations(n))


@tracked
def enumerate_group(n: int) -> Iterator[GroupElement]:
    """All ``2^n n!`` elements ordered by ``(sign_set, perm)``."""
    _check_group_dim(n, "hyperoctahedral group")
    check_terms(f"hyperoctahedral group B_{n}", group_order(n))
    perms = list(all_permutations(n))
    return (GroupElement(s, p) for s in all_subsets(n) for p in perms)


# ---------------------------------------------------------------- cancellation lemmas


def _require(subset: Subset, n: int, name: str) -> None:
    if not isinstance(subset, Subset) or subset.n != n:
        raise DomainError(f"{name} must be a Subset of [{n}]")


@tracked
def cancel_sum_q(n: int, S: Subset, T: Subset, U: Subset, V: Subset, ring: Ring) -> RingElement:
    """``sum_Q [Q]_{S,T} [Q]_{U,V}`` over all sign matrices of size ``n``."""
    for name, s in zip("STUV", (S, T, U, V)):
        _require(s, n, name)
    if len(S) != len(T) or len(U) != len(V):
        raise DomainError("need |S| = |T| and |U| = |V|")
    R = ring
    acc = R.zero
    for Q in enumerate_signs(n, ring):
        acc = R.add(acc, R.mul(minor_raw(R, Q.data, S.index, T.index), minor_raw(R, Q.data, U.index, V.index)))
    return RingElement(R, acc)


@tracked
def cancel_sum_p(n: int, S: Subset, T: Subset, U: Subset, ring: Ring) -> RingElement:
    """``sum_P [P]_{S,T} [P^-1]_{U,S}`` over all permutation matrices of size ``n``."""
    for name, s in zip("STU", (S, T, U)):
        _require(s, n, name)
    if not len(S) == len(T) == len(U):
        raise DomainError("need |S| = |T| = |U|")
    R = ring
    acc = R.zero
    for sigma in all_permutations(n):
        P = permutation_matrix(sigma, ring).data
        Pinv = permutation_matrix(sigma.inverse(), ring).data
        acc = R.add(acc, R.mul(minor_raw(R, P, S.index, T.index), minor_raw(R, Pinv, U.index, S.index)))
    return RingElement(R, acc)


def predict_cancel_q(n: int, S: Subset, T: Subset, U: Subset, V: Subset, ring: Ring) -> RingElement:
    hit = S == T == U == V
    return RingElement(ring, ring.nat_scale(2**n, ring.one) if hit else ring.zero)


def predict_cancel_p(n: int, S: Subset, T: Subset, U: Subset, ring: Ring) -> RingElement:
    k = len(S)
    hit = T == U
    return RingElement(ring, ring.nat_scale(factorial(k) * factorial(n - k), ring.one) if hit else ring.zero)


# ---------------------------------------------------------------- four-set explorer


@dataclass
class FourSetTable:
    """``sum_P [P]_{S,T} [P^-1]_{U,V}`` over the integers for every quadruple of ``k``-subsets."""

    n: int
    k: int
    entries: dict[tuple[Subset, Subset, Subset, Subset], int]

    def rows(self) -> list[tuple[tuple[Subset, Subset, Subset, Subset], int]]:
        return sorted(self.entries.items())

    def __getitem__(self, key: tuple[Subset, Subset, Subset, Subset]) -> int:
        return self.entries[key]

    def value_counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.entries.values()).items()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "S", "T", "U", "V", "value"])
        for quad, value in self.rows():
            w.writerow([self.n, self.k, *(s.label() for s in quad), value])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "rows": len(self.entries),
            "distinct_values": len(set(self.entries.values())),
            "value_counts": {str(v): c for v, c in self.value_counts().items()},
        }


def _restricted_sign(src: tuple[int, ...], dst: tuple[int, ...], p: Sequence[int]) -> int:
    """Sign of the bijection ``src -> dst`` induced by ``p`` (both sorted, 0-based)."""
    pos = {d: a for a, d in enumerate(dst)}
    img = [pos[p[s]] for s in src]
    inv = 0
    for a in range(len(img)):
        for b in range(a + 1, len(img)):
            if img[a] > img[b]:
                inv += 1
    return -1 if inv & 1 else 1


@tracked
def four_set_table(n: int, k: int) -> FourSetTable:
    """Tabulate the four-subset permutation sums over the integers.

    A minor ``[P]_{S,T}`` of a permutation matrix vanishes unless the
    permutation carries ``S`` onto ``T``, where it is the sign of the induced
    bijection; the table is filled from those nonzero terms only.
    """
    if n < 1 or k < 0:
        raise DomainError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    if n > MAX_TABLE_N:
        raise GuardError(f"four-set table for n={n}", factorial(n), factorial(MAX_TABLE_N))
    subsets = list(subsets_of_size(n, k))
    entries = {q: 0 for q in itertools.product(subsets, repeat=4)}
    for p, _ in _perm_table(n):
        inv = [0] * n
        for i, s in enumerate(p):
            inv[s] = i
        # [P]_{S,T} != 0 iff p(S) = T; [P^-1]_{U,V} != 0 iff p(V) = U
        forward = []
        for s in subsets:
            src = s.index
            dst = tuple(sorted(p[i] for i in src))
            forward.append((s, Subset(n, tuple(d + 1 for d in dst)), _restricted_sign(src, dst, p)))
        backward = []
        for v in subsets:
            dst_idx = v.index
            u_idx = tuple(sorted(p[i] for i in dst_idx))
            # P^-1 has ones at (p(j), j): rows U, columns V through inv
            backward.append((Subset(n, tuple(u + 1 for u in u_idx)), v, _restricted_sign(u_idx, dst_idx, inv)))
        for S, T, sg in forward:
            for U, V, sg2 in backward:
                entries[(S, T, U, V)] += sg * sg2
    return FourSetTable(n, k, entries)


def four_set_entry(n: int, S: Subset, T: Subset, U: Subset, V: Subset) -> int:
    """One table entry by explicit minors of every permutation matrix."""
    Z = Integers()
    total = 0
    for sigma in all_permutations(n):
        P = permutation_matrix(sigma, Z).data
        Pinv = permutation_matrix(sigma.inverse(), Z).data
        total += minor_raw(Z, P, S.index, T.index) * minor_raw(Z, Pinv, U.index, V.index)
    return total


# ---------------------------------------------------------------- symmetric / asymmetric lemmas


def _shapes(**mats: tuple[Matrix, tuple[int | None, int | None]]) -> None:
    ring = None
    for name, (M, (r, c)) in mats.items():
        if ring is None:
            ring = M.ring
        elif M.ring != ring:
            raise DomainError(f"ring mismatch: {name} is over {M.ring}, expected {ring}")
        if (r is not None and M.rows != r) or (c is not None and M.cols != c):
            want = f"{r if r is not None else '*'}x{c if c is not None else '*'}"
            raise DomainError(f"{name} must be {want}, got {M.rows}x{M.cols}")


def _subset_pair(X: Subset, Y: Subset, rows: int, cols: int, what: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if X.n != rows or Y.n != cols:
        raise DomainError(f"{what}: subsets must lie in [{rows}] and [{cols}]")
    if len(X) != len(Y):
        raise DomainError(f"{what}: subsets must have equal size, got {len(X)} and {len(Y)}")
    return X.index, Y.index


def symm_group_sums(A: Matrix, B: Matrix, C: Matrix, pairs: Sequence[tuple[Subset, Subset]]) -> list[RingElement]:
    """:func:`symm_group_sum` for many ``(X, Y)`` at once, sharing the enumeration."""
    n = A.rows
    _shapes(A=(A, (n, n)), B=(B, (None, n)), C=(C, (n, None)))
    idx = [_subset_pair(X, Y, B.rows, C.cols, "symm_group_sum") for X, Y in pairs]
    _check_group_dim(n, "symm_group_sum")
    check_terms("symm_group_sum", group_order(n))
    R = A.ring
    acc = [R.zero] * len(idx)
    for flags, p in _group_raw(n):
        conj = _two_sided(R, A.data, flags, p, flags, p)
        M = matmul_raw(R, matmul_raw(R, B.data, conj), C.data)
        for t, (xi, yi) in enumerate(idx):
            acc[t] = R.add(acc[t], minor_raw(R, M, xi, yi))
    return [RingElement(R, v) for v in acc]


@tracked
def symm_group_sum(A: Matrix, B: Matrix, C: Matrix, X: Subset, Y: Subset) -> RingElement:
    """``sum_{Q,P} [B (QP) A (QP)^-1 C]_{X,Y}`` with ``A`` n x n, ``B`` m x n, ``C`` n x r."""
    return symm_group_sums(A, B, C, [(X, Y)])[0]


def predict_symm(A: Matrix, B: Matrix, C: Matrix, X: Subset, Y: Subset) -> RingElement:
    n, k = A.rows, len(X)
    R = A.ring
    if k > n:
        return RingElement(R, R.zero)
    bc = minor_raw(R, matmul_raw(R, B.data, C.data), X.index, Y.index)
    value = R.mul(bc, principal_minor_sum(A, k).value)
    return RingElement(R, R.nat_scale(2**n * factorial(k) * factorial(n - k), value))


AsymmChoice = tuple[Subset, Subset, Subset, Subset]


def asymm_group_sums(
    A: Matrix, B: Matrix, C: Matrix, E: Matrix, F: Matrix, G: Matrix, choices: Sequence[AsymmChoice]
) -> list[RingElement]:
    """:func:`asymm_group_sum` for many ``(X, Y, W, Z)``, sharing the enumeration."""
    n, m = A.rows, A.cols
    _shapes(
        A=(A, (n, m)), B=(B, (None, n)), C=(C, (m, None)),
        E=(E, (m, n)), F=(F, (None, m)), G=(G, (n, None)),
    )
    idx = []
    for X, Y, W, Z in choices:
        idx.append(
            _subset_pair(X, Y, B.rows, C.cols, "asymm_group_sum (X, Y)")
            + _subset_pair(W, Z, F.rows, G.cols, "asymm_group_sum (W, Z)")
        )
    _check_group_dim(n, "asymm_group_sum")
    _check_group_dim(m, "asymm_group_sum")
    check_terms("asymm_group_sum", group_order(n) * group_order(m))
    R = A.ring
    mul, add = R.mul, R.add
    acc = [R.zero] * len(idx)
    gn, gm = _group_raw(n), _group_raw(m)
    for fg, pg in gn:
        for fh, ph in gm:
            left = matmul_raw(R, matmul_raw(R, B.data, _two_sided(R, A.data, fg, pg, fh, ph)), C.data)
            right = matmul_raw(R, matmul_raw(R, F.data, _two_sided(R, E.data, fh, ph, fg, pg)), G.data)
            for t, (xi, yi, wi, zi) in enumerate(idx):
                acc[t] = add(acc[t], mul(minor_raw(R, left, xi, yi), minor_raw(R, right, wi, zi)))
    return [RingElement(R, v) for v in acc]


@tracked
def asymm_group_sum(
    A: Matrix, B: Matrix, C: Matrix, E: Matrix, F: Matrix, G: Matrix,
    X: Subset, Y: Subset, W: Subset, Z: Subset,
) -> RingElement:
    """Sum over ``g in B_n``, ``h in B_m`` of ``[B g A h^-1 C]_{X,Y} [F h E g^-1 G]_{W,Z}``.

    Shapes: ``A`` n x m, ``B`` p1 x n, ``C`` m x r1, ``E`` m x n, ``F`` p2 x m,
    ``G`` n x r2.
    """
    return asymm_group_sums(A, B, C, E, F, G, [(X, Y, W, Z)])[0]


def predict_asymm(
    A: Matrix, B: Matrix, C: Matrix, E: Matrix, F: Matrix, G: Matrix,
    X: Subset, Y: Subset, W: Subset, Z: Subset,
) -> RingElement:
    n, m = A.rows, A.cols
    k, j = len(X), len(W)
    R = A.ring
    if j != k or k > min(n, m):
        return RingElement(R, R.zero)
    bg = minor_raw(R, matmul_raw(R, B.data, G.data), X.index, Z.index)
    fc = minor_raw(R, matmul_raw(R, F.data, C.data), W.index, Y.index)
    ae = principal_minor_sum(Matrix(R, matmul_raw(R, A.data, E.data)), k).value
    count = 2 ** (n + m) * factorial(k) * factorial(n - k) * factorial(k) * factorial(m - k)
    return RingElement(R, R.nat_scale(count, R.mul(R.mul(bg, fc), ae)))


# ---------------------------------------------------------------- convolution left-hand sides


def conv_mult_terms(m: int) -> int:
    return group_order(m)


def conv_add_terms(n: int) -> int:
    return group_order(n)


def conv_rect_terms(n: int, m: int) -> int:
    return group_order(n) * group_order(m)


@tracked
def conv_mult_lhs(A: Matrix, B: Matrix, C: Matrix) -> CharPolyCoeffs:
    """``sum_{g in B_m} det(xI + B g A g^-1 C)`` for ``A`` m x m, ``B`` n x m, ``C`` m x n."""
    m = A.rows
    n = B.rows
    _shapes(A=(A, (m, m)), B=(B, (n, m)), C=(C, (m, n)))
    _check_group_dim(m, "conv_mult_lhs")
    check_terms("conv_mult_lhs", conv_mult_terms(m))
    R = A.ring
    acc = [R.zero] * (n + 1)
    for flags, p in _group_raw(m):
        conj = _two_sided(R, A.data, flags, p, flags, p)
        _add_into(R, acc, charpoly_raw(R, matmul_raw(R, matmul_raw(R, B.data, conj), C.data)))
    return CharPolyCoeffs(R, acc)


@tracked
def conv_add_lhs(A: Matrix, B: Matrix) -> CharPolyCoeffs:
    """``sum_{g in B_n} det(xI + g A g^-1 + B)``."""
    n = A.rows
    _shapes(A=(A, (n, n)), B=(B, (n, n)))
    _check_group_dim(n, "conv_add_lhs")
    check_terms("conv_add_lhs", conv_add_terms(n))
    R = A.ring
    acc = [R.zero] * (n + 1)
    for flags, p in _group_raw(n):
        conj = _two_sided(R, A.data, flags, p, flags, p)
        _add_into(R, acc, charpoly_raw(R, matadd_raw(R, conj, B.data)))
    return CharPolyCoeffs(R, acc)


@tracked
def conv_rect_lhs(A: Matrix, B: Matrix, C: Matrix, D: Matrix) -> CharPolyCoeffs:
    """``sum_{g in B_n, h in B_m} det(xI + (g A h^-1 + B)(h C g^-1 + D))``.

    ``A`` and ``B`` are n x m, ``C`` and ``D`` are m x n, with ``n <= m``.
    """
    n, m = A.rows, A.cols
    if n > m:
        raise DomainError(f"rectangular convolution needs n <= m, got {n}x{m}")
    _shapes(A=(A, (n, m)), B=(B, (n, m)), C=(C, (m, n)), D=(D, (m, n)))
    _check_group_dim(n, "conv_rect_lhs")
    _check_group_dim(m, "conv_rect_lhs")
    check_terms("conv_rect_lhs", conv_rect_terms(n, m))
    R = A.ring
    acc = [R.zero] * (n + 1)
    gn, gm = _group_raw(n), _group_raw(m)
    for fg, pg in gn:
        for fh, ph in gm:
            left = matadd_raw(R, _two_sided(R, A.data, fg, pg, fh, ph), B.data)
            right = matadd_raw(R, _two_sided(R, C.data, fh, ph, fg, pg), D.data)
            _add_into(R, acc, charpoly_raw(R, matmul_raw(R, left, right)))
    return CharPolyCoeffs(R, acc)


def group_sum_terms(kind: str, n: int, m: int | None = None) -> int:
    """Dry-run term count for a convolution group sum."""
    if kind == "add":
        return conv_add_terms(n)
    if kind == "mult":
        return conv_mult_terms(m if m is not None else n)
    if kind == "rect":
        return conv_rect_terms(n, m if m is not None else n)
    raise DomainError(f"unknown convolution kind {kind!r}")


def all_k_subset_pairs(rows: int, cols: int) -> list[tuple[Subset, Subset]]:
    """Every ``(X, Y)`` with ``|X| = |Y|``, ``X`` in ``[rows]``, ``Y`` in ``[cols]``."""
    out = []
    for k in range(min(rows, cols) + 1):
        for X in subsets_of_size(rows, k):
            for Y in subsets_of_size(cols, k):
                out.append((X, Y))
    return out
