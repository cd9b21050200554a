"""Dense matrices over a commutative ring, determinants and minors.

Two determinant algorithms are provided and each is the other's oracle:
:func:`det_leibniz` sums over permutations, :func:`det_berkowitz` uses the
division-free Samuelson-Berkowitz recursion.  The characteristic polynomial
follows the ``det(xI + A)`` convention, so coefficient ``k`` is the sum of
the ``k``-by-``k`` principal minors.

Functions whose names end in ``_raw`` work on tuples of payload rows with
0-based indices; they are the kernels used by :mod:`octadet.hyperoct`.
"""

from __future__ import annotations

import itertools
import json
from math import comb
from typing import Any, Iterable, Sequence

from ._coverage import tracked
from .combi import MAX_PERM_N, Permutation, Subset, _perm_table, subsets_of_size
from .errors import DomainError, GuardError
from .rings import Ring, RingElement, ring_from_spec

__all__ = [
    "Matrix",
    "CharPolyCoeffs",
    "identity",
    "zeros",
    "mat_mul",
    "mat_add",
    "mat_neg",
    "permutation_matrix",
    "sign_matrix",
    "det_leibniz",
    "det_berkowitz",
    "det",
    "minor",
    "principal_minor_sum",
    "principal_minor_sums",
    "charpoly",
    "charpoly_by_poly_det",
    "det_add_expansion",
    "cauchy_binet",
    "MAX_ADD_EXPANSION_N",
]

MAX_ADD_EXPANSION_N = 6
# minors up to this size go through the permutation expansion
_LEIBNIZ_MINOR_MAX = 4

Rows = tuple  # tuple[tuple[payload, ...], ...]


class Matrix:
    """An immutable ``rows x cols`` matrix of payloads of ``ring``."""

    __slots__ = ("ring", "rows", "cols", "data")

    def __init__(self, ring: Ring, data: Sequence[Sequence[Any]]):
        data = tuple(tuple(r) for r in data)
        if not data or not data[0]:
            raise DomainError("matrices must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DomainError("ragged matrix rows")
        self.ring = ring
        self.rows = len(data)
        self.cols = width
        self.data = data

    @classmethod
    def from_rows(cls, ring: Ring, rows: Iterable[Iterable[Any]]) -> "Matrix":
        """Build from loosely typed entries (ints, coefficient lists, RingElements)."""
        coerce = ring.coerce
        data = []
        for i, row in enumerate(rows, 1):
            if not isinstance(row, (list, tuple)):
                raise DomainError(f"row {i}: expected a list of entries, got {row!r}")
            out = []
            for j, v in enumerate(row, 1):
                try:
                    out.append(coerce(v))
                except DomainError as exc:
                    raise DomainError(f"entry ({i}, {j}): {exc}") from None
            data.append(out)
        return cls(ring, data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int) -> RingElement:
        """Entry in row ``i``, column ``j`` (1-based)."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise DomainError(f"index ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
        return RingElement(self.ring, self.data[i - 1][j - 1])

    def to_lists(self) -> list[list[RingElement]]:
        return [[RingElement(self.ring, v) for v in row] for row in self.data]

    def to_json(self) -> dict:
        enc = self.ring.encode
        return {
            "ring": str(self.ring),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[enc(v) for v in row] for row in self.data],
        }

    @classmethod
    def from_json(cls, obj: Any, ring: Ring | None = None) -> "Matrix":
        """Parse matrix JSON; a bare list of rows is accepted when ``ring`` is given."""
        if isinstance(obj, list):
            if ring is None:
                raise DomainError("a bare list of rows needs an explicit ring")
            return cls.from_rows(ring, obj)
        if not isinstance(obj, dict) or "entries" not in obj:
            raise DomainError("matrix JSON must be an object with an 'entries' field")
        if "ring" in obj:
            declared = ring_from_spec(obj["ring"])
            if ring is not None and declared != ring:
                raise DomainError(f"matrix declares ring {declared} but {ring} was requested")
            ring = declared
        if ring is None:
            raise DomainError("matrix JSON has no 'ring' field and no ring was given")
        m = cls.from_rows(ring, obj["entries"])
        for key, actual in (("rows", m.rows), ("cols", m.cols)):
            if key in obj and int(obj[key]) != actual:
                raise DomainError(f"matrix declares {key}={obj[key]} but has {actual}")
        return m

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.ring, self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        return mat_add(self, other)

    def __neg__(self) -> "Matrix":
        return mat_neg(self)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return mat_add(self, mat_neg(other))

    def __repr__(self) -> str:
        fmt = self.ring.format
        body = "; ".join(", ".join(fmt(v) for v in row) for row in self.data)
        return f"Matrix({self.ring}, [{body}])"


class CharPolyCoeffs:
    """Coefficients ``c_0..c_n`` with ``det(xI + A) = sum_k x^(n-k) c_k``.

    Equality compares ring and coefficients only, so vectors produced by
    different routes compare equal when their values agree.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: Sequence[Any]):
        self.ring = ring
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> RingElement:
        return RingElement(self.ring, self.coeffs[k])

    def __len__(self) -> int:
        return len(self.coeffs)

    def elements(self) -> list[RingElement]:
        return [RingElement(self.ring, c) for c in self.coeffs]

    def is_zero(self) -> bool:
        z = self.ring.zero
        return all(c == z for c in self.coeffs)

    def to_json(self) -> dict:
        enc = self.ring.encode
        return {"ring": str(self.ring), "degree": self.degree, "coeffs": [enc(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict, ring: Ring | None = None) -> "CharPolyCoeffs":
        ring = ring or ring_from_spec(obj["ring"])
        coeffs = [ring.decode(c) for c in obj["coeffs"]]
        if "degree" in obj and int(obj["degree"]) != len(coeffs) - 1:
            raise DomainError(f"degree {obj['degree']} does not match {len(coeffs)} coefficients")
        return cls(ring, coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CharPolyCoeffs):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring, self.coeffs))

    def __repr__(self) -> str:
        fmt = self.ring.format
        return f"{type(self).__name__}({self.ring}, [{', '.join(fmt(c) for c in self.coeffs)}])"


# ---------------------------------------------------------------- kernels


def matmul_raw(R: Ring, X: Rows, Y: Rows) -> Rows:
    add, mul = R.add, R.mul
    cols = tuple(zip(*Y))
    out = []
    for row in X:
        out_row = []
        for col in cols:
            acc = mul(row[0], col[0])
            for a, b in zip(row[1:], col[1:]):
                acc = add(acc, mul(a, b))
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def matadd_raw(R: Ring, X: Rows, Y: Rows) -> Rows:
    add = R.add
    return tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(X, Y))


def det_leibniz_raw(R: Ring, M: Sequence[Sequence[Any]]) -> Any:
    n = len(M)
    if n == 0:
        return R.one
    add, sub, mul = R.add, R.sub, R.mul
    total = R.zero
    for p, odd in _perm_table(n):
        prod = M[0][p[0]]
        for i in range(1, n):
            prod = mul(prod, M[i][p[i]])
        total = sub(total, prod) if odd else add(total, prod)
    return total


def berkowitz_raw(R: Ring, M: Sequence[Sequence[Any]]) -> list:
    """Coefficients of ``det(xI - M)``, leading coefficient first."""
    n = len(M)
    if n == 0:
        return [R.one]
    add, mul, neg = R.add, R.mul, R.neg
    poly = [R.one, neg(M[n - 1][n - 1])]
    for s in range(n - 2, -1, -1):
        k = n - s - 1
        row = M[s][s + 1:]
        sub = [r[s + 1:] for r in M[s + 1:]]
        v = [r[s] for r in M[s + 1:]]
        t = [R.one, neg(M[s][s])]
        for j in range(k):
            acc = mul(row[0], v[0])
            for a, b in zip(row[1:], v[1:]):
                acc = add(acc, mul(a, b))
            t.append(neg(acc))
            if j < k - 1:
                nv = []
                for r in sub:
                    acc = mul(r[0], v[0])
                    for a, b in zip(r[1:], v[1:]):
                        acc = add(acc, mul(a, b))
                    nv.append(acc)
                v = nv
        new = []
        for i in range(k + 2):
            acc = R.zero
            for j in range(max(0, i - k - 1), min(i, k) + 1):
                acc = add(acc, mul(t[i - j], poly[j]))
            new.append(acc)
        poly = new
    return poly


def charpoly_raw(R: Ring, M: Sequence[Sequence[Any]]) -> list:
    """``c_0..c_n`` of ``det(xI + M)``."""
    neg = R.neg
    return berkowitz_raw(R, [[neg(v) for v in row] for row in M])


def det_berkowitz_raw(R: Ring, M: Sequence[Sequence[Any]]) -> Any:
    n = len(M)
    c = berkowitz_raw(R, M)[n]
    return R.neg(c) if n & 1 else c


def minor_raw(R: Ring, M: Rows, rows: Sequence[int], cols: Sequence[int]) -> Any:
    """Minor on 0-based ``rows`` x ``cols`` (equal lengths assumed)."""
    k = len(rows)
    if k == 0:
        return R.one
    if k == 1:
        return M[rows[0]][cols[0]]
    if k == 2:
        r0, r1 = M[rows[0]], M[rows[1]]
        c0, c1 = cols
        return R.sub(R.mul(r0[c0], r1[c1]), R.mul(r0[c1], r1[c0]))
    sub = [[M[i][j] for j in cols] for i in rows]
    if k <= _LEIBNIZ_MINOR_MAX:
        return det_leibniz_raw(R, sub)
    return det_berkowitz_raw(R, sub)


def principal_minor_sums_raw(R: Ring, M: Rows) -> list:
    """``[M]^(k)`` for ``k = 0..n`` straight from the definition."""
    n = len(M)
    out = []
    for k in range(n + 1):
        acc = R.zero
        for idx in itertools.combinations(range(n), k):
            acc = R.add(acc, minor_raw(R, M, idx, idx))
        out.append(acc)
    return out


# ---------------------------------------------------------------- public ops


def _same_ring(A: Matrix, B: Matrix) -> None:
    if A.ring != B.ring:
        raise DomainError(f"ring mismatch: {A.ring} vs {B.ring}")


def _square(A: Matrix, what: str) -> int:
    if not A.is_square:
        raise DomainError(f"{what} needs a square matrix, got {A.rows}x{A.cols}")
    return A.rows


@tracked
def identity(n: int, ring: Ring) -> Matrix:
    z, o = ring.zero, ring.one
    return Matrix(ring, [[o if i == j else z for j in range(n)] for i in range(n)])


def zeros(ring: Ring, rows: int, cols: int) -> Matrix:
    return Matrix(ring, [[ring.zero] * cols for _ in range(rows)])


@tracked
def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    _same_ring(A, B)
    if A.cols != B.rows:
        raise DomainError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    return Matrix(A.ring, matmul_raw(A.ring, A.data, B.data))


@tracked
def mat_add(A: Matrix, B: Matrix) -> Matrix:
    _same_ring(A, B)
    if A.shape != B.shape:
        raise DomainError(f"cannot add {A.rows}x{A.cols} and {B.rows}x{B.cols}")
    return Matrix(A.ring, matadd_raw(A.ring, A.data, B.data))


@tracked
def mat_neg(A: Matrix) -> Matrix:
    neg = A.ring.neg
    return Matrix(A.ring, [[neg(v) for v in row] for row in A.data])


@tracked
def permutation_matrix(sigma: Permutation, ring: Ring) -> Matrix:
    """``P(i, j) = one`` exactly when ``sigma(i) = j``."""
    z, o = ring.zero, ring.one
    n = sigma.n
    return Matrix(ring, [[o if sigma.image[i] == j + 1 else z for j in range(n)] for i in range(n)])


@tracked
def sign_matrix(s: Subset, ring: Ring) -> Matrix:
    """Diagonal matrix with ``-one`` on positions in ``s`` and ``one`` elsewhere."""
    z, o = ring.zero, ring.one
    m = ring.neg(o)
    n = s.n
    return Matrix(
        ring, [[(m if i + 1 in s else o) if i == j else z for j in range(n)] for i in range(n)]
    )


@tracked
def det_leibniz(A: Matrix) -> RingElement:
    n = _square(A, "det_leibniz")
    if n > MAX_PERM_N:
        from math import factorial

        raise GuardError(f"Leibniz determinant of size {n}", factorial(n), factorial(MAX_PERM_N))
    return RingElement(A.ring, det_leibniz_raw(A.ring, A.data))


@tracked
def det_berkowitz(A: Matrix) -> RingElement:
    _square(A, "det_berkowitz")
    return RingElement(A.ring, det_berkowitz_raw(A.ring, A.data))


def det(A: Matrix) -> RingElement:
    """Determinant by the division-free route."""
    return det_berkowitz(A)


def _index(s: Subset | Iterable[int], bound: int, what: str) -> tuple[int, ...]:
    members = s.members if isinstance(s, Subset) else tuple(s)
    prev = 0
    for m in members:
        if m <= prev or m > bound:
            raise DomainError(f"{what} indices {list(members)} are not increasing within [1, {bound}]")
        prev = m
    return tuple(m - 1 for m in members)


@tracked
def minor(A: Matrix, S: Subset | Iterable[int], T: Subset | Iterable[int]) -> RingElement:
    """Determinant of the submatrix on rows ``S`` and columns ``T``; one when both are empty."""
    rows = _index(S, A.rows, "row")
    cols = _index(T, A.cols, "column")
    if len(rows) != len(cols):
        raise DomainError(f"minor needs |S| = |T|, got {len(rows)} and {len(cols)}")
    return RingElement(A.ring, minor_raw(A.ring, A.data, rows, cols))


@tracked
def principal_minor_sum(A: Matrix, k: int) -> RingElement:
    n = _square(A, "principal_minor_sum")
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    R = A.ring
    acc = R.zero
    for idx in itertools.combinations(range(n), k):
        acc = R.add(acc, minor_raw(R, A.data, idx, idx))
    return RingElement(R, acc)


def principal_minor_sums(A: Matrix) -> list[RingElement]:
    """``[A]^(k)`` for ``k = 0..n``."""
    return [principal_minor_sum(A, k) for k in range(_square(A, "principal_minor_sums") + 1)]


@tracked
def charpoly(A: Matrix) -> CharPolyCoeffs:
    """Coefficients of ``det(xI + A)``, computed by Berkowitz on ``-A``."""
    _square(A, "charpoly")
    return CharPolyCoeffs(A.ring, charpoly_raw(A.ring, A.data))


def charpoly_by_poly_det(A: Matrix) -> CharPolyCoeffs:
    """Same coefficients, by a determinant of ``xI + A`` over ``ring[x]``."""
    from .rings import Poly

    n = _square(A, "charpoly_by_poly_det")
    P = Poly(A.ring)
    x_plus = [
        [P.coerce([A.data[i][j], A.ring.one] if i == j else [A.data[i][j]]) for j in range(n)]
        for i in range(n)
    ]
    p = det_berkowitz_raw(P, x_plus)
    coeffs = list(p) + [A.ring.zero] * (n + 1 - len(p))
    return CharPolyCoeffs(A.ring, coeffs[::-1])


@tracked
def det_add_expansion(A: Matrix, B: Matrix) -> RingElement:
    """``det(A + B)`` grouped by complementary minor pairs with ``(-1)^|S + T|_1`` signs."""
    _same_ring(A, B)
    n = _square(A, "det_add_expansion")
    if B.shape != A.shape:
        raise DomainError(f"shape mismatch: {A.shape} vs {B.shape}")
    if n > MAX_ADD_EXPANSION_N:
        raise GuardError(f"additive expansion of size {n}", comb(2 * n, n), comb(2 * MAX_ADD_EXPANSION_N, MAX_ADD_EXPANSION_N))
    R = A.ring
    full = range(n)
    total = R.zero
    for k in range(n + 1):
        for S in itertools.combinations(full, k):
            Sc = tuple(i for i in full if i not in S)
            # 0-based indices shift every member by one, k times
            s_par = (sum(S) + k) & 1
            for T in itertools.combinations(full, k):
                Tc = tuple(j for j in full if j not in T)
                term = R.mul(minor_raw(R, A.data, S, T), minor_raw(R, B.data, Sc, Tc))
                if s_par ^ ((sum(T) + k) & 1):
                    total = R.sub(total, term)
                else:
                    total = R.add(total, term)
    return RingElement(R, total)


@tracked
def cauchy_binet(A: Matrix, B: Matrix, S: Subset | Iterable[int], T: Subset | Iterable[int]) -> RingElement:
    """``sum_U [A]_{S,U} [B]_{U,T}`` over ``|S|``-subsets ``U`` of the inner dimension."""
    _same_ring(A, B)
    if A.cols != B.rows:
        raise DomainError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    rows = _index(S, A.rows, "row")
    cols = _index(T, B.cols, "column")
    if len(rows) != len(cols):
        raise DomainError(f"need |S| = |T|, got {len(rows)} and {len(cols)}")
    R = A.ring
    acc = R.zero
    for U in itertools.combinations(range(A.cols), len(rows)):
        acc = R.add(acc, R.mul(minor_raw(R, A.data, rows, U), minor_raw(R, B.data, U, cols)))
    return RingElement(R, acc)


def binomial_charpoly(n: int, ring: Ring) -> CharPolyCoeffs:
    """Coefficients of ``(x + 1)^n``: binomials applied to one by repeated addition."""
    return CharPolyCoeffs(ring, [ring.nat_scale(comb(n, k), ring.one) for k in range(n + 1)])
