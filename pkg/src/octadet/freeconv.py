"""Closed-form finite free convolutions of characteristic-polynomial coefficients.

Each function takes coefficient vectors (``c_k`` multiplies ``x^(n-k)``) and
returns the coefficients the corresponding group sum in
:mod:`octadet.hyperoct` must produce.  The integer prefactors are computed in
exact natural arithmetic and applied with :meth:`Ring.nat_scale`, so the
results are correct in every characteristic.
"""

from __future__ import annotations

from math import comb, factorial
from typing import Any, Sequence

from ._coverage import tracked
from .errors import DomainError
from .matrices import CharPolyCoeffs
from .rings import Ring, RingElement

__all__ = [
    "ConvCoefficients",
    "factorial_constant",
    "mult_constant",
    "symmp_constant",
    "conv_mult_rhs",
    "conv_add_rhs",
    "conv_rect_rhs",
    "twisted_to_minor_sums",
]


class ConvCoefficients(CharPolyCoeffs):
    """Coefficient vector tagged with the convolution and dimensions that produced it."""

    __slots__ = ("note",)

    def __init__(self, ring: Ring, coeffs: Sequence[Any], note: str = ""):
        super().__init__(ring, coeffs)
        self.note = note


@tracked
def factorial_constant(n: int, k: int, i: int) -> int:
    """``(n-k+i)! (n-i)! / (n-k)!``, an exact natural number for ``0 <= i <= k <= n``."""
    if not 0 <= i <= k <= n:
        raise DomainError(f"need 0 <= i <= k <= n, got n={n}, k={k}, i={i}")
    num = factorial(n - k + i) * factorial(n - i)
    q, r = divmod(num, factorial(n - k))
    if r:
        raise ArithmeticError(f"inexact division computing c({n},{k},{i})")
    return q


def mult_constant(m: int, k: int) -> int:
    """``k! (m-k)!``: the permutation-sum count for ``k``-subsets of ``[m]``."""
    return factorial(k) * factorial(m - k)


def symmp_constant(n: int, k: int, i: int) -> int:
    """Weight of ``p_i q_(k-i)`` in the additive convolution (before the ``2^n``)."""
    return factorial_constant(n, k, i)


def _coeffs(v: CharPolyCoeffs | Sequence[RingElement], ring: Ring | None, what: str) -> tuple[Ring, list]:
    if isinstance(v, CharPolyCoeffs):
        if ring is not None and v.ring != ring:
            raise DomainError(f"{what}: ring mismatch {v.ring} vs {ring}")
        return v.ring, list(v.coeffs)
    items = list(v)
    if not items:
        raise DomainError(f"{what}: empty coefficient vector")
    r = items[0].ring
    if any(e.ring != r for e in items) or (ring is not None and r != ring):
        raise DomainError(f"{what}: coefficients from different rings")
    return r, [e.value for e in items]


@tracked
def conv_mult_rhs(p: CharPolyCoeffs, q: CharPolyCoeffs) -> ConvCoefficients:
    """``r_k = 2^m k! (m-k)! p_k q_k`` for ``k = 0..n``.

    ``p`` has degree ``n`` (from ``BC``), ``q`` degree ``m`` (from ``A``).
    """
    R, pc = _coeffs(p, None, "conv_mult_rhs")
    _, qc = _coeffs(q, R, "conv_mult_rhs")
    n, m = len(pc) - 1, len(qc) - 1
    out = []
    for k in range(n + 1):
        if k > m:
            out.append(R.zero)
            continue
        out.append(R.nat_scale(2**m * mult_constant(m, k), R.mul(pc[k], qc[k])))
    return ConvCoefficients(R, out, f"mult n={n} m={m}")


@tracked
def conv_add_rhs(p: CharPolyCoeffs, q: CharPolyCoeffs) -> ConvCoefficients:
    """``r_k = 2^n sum_i (n-i)! (n-k+i)! / (n-k)! * p_i q_(k-i)``."""
    R, pc = _coeffs(p, None, "conv_add_rhs")
    _, qc = _coeffs(q, R, "conv_add_rhs")
    if len(pc) != len(qc):
        raise DomainError(f"conv_add_rhs: degrees differ ({len(pc) - 1} vs {len(qc) - 1})")
    n = len(pc) - 1
    out = []
    for k in range(n + 1):
        acc = R.zero
        for i in range(k + 1):
            acc = R.add(acc, R.nat_scale(symmp_constant(n, k, i), R.mul(pc[i], qc[k - i])))
        out.append(R.nat_scale(2**n, acc))
    return ConvCoefficients(R, out, f"add n={n}")


@tracked
def conv_rect_rhs(pm: CharPolyCoeffs | Sequence[RingElement], qm: CharPolyCoeffs | Sequence[RingElement], n: int, m: int) -> ConvCoefficients:
    """``r_k = 2^(n+m) sum_i c(m,k,i) c(n,k,i) [AC]^(i) [BD]^(k-i)``.

    ``pm`` and ``qm`` are the principal-minor-sum vectors of ``AC`` and
    ``BD`` (equivalently their ``det(xI + .)`` coefficients).
    """
    if n > m:
        raise DomainError(f"rectangular convolution needs n <= m, got n={n}, m={m}")
    R, ac = _coeffs(pm, None, "conv_rect_rhs")
    _, bd = _coeffs(qm, R, "conv_rect_rhs")
    if len(ac) != n + 1 or len(bd) != n + 1:
        raise DomainError(f"conv_rect_rhs: expected {n + 1} coefficients, got {len(ac)} and {len(bd)}")
    out = []
    for k in range(n + 1):
        acc = R.zero
        for i in range(k + 1):
            weight = factorial_constant(m, k, i) * factorial_constant(n, k, i)
            acc = R.add(acc, R.nat_scale(weight, R.mul(ac[i], bd[k - i])))
        out.append(R.nat_scale(2 ** (n + m), acc))
    return ConvCoefficients(R, out, f"rect n={n} m={m}")


def twisted_to_minor_sums(p: CharPolyCoeffs | Sequence[RingElement]) -> CharPolyCoeffs:
    """Turn ``p_i`` with ``det(xI + M) = sum x^(n-i) (-1)^i p_i`` into ``[M]^(i)``."""
    R, pc = _coeffs(p, None, "twisted_to_minor_sums")
    return CharPolyCoeffs(R, [R.neg(c) if i & 1 else c for i, c in enumerate(pc)])


def factorial_constant_by_binomial(n: int, k: int, i: int) -> int:
    """``i! (n-i)! C(n-k+i, i)``, the same constant without a division."""
    return factorial(i) * factorial(n - i) * comb(n - k + i, i)
