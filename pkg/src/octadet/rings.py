"""Commutative rings with exact arithmetic.

Three kinds of ring are supported and may be nested: the integers, the
integers modulo ``m`` and univariate polynomials over another ring.  A ring
object works on *payloads*, the plain Python values that represent its
elements:

* ``Integers``      -- a Python ``int``
* ``IntegersMod(m)`` -- an ``int`` in ``[0, m)``
* ``Poly(inner)``   -- a tuple of inner payloads in ascending degree with no
  trailing zero; ``()`` is the zero polynomial

Payloads are always normalized, so equality of payloads is equality of ring
elements.  The heavy algorithms in this package operate on payloads directly;
:class:`RingElement` wraps a payload together with its ring for callers who
prefer operator syntax.

No ring here implements division.  Natural-number constants act on ring
elements only through :func:`nat_scale` (repeated addition).
"""

from __future__ import annotations

import operator
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable

from .combi import Parity
from .errors import DomainError, RingSpecError

__all__ = [
    "Ring",
    "Integers",
    "IntegersMod",
    "Poly",
    "RingElement",
    "ring_from_spec",
    "ring_arith",
    "nat_scale",
    "ring_pow",
    "sign_of_parity",
]

# JSON numbers beyond this magnitude are written as decimal strings.
_JSON_SAFE_INT = 2**53


class Ring(ABC):
    """A commutative ring with identity acting on normalized payloads."""

    @property
    @abstractmethod
    def zero(self) -> Any: ...

    @property
    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def neg(self, a: Any) -> Any: ...

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def from_int(self, n: int) -> Any:
        """Image of ``n`` under the canonical map from the integers."""

    @abstractmethod
    def coerce(self, value: Any) -> Any:
        """Normalize a loosely typed value (int, list, payload) into a payload."""

    @abstractmethod
    def encode(self, a: Any) -> Any:
        """JSON-compatible encoding of a payload."""

    @abstractmethod
    def random(self, rng) -> Any:
        """Draw a payload using ``rng.below(n)``; see :mod:`octadet.prng`."""

    @abstractmethod
    def format(self, a: Any) -> str: ...

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def is_zero(self, a: Any) -> bool:
        return a == self.zero

    def decode(self, obj: Any) -> Any:
        return self.coerce(obj)

    @property
    def is_boolean(self) -> bool:
        """True when one + one = zero, so that one = -one."""
        return self.add(self.one, self.one) == self.zero

    def sum(self, values) -> Any:
        acc = self.zero
        add = self.add
        for v in values:
            acc = add(acc, v)
        return acc

    def nat_scale(self, c: int, a: Any) -> Any:
        """``a + a + ... + a`` (``c`` copies) by binary doubling."""
        if c < 0:
            raise DomainError(f"natural count must be nonnegative, got {c}")
        acc = self.zero
        add = self.add
        while c:
            if c & 1:
                acc = add(acc, a)
            c >>= 1
            if c:
                a = add(a, a)
        return acc

    def pow(self, a: Any, e: int) -> Any:
        if e < 0:
            raise DomainError(f"exponent must be nonnegative, got {e}")
        acc = self.one
        mul = self.mul
        while e:
            if e & 1:
                acc = mul(acc, a)
            e >>= 1
            if e:
                a = mul(a, a)
        return acc

    def __call__(self, value: Any) -> "RingElement":
        return RingElement(self, self.coerce(value))


@dataclass(frozen=True)
class Integers(Ring):
    zero = 0
    one = 1
    add = staticmethod(operator.add)
    neg = staticmethod(operator.neg)
    mul = staticmethod(operator.mul)
    sub = staticmethod(operator.sub)

    def from_int(self, n: int) -> int:
        return n

    def coerce(self, value: Any) -> int:
        if isinstance(value, RingElement):
            _check_same(self, value.ring)
            return value.value
        if isinstance(value, bool):
            raise DomainError(f"not an integer: {value!r}")
        if isinstance(value, int):
            return value
        if isinstance(value, str):
            try:
                return int(value.strip())
            except ValueError:
                raise DomainError(f"not a decimal integer: {value!r}") from None
        raise DomainError(f"cannot interpret {value!r} as an integer")

    def encode(self, a: int) -> int | str:
        return a if -_JSON_SAFE_INT < a < _JSON_SAFE_INT else str(a)

    def random(self, rng) -> int:
        return rng.below(19) - 9

    def format(self, a: int) -> str:
        return str(a)

    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class IntegersMod(Ring):
    modulus: int

    def __post_init__(self):
        if isinstance(self.modulus, bool) or not isinstance(self.modulus, int) or self.modulus < 2:
            raise DomainError(f"modulus must be an integer >= 2, got {self.modulus!r}")

    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def neg(self, a: int) -> int:
        return -a % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return a * b % self.modulus

    def from_int(self, n: int) -> int:
        return n % self.modulus

    def coerce(self, value: Any) -> int:
        if isinstance(value, RingElement):
            _check_same(self, value.ring)
            return value.value
        return Integers().coerce(value) % self.modulus

    def encode(self, a: int) -> int:
        return a

    def random(self, rng) -> int:
        return rng.below(self.modulus)

    def format(self, a: int) -> str:
        return str(a)

    def __str__(self) -> str:
        return f"mod:{self.modulus}"


@dataclass(frozen=True)
class Poly(Ring):
    """Univariate polynomials ``inner[x]``."""

    inner: Ring

    def __post_init__(self):
        if not isinstance(self.inner, Ring):
            raise DomainError(f"polynomial coefficients need a ring, got {self.inner!r}")

    @property
    def zero(self) -> tuple:
        return ()

    @property
    def one(self) -> tuple:
        return (self.inner.one,)

    def _strip(self, coeffs: list) -> tuple:
        z = self.inner.zero
        end = len(coeffs)
        while end and coeffs[end - 1] == z:
            end -= 1
        return tuple(coeffs[:end])

    def add(self, a: tuple, b: tuple) -> tuple:
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return a
        iadd = self.inner.add
        out = [iadd(x, y) for x, y in zip(a, b)]
        out.extend(a[len(b):])
        if len(a) == len(b):
            return self._strip(out)
        return tuple(out)

    def neg(self, a: tuple) -> tuple:
        ineg = self.inner.neg
        return tuple(ineg(x) for x in a)

    def mul(self, a: tuple, b: tuple) -> tuple:
        if not a or not b:
            return ()
        inner = self.inner
        iadd, imul = inner.add, inner.mul
        out = [inner.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = iadd(out[i + j], imul(x, y))
        return self._strip(out)

    def from_int(self, n: int) -> tuple:
        return self._strip([self.inner.from_int(n)])

    def coerce(self, value: Any) -> tuple:
        if isinstance(value, RingElement):
            _check_same(self, value.ring)
            return value.value
        if isinstance(value, (list, tuple)):
            return self._strip([self.inner.coerce(c) for c in value])
        return self._strip([self.inner.coerce(value)])

    def encode(self, a: tuple) -> list:
        return [self.inner.encode(c) for c in a]

    def random(self, rng) -> tuple:
        # degree <= 1 with independently drawn coefficients
        return self._strip([self.inner.random(rng), self.inner.random(rng)])

    def x(self) -> tuple:
        """The indeterminate."""
        return (self.inner.zero, self.inner.one)

    def format(self, a: tuple) -> str:
        if not a:
            return "0"
        terms = []
        compound = isinstance(self.inner, Poly)
        for d in range(len(a) - 1, -1, -1):
            c = a[d]
            if c == self.inner.zero:
                continue
            text = self.inner.format(c)
            if compound and len(c) > 1:
                text = f"({text})"
            if d == 0:
                terms.append(text)
                continue
            mono = "x" if d == 1 else f"x^{d}"
            terms.append(mono if c == self.inner.one else f"{text}*{mono}")
        return " + ".join(terms)

    def __str__(self) -> str:
        return f"poly:{self.inner}"


def _check_same(r1: Ring, r2: Ring) -> None:
    if r1 != r2:
        raise DomainError(f"ring mismatch: {r1} vs {r2}")


@dataclass(frozen=True)
class RingElement:
    """A payload tagged with its ring; supports ``+ - *`` and ``**``."""

    ring: Ring
    value: Any

    def _other(self, other: Any) -> Any:
        if isinstance(other, RingElement):
            _check_same(self.ring, other.ring)
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.from_int(other)
        return NotImplemented

    def _lift(self, fn: Callable, other: Any, swap: bool = False) -> "RingElement":
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        a = self.value
        return RingElement(self.ring, fn(b, a) if swap else fn(a, b))

    def __add__(self, other):
        return self._lift(self.ring.add, other)

    def __radd__(self, other):
        return self._lift(self.ring.add, other, swap=True)

    def __sub__(self, other):
        return self._lift(self.ring.sub, other)

    def __rsub__(self, other):
        return self._lift(self.ring.sub, other, swap=True)

    def __mul__(self, other):
        return self._lift(self.ring.mul, other)

    def __rmul__(self, other):
        return self._lift(self.ring.mul, other, swap=True)

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.value))

    def __pow__(self, e: int):
        return RingElement(self.ring, self.ring.pow(self.value, e))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def encode(self) -> Any:
        return self.ring.encode(self.value)

    def __str__(self) -> str:
        return self.ring.format(self.value)

    def __repr__(self) -> str:
        return f"RingElement({self.ring}, {self.ring.format(self.value)})"


def ring_from_spec(spec: str) -> Ring:
    """Parse ``int``, ``mod:<m>`` or ``poly:<spec>`` (nestable)."""
    if not isinstance(spec, str):
        raise RingSpecError(repr(spec), repr(spec), "expected a string, got")
    tokens = spec.strip().split(":")
    ring, pos = _parse(spec, tokens, 0)
    if pos != len(tokens):
        raise RingSpecError(spec, tokens[pos], "trailing token")
    return ring


def _parse(spec: str, tokens: list[str], pos: int) -> tuple[Ring, int]:
    if pos >= len(tokens):
        raise RingSpecError(spec, "", "missing ring after")
    head = tokens[pos]
    if head == "int":
        return Integers(), pos + 1
    if head == "mod":
        if pos + 1 >= len(tokens):
            raise RingSpecError(spec, head, "missing modulus after")
        raw = tokens[pos + 1]
        if not raw.isdigit() or int(raw) < 2:
            raise RingSpecError(spec, raw, "modulus must be an integer >= 2, got")
        return IntegersMod(int(raw)), pos + 2
    if head == "poly":
        inner, nxt = _parse(spec, tokens, pos + 1)
        return Poly(inner), nxt
    raise RingSpecError(spec, head)


_ARITH = {"add": "add", "mul": "mul", "sub": "sub"}


def ring_arith(op: str, a: RingElement, b: RingElement | None = None) -> RingElement:
    """Apply ``add``, ``mul``, ``sub`` or ``neg`` to ring elements."""
    if op == "neg":
        if b is not None:
            raise DomainError("neg takes a single operand")
        return -a
    if op not in _ARITH:
        raise DomainError(f"unknown ring operation {op!r}")
    if b is None:
        raise DomainError(f"{op} needs two operands")
    _check_same(a.ring, b.ring)
    fn = getattr(a.ring, _ARITH[op])
    return RingElement(a.ring, fn(a.value, b.value))


def nat_scale(c: int, a: RingElement) -> RingElement:
    """Add ``c`` copies of ``a``; ``c`` is a natural number, never a ring element."""
    return RingElement(a.ring, a.ring.nat_scale(c, a.value))


def ring_pow(a: RingElement, e: int) -> RingElement:
    return RingElement(a.ring, a.ring.pow(a.value, e))


def sign_of_parity(parity: Parity | int | str, ring: Ring) -> RingElement:
    """``one`` for even parity and ``-one`` for odd."""
    p = Parity.parse(parity)
    one = ring.one
    return RingElement(ring, ring.neg(one) if p is Parity.ODD else one)
