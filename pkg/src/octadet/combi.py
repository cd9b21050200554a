"""Subsets of ``[n]``, permutations and parities.

Everything visible here is 1-based: a :class:`Subset` over ``n`` holds members
drawn from ``1..n`` and ``Permutation.image[i - 1]`` is the image of ``i``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Iterable, Iterator

from .errors import DomainError, GuardError

__all__ = [
    "Parity",
    "Subset",
    "Permutation",
    "subsets_of_size",
    "all_subsets",
    "all_permutations",
    "induced_set",
    "sym_diff",
    "l1_parity",
    "complement",
    "MAX_PERM_N",
]

MAX_PERM_N = 8


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def __xor__(self, other) -> "Parity":
        return Parity(int(self) ^ int(other))

    @classmethod
    def parse(cls, value) -> "Parity":
        if isinstance(value, Parity):
            return value
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                raise DomainError(f"parity must be 'even' or 'odd', got {value!r}") from None
        if value in (0, 1):
            return cls(value)
        raise DomainError(f"not a parity: {value!r}")

    def __str__(self) -> str:
        return self.name.lower()


@total_ordering
@dataclass(frozen=True, eq=True)
class Subset:
    """A subset of ``[n]``; ordered lexicographically by member list."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if self.n < 0:
            raise DomainError(f"ambient size must be nonnegative, got {self.n}")
        prev = 0
        for m in members:
            if not isinstance(m, int) or m <= prev or m > self.n:
                raise DomainError(
                    f"subset members must be strictly increasing in [1, {self.n}], got {list(members)}"
                )
            prev = m

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "Subset":
        """Build from members in any order."""
        return cls(n, tuple(sorted(members)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, i: object) -> bool:
        return i in self.members

    def __lt__(self, other: "Subset") -> bool:
        if not isinstance(other, Subset):
            return NotImplemented
        return (self.members, self.n) < (other.members, other.n)

    @property
    def index(self) -> tuple[int, ...]:
        """0-based positions, for indexing into matrices."""
        return tuple(m - 1 for m in self.members)

    def to_json(self) -> dict:
        return {"n": self.n, "members": list(self.members)}

    @classmethod
    def from_json(cls, obj: dict) -> "Subset":
        return cls(int(obj["n"]), tuple(obj["members"]))

    def label(self) -> str:
        return "-".join(map(str, self.members))

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


def _inversion_parity(image: tuple[int, ...]) -> Parity:
    # parity from the cycle decomposition: n - #cycles
    seen = [False] * len(image)
    swaps = 0
    for start in range(len(image)):
        if seen[start]:
            continue
        j = start
        length = 0
        while not seen[j]:
            seen[j] = True
            j = image[j] - 1
            length += 1
        swaps += length - 1
    return Parity(swaps & 1)


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``[n]``; composition ``(s * t)(i) = t(s(i))``.

    With this convention ``P_{s*t} = P_s @ P_t`` for ``P_s(i, j) = [s(i) == j]``.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(self.image)
        object.__setattr__(self, "image", image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise DomainError(f"not a permutation of [1, {len(image)}]: {list(image)}")

    @property
    def n(self) -> int:
        return len(self.image)

    @property
    def parity(self) -> Parity:
        return _inversion_parity(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise DomainError(f"cannot compose permutations of {self.n} and {other.n}")
        return Permutation(tuple(other.image[s - 1] for s in self.image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, s in enumerate(self.image, 1):
            inv[s - 1] = i
        return Permutation(tuple(inv))

    def apply(self, subset: Subset) -> Subset:
        """Image set ``{s(i) : i in subset}``."""
        if subset.n != self.n:
            raise DomainError(f"subset over [{subset.n}] under permutation of [{self.n}]")
        return Subset.of(self.n, (self.image[i - 1] for i in subset.members))

    def to_json(self) -> dict:
        return {"image": list(self.image)}

    @classmethod
    def from_json(cls, obj: dict) -> "Permutation":
        return cls(tuple(obj["image"]))

    def __repr__(self) -> str:
        return f"Permutation({list(self.image)})"


def subsets_of_size(n: int, k: int) -> Iterator[Subset]:
    """All ``k``-subsets of ``[n]`` in lexicographic order; empty when ``k > n``."""
    if k < 0 or k > n:
        return iter(())
    return (Subset(n, c) for c in itertools.combinations(range(1, n + 1), k))


def all_subsets(n: int) -> list[Subset]:
    """Every subset of ``[n]``, lexicographic by member list."""
    return sorted(s for k in range(n + 1) for s in subsets_of_size(n, k))


@lru_cache(maxsize=None)
def _perm_table(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    # 0-based images with parities, lexicographic order
    out = []
    for p in itertools.permutations(range(n)):
        out.append((p, int(_inversion_parity(tuple(i + 1 for i in p)))))
    return tuple(out)


def all_permutations(n: int) -> Iterator[Permutation]:
    """All ``n!`` permutations in lexicographic order of their images."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    _guard_perms(n)
    return (Permutation(tuple(i + 1 for i in p)) for p, _ in _perm_table(n))


def _guard_perms(n: int) -> None:
    if n > MAX_PERM_N:
        import math

        raise GuardError(f"permutations of [{n}]", math.factorial(n), math.factorial(MAX_PERM_N))


def induced_set(t: Subset, r: Subset) -> Subset:
    """``{R_t : t in T}`` with ``R`` read in increasing order."""
    if t.members and t.members[-1] > len(r):
        raise DomainError(f"index {t.members[-1]} exceeds |R| = {len(r)}")
    return Subset(r.n, tuple(r.members[i - 1] for i in t.members))


def sym_diff(s: Subset, t: Subset) -> Subset:
    if s.n != t.n:
        raise DomainError(f"ambient mismatch: [{s.n}] vs [{t.n}]")
    return Subset.of(s.n, set(s.members) ^ set(t.members))


def l1_parity(s: Subset) -> Parity:
    return Parity(sum(s.members) & 1)


def complement(s: Subset) -> Subset:
    present = set(s.members)
    return Subset(s.n, tuple(i for i in range(1, s.n + 1) if i not in present))
