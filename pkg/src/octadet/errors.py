"""Exception hierarchy shared by every module."""


class OctadetError(Exception):
    """Base class for all library errors."""


class DomainError(OctadetError, ValueError):
    """Operands violate an operation's preconditions (shape, ring, subset size)."""


class RingSpecError(OctadetError, ValueError):
    """A ring spec string does not match ``int | mod:<m> | poly:<spec>``."""

    def __init__(self, spec: str, token: str, reason: str = "unexpected token"):
        self.spec = spec
        self.token = token
        super().__init__(f"bad ring spec {spec!r}: {reason} {token!r}")


class GuardError(OctadetError):
    """An enumeration would exceed a cost guard; raised before any work is done."""

    def __init__(self, what: str, count: int, limit: int):
        self.what = what
        self.count = count
        self.limit = limit
        super().__init__(f"{what}: {count} terms exceeds the limit of {limit}")
