"""Opt-in call counter for public operations.

``verify`` activates a counter around each job so its report can show that
every public operation of the algebra modules was exercised.  When no
counter is active the wrapper costs one context-variable lookup.
"""

from __future__ import annotations

import contextlib
import functools
from collections import Counter
from contextvars import ContextVar

_active: ContextVar[Counter | None] = ContextVar("octadet_coverage", default=None)

# every tracked operation, keyed "module.name"
REGISTRY: set[str] = set()


def tracked(fn):
    key = f"{fn.__module__.rsplit('.', 1)[-1]}.{fn.__name__}"
    REGISTRY.add(key)

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        counter = _active.get()
        if counter is not None:
            counter[key] += 1
        return fn(*args, **kwargs)

    return wrapper


@contextlib.contextmanager
def recording():
    counter: Counter = Counter()
    token = _active.set(counter)
    try:
        yield counter
    finally:
        _active.reset(token)
