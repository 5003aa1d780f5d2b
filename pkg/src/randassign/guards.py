"""Size guards for the enumeration-based and brute-force routines.

Guards are configuration: callers (the CLI in particular) override them for a
block of code with :func:`override`.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


class SizeGuardError(ValueError):
    """Raised when an instance exceeds a configured size guard."""


@dataclass(frozen=True)
class Guards:
    enum_agents: int = 8  # n! ordering enumeration (ria, rsd)
    oracle_agents: int = 5  # brute-force efficiency oracles
    oracle_objects: int = 5
    oracle_quota: int = 3
    manipulation_objects: int = 6  # m! misreports per agent
    lp_variables: int = 200
    lp_constraints: int = 200


_current: contextvars.ContextVar[Guards] = contextvars.ContextVar("guards", default=Guards())


def current() -> Guards:
    return _current.get()


@contextlib.contextmanager
def override(**changes):
    token = _current.set(dataclasses.replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def check(value: int, limit: int, what: str) -> None:
    if value > limit:
        raise SizeGuardError(f"{what} = {value} exceeds the configured guard ({limit})")
