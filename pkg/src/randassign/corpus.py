"""Problem corpora: exhaustive enumeration and seeded random sampling."""
from __future__ import annotations

import itertools
import random
from typing import Iterator

from .core import Problem


def quota_vectors(m: int, max_quota: int, n: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing quota vectors in ``1..max_quota`` covering ``n`` agents.

    Every profile is enumerated for each vector, so vectors equal up to a
    relabelling of objects would only repeat problems.
    """
    for q in itertools.combinations_with_replacement(range(max_quota, 0, -1), m):
        if sum(q) >= n:
            yield q


def profiles(n: int, m: int, canonical: bool = True) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All strict preference profiles; with ``canonical`` one per agent relabelling class."""
    orders = list(itertools.permutations(range(m)))
    if canonical:
        return itertools.combinations_with_replacement(orders, n)
    return itertools.product(orders, repeat=n)


def exhaustive(
    max_agents: int,
    max_objects: int,
    max_quota: int = 1,
    min_agents: int = 1,
    min_objects: int = 1,
    canonical: bool = True,
) -> Iterator[Problem]:
    """Every valid problem within the bounds, smallest first."""
    for n in range(min_agents, max_agents + 1):
        for m in range(min_objects, max_objects + 1):
            for q in quota_vectors(m, max_quota, n):
                for profile in profiles(n, m, canonical):
                    yield Problem.from_orders(profile, q)


def random_problem(rng: random.Random, n: int, m: int, max_quota: int = 1) -> Problem:
    if m * max_quota < n:
        raise ValueError(f"{m} objects with quota <= {max_quota} cannot serve {n} agents")
    while True:
        q = tuple(rng.randint(1, max_quota) for _ in range(m))
        if sum(q) >= n:
            break
    orders = []
    for _ in range(n):
        order = list(range(m))
        rng.shuffle(order)
        orders.append(tuple(order))
    return Problem.from_orders(orders, q)


def sampled(n: int, m: int, count: int, seed: int, max_quota: int = 1) -> Iterator[Problem]:
    """``count`` uniformly random problems; the same seed gives the same sequence."""
    rng = random.Random(seed)
    for _ in range(count):
        yield random_problem(rng, n, m, max_quota)
