"""Brute-force combinatorial oracles.

These enumerate actual set partitions and permutations, so they share no code
path with the recurrences and basis conversions they are used to check.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterator

ORACLE_LIMIT = 12


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Yield restricted growth strings of length n (one per set partition)."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(rgs)
            return
        for b in range(top + 2):
            rgs[i] = b
            yield from rec(i + 1, max(top, b))

    yield from rec(1, 0)


@lru_cache(maxsize=None)
def partition_counts(n: int) -> tuple[int, ...]:
    """Row n of the classical second-kind Stirling triangle, by enumeration."""
    if n > ORACLE_LIMIT:
        raise ValueError(f"oracle limit: n <= {ORACLE_LIMIT}")
    counts = [0] * (n + 1)
    if n == 0:
        counts[0] = 1
        return tuple(counts)

    # walk every restricted growth prefix; the last element is tallied in bulk:
    # with blocks b so far it has b choices keeping b blocks and one opening b+1
    def rec(i: int, blocks: int) -> None:
        if i == n - 1:
            counts[blocks] += blocks
            counts[blocks + 1] += 1
            return
        for b in range(blocks):
            rec(i + 1, blocks)
        rec(i + 1, blocks + 1)

    if n == 1:
        counts[1] = 1
    else:
        rec(1, 1)
    return tuple(counts)


def stirling2_oracle(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return partition_counts(n)[k]


def bell_oracle(n: int) -> int:
    return sum(partition_counts(n))


@lru_cache(maxsize=None)
def cycle_counts(n: int) -> tuple[int, ...]:
    """Unsigned first-kind Stirling row n, by counting cycles of every permutation."""
    if n > 8:
        raise ValueError("oracle limit: n <= 8")
    counts = [0] * (n + 1)
    for perm in permutations(range(n)):
        seen = [False] * n
        cycles = 0
        for start in range(n):
            if not seen[start]:
                cycles += 1
                j = start
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
        counts[cycles] += 1
    return tuple(counts)
