"""Shared test oracles, implemented independently of the package code.

The sieve here uses an odd-only bitmap (the package sieves full byte
ranges), and primality falls back to trial division, so agreement between
the two sides is meaningful.
"""

from __future__ import annotations

from math import isqrt


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def trial_division_primes(lo: int, hi: int) -> list[int]:
    return [n for n in range(lo, hi) if trial_division_is_prime(n)]


def oracle_primes_below(limit: int) -> list[int]:
    """All primes < limit via an odd-only bitmap sieve."""
    if limit <= 2:
        return []
    size = limit // 2  # index i <-> odd value 2i + 1
    flags = bytearray(b"\x01") * size
    flags[0] = 0
    i = 1
    while True:
        v = 2 * i + 1
        if v * v >= limit:
            break
        if flags[i]:
            start = (v * v) // 2
            flags[start::v] = bytearray((size - start + v - 1) // v)
        i += 1
    return [2] + [2 * i + 1 for i in range(1, size) if flags[i]]


def oracle_count_primes_below(limit: int) -> int:
    if limit <= 2:
        return 0
    size = limit // 2
    flags = bytearray(b"\x01") * size
    flags[0] = 0
    i = 1
    while True:
        v = 2 * i + 1
        if v * v >= limit:
            break
        if flags[i]:
            start = (v * v) // 2
            flags[start::v] = bytearray((size - start + v - 1) // v)
        i += 1
    return flags.count(1) + 1


def oracle_gap_records(primes: list[int], stop: int) -> list[tuple[int, int]]:
    """(p, gap) rows where the gap beats every earlier gap, for p < stop.

    `primes` must extend past stop so the last pair has its successor.
    """
    records = []
    best = 0
    for p, q in zip(primes, primes[1:]):
        if p >= stop:
            break
        g = q - p
        if g > best:
            best = g
            records.append((p, g))
    return records


def oracle_largest_odd_multiple(d: int, bound: int) -> int:
    """Largest k*d <= bound with k odd, by downward stepping."""
    k = bound // d
    if k % 2 == 0:
        k -= 1
    return k * d
