"""Brute-force reference computations, independent of the package."""
from collections import Counter
from fractions import Fraction
from itertools import product


def iter_factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def pascal(nmax):
    rows = [[1]]
    for n in range(1, nmax + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


def level_states(N, s):
    """Occupancy vectors by scanning the full (N+1)^(s+1) grid."""
    out = []
    for occ in product(range(N + 1), repeat=s + 1):
        if sum(occ) == N and sum(k * n for k, n in enumerate(occ)) == s:
            out.append(occ)
    return sorted(out)


def assignment_counts(N, s):
    """Occupancy vector -> number of labelled-particle assignments.

    Walks every way of giving each particle a level 0..s and keeps those
    with total energy s, so configuration counts come from direct counting.
    """
    counts = Counter()
    for levels in product(range(s + 1), repeat=N):
        if sum(levels) == s:
            occ = [0] * (s + 1)
            for k in levels:
                occ[k] += 1
            counts[tuple(occ)] += 1
    return counts


def compositions(N, s):
    return [c for c in product(range(s + 1), repeat=N) if sum(c) == s]


def partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first, *rest)


def pmf_by_assignment(N, s):
    """P(particle 1 holds k quanta) under uniform labelled assignments."""
    counts = Counter()
    total = 0
    for levels in product(range(s + 1), repeat=N):
        if sum(levels) == s:
            counts[levels[0]] += 1
            total += 1
    return [Fraction(counts[k], total) for k in range(s + 1)]
