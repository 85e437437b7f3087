"""Indistinguishable quanta shared among N particles.

A state is a composition (k_1, ..., k_N) of s; all such states are taken as
equally likely. Counting them reproduces the configuration-weighted results
of the level picture.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactnum import binomial
from .occupancy import (
    ENUMERATION_CAP,
    DistTable,
    EnumerationTooLarge,
    level_pmf,
    total_configurations,
)

__all__ = [
    "Composition",
    "SampleStats",
    "CrossRouteReport",
    "count_states",
    "enumerate_compositions",
    "count_states_with_level",
    "quanta_pmf",
    "sample_state",
    "sample_states",
    "sample_stats",
    "cross_route_check",
    "make_rng",
]


@dataclass(frozen=True)
class Composition:
    quanta: tuple[int, ...]

    def __post_init__(self):
        q = tuple(int(k) for k in self.quanta)
        object.__setattr__(self, "quanta", q)
        if not q:
            raise ValueError("a composition needs at least one particle")
        if any(k < 0 for k in q):
            raise ValueError(f"negative quanta in {q}")

    @property
    def N(self) -> int:
        return len(self.quanta)

    @property
    def s(self) -> int:
        return sum(self.quanta)


def _check(N: int, s: int) -> None:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")


def count_states(N: int, s: int) -> int:
    _check(N, s)
    return binomial(N + s - 1, s)


def _compositions(N: int, s: int):
    if N == 1:
        yield (s,)
        return
    for first in range(s + 1):
        for rest in _compositions(N - 1, s - first):
            yield (first, *rest)


def enumerate_compositions(N: int, s: int) -> list[Composition]:
    """All compositions of s into N nonnegative parts, lexicographic."""
    size = count_states(N, s)
    if size > ENUMERATION_CAP:
        raise EnumerationTooLarge(f"compositions for N={N}, s={s}", size)
    return [Composition(q) for q in _compositions(N, s)]


def count_states_with_level(N: int, s: int, k: int) -> int:
    """Number of states in which one chosen particle holds k quanta."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if not 0 <= k <= s:
        raise ValueError(f"level must lie in 0..{s}, got {k}")
    return binomial(N + s - k - 2, s - k)


def quanta_pmf(N: int, s: int) -> DistTable:
    _check(N, s)
    if N == 1:
        entries = tuple(Fraction(int(k == s)) for k in range(s + 1))
    else:
        total = count_states(N, s)
        entries = tuple(
            Fraction(count_states_with_level(N, s, k), total) for k in range(s + 1)
        )
    return DistTable(N=N, s=s, entries=entries, route="quanta")


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator (2^128 period) from a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))


def _bars_to_quanta(bars: np.ndarray, slots: int) -> np.ndarray:
    # sorted bar positions among `slots` cells -> star counts between bars
    n = bars.shape[0]
    edges = np.concatenate(
        [np.full((n, 1), -1), np.sort(bars, axis=1), np.full((n, 1), slots)], axis=1
    )
    return np.diff(edges, axis=1) - 1


def sample_state(N: int, s: int, rng: np.random.Generator) -> Composition:
    """One composition drawn uniformly from all count_states(N, s) states.

    Floyd's algorithm picks N-1 bar positions out of N+s-1 cells; the stars
    between consecutive bars give the quanta of each particle.
    """
    _check(N, s)
    slots = N + s - 1
    chosen: set[int] = set()
    for j in range(slots - (N - 1), slots):
        t = int(rng.integers(0, j + 1))
        chosen.add(j if t in chosen else t)
    bars = np.array([sorted(chosen)], dtype=np.int64).reshape(1, N - 1)
    return Composition(tuple(int(k) for k in _bars_to_quanta(bars, slots)[0]))


def sample_states(N: int, s: int, draws: int, rng: np.random.Generator) -> np.ndarray:
    """``draws`` uniform compositions as a (draws, N) integer array.

    Same Floyd selection as ``sample_state``, run across all draws at once.
    """
    _check(N, s)
    slots = N + s - 1
    chosen = np.empty((draws, N - 1), dtype=np.int64)
    for col, j in enumerate(range(slots - (N - 1), slots)):
        t = rng.integers(0, j + 1, size=draws)
        clash = (chosen[:, :col] == t[:, None]).any(axis=1)
        chosen[:, col] = np.where(clash, j, t)
    return _bars_to_quanta(chosen, slots)


@dataclass
class SampleStats:
    N: int
    s: int
    seed: int
    draws: int = 0
    hist: Counter = field(default_factory=Counter)  # k -> count over all slots

    def add(self, samples: np.ndarray) -> None:
        if samples.ndim != 2 or samples.shape[1] != self.N:
            raise ValueError("samples must have shape (draws, N)")
        values, counts = np.unique(samples, return_counts=True)
        self.hist.update({int(v): int(c) for v, c in zip(values, counts)})
        self.draws += samples.shape[0]

    def merge(self, other: "SampleStats") -> "SampleStats":
        if (self.N, self.s) != (other.N, other.s):
            raise ValueError("cannot merge samples of different systems")
        out = SampleStats(self.N, self.s, self.seed, self.draws + other.draws)
        out.hist = self.hist + other.hist
        return out

    def frequencies(self) -> dict[int, float]:
        total = self.draws * self.N
        return {k: self.hist.get(k, 0) / total for k in range(self.s + 1)}

    def to_json_obj(self) -> dict:
        return {
            "N": self.N,
            "s": self.s,
            "seed": self.seed,
            "draws": self.draws,
            "hist": [{"k": k, "count": self.hist.get(k, 0)} for k in range(self.s + 1)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def sample_stats(
    N: int, s: int, draws: int, seed: int, chunk: int = 200_000
) -> tuple[SampleStats, np.ndarray, np.ndarray]:
    """Sample ``draws`` states and tally them three ways.

    Returns the pooled histogram, per-state counts in lexicographic order
    (empty when the state space is too large to index densely), and an
    (N, s+1) array of per-slot quanta counts.
    """
    rng = make_rng(seed)
    stats = SampleStats(N, s, seed)
    n_states = count_states(N, s)
    index = _state_index(N, s) if n_states <= 100_000 else None
    state_counts = np.zeros(n_states if index is not None else 0, dtype=np.int64)
    slot_counts = np.zeros((N, s + 1), dtype=np.int64)
    done = 0
    while done < draws:
        batch = sample_states(N, s, min(chunk, draws - done), rng)
        stats.add(batch)
        if index is not None:
            state_counts += np.bincount(index(batch), minlength=n_states)
        for i in range(N):
            slot_counts[i] += np.bincount(batch[:, i], minlength=s + 1)
        done += batch.shape[0]
    return stats, state_counts, slot_counts


def _state_index(N: int, s: int):
    """Vectorized rank of a composition within the lexicographic listing."""
    # ways[m][r]: compositions of r into m parts
    ways = [[binomial(m + r - 1, r) if m else int(r == 0) for r in range(s + 1)]
            for m in range(N + 1)]

    def rank(batch: np.ndarray) -> np.ndarray:
        out = np.zeros(batch.shape[0], dtype=np.int64)
        remaining = np.full(batch.shape[0], s, dtype=np.int64)
        for i in range(N - 1):
            parts_after = N - i - 1
            # skip all compositions whose i-th part is smaller
            table = np.array(
                [[sum(ways[parts_after][r - v] for v in range(c))
                  for c in range(s + 1)] for r in range(s + 1)],
                dtype=np.int64,
            )
            out += table[remaining, batch[:, i]]
            remaining = remaining - batch[:, i]
        return out

    return rank


@dataclass(frozen=True)
class CrossRouteReport:
    N: int
    s: int
    total_configurations: int
    count_states: int
    levels: DistTable
    quanta: DistTable
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> dict:
        return {
            "N": self.N,
            "s": self.s,
            "passed": self.passed,
            "C_I": str(self.total_configurations),
            "S_II": str(self.count_states),
            "failures": list(self.failures),
        }


def cross_route_check(N: int, s: int) -> CrossRouteReport:
    """Compare both counting routes exactly; failures are listed, not raised."""
    c_total = total_configurations(N, s)
    s_total = count_states(N, s)
    levels, quanta = level_pmf(N, s), quanta_pmf(N, s)
    failures = []
    if c_total != s_total:
        failures.append(f"C_I={c_total} != S_II={s_total}")
    for k, (a, b) in enumerate(zip(levels.entries, quanta.entries)):
        if a != b:
            failures.append(f"p({k}): levels {a} != quanta {b}")
    return CrossRouteReport(N, s, c_total, s_total, levels, quanta, tuple(failures))
