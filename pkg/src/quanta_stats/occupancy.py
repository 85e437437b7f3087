"""Distinguishable particles on energy levels 0..s.

A level state (n_0, ..., n_s) counts the particles holding each number of
quanta. Every assignment of labelled particles to levels (a configuration)
is equally likely, so a state carries weight N!/prod(n_k!).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal

from .exactnum import binomial, factorial, rat_to_str
from .partitions import restricted_partition_count

__all__ = [
    "ENUMERATION_CAP",
    "EnumerationTooLarge",
    "LevelState",
    "StateRecord",
    "DistTable",
    "enumerate_level_states",
    "configurations",
    "total_configurations",
    "gf_total_configurations",
    "state_probability",
    "conditional_occupancy_pmf",
    "mean_occupancy",
    "gf_mean_occupancy",
    "level_pmf",
    "most_probable_states",
    "poly_mul",
    "poly_pow",
]

ENUMERATION_CAP = 10**7

Route = Literal["levels", "quanta"]


class EnumerationTooLarge(ValueError):
    def __init__(self, what: str, size: int, cap: int = ENUMERATION_CAP):
        super().__init__(f"{what}: {size} items exceeds the cap of {cap}")
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class LevelState:
    occupancies: tuple[int, ...]

    def __post_init__(self):
        occ = tuple(int(n) for n in self.occupancies)
        object.__setattr__(self, "occupancies", occ)
        if not occ:
            raise ValueError("a level state needs at least level 0")
        if any(n < 0 for n in occ):
            raise ValueError(f"negative occupancy in {occ}")
        if sum(k * n for k, n in enumerate(occ)) != len(occ) - 1:
            raise ValueError(f"{occ} does not hold exactly s={len(occ) - 1} quanta")

    @property
    def N(self) -> int:
        return sum(self.occupancies)

    @property
    def s(self) -> int:
        return len(self.occupancies) - 1

    def __getitem__(self, level: int) -> int:
        return self.occupancies[level]

    def __iter__(self) -> Iterator[int]:
        return iter(self.occupancies)


@dataclass(frozen=True)
class StateRecord:
    state: LevelState
    configurations: int
    probability: Fraction


@dataclass(frozen=True)
class DistTable:
    """Probability that a given particle holds k quanta, k = 0..s."""

    N: int
    s: int
    entries: tuple[Fraction, ...]
    route: Route

    def __post_init__(self):
        if len(self.entries) != self.s + 1:
            raise ValueError("entries must cover k = 0..s")
        if any(p < 0 for p in self.entries):
            raise ValueError("negative probability")
        if sum(self.entries) != 1:
            raise ValueError("probabilities do not sum to 1")

    def __getitem__(self, k: int) -> Fraction:
        return self.entries[k]

    def __len__(self) -> int:
        return len(self.entries)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(enumerate(self.entries))

    def same_values(self, other: "DistTable") -> bool:
        return (self.N, self.s, self.entries) == (other.N, other.s, other.entries)

    def to_json_obj(self) -> dict:
        return {
            "N": self.N,
            "s": self.s,
            "route": self.route,
            "p": [
                {"k": k, "num": str(p.numerator), "den": str(p.denominator)}
                for k, p in enumerate(self.entries)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def csv_rows(self) -> list[tuple[int, str, str, str]]:
        return [
            (k, str(p.numerator), str(p.denominator), repr(float(p)))
            for k, p in enumerate(self.entries)
        ]

    def to_csv(self) -> str:
        lines = ["k,num,den,float"]
        lines += [",".join(map(str, row)) for row in self.csv_rows()]
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        body = ", ".join(rat_to_str(p) for p in self.entries)
        return f"DistTable(N={self.N}, s={self.s}, {self.route}: {body})"


def _check_ns(N: int, s: int, need_particle: bool = True) -> None:
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if N < (1 if need_particle else 0):
        raise ValueError(f"N must be >= {1 if need_particle else 0}, got {N}")


def _descend(level: int, energy: int, particles: int, tail: list[int], out: list):
    # fix n_level, ..., n_1 from the top; n_0 takes the remaining particles
    if level == 0:
        if energy == 0:
            out.append((particles, *reversed(tail)))
        return
    for n in range(min(energy // level, particles) + 1):
        rest = energy - n * level
        # the levels below can absorb at most (level-1) quanta per particle
        if rest > (level - 1) * (particles - n):
            continue
        tail.append(n)
        _descend(level - 1, rest, particles - n, tail, out)
        tail.pop()


def enumerate_level_states(N: int, s: int) -> list[LevelState]:
    """All level states of N particles sharing s quanta, lexicographic."""
    _check_ns(N, s, need_particle=False)
    count = restricted_partition_count(s, min(N, s))
    if N == 0:
        count = 1 if s == 0 else 0
    if count > ENUMERATION_CAP:
        raise EnumerationTooLarge(f"level states for N={N}, s={s}", count)
    raw: list[tuple[int, ...]] = []
    _descend(s, s, N, [], raw)
    raw.sort()
    return [LevelState(t) for t in raw]


def configurations(state: LevelState) -> int:
    """Multinomial N!/prod(n_k!)."""
    out = factorial(state.N)
    for n in state:
        out //= factorial(n)
    return out


def total_configurations(N: int, s: int) -> int:
    _check_ns(N, s)
    return factorial(N + s - 1) // (factorial(s) * factorial(N - 1))


def poly_mul(a: list[int], b: list[int], cap: int) -> list[int]:
    """Product of coefficient lists, truncated to degree <= cap."""
    out = [0] * min(len(a) + len(b) - 1, cap + 1)
    for i, ai in enumerate(a[: cap + 1]):
        if ai:
            for j, bj in enumerate(b[: cap + 1 - i]):
                out[i + j] += ai * bj
    return out


def poly_pow(base: list[int], exp: int, cap: int) -> list[int]:
    result = [1]
    while exp:
        if exp & 1:
            result = poly_mul(result, base, cap)
        exp >>= 1
        if exp:
            base = poly_mul(base, base, cap)
    return result


def _level_poly(s: int) -> list[int]:
    # (1 - y^(s+1)) / (1 - y), computed as the truncated series product
    numerator = [1] + [0] * s + [-1]
    geometric = [1] * (s + 1)
    return poly_mul(numerator, geometric, s)


def _coeff(poly: list[int], k: int) -> int:
    return poly[k] if 0 <= k < len(poly) else 0


def gf_total_configurations(N: int, s: int) -> int:
    """Coefficient of y^s in ((1 - y^(s+1))/(1 - y))^N."""
    _check_ns(N, s)
    return _coeff(poly_pow(_level_poly(s), N, s), s)


def state_probability(state: LevelState) -> Fraction:
    return Fraction(configurations(state), total_configurations(state.N, state.s))


def _check_level(s: int, k: int) -> None:
    if not 0 <= k <= s:
        raise ValueError(f"level must lie in 0..{s}, got {k}")


def conditional_occupancy_pmf(N: int, s: int, k: int) -> dict[int, Fraction]:
    """P(n particles sit on level k), n = 0..N, by summing over states."""
    _check_ns(N, s)
    _check_level(s, k)
    pmf = {n: Fraction(0) for n in range(N + 1)}
    total = total_configurations(N, s)
    for state in enumerate_level_states(N, s):
        pmf[state[k]] += Fraction(configurations(state), total)
    return pmf


def mean_occupancy(N: int, s: int, k: int) -> Fraction:
    """Expected number of particles on level k (closed form)."""
    _check_ns(N, s)
    _check_level(s, k)
    if N == 1:
        return Fraction(1 if k == s else 0)
    return Fraction(N * binomial(N + s - k - 2, N - 2), total_configurations(N, s))


def gf_mean_occupancy(N: int, s: int, k: int) -> Fraction:
    """Coefficient of y^s in (N/C) y^k ((1 - y^(s+1))/(1 - y))^(N-1)."""
    _check_ns(N, s)
    _check_level(s, k)
    poly = poly_pow(_level_poly(s), N - 1, s)
    return Fraction(N * _coeff(poly, s - k), gf_total_configurations(N, s))


def level_pmf(N: int, s: int) -> DistTable:
    _check_ns(N, s)
    if N == 1:
        entries = tuple(Fraction(int(k == s)) for k in range(s + 1))
    else:
        total = binomial(N + s - 1, N - 1)
        entries = tuple(
            Fraction(binomial(N + s - k - 2, N - 2), total) for k in range(s + 1)
        )
    return DistTable(N=N, s=s, entries=entries, route="levels")


def most_probable_states(N: int, s: int) -> list[StateRecord]:
    """Every state attaining the largest configuration count.

    More than one record means the most probable state is not unique.
    """
    _check_ns(N, s)
    total = total_configurations(N, s)
    weighted = [(configurations(st), st) for st in enumerate_level_states(N, s)]
    best = max(c for c, _ in weighted)
    return [
        StateRecord(state=st, configurations=c, probability=Fraction(c, total))
        for c, st in weighted
        if c == best
    ]
