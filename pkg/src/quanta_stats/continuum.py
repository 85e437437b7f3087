"""Moments of p(k), its large-system limits, and the continuous-energy picture.

In the continuum each particle energy e_i >= 0 with sum e_i = E, i.e. a point
on the energy simplex. Uniform surface measure on that simplex gives the
single-particle law P(e) = (N-1)/E (1 - e/E)^(N-2), which tends to the
exponential (Boltzmann) law with mean E/N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .occupancy import DistTable, level_pmf
from .quadrature import integrate
from .quanta import make_rng

__all__ = [
    "Moments",
    "EnergySystem",
    "LimitRow",
    "moments",
    "moments_by_summation",
    "geometric_limit_pmf",
    "geometric_comparator",
    "total_variation",
    "limit_convergence",
    "hyperplane_area",
    "zone_area_density",
    "zone_area_integral",
    "finite_n_energy_pdf",
    "finite_n_energy_cdf",
    "boltzmann_pdf",
    "energy_grid",
    "sup_gap_to_boltzmann",
    "sample_energy_simplex",
    "sample_energy_simplex_batch",
]


@dataclass(frozen=True)
class Moments:
    mean: Fraction
    second: Fraction
    variance: Fraction

    def __post_init__(self):
        if self.variance != self.second - self.mean**2 or self.variance < 0:
            raise ValueError("inconsistent moments")


def moments(N: int, s: int) -> Moments:
    """Closed forms for <k>, <k^2> and the variance of p(k)."""
    if N < 1 or s < 0:
        raise ValueError("need N >= 1 and s >= 0")
    mean = Fraction(s, N)
    second = Fraction(N - 1, N + 1) * mean + Fraction(2 * N, N + 1) * mean**2
    variance = Fraction(N - 1, N + 1) * (mean + mean**2)
    return Moments(mean, second, variance)


def moments_by_summation(table: DistTable) -> Moments:
    mean = sum((k * p for k, p in enumerate(table.entries)), Fraction(0))
    second = sum((k * k * p for k, p in enumerate(table.entries)), Fraction(0))
    return Moments(mean, second, second - mean**2)


def geometric_limit_pmf(mean_quanta: float, k: float) -> float:
    """Limit law exp(-k/<k>)/<k>, read as a density in k."""
    if mean_quanta <= 0:
        raise ValueError("mean_quanta must be positive")
    if k < 0:
        return 0.0
    return math.exp(-k / mean_quanta) / mean_quanta


def geometric_comparator(mean_quanta: float, kmax: int, ratio: float | None = None):
    """Normalized geometric pmf (1-q) q^k on k = 0..kmax plus its tail mass.

    The default ratio q = exp(-1/<k>) discretizes the limit density. Passing
    ratio=<k>/(1+<k>) gives the exact large-N limit of p(k) at fixed <k>.
    """
    q = math.exp(-1.0 / mean_quanta) if ratio is None else ratio
    ks = np.arange(kmax + 1)
    return (1.0 - q) * q**ks, q ** (kmax + 1)


def total_variation(table: DistTable, comparator: np.ndarray, tail: float = 0.0) -> float:
    """Half the L1 distance; ``tail`` is comparator mass beyond k = s."""
    p = np.array([float(x) for x in table.entries])
    return 0.5 * (float(np.abs(p - comparator).sum()) + tail)


@dataclass(frozen=True)
class LimitRow:
    scale: int
    N: int
    s: int
    tv_exponential: float  # against q = exp(-1/<k>)
    tv_bose: float  # against q = <k>/(1+<k>)


def limit_convergence(
    mean_quanta: Fraction | int | str,
    scale_list: Sequence[int],
    base_N: int = 10,
) -> list[LimitRow]:
    """Distance from p(k) to the geometric limit along N = m*base_N, s = <k>*N."""
    mean = Fraction(mean_quanta)
    if mean <= 0:
        raise ValueError("mean_quanta must be positive")
    rows = []
    for m in scale_list:
        N = m * base_N
        s = mean * N
        if N < 2 or s.denominator != 1:
            raise ValueError(f"scale {m} gives N={N}, s={s}; need N >= 2 and integer s")
        table = level_pmf(N, int(s))
        mq = float(mean)
        tv_e = total_variation(table, *geometric_comparator(mq, int(s)))
        tv_b = total_variation(table, *geometric_comparator(mq, int(s), mq / (1 + mq)))
        rows.append(LimitRow(m, N, int(s), tv_e, tv_b))
    return rows


@dataclass(frozen=True)
class EnergySystem:
    N: int
    E: float

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not self.E > 0:
            raise ValueError("E must be positive")

    @property
    def mean_energy(self) -> float:
        return self.E / self.N


def hyperplane_area(sys: EnergySystem) -> float:
    """Area sqrt(N) E^(N-1)/(N-1)! of the simplex sum e_i = E."""
    N, E = sys.N, sys.E
    try:
        return math.sqrt(N) * E ** (N - 1) / math.factorial(N - 1)
    except OverflowError:
        return math.exp(0.5 * math.log(N) + (N - 1) * math.log(E) - math.lgamma(N))


def _check_eps(sys: EnergySystem, eps) -> None:
    if sys.N < 2:
        raise ValueError("needs N >= 2")
    e = np.asarray(eps, dtype=float)
    if np.any(e < 0) or np.any(e > sys.E):
        raise ValueError(f"energy must lie in [0, {sys.E}]")


def _log_power(base_frac: np.ndarray, power: int) -> np.ndarray:
    # (1 - x)^power in log space, with 0^0 = 1
    if power == 0:
        return np.ones_like(base_frac)
    with np.errstate(divide="ignore"):
        return np.exp(power * np.log1p(-base_frac))


def zone_area_density(sys: EnergySystem, eps):
    """d(area)/d(e_1) = sqrt(N) (E - e)^(N-2)/(N-2)!."""
    _check_eps(sys, eps)
    N, E = sys.N, sys.E
    e = np.asarray(eps, dtype=float)
    log_scale = 0.5 * math.log(N) + (N - 2) * math.log(E) - math.lgamma(N - 1)
    out = math.exp(log_scale) * _log_power(e / E, N - 2)
    return float(out) if out.ndim == 0 else out


def finite_n_energy_pdf(sys: EnergySystem, eps):
    """Single-particle energy density (N-1)/E (1 - e/E)^(N-2)."""
    _check_eps(sys, eps)
    N, E = sys.N, sys.E
    e = np.asarray(eps, dtype=float)
    out = (N - 1) / E * _log_power(e / E, N - 2)
    return float(out) if out.ndim == 0 else out


def finite_n_energy_cdf(sys: EnergySystem, eps):
    _check_eps(sys, eps)
    e = np.asarray(eps, dtype=float)
    with np.errstate(divide="ignore"):
        out = -np.expm1((sys.N - 1) * np.log1p(-e / sys.E))
    out = np.where(e >= sys.E, 1.0, out)
    return float(out) if out.ndim == 0 else out


def boltzmann_pdf(mean_energy: float, eps):
    if mean_energy <= 0:
        raise ValueError("mean_energy must be positive")
    e = np.asarray(eps, dtype=float)
    out = np.where(e < 0, 0.0, np.exp(-e / mean_energy) / mean_energy)
    return float(out) if out.ndim == 0 else out


def energy_grid(mean_energy: float, points: int = 301, span: float = 3.0) -> np.ndarray:
    return np.linspace(0.0, span * mean_energy, points)


def sup_gap_to_boltzmann(N: int, mean_energy: float, points: int = 301) -> float:
    """max |P_N(e) - P_Boltzmann(e)| on [0, 3<e>] for E = N<e>."""
    sys = EnergySystem(N, N * mean_energy)
    grid = energy_grid(mean_energy, points)
    return float(np.max(np.abs(finite_n_energy_pdf(sys, grid) - boltzmann_pdf(mean_energy, grid))))


def zone_area_integral(sys: EnergySystem, tol: float = 1e-13) -> float:
    return integrate(lambda x: zone_area_density(sys, np.clip(x, 0, sys.E)), 0.0, sys.E,
                     tol=tol * hyperplane_area(sys)).value


def sample_energy_simplex_batch(sys: EnergySystem, draws: int, rng) -> np.ndarray:
    """(draws, N) points uniform on the simplex, from normalized exponentials."""
    if sys.N < 2:
        raise ValueError("needs N >= 2")
    x = rng.standard_exponential((draws, sys.N))
    return sys.E * x / x.sum(axis=1, keepdims=True)


def sample_energy_simplex(sys: EnergySystem, rng=None, seed: int | None = None) -> np.ndarray:
    if rng is None:
        rng = make_rng(0 if seed is None else seed)
    return sample_energy_simplex_batch(sys, 1, rng)[0]
