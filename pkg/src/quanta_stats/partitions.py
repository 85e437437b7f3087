"""Partition numbers: exact counts and the harmonic integral representation.

The integral

    p_s = (2/pi) * int_0^{pi/2} prod_{k=1}^{s} sin((s+k)x)/sin(kx) * cos((s^2-2s)x) dx

has a trigonometric-polynomial integrand whose only trouble spots are the
removable singularities at the zeros x = m*pi/k of the denominators. The
quadrature splits panels at every such zero and keeps panel endpoints as
exact rational multiples of pi, so each sin(jx) factor is evaluated from an
exactly reduced phase plus a small, accurately known offset.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .quadrature import adaptive, gauss_legendre

__all__ = [
    "QuadReport",
    "SingularPointError",
    "partition_count",
    "restricted_partition_count",
    "partition_integrand",
    "partition_integral",
    "singular_points",
]

EPS = np.finfo(float).eps


class SingularPointError(ValueError):
    """x is an exact zero of sin(kappa*x) for some kappa in 1..s."""

    def __init__(self, kappa: int, x: float):
        super().__init__(f"sin({kappa}*x) vanishes at x={x!r}")
        self.kappa = kappa
        self.x = x


@dataclass(frozen=True)
class QuadReport:
    s: int
    value: float
    abs_error_estimate: float
    panels: int
    min_denominator_distance: float
    converged: bool

    def __post_init__(self):
        if self.abs_error_estimate < 0 or self.panels < 1:
            raise ValueError("malformed quadrature report")

    @property
    def rounded(self) -> int:
        return int(round(self.value))


@lru_cache(maxsize=None)
def _partition_table(upto: int) -> tuple[int, ...]:
    # Euler's pentagonal recurrence
    p = [1] + [0] * upto
    for n in range(1, upto + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = g1 + k
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return tuple(p)


def partition_count(s: int) -> int:
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    # grow the cached table in coarse steps
    size = max(64, 1 << (s.bit_length()))
    return _partition_table(size)[s]


def restricted_partition_count(s: int, max_parts: int) -> int:
    """Partitions of s into at most ``max_parts`` parts.

    Conjugation makes this the count with every part <= max_parts, which is
    the coin-change table below.
    """
    if s < 0 or max_parts < 0:
        raise ValueError("s and max_parts must be >= 0")
    if max_parts >= s:
        return partition_count(s)
    ways = [1] + [0] * s
    for part in range(1, max_parts + 1):
        for n in range(part, s + 1):
            ways[n] += ways[n - part]
    return ways[s]


def partition_integrand(s: int, x: float) -> float:
    """The integrand at x in (0, pi/2], each factor in plain double precision."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if not 0.0 < x <= math.pi / 2:
        raise ValueError(f"x must lie in (0, pi/2], got {x!r}")
    value = math.cos((s * s - 2 * s) * x)
    for k in range(1, s + 1):
        den = math.sin(k * x)
        if den == 0.0:
            raise SingularPointError(k, x)
        value *= math.sin((s + k) * x) / den
    return value


def singular_points(s: int) -> list[Fraction]:
    """Zeros m/k (in units of pi) of the denominators inside (0, 1/2)."""
    pts = {Fraction(m, k) for k in range(1, s + 1) for m in range(1, k) if 2 * m < k}
    return sorted(pts)


def _phase(freq: int, u: Fraction) -> tuple[float, float]:
    """sin and cos of freq*pi*u, exact at multiples of pi/2."""
    r = (freq * u) % 2
    if r.denominator <= 2:
        quarter = int(r * 2)
        return ((0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0))[quarter]
    ang = math.pi * float(r)
    return math.sin(ang), math.cos(ang)


class _PanelRule:
    """Gauss-Legendre rule for the integrand on a panel [pi*ua, pi*ub]."""

    def __init__(self, s: int, order: int):
        self.s = s
        self.nodes, self.weights = gauss_legendre(order)
        self.shift = s * s - 2 * s

    def _sin(self, freq, ua, ub, d_left, d_right, use_left):
        sa, ca = _phase(freq, ua)
        sb, cb = _phase(freq, ub)
        yl = freq * d_left
        yr = -freq * d_right
        from_left = sa * np.cos(yl) + ca * np.sin(yl)
        from_right = sb * np.cos(yr) + cb * np.sin(yr)
        return np.where(use_left, from_left, from_right)

    def values(self, ua: Fraction, ub: Fraction) -> np.ndarray:
        h = math.pi * float(ub - ua)
        d_left = 0.5 * h * (1.0 + self.nodes)
        d_right = 0.5 * h * (1.0 - self.nodes)
        use_left = d_left <= d_right
        s = self.s
        # the cosine factor has no zeros to protect
        x = math.pi * float(ua) + d_left
        out = np.cos(self.shift * x)
        for k in range(1, s + 1):
            num = self._sin(s + k, ua, ub, d_left, d_right, use_left)
            den = self._sin(k, ua, ub, d_left, d_right, use_left)
            out = out * (num / den)
        return out

    def __call__(self, ua: Fraction, ub: Fraction) -> tuple[float, float]:
        f = self.values(ua, ub)
        absf = np.abs(f)
        half = 0.5 * math.pi * float(ub - ua)
        value = half * float(np.dot(self.weights, f))
        magnitude = half * float(np.dot(self.weights, absf))
        return value, magnitude


def partition_integral(
    s: int,
    panels_hint: int = 0,
    tol: float = 1e-8,
    order: int = 32,
    max_panels: int = 20_000,
) -> QuadReport:
    """Evaluate the harmonic integral for p_s by adaptive Gauss-Legendre.

    ``panels_hint`` asks for at least that many equal-width starting panels
    (further split at every denominator zero). The report is flagged
    non-converged when the error estimate, including a rounding allowance,
    reaches 0.4.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    zeros = singular_points(s)
    breaks = {Fraction(0), Fraction(1, 2), *zeros}
    # the integrand oscillates at up to ~2 s^2 rad per unit x; start panels
    # narrow enough for one 32-point rule to resolve it
    freq = 2 * s * s
    n_uniform = max(panels_hint, math.ceil(freq * math.pi / 2 / 16))
    breaks.update(Fraction(j, 2 * n_uniform) for j in range(1, n_uniform))
    breaks = sorted(breaks)

    rule = _PanelRule(s, order)
    scale = 2.0 / math.pi
    res = adaptive(
        rule,
        breaks,
        tol / scale,
        max_panels=max_panels,
        noise_ulps=16.0 * (4 * s + 8),
        min_width=2.0**-40,
    )

    # nearest denominator zero to any node: only end nodes of panels next to
    # a zero matter, and 0 and pi/2 are zeros (k*pi/2 for even k)
    zero_set = set(zeros) | {Fraction(0)}
    if s >= 2:
        zero_set.add(Fraction(1, 2))
    nodes = rule.nodes
    edge = 0.5 * (1.0 + float(nodes[0]))  # fraction of a panel before its first node
    min_dist = math.inf
    for a, b in res.panels:
        w = math.pi * float(b - a)
        if a in zero_set:
            min_dist = min(min_dist, edge * w)
        if b in zero_set:
            min_dist = min(min_dist, edge * w)

    value = scale * res.value
    # each node value carries ~(4s+2) roundings, one per factor and ratio
    rounding = scale * res.magnitude * EPS * (4 * s + 8)
    err = scale * res.abs_error + rounding
    return QuadReport(
        s=s,
        value=value,
        abs_error_estimate=float(err),
        panels=len(res.panels),
        min_denominator_distance=min_dist,
        converged=bool(res.converged and err < 0.4),
    )
