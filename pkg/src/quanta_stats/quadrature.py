"""Adaptive composite Gauss-Legendre integration.

Panels are bisected until the rule on a panel agrees with the sum of the
rule on its two halves, or until the disagreement is down at the rounding
noise of the panel (a few ulps of the integral of |f|). Endpoints may be any type closed under ``(a+b)/2``
(floats, or ``Fraction`` when the caller needs exact panel geometry).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

DEFAULT_ORDER = 32
EPS = float(np.finfo(float).eps)


@lru_cache(maxsize=None)
def gauss_legendre(order: int = DEFAULT_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class AdaptiveResult:
    value: float
    abs_error: float
    magnitude: float  # integral of |f| over the accepted panels
    panels: list  # accepted (a, b) pairs, in order
    converged: bool


def pairwise_sum(values: Sequence[float]) -> float:
    n = len(values)
    if n == 0:
        return 0.0
    if n <= 8:
        total = 0.0
        for v in values:
            total += v
        return total
    mid = n // 2
    return pairwise_sum(values[:mid]) + pairwise_sum(values[mid:])


def adaptive(
    rule: Callable[[object, object], tuple[float, float]],
    breaks: Sequence,
    tol: float,
    max_panels: int = 100_000,
    noise_ulps: float = 64.0,
    min_width: float = 0.0,
) -> AdaptiveResult:
    """Integrate over the panels delimited by ``breaks``.

    ``rule(a, b)`` returns the panel estimate and the matching estimate of
    the integral of |f|. ``tol`` is an absolute tolerance on the whole
    integral, shared between panels in proportion to their width.
    """
    lo, hi = breaks[0], breaks[-1]
    span = float(hi - lo)
    if span <= 0:
        raise ValueError("breaks must be increasing")

    values: list[float] = []
    errors: list[float] = []
    mags: list[float] = []
    accepted: list = []
    converged = True
    # depth-first keeps the output panel order left to right
    stack = [(a, b, rule(a, b)[0]) for a, b in zip(breaks[:-1], breaks[1:])][::-1]
    budget = max_panels
    while stack:
        a, b, whole = stack.pop()
        m = (a + b) / 2
        (left, mag_l), (right, mag_r) = rule(a, m), rule(m, b)
        err = abs(left + right - whole)
        noise = noise_ulps * EPS * (mag_l + mag_r)
        local_tol = max(tol * float(b - a) / span, noise)
        if err <= local_tol or budget <= 0 or float(b - a) <= min_width:
            if err > local_tol:
                converged = False
            values.extend((left, right))
            errors.append(err)
            mags.extend((mag_l, mag_r))
            accepted.extend(((a, m), (m, b)))
            continue
        budget -= 1
        stack.append((m, b, right))
        stack.append((a, m, left))
    return AdaptiveResult(
        value=pairwise_sum(values),
        abs_error=pairwise_sum(errors),
        magnitude=pairwise_sum(mags),
        panels=accepted,
        converged=converged,
    )


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-13,
    order: int = DEFAULT_ORDER,
) -> AdaptiveResult:
    """Adaptive Gauss-Legendre for a vectorized real function on [a, b]."""
    nodes, weights = gauss_legendre(order)

    def rule(lo: float, hi: float) -> float:
        half = 0.5 * (hi - lo)
        fx = f(lo + half * (nodes + 1.0))
        return half * float(np.dot(weights, fx)), half * float(np.dot(weights, np.abs(fx)))

    if not math.isfinite(a) or not math.isfinite(b):
        raise ValueError("finite interval required")
    return adaptive(rule, [a, b], tol)
