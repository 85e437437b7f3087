import math
from fractions import Fraction

import mpmath
import pytest

from oracles import partitions
from quanta_stats.partitions import (
    QuadReport,
    SingularPointError,
    partition_count,
    partition_integral,
    partition_integrand,
    restricted_partition_count,
    singular_points,
)


@pytest.mark.parametrize("s, p", [(4, 5), (0, 1), (10, 42), (12, 77), (100, 190569292)])
def test_partition_count_examples(s, p):
    assert partition_count(s) == p


def test_partition_count_matches_enumeration():
    for s in range(26):
        assert partition_count(s) == sum(1 for _ in partitions(s))


@pytest.mark.parametrize("s, m, count", [(4, 4, 5), (4, 2, 3), (7, 1, 1), (0, 0, 1), (3, 0, 0)])
def test_restricted_partition_examples(s, m, count):
    assert restricted_partition_count(s, m) == count


def test_restricted_partition_matches_enumeration():
    for s in range(16):
        for m in range(s + 2):
            want = sum(1 for p in partitions(s) if len(p) <= m)
            assert restricted_partition_count(s, m) == want
        assert restricted_partition_count(s, s + 5) == partition_count(s)


def hp_integrand(s, x):
    with mpmath.workprec(128):
        x = mpmath.mpf(x)
        val = mpmath.cos((s * s - 2 * s) * x)
        for k in range(1, s + 1):
            val *= mpmath.sin((s + k) * x) / mpmath.sin(k * x)
        return val


def test_integrand_small_x_limit():
    # each factor tends to (s+k)/k, product C(2s, s)
    assert partition_integrand(4, 1e-9) == pytest.approx(70.0, rel=1e-12)
    assert partition_integrand(6, 1e-9) == pytest.approx(math.comb(12, 6), rel=1e-12)


@pytest.mark.parametrize("x", [0.1, 0.7, 1.3, math.pi / 2])
def test_integrand_s1_identity(x):
    assert partition_integrand(1, x) == pytest.approx(2 * math.cos(x) ** 2, rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("s, x", [(4, math.pi / 4), (4, 0.3), (7, 1.0), (12, 0.2113), (12, 1.0)])
def test_integrand_against_extended_precision(s, x):
    assert partition_integrand(s, x) == pytest.approx(float(hp_integrand(s, x)), rel=1e-9)


def test_integrand_domain_and_singular_points():
    with pytest.raises(ValueError):
        partition_integrand(4, 0.0)
    with pytest.raises(ValueError):
        partition_integrand(4, 2.0)
    with pytest.raises(ValueError):
        partition_integrand(0, 0.5)


def test_integrand_reports_offending_factor(monkeypatch):
    # no double x in (0, pi/2] makes math.sin(k*x) exactly zero, so fake one
    import types

    from quanta_stats import partitions as mod

    fake = types.SimpleNamespace(**{n: getattr(math, n) for n in ("cos", "pi")})
    fake.sin = lambda a: 0.0 if a == 3 * 0.5 else math.sin(a)
    monkeypatch.setattr(mod, "math", fake)
    with pytest.raises(SingularPointError) as info:
        mod.partition_integrand(4, 0.5)
    assert info.value.kappa == 3
    assert isinstance(info.value, ValueError)


def test_integrand_smooth_across_removable_singularities():
    h = 1e-6
    for s in range(2, 13):
        for u in singular_points(s):
            x0 = math.pi * float(u)
            a, b = partition_integrand(s, x0 - h), partition_integrand(s, x0 + h)
            assert abs(a - b) < 1e-3 * max(1.0, abs(a), abs(b))


def test_singular_points():
    assert singular_points(1) == []
    assert singular_points(4) == [Fraction(1, 4), Fraction(1, 3)]


@pytest.mark.parametrize("s, p", [(1, 1), (4, 5), (12, 77)])
def test_partition_integral_examples(s, p):
    rep = partition_integral(s)
    assert isinstance(rep, QuadReport)
    assert rep.converged
    assert abs(rep.value - p) < 0.5
    assert rep.abs_error_estimate < 0.4
    assert rep.panels >= 1
    assert rep.min_denominator_distance > 0


def test_partition_integral_error_estimate_is_honest():
    for s in (3, 8, 16):
        rep = partition_integral(s)
        assert abs(rep.value - partition_count(s)) <= rep.abs_error_estimate + 1e-12


def test_partition_integral_panels_hint():
    rep = partition_integral(4, panels_hint=64)
    assert rep.panels >= 64
    assert abs(rep.value - 5) < 1e-9


def test_partition_integral_flags_nonconvergence():
    # far past the double-precision range the report must say so
    rep = partition_integral(30)
    assert not rep.converged
    assert rep.abs_error_estimate >= 0.4


def test_quad_report_invariants():
    with pytest.raises(ValueError):
        QuadReport(1, 1.0, -1.0, 1, 0.1, True)
    with pytest.raises(ValueError):
        QuadReport(1, 1.0, 0.0, 0, 0.1, True)


def test_panel_nodes_next_to_zeros_match_extended_precision():
    from quanta_stats.partitions import _PanelRule

    s = 12
    rule = _PanelRule(s, 32)
    ua, ub = Fraction(1, 4), Fraction(3, 11)  # both are denominator zeros
    got = rule.values(ua, ub)
    h = (ub - ua) / 2
    for i in (0, 1, 15, 30, 31):
        # node position in units of pi, carried at 128 bits
        with mpmath.workprec(128):
            u = mpmath.mpf(ua.numerator) / ua.denominator + (mpmath.mpf(h.numerator) / h.denominator) * (
                1 + mpmath.mpf(float(rule.nodes[i])))
            want = hp_integrand(s, mpmath.pi * u)
        assert got[i] == pytest.approx(float(want), rel=1e-10)
