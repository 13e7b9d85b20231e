import itertools
import math

import mpmath
import pytest

from fibzeta.continuation import (
    COLLAPSED,
    COMPOSITIONS,
    TruncationError,
    auto_head_terms,
    composition_count,
    compositions,
    continuation_term,
    multinomial,
    zeta_continued,
)
from fibzeta.numerics import DomainError, PoleProximityError, precision
from fibzeta.roots import all_roots
from fibzeta.zeta_direct import zeta_direct

TOL = mpmath.mpf("1e-25")


def test_compositions_small_cases():
    assert list(compositions(0, 3)) == [(0, 0, 0)]
    assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]


@pytest.mark.parametrize("k,parts", [(3, 4), (5, 3), (4, 1), (0, 1)])
def test_compositions_match_brute_force(k, parts):
    brute = [c for c in itertools.product(range(k + 1), repeat=parts) if sum(c) == k]
    got = list(compositions(k, parts))
    assert got == sorted(brute)
    assert len(got) == composition_count(k, parts) == math.comb(k + parts - 1, parts - 1)


def test_twenty_compositions():
    assert len(list(compositions(3, 4))) == 20


def test_multinomial():
    assert multinomial((2, 1, 1)) == 12
    assert multinomial((0, 0)) == 1


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_k0_term(ell):
    roots = all_roots(ell, 256)
    s = mpmath.mpc("0.7", "1.3")
    t = continuation_term(ell, s, 0, roots)
    with precision(256):
        assert t.binomial_factor == 1
        expected = 1 / (mpmath.exp(s * mpmath.log(roots.alpha)) - 1)
        assert abs(t.term_value - expected) < mpmath.mpf(2) ** -240


def test_fibonacci_k1_single_composition():
    roots = all_roots(2, 256)
    t = continuation_term(2, 2, 1, roots)
    with precision(256):
        a, b = roots.coeffs
        h = 1 / (roots.alpha ** 3 / roots.others[0] - 1)
        assert abs(t.term_value - (-2) * b / a * h) < mpmath.mpf(2) ** -240


def test_tribonacci_k2_matches_per_composition_oracle():
    roots = all_roots(3, 256)
    t = continuation_term(3, 2, 2, roots)
    with precision(256):
        a, b2, b3 = roots.coeffs
        z2, z3 = roots.others
        oracle = 0
        for k2, k3 in [(0, 2), (1, 1), (2, 0)]:
            mult = math.factorial(2) // (math.factorial(k2) * math.factorial(k3))
            h = 1 / (roots.alpha ** 4 * z2 ** -k2 * z3 ** -k3 - 1)
            oracle += mult * b2**k2 * b3**k3 * h
        oracle *= 3 / a**2  # binom(-2, 2) = 3
        assert abs(t.term_value - oracle) < mpmath.mpf(2) ** -230


@pytest.mark.parametrize("ell,k,head", [(3, 6, 1), (5, 7, 4), (4, 10, 2)])
def test_collapsed_strategy_agrees_with_compositions(ell, k, head):
    roots = all_roots(ell, 256)
    s = mpmath.mpc("0.4", "-2.1")
    a = continuation_term(ell, s, k, roots, head, COMPOSITIONS)
    b = continuation_term(ell, s, k, roots, head, COLLAPSED)
    with precision(256):
        assert abs(a.term_value - b.term_value) < mpmath.mpf(2) ** -200 * (1 + abs(a.term_value))


def test_magnitude_bound_dominates():
    roots = all_roots(4, 256)
    for k in range(6):
        t = continuation_term(4, mpmath.mpc(-2.5, 0.3), k, roots)
        assert abs(t.term_value) <= t.magnitude_bound * (1 + mpmath.mpf(2) ** -128)


@pytest.mark.parametrize("ell", [2, 3])
def test_literal_series_agrees_with_shifted(ell):
    s = mpmath.mpc("-0.8", "0.6")
    plain = zeta_continued(ell, s, TOL, head_terms=1)
    fast = zeta_continued(ell, s, TOL)
    assert fast.diagnostics["head_terms"] > 1
    assert abs(plain.value - fast.value) <= plain.bound.magnitude + fast.bound.magnitude


@pytest.mark.parametrize("ell", [2, 3, 4, 5])
@pytest.mark.parametrize("re", ["0.5", "1", "2", "3"])
@pytest.mark.parametrize("im", [0, 1, 2])
def test_cross_method_grid(ell, re, im):
    s = mpmath.mpc(re, im)
    d = zeta_direct(ell, s, TOL)
    c = zeta_continued(ell, s, TOL)
    assert abs(d.value - c.value) <= d.bound.magnitude + c.bound.magnitude
    assert c.bound.kind == "heuristic" and c.method == "continuation"


@pytest.mark.parametrize("ell", [2, 4])
def test_conjugate_symmetry(ell):
    s = mpmath.mpc("-1.7", "2.2")
    a = zeta_continued(ell, s, TOL)
    b = zeta_continued(ell, mpmath.conj(s), TOL)
    with precision(256):
        assert abs(a.value - mpmath.conj(b.value)) <= 2 * (a.bound.magnitude + b.bound.magnitude)


def test_decay_ratio_recorded():
    res = zeta_continued(3, mpmath.mpc(-2, 1), TOL)
    assert res.diagnostics["ratio"] < 1


def test_pole_at_zero():
    with pytest.raises(PoleProximityError) as info:
        zeta_continued(2, 0, TOL)
    assert (info.value.k, info.value.parts, info.value.branch_n) == (0, (0,), 0)


def test_pole_off_axis_tuple():
    roots = all_roots(3, 256)
    with precision(256):
        s0 = -2 + (2j * mpmath.pi + roots.logs[1] + roots.logs[2]) / roots.log_alpha
    with pytest.raises(PoleProximityError) as info:
        zeta_continued(3, s0, TOL)
    assert info.value.k == 2 and info.value.parts == (1, 1) and info.value.branch_n == 1


def test_truncation_failure():
    with pytest.raises(TruncationError):
        zeta_continued(5, mpmath.mpc(-3, 1), TOL, k_max=3, head_terms=1)


def test_head_terms_default():
    assert auto_head_terms(all_roots(2, 256)) == 5


def test_rejects_bad_tol():
    with pytest.raises(DomainError):
        zeta_continued(2, 1, -1)
