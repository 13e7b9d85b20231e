import mpmath
import pytest

from fibzeta.numerics import DomainError, precision
from fibzeta.recurrence import (
    binet_value,
    bounds_check,
    fib_sequence,
    power_window_check,
    rnd_check,
)
from fibzeta.roots import all_roots


def test_fibonacci():
    seq = fib_sequence(2, 7)
    assert [seq[n] for n in range(1, 8)] == [1, 1, 2, 3, 5, 8, 13]
    assert seq.start_index == 0


def test_tribonacci():
    seq = fib_sequence(3, 7)
    assert [seq[n] for n in range(1, 8)] == [1, 1, 2, 4, 7, 13, 24]


def test_power_of_two_window():
    seq = fib_sequence(5, 6)
    assert [seq[n] for n in range(2, 7)] == [1, 2, 4, 8, 16]


@pytest.mark.parametrize("ell", [2, 3, 4, 7])
def test_initial_conditions_and_recurrence(ell):
    seq = fib_sequence(ell, 60)
    assert seq.start_index == 2 - ell
    assert all(seq[n] == 0 for n in range(2 - ell, 1))
    assert seq[1] == 1
    for n in range(2, 61):
        assert seq[n] == sum(seq[n - j] for j in range(1, ell + 1))


def test_strict_below_power_of_two():
    for ell in (2, 3, 6):
        assert power_window_check(ell, 120).ok


@pytest.mark.parametrize("ell,n_max", [(1, 5), (2, 0), (2.5, 3)])
def test_rejects_bad_arguments(ell, n_max):
    with pytest.raises(DomainError):
        fib_sequence(ell, n_max)


def test_index_out_of_range():
    with pytest.raises(IndexError):
        fib_sequence(3, 5)[6]


def test_binet_fibonacci_55():
    value = binet_value(2, 10, all_roots(2, 256))
    assert abs(value - 55) < mpmath.mpf(10) ** -60
    assert abs(value.imag) < mpmath.mpf(10) ** -60


def test_binet_small_indices():
    assert abs(binet_value(3, 1, all_roots(3, 256)) - 1) < mpmath.mpf(10) ** -60
    assert abs(binet_value(4, 0, all_roots(4, 256))) < mpmath.mpf(10) ** -60


@pytest.mark.parametrize("ell", [2, 3, 5, 8])
def test_binet_reproduces_sequence(ell):
    roots = all_roots(ell, 256)
    seq = fib_sequence(ell, 300)
    tol = mpmath.mpf(2) ** -128
    for n in range(2 - ell, 301, 7):
        v = binet_value(ell, n, roots)
        # relative: the largest terms exceed 2^256 in magnitude
        assert abs(v - seq[n]) <= tol * max(1, seq[n])
        assert abs(v.imag) <= tol * max(1, seq[n])


@pytest.mark.parametrize("ell", [2, 10])
def test_rnd_check_clean(ell):
    report = rnd_check(ell, 300, all_roots(ell, 256))
    assert report.ok
    assert report.checked == 300 - (2 - ell) + 1
    # the supplied roots could not resolve F_300; the check raised its precision
    assert report.precision_bits > 300


def test_rnd_at_zero():
    report = rnd_check(3, 0)
    assert report.ok and report.checked == 2


def test_bounds_boundary_n1():
    report = bounds_check(2, 1, all_roots(2, 256))
    assert report.ok and report.checked == 1


def test_bounds_tribonacci_n5():
    roots = all_roots(3, 256)
    with precision(256):
        assert roots.alpha ** 3 <= 7 <= roots.alpha ** 4
        assert abs(roots.alpha - mpmath.mpf("1.8392867552141611325518525646532866")) < 1e-33


@pytest.mark.parametrize("ell", range(2, 7))
def test_bounds_hold(ell):
    assert bounds_check(ell, 300).ok
