import mpmath
import pytest

from fibzeta.numerics import DomainError, precision
from fibzeta.zeta_direct import cutoff, tail_bound, zeta_direct

from oracles import exact_partial_sum

TOL = mpmath.mpf("1e-30")


@pytest.mark.parametrize("s,expected", [
    (2, "2.4263207511672411877415694129"),
    (1, "3.3598856662431775531720113029"),
])
def test_fibonacci_constants(s, expected):
    res = zeta_direct(2, s, TOL)
    with precision(256):
        oracle = exact_partial_sum(2, s, 200)
        assert abs(res.value - mpmath.mpf(oracle.numerator) / oracle.denominator) < 1e-30
        assert abs(res.value - mpmath.mpf(expected)) < 1e-28
    assert res.bound.kind == "rigorous"
    assert res.method == "direct"


def test_tribonacci_first_term_dominates():
    res = zeta_direct(3, 2, TOL)
    assert res.value.real > 1
    assert res.value.imag == 0


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_real_argument_gives_exactly_real_value(ell):
    assert zeta_direct(ell, mpmath.mpf("0.75"), TOL).value.imag == 0


@pytest.mark.parametrize("ell,s", [(2, 1), (3, "0.5"), (4, 2)])
def test_bound_brackets_longer_truncation(ell, s):
    res = zeta_direct(ell, mpmath.mpf(s), mpmath.mpf("1e-12"))
    with precision(256):
        longer = exact_partial_sum(ell, 1, 2 * res.terms_used) if s == 1 else None
        ref = zeta_direct(ell, mpmath.mpf(s), mpmath.mpf("1e-40")).value
        assert abs(res.value - ref) <= res.bound.magnitude
        # truncations increase monotonically for real s
        assert res.value.real <= ref.real
        if longer is not None:
            assert abs(res.value - mpmath.mpf(longer.numerator) / longer.denominator) <= res.bound.magnitude


def test_doubling_cutoff_changes_less_than_bound():
    res = zeta_direct(3, mpmath.mpc(1, 2), mpmath.mpf("1e-15"))
    with precision(256):
        seq_sum = mpmath.mpc(0)
        from fibzeta.recurrence import fib_sequence
        seq = fib_sequence(3, 2 * res.terms_used)
        for n in range(1, 2 * res.terms_used + 1):
            seq_sum += mpmath.exp(-mpmath.mpc(1, 2) * mpmath.log(seq[n]))
        assert abs(seq_sum - res.value) < res.bound.magnitude


def test_cutoff_is_least_index():
    from fibzeta.roots import all_roots
    alpha = all_roots(2, 256).alpha
    with precision(256):
        n = cutoff(alpha, mpmath.mpf(1), mpmath.mpf("1e-20"))
        assert tail_bound(alpha, 1, n) < 1e-20 <= tail_bound(alpha, 1, n - 1)


@pytest.mark.parametrize("s", [0, "-1", mpmath.mpf(2) ** -21])
def test_rejects_left_of_sigma_min(s):
    with pytest.raises(DomainError):
        zeta_direct(2, mpmath.mpf(s), TOL)


def test_rejects_nonpositive_tol():
    with pytest.raises(DomainError):
        zeta_direct(2, 2, 0)
