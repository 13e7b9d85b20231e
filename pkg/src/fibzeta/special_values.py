"""Values at negative integers from the finite double sum, certified rational by reconstruction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import mpmath

from .continuation import compositions, multinomial
from .numerics import (
    DomainError,
    FibZetaError,
    check_precision,
    default_max_denominator,
    precision,
    rational_reconstruct,
)
from .poles import Window, enumerate_poles, grouping_tolerance
from .roots import RootSet, all_roots

EXTRA_BITS = 64


class PoleError(FibZetaError):
    def __init__(self, ell: int, m: int):
        self.ell, self.m = ell, m
        super().__init__(f"s=-{m} is a pole for ell={ell}")


@dataclass(frozen=True)
class RationalValue:
    ell: int
    m: int
    numeric: mpmath.mpc
    rational: Optional[Fraction]
    precisions_checked: Tuple[int, int]
    certified: bool


def is_negative_integer_pole(ell: int, m: int, roots: RootSet) -> bool:
    if m < 1:
        raise DomainError("m must be a positive integer")
    window = Window(-m - 0.25, -m + 0.25, -0.25, 0.25)
    tol = grouping_tolerance(roots.precision_bits)
    target = mpmath.mpc(-m)
    for g in enumerate_poles(ell, window, roots):
        if g.genuine and abs(g.location - target) < tol:
            return True
    return False


def negative_value(ell: int, m: int, roots: RootSet):
    """sum_{k<=m} C(m,k) A^(m-k) sum_comp multinom prod B_i^k_i / (alpha^-(m-k) prod a_i^-k_i - 1)."""
    with precision(roots.precision_bits):
        a = roots.coeffs[0]
        alpha = roots.alpha
        total = mpmath.mpc(0)
        for k in range(m + 1):
            inner = mpmath.mpc(0)
            alpha_part = mpmath.power(alpha, -(m - k))
            for parts in compositions(k, ell - 1):
                term = mpmath.mpf(multinomial(parts))
                d = alpha_part
                for z, b, kk in zip(roots.others, roots.coeffs[1:], parts):
                    if kk:
                        term *= mpmath.power(b, kk)
                        d *= mpmath.power(z, -kk)
                inner += term / (d - 1)
            total += math.comb(m, k) * mpmath.power(a, m - k) * inner
        return total


def zeta_negative(
    ell: int, m: int, precision_bits: int = 256, confirm_bits: Optional[int] = None
) -> RationalValue:
    """Evaluate at s = -m at two precisions and reconstruct a rational from each."""
    check_precision(precision_bits)
    confirm_bits = precision_bits + EXTRA_BITS if confirm_bits is None else confirm_bits
    check_precision(confirm_bits)
    if m < 1:
        raise DomainError("m must be a positive integer")
    roots = all_roots(ell, precision_bits)
    if is_negative_integer_pole(ell, m, roots):
        raise PoleError(ell, m)
    results = []
    for bits in (precision_bits, confirm_bits):
        r = all_roots(ell, bits)
        value = negative_value(ell, m, r)
        with precision(bits):
            rat = rational_reconstruct(value.real, default_max_denominator(bits), bits)
            real_ok = abs(value.imag) < mpmath.mpf(2) ** -(bits // 2)
        results.append((value, rat, real_ok))
    (v0, r0, ok0), (_, r1, ok1) = results
    certified = r0 is not None and r0 == r1 and ok0 and ok1
    return RationalValue(
        ell=ell,
        m=m,
        numeric=v0,
        rational=r0,
        precisions_checked=(precision_bits, confirm_bits),
        certified=certified,
    )
