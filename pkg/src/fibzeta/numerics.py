"""Precision-parameterized arithmetic helpers shared by the other modules.

High-precision reals and complexes are mpmath ``mpf``/``mpc`` values; the
working precision is set per call with :func:`precision`.  Exact rationals
are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import mpmath
from mpmath import mp

DEFAULT_PRECISION = 256
MIN_PRECISION = 64
PRECISION_ENV = "FIBZETA_PRECISION"

RIGOROUS = "rigorous"
HEURISTIC = "heuristic"


class FibZetaError(Exception):
    """Base class for errors raised by this package."""


class DomainError(FibZetaError, ValueError):
    pass


class PrecisionFault(FibZetaError, ArithmeticError):
    """An iteration failed to converge at the requested working precision."""


class PoleProximityError(FibZetaError):
    """The argument lies within the exclusion radius of a candidate pole."""

    def __init__(self, s, k: int, parts: tuple, branch_n: int, distance):
        self.s = s
        self.k = k
        self.parts = tuple(parts)
        self.branch_n = branch_n
        self.distance = distance
        super().__init__(
            f"s={mpmath.nstr(s, 15)} is within {mpmath.nstr(distance, 5)} of the "
            f"candidate pole k={k}, parts={self.parts}, n={branch_n}"
        )


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION
    bits = int(raw)
    check_precision(bits)
    return bits


def check_precision(bits: int) -> int:
    if int(bits) != bits or bits < MIN_PRECISION:
        raise DomainError(f"precision_bits must be an integer >= {MIN_PRECISION}, got {bits!r}")
    return int(bits)


@contextmanager
def precision(bits: int) -> Iterator[None]:
    """Run the enclosed block at ``bits`` bits of mantissa (round-to-nearest-even)."""
    check_precision(bits)
    with mp.workprec(bits):
        yield


@dataclass(frozen=True)
class ErrorBound:
    magnitude: mpmath.mpf
    kind: str

    def __post_init__(self):
        if self.kind not in (RIGOROUS, HEURISTIC):
            raise DomainError(f"unknown bound kind {self.kind!r}")
        if not mpmath.isfinite(self.magnitude) or self.magnitude < 0:
            raise DomainError("error bound must be finite and non-negative")


def generalized_binomial(s, k: int):
    """Return binomial(-s, k) = prod_{j<k} (-s - j)/(j + 1) at the current precision."""
    if k < 0:
        raise DomainError("k must be non-negative")
    s = mpmath.mpmathify(s)
    out = mpmath.mpf(1)
    for j in range(k):
        out = out * (-s - j) / (j + 1)
    return out


def mpf_to_fraction(x) -> Fraction:
    """Exact value of a finite mpf as a Fraction."""
    x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise DomainError("cannot convert a non-finite value")
    sign, man, exp, _ = x._mpf_
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def convergents(x: Fraction) -> Iterator[Fraction]:
    """Continued-fraction convergents of an exact rational, in order."""
    num, den = x.numerator, x.denominator
    a, r = divmod(num, den)
    p_prev, p = 1, a
    q_prev, q = 0, 1
    yield Fraction(p, q)
    num, den = den, r
    while den:
        a, r = divmod(num, den)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield Fraction(p, q)
        num, den = den, r


def reconstruction_threshold(precision_bits: int) -> Fraction:
    return Fraction(1, 2 ** ((2 * precision_bits) // 3))


def default_max_denominator(precision_bits: int) -> int:
    return 2 ** (precision_bits // 3)


def rational_reconstruct(
    x, max_denominator: Optional[int] = None, precision_bits: Optional[int] = None
) -> Optional[Fraction]:
    """Recover p/q from a high-precision approximation, or None.

    Returns the first continued-fraction convergent with ``q <= max_denominator``
    lying within ``2**-(2*precision_bits//3)`` of ``x``.  ``precision_bits``
    defaults to the current working precision.
    """
    bits = mp.prec if precision_bits is None else precision_bits
    if max_denominator is None:
        max_denominator = default_max_denominator(bits)
    exact = mpf_to_fraction(x)
    threshold = reconstruction_threshold(bits)
    for conv in convergents(exact):
        if conv.denominator > max_denominator:
            return None
        if abs(exact - conv) < threshold:
            return conv
    return None


def to_decimal(x, bits: Optional[int] = None) -> str:
    """Deterministic decimal rendering carrying the full working precision."""
    bits = mp.prec if bits is None else bits
    digits = max(15, int(bits * 0.30103) + 1)
    return mpmath.nstr(mpmath.mpf(x), digits, min_fixed=-5, max_fixed=30)
