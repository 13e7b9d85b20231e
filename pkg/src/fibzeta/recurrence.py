"""Exact l-generalized Fibonacci numbers and checks against the Binet-like formula."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import mpmath

from .numerics import DomainError, mpf_to_fraction, precision
from .roots import RootSet, all_roots


@dataclass(frozen=True)
class FibSequence:
    """F_n for n = 2 - ell ... n_max, stored densely from the first index."""

    ell: int
    values: Tuple[int, ...]

    @property
    def start_index(self) -> int:
        return 2 - self.ell

    @property
    def n_max(self) -> int:
        return self.start_index + len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        if not self.start_index <= n <= self.n_max:
            raise IndexError(f"index {n} outside {self.start_index}..{self.n_max}")
        return self.values[n - self.start_index]

    def items(self, first: Optional[int] = None):
        first = self.start_index if first is None else first
        for n in range(first, self.n_max + 1):
            yield n, self[n]


def fib_sequence(ell: int, n_max: int) -> FibSequence:
    if int(ell) != ell or ell < 2:
        raise DomainError(f"ell must be an integer >= 2, got {ell!r}")
    if int(n_max) != n_max or n_max < 1:
        raise DomainError(f"n_max must be an integer >= 1, got {n_max!r}")
    values = [0] * (ell - 1) + [1]
    window = 1  # running sum of the last ell values
    while len(values) < n_max + ell - 1:
        nxt = window
        values.append(nxt)
        window += nxt - values[-1 - ell]
    return FibSequence(ell=ell, values=tuple(values))


def binet_value(ell: int, n: int, roots: RootSet):
    """sum_i c_i' a_i^(n-1), as an mpc at the roots' precision."""
    if roots.ell != ell:
        raise DomainError("roots computed for a different ell")
    with precision(roots.precision_bits):
        total = mpmath.mpc(0)
        for c, a in zip(roots.binet, roots.roots):
            total += c * mpmath.power(a, n - 1)
        return total


def required_bits(ell: int, n_max: int, guard: int = 64) -> int:
    """Bits needed to resolve c_1' a^(n-1) to well below 1/2 for n <= n_max."""
    return max(0, n_max) + guard  # log2(alpha) < 1


@dataclass
class CheckReport:
    ell: int
    n_range: Tuple[int, int]
    precision_bits: int
    checked: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _enough(roots: Optional[RootSet], ell: int, bits: int) -> RootSet:
    if roots is not None and roots.ell != ell:
        raise DomainError("roots computed for a different ell")
    if roots is None or roots.precision_bits < bits:
        return all_roots(ell, bits)
    return roots


def dominant_term(roots: RootSet, n: int):
    return roots.binet[0] * mpmath.power(roots.alpha, n - 1)


def rnd_check(ell: int, n_max: int, roots: Optional[RootSet] = None) -> CheckReport:
    """Check F_n = rnd(c_1' a^(n-1)) and |F_n - c_1' a^(n-1)| < 1/2 for n = 2-ell..n_max.

    The roots are recomputed at higher precision when the supplied ones cannot
    resolve the fractional part of the largest term.
    """
    if n_max < 2 - ell:
        raise DomainError("n_max must be at least 2 - ell")
    roots = _enough(roots, ell, required_bits(ell, n_max))
    seq = fib_sequence(ell, max(n_max, 1))
    report = CheckReport(ell, (2 - ell, n_max), roots.precision_bits)
    half = mpmath.mpf(1) / 2
    with precision(roots.precision_bits):
        for n in range(2 - ell, n_max + 1):
            x = dominant_term(roots, n)
            exact = seq[n]
            rounded = int(mpmath.floor(x + half))
            dist = abs(exact - x)
            report.checked += 1
            if rounded != exact or not dist < half:
                report.failures.append(
                    {"n": n, "exact": exact, "rounded": rounded, "distance": mpmath.nstr(dist, 10)}
                )
    return report


def bounds_check(ell: int, n_max: int, roots: Optional[RootSet] = None) -> CheckReport:
    """Check a^(n-2) <= F_n <= a^(n-1) for 1 <= n <= n_max, compared exactly."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    roots = _enough(roots, ell, 64)
    seq = fib_sequence(ell, n_max)
    report = CheckReport(ell, (1, n_max), roots.precision_bits)
    with precision(roots.precision_bits):
        for n in range(1, n_max + 1):
            lower = mpf_to_fraction(mpmath.power(roots.alpha, n - 2))
            upper = mpf_to_fraction(mpmath.power(roots.alpha, n - 1))
            exact = seq[n]
            report.checked += 1
            if not lower <= exact <= upper:
                report.failures.append({"n": n, "exact": exact})
    return report


def power_window_check(ell: int, n_max: int) -> CheckReport:
    """F_n = 2^(n-2) for 2 <= n <= ell+1 and F_n < 2^(n-2) for ell+2 <= n <= n_max."""
    seq = fib_sequence(ell, max(n_max, ell + 1))
    report = CheckReport(ell, (2, n_max), 0)
    for n in range(2, n_max + 1):
        report.checked += 1
        target = 1 << (n - 2)
        good = seq[n] == target if n <= ell + 1 else seq[n] < target
        if not good:
            report.failures.append({"n": n, "exact": seq[n]})
    return report
