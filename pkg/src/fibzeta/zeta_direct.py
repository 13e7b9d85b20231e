"""Direct summation of sum_n F_n^(-s) on the half plane Re(s) > 0."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .numerics import (
    RIGOROUS,
    DomainError,
    ErrorBound,
    default_precision,
    precision,
)
from .recurrence import fib_sequence
from .roots import RootSet, all_roots

SIGMA_MIN = mpmath.mpf(2) ** -20
DIRECT = "direct"
CONTINUATION = "continuation"


@dataclass(frozen=True)
class EvalResult:
    s: mpmath.mpc
    value: mpmath.mpc
    bound: ErrorBound
    method: str
    terms_used: int
    precision_bits: int
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.terms_used < 1:
            raise DomainError("terms_used must be >= 1")

    @property
    def sigma(self):
        return self.s.real


def tail_bound(alpha, sigma, n_last: int):
    """Bound on sum_{n > n_last} |F_n^-s| from F_n >= alpha^(n-2)."""
    return mpmath.power(alpha, (1 - n_last) * sigma) / (1 - mpmath.power(alpha, -sigma))


def cutoff(alpha, sigma, tol) -> int:
    """Least N with tail_bound(alpha, sigma, N) < tol."""
    # alpha^((1-N) sigma) < tol (1 - alpha^-sigma)
    rhs = tol * (1 - mpmath.power(alpha, -sigma))
    n = int(mpmath.ceil(1 - mpmath.log(rhs) / (sigma * mpmath.log(alpha))))
    n = max(n, 1)
    while tail_bound(alpha, sigma, n) >= tol:
        n += 1
    while n > 1 and tail_bound(alpha, sigma, n - 1) < tol:
        n -= 1
    return n


def zeta_direct(
    ell: int,
    s,
    tol=mpmath.mpf("1e-30"),
    precision_bits: Optional[int] = None,
    roots: Optional[RootSet] = None,
) -> EvalResult:
    bits = roots.precision_bits if roots is not None else (precision_bits or default_precision())
    roots = roots or all_roots(ell, bits)
    with precision(bits):
        s = mpmath.mpc(s)
        tol = mpmath.mpf(tol)
        if not tol > 0:
            raise DomainError("tol must be positive")
        sigma = s.real
        if not sigma > SIGMA_MIN:
            raise DomainError(f"direct summation needs Re(s) > 2^-20, got {mpmath.nstr(sigma, 10)}")
        n_terms = cutoff(roots.alpha, sigma, tol)
        seq = fib_sequence(ell, n_terms)
        real_arg = s.imag == 0
        total = mpmath.mpf(0) if real_arg else mpmath.mpc(0)
        sr = s.real
        for n in range(1, n_terms + 1):
            lf = mpmath.log(seq[n])
            total += mpmath.exp(-(sr if real_arg else s) * lf)
        tail = tail_bound(roots.alpha, sigma, n_terms)
        # each exp/log/add carries a few ulps of relative error
        rounding = n_terms * mpmath.mpf(2) ** (8 - bits) * (abs(total) + 1)
        value = mpmath.mpc(total)
        bound = ErrorBound(tail + rounding, RIGOROUS)
    return EvalResult(
        s=s,
        value=value,
        bound=bound,
        method=DIRECT,
        terms_used=n_terms,
        precision_bits=bits,
    )
