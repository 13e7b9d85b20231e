"""Meromorphic continuation of the zeta function through the binomial/multinomial series.

With A = c_1'/alpha and B_i = c_i'/a_i the function equals

    A^-s * sum_k binom(-s, k) A^-k sum_{k_2+...+k_l = k} multinom * prod B_i^k_i * h

where h = 1/(alpha^(s+k) prod a_i^-k_i - 1) carries every pole.  Optionally the
first ``head_terms - 1`` Fibonacci terms are summed directly; the remainder
then uses h * q^(head_terms - 1) with q = 1/(alpha^(s+k) prod a_i^-k_i), which
has the same poles and residues but a much faster decaying k-series.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Tuple

import mpmath

from .numerics import (
    HEURISTIC,
    DomainError,
    ErrorBound,
    PoleProximityError,
    PrecisionFault,
    default_precision,
    generalized_binomial,
    precision,
)
from .recurrence import fib_sequence
from .roots import RootSet, all_roots
from .zeta_direct import CONTINUATION, EvalResult

DEFAULT_K_MAX = 256
COMPOSITIONS = "compositions"
COLLAPSED = "collapsed"
AUTO = "auto"


class TruncationError(PrecisionFault):
    def __init__(self, k_max: int, last_bound):
        self.k_max = k_max
        self.last_bound = last_bound
        super().__init__(
            f"continuation series not converged after k_max={k_max} terms "
            f"(last term bound {mpmath.nstr(last_bound, 5)})"
        )


def compositions(k: int, parts_count: int) -> Iterator[Tuple[int, ...]]:
    """All (k_2, ..., k_l) >= 0 summing to k, lexicographically ascending."""
    if k < 0 or parts_count < 1:
        raise DomainError("need k >= 0 and parts_count >= 1")
    if parts_count == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in compositions(k - first, parts_count - 1):
            yield (first,) + rest


def composition_count(k: int, parts_count: int) -> int:
    return math.comb(k + parts_count - 1, parts_count - 1)


@lru_cache(maxsize=4096)
def multinomial(parts: Tuple[int, ...]) -> int:
    out, total = 1, 0
    for p in parts:
        total += p
        out *= math.comb(total, p)
    return out


@dataclass(frozen=True)
class TermBreakdown:
    k: int
    binomial_factor: mpmath.mpc
    composition_sum: mpmath.mpc
    term_value: mpmath.mpc
    magnitude_bound: mpmath.mpf
    strategy: str = COMPOSITIONS


def exclusion_radius(precision_bits: int):
    return mpmath.mpf(2) ** -(precision_bits // 4)


def auto_head_terms(roots: RootSet) -> int:
    """Smallest M with c_1' alpha^(M-1) >= 4, so every ratio |e_n|/(c_1' alpha^(n-1)) <= 1/8 for n >= M."""
    with precision(roots.precision_bits):
        m = 1
        while roots.binet[0] * mpmath.power(roots.alpha, m - 1) < 4:
            m += 1
        return m


class _PowerCache:
    """Integer powers of the non-dominant roots and their B_i, by repeated squaring."""

    def __init__(self, roots: RootSet):
        self.roots = roots
        self._inv = {}
        self._b = {}

    def inv(self, i: int, j: int):
        key = (i, j)
        if key not in self._inv:
            self._inv[key] = mpmath.power(self.roots.others[i], -j)
        return self._inv[key]

    def b(self, i: int, j: int):
        key = (i, j)
        if key not in self._b:
            self._b[key] = mpmath.power(self.roots.coeffs[i + 1], j)
        return self._b[key]


def _nearest_pole(s, k: int, parts, roots: RootSet):
    log_alpha = roots.log_alpha
    lsum = mpmath.fsum(kk * lg for kk, lg in zip(parts, roots.logs[1:])) if parts else mpmath.mpf(0)
    lsum = mpmath.mpc(lsum)
    n = int(mpmath.nint((s.imag * log_alpha - lsum.imag) / (2 * mpmath.pi)))
    loc = -k + (2j * mpmath.pi * n + lsum) / log_alpha
    return n, loc, abs(s - loc)


def _composition_sum(s, k: int, roots: RootSet, head_terms: int, cache: _PowerCache, rho):
    ell = roots.ell
    alpha_sk = mpmath.exp((s + k) * roots.log_alpha)
    total = mpmath.mpc(0)
    mag = mpmath.mpf(0)
    near = rho * roots.log_alpha * 2
    for parts in compositions(k, ell - 1):
        d = alpha_sk
        weight = mpmath.mpf(multinomial(parts))
        for i, kk in enumerate(parts):
            if kk:
                d *= cache.inv(i, kk)
                weight *= cache.b(i, kk)
        denom = d - 1
        if abs(denom) < near:
            n, loc, dist = _nearest_pole(s, k, parts, roots)
            if dist < rho:
                raise PoleProximityError(s, k, parts, n, dist)
        h = 1 / denom
        if head_terms > 1:
            h *= mpmath.power(d, 1 - head_terms)
        contrib = weight * h
        total += contrib
        mag += abs(contrib)
    return total, mag


def _collapsed_sum(s, k: int, roots: RootSet, head_terms: int, bits: int):
    """Same quantity as _composition_sum via sum_{n>=M} alpha^-(s+k)n (sum_i B_i a_i^n)^k.

    Valid when Re(s) + k > 0, where every |q| < 1 and the geometric series converge.
    """
    sigma = s.real
    others = roots.others
    bs = roots.coeffs[1:]
    r = max(abs(z) for z in others)
    ratio = mpmath.power(roots.alpha, -(sigma + k)) * mpmath.power(r, k)
    if not ratio < 1:
        raise DomainError("collapsed evaluation needs Re(s) + k > 0")
    sum_b = mpmath.fsum(abs(b) for b in bs)
    step = mpmath.exp(-(s + k) * roots.log_alpha)
    n = head_terms
    lead = mpmath.power(step, n)
    pows = [mpmath.power(z, n) for z in others]
    total = mpmath.mpc(0)
    mag = mpmath.mpf(0)
    first = None
    eps = mpmath.mpf(2) ** -(bits + 10)
    while True:
        inner = mpmath.fsum(b * p for b, p in zip(bs, pows))
        contrib = lead * mpmath.power(inner, k)
        total += contrib
        mag += abs(contrib)
        envelope = abs(lead) * mpmath.power(sum_b * mpmath.power(r, n), k)
        if first is None:
            first = envelope
        # geometric tail of the envelope beyond n
        tail = envelope * ratio / (1 - ratio)
        if tail <= eps * (first + mag):
            return total, mag + tail
        n += 1
        lead *= step
        pows = [p * z for p, z in zip(pows, others)]


def _choose_strategy(s, k: int, roots: RootSet, bits: int) -> str:
    if s.real + k < 1:
        return COMPOSITIONS
    count = composition_count(k, roots.ell - 1)
    ratio_log = (s.real + k) * float(roots.log_alpha) - k * float(mpmath.log(max(abs(z) for z in roots.others)))
    est_n = (bits + 10) * math.log(2) / max(ratio_log, 1e-3) + 2
    return COLLAPSED if count * roots.ell > 4 * est_n else COMPOSITIONS


def continuation_term(
    ell: int,
    s,
    k: int,
    roots: RootSet,
    head_terms: int = 1,
    strategy: str = COMPOSITIONS,
    _cache: Optional[_PowerCache] = None,
) -> TermBreakdown:
    """The k-th bracketed term of the continuation series (without the A^-s prefactor)."""
    if roots.ell != ell:
        raise DomainError("roots computed for a different ell")
    if k < 0 or head_terms < 1:
        raise DomainError("need k >= 0 and head_terms >= 1")
    bits = roots.precision_bits
    with precision(bits):
        s = mpmath.mpc(s)
        if strategy == AUTO:
            strategy = _choose_strategy(s, k, roots, bits)
        binom = mpmath.mpc(generalized_binomial(s, k))
        a_pow = mpmath.power(roots.coeffs[0], -k)
        if strategy == COMPOSITIONS:
            comp, mag = _composition_sum(
                s, k, roots, head_terms, _cache or _PowerCache(roots), exclusion_radius(bits)
            )
        elif strategy == COLLAPSED:
            comp, mag = _collapsed_sum(s, k, roots, head_terms, bits)
        else:
            raise DomainError(f"unknown strategy {strategy!r}")
        scale = binom * a_pow
        return TermBreakdown(
            k=k,
            binomial_factor=binom,
            composition_sum=comp,
            term_value=scale * comp,
            magnitude_bound=abs(scale) * mag,
            strategy=strategy,
        )


def _decay_ratio(bounds):
    """Most pessimistic of the last two successive ratios of term bounds."""
    ratios = []
    for a, b in zip(bounds[-3:-1], bounds[-2:]):
        if b == 0:
            ratios.append(mpmath.mpf(0))
        elif a == 0:
            ratios.append(mpmath.mpf(1))
        else:
            ratios.append(b / a)
    return max(ratios)


def zeta_continued(
    ell: int,
    s,
    tol=mpmath.mpf("1e-30"),
    k_max: int = DEFAULT_K_MAX,
    precision_bits: Optional[int] = None,
    roots: Optional[RootSet] = None,
    head_terms: Optional[int] = None,
    strategy: str = AUTO,
) -> EvalResult:
    """Evaluate the zeta function anywhere off the candidate poles.

    ``head_terms=1`` sums the series exactly as written; ``None`` picks the
    smallest head that makes the k-series contract by a factor 8 per term.
    """
    bits = roots.precision_bits if roots is not None else (precision_bits or default_precision())
    roots = roots or all_roots(ell, bits)
    if head_terms is None:
        head_terms = auto_head_terms(roots)
    if head_terms < 1:
        raise DomainError("head_terms must be >= 1")
    with precision(bits):
        s = mpmath.mpc(s)
        tol = mpmath.mpf(tol)
        if not tol > 0:
            raise DomainError("tol must be positive")
        head = mpmath.mpc(0)
        if head_terms > 1:
            seq = fib_sequence(ell, head_terms - 1)
            for n in range(1, head_terms):
                head += mpmath.exp(-s * mpmath.log(seq[n]))
        prefactor = mpmath.exp(-s * mpmath.log(roots.coeffs[0]))
        pre_abs = abs(prefactor)
        cache = _PowerCache(roots)
        total = mpmath.mpc(0)
        bounds = []
        mag_sum = mpmath.mpf(0)
        small_run = 0
        for k in range(k_max + 1):
            term = continuation_term(ell, s, k, roots, head_terms, strategy, _cache=cache)
            total += term.term_value
            b = pre_abs * term.magnitude_bound
            bounds.append(b)
            mag_sum += b
            small_run = small_run + 1 if b < tol / 8 else 0
            if small_run >= 3:
                break
        else:
            raise TruncationError(k_max, bounds[-1])
        ratio = _decay_ratio(bounds)
        last = bounds[-1]
        if last == 0:
            tail = mpmath.mpf(0)
        elif ratio < 1:
            tail = 2 * last * ratio / (1 - ratio)
        else:
            tail = last * (k_max - len(bounds) + 2)
        rounding = mpmath.mpf(2) ** (8 - bits) * (mag_sum + abs(head)) * len(bounds)
        value = head + prefactor * total
        bound = ErrorBound(tail + rounding, HEURISTIC)
    return EvalResult(
        s=s,
        value=value,
        bound=bound,
        method=CONTINUATION,
        terms_used=len(bounds),
        precision_bits=bits,
        diagnostics={"head_terms": head_terms, "ratio": ratio, "k_last": len(bounds) - 1},
    )
