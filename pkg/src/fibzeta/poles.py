"""Candidate pole lattice, per-tuple residues, and aggregation of coincident candidates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import mpmath

from .continuation import compositions, multinomial
from .numerics import DomainError, generalized_binomial, precision
from .roots import RootSet


@dataclass
class PoleCandidate:
    k: int
    parts: Tuple[int, ...]
    branch_n: int
    location: mpmath.mpc
    residue: Optional[mpmath.mpc] = None

    @property
    def index(self) -> tuple:
        return (self.k,) + tuple(self.parts) + (self.branch_n,)


@dataclass
class PoleGroup:
    location: mpmath.mpc
    total_residue: mpmath.mpc
    contributors: List[PoleCandidate] = field(default_factory=list)
    genuine: bool = False

    @property
    def multiple(self) -> bool:
        return len(self.contributors) > 1


@dataclass(frozen=True)
class Window:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        vals = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(mpmath.isfinite(v) for v in vals):
            raise DomainError("window must be bounded")
        if self.re_min > self.re_max or self.im_min > self.im_max:
            raise DomainError("window bounds are reversed")

    def contains(self, z, pad=0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )


def grouping_tolerance(bits: int):
    return mpmath.mpf(2) ** -(bits // 2)


def residue_floor(bits: int):
    return mpmath.mpf(2) ** -(bits // 3)


def _check_parts(ell: int, k: int, parts) -> Tuple[int, ...]:
    parts = tuple(int(p) for p in parts)
    if len(parts) != ell - 1 or any(p < 0 for p in parts):
        raise DomainError(f"parts must be {ell - 1} non-negative integers")
    if sum(parts) != k:
        raise DomainError(f"parts sum to {sum(parts)}, expected k={k}")
    return parts


def _log_sum(parts, roots: RootSet):
    return mpmath.mpc(mpmath.fsum(kk * lg for kk, lg in zip(parts, roots.logs[1:]) if kk))


def pole_location(ell: int, k: int, parts, branch_n: int, roots: RootSet):
    """-k + (2 pi i n + sum_i k_i log a_i)/log alpha with principal logarithms."""
    parts = _check_parts(ell, k, parts)
    with precision(roots.precision_bits):
        return -k + (2j * mpmath.pi * branch_n + _log_sum(parts, roots)) / roots.log_alpha


def residue_contribution(ell: int, cand: PoleCandidate, roots: RootSet):
    """Residue of the (k, parts) series term at ``cand.location``; also stored on ``cand``."""
    with precision(roots.precision_bits):
        s0 = mpmath.mpc(cand.location)
        a = roots.coeffs[0]
        value = mpmath.exp(-s0 * mpmath.log(a))
        value *= generalized_binomial(s0, cand.k)
        value *= mpmath.power(a, -cand.k)
        value *= multinomial(tuple(cand.parts))
        for b, kk in zip(roots.coeffs[1:], cand.parts):
            if kk:
                value *= mpmath.power(b, kk)
        value /= roots.log_alpha
        cand.residue = mpmath.mpc(value)
    return cand.residue


def _real_part_span(roots: RootSet):
    """Extremes of -log|a_i|/log alpha over the non-dominant roots (all positive)."""
    ds = [-mpmath.log(abs(z)) / roots.log_alpha for z in roots.others]
    return min(ds), max(ds)


def enumerate_candidates(ell: int, window: Window, roots: RootSet) -> List[PoleCandidate]:
    bits = roots.precision_bits
    out = []
    with precision(bits):
        d_min, _ = _real_part_span(roots)
        two_pi = 2 * mpmath.pi
        log_alpha = roots.log_alpha
        k = 0
        # largest real part reachable at level k is -k(1 + d_min)
        while -k * (1 + d_min) >= window.re_min - 1:
            for parts in compositions(k, ell - 1):
                lsum = _log_sum(parts, roots)
                re = -k + lsum.real / log_alpha
                if not window.re_min - 1e-9 <= re <= window.re_max + 1e-9:
                    continue
                lo = int(math.floor((window.im_min * log_alpha - lsum.imag) / two_pi)) - 1
                hi = int(math.ceil((window.im_max * log_alpha - lsum.imag) / two_pi)) + 1
                for n in range(lo, hi + 1):
                    loc = -k + (2j * mpmath.pi * n + lsum) / log_alpha
                    if window.contains(loc):
                        cand = PoleCandidate(k=k, parts=parts, branch_n=n, location=loc)
                        residue_contribution(ell, cand, roots)
                        out.append(cand)
            k += 1
    return out


def group_candidates(cands: List[PoleCandidate], bits: int) -> List[PoleGroup]:
    tol = grouping_tolerance(bits)
    floor = residue_floor(bits)
    ordered = sorted(cands, key=lambda c: (c.location.real, c.location.imag, c.index))
    groups: List[PoleGroup] = []
    with precision(bits):
        for cand in ordered:
            home = None
            for g in reversed(groups):
                if cand.location.real - g.location.real > tol:
                    break
                if abs(cand.location - g.location) < tol:
                    home = g
                    break
            if home is None:
                groups.append(PoleGroup(location=cand.location, total_residue=mpmath.mpc(0)))
                home = groups[-1]
            home.contributors.append(cand)
            home.total_residue += cand.residue
        for g in groups:
            g.genuine = bool(abs(g.total_residue) > floor)
    groups.sort(key=lambda g: (g.location.real, g.location.imag))
    return groups


def enumerate_poles(ell: int, window: Window, roots: RootSet) -> List[PoleGroup]:
    """Candidate poles inside ``window``, grouped by location, sorted by (Re, Im)."""
    if roots.ell != ell:
        raise DomainError("roots computed for a different ell")
    return group_candidates(enumerate_candidates(ell, window, roots), roots.precision_bits)


def corollary2_poles(ell: int, k: int, branch_n: int, roots: RootSet):
    """Closed form of the candidate with all parts equal to k/(ell-1)."""
    if k < 0 or k % (ell - 1):
        raise DomainError(f"k={k} is not a non-negative multiple of ell-1={ell - 1}")
    j = k // (ell - 1)
    with precision(roots.precision_bits):
        re = -(k + j)
        if ell % 2 == 0:
            im = mpmath.pi * (2 * branch_n + j) / roots.log_alpha
        else:
            im = 2 * branch_n * mpmath.pi / roots.log_alpha
        return mpmath.mpc(re, im)


def navas_location(k: int, branch_n: int, roots: RootSet):
    """ell = 2 closed form -2k + i pi (2n + k)/log alpha."""
    with precision(roots.precision_bits):
        return mpmath.mpc(-2 * k, mpmath.pi * (2 * branch_n + k) / roots.log_alpha)
