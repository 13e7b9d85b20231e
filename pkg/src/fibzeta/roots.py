"""Characteristic polynomial x^l - x^(l-1) - ... - 1 and its roots."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import mpmath
from mpmath import mp

from .numerics import DomainError, PrecisionFault, check_precision, precision

GUARD_BITS = 32


@dataclass(frozen=True)
class CharPoly:
    ell: int
    coefficients: Tuple[int, ...]  # highest degree first

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def derivative(self, x):
        acc = 0
        n = self.degree
        for i, c in enumerate(self.coefficients[:-1]):
            acc = acc * x + c * (n - i)
        return acc


@dataclass(frozen=True)
class RootSet:
    """Roots of the characteristic polynomial at a fixed precision.

    ``roots[0]`` is the dominant root alpha (an mpf); ``roots[1:]`` are the
    remaining roots as mpc, ordered by descending modulus then ascending
    principal argument.  ``binet[i]`` is (a_i - 1)/(2 + (l+1)(a_i - 2)) and
    ``coeffs[i]`` is ``binet[i] / a_i``.
    """

    ell: int
    precision_bits: int
    alpha: mpmath.mpf
    others: Tuple[mpmath.mpc, ...]
    binet: Tuple
    coeffs: Tuple
    logs: Tuple
    residual_bound: mpmath.mpf

    @property
    def roots(self) -> tuple:
        return (self.alpha,) + self.others

    @property
    def log_alpha(self) -> mpmath.mpf:
        return self.logs[0]

    def permuted(self, order) -> "RootSet":
        """Copy with the non-dominant roots relabelled by ``order`` (a permutation of 0..l-2)."""
        order = list(order)
        if sorted(order) != list(range(self.ell - 1)):
            raise DomainError("order must permute the non-dominant roots")
        pick = lambda seq: (seq[0],) + tuple(seq[1 + j] for j in order)
        return RootSet(
            ell=self.ell,
            precision_bits=self.precision_bits,
            alpha=self.alpha,
            others=tuple(self.others[j] for j in order),
            binet=pick(self.binet),
            coeffs=pick(self.coeffs),
            logs=pick(self.logs),
            residual_bound=self.residual_bound,
        )


def _check_ell(ell: int) -> None:
    if int(ell) != ell or ell < 2:
        raise DomainError(f"ell must be an integer >= 2, got {ell!r}")


def char_poly(ell: int) -> CharPoly:
    _check_ell(ell)
    return CharPoly(ell=ell, coefficients=(1,) + (-1,) * ell)


def iteration_cap(precision_bits: int) -> int:
    return max(64, (64 * precision_bits) // 53)


def _dominant_root_raw(ell: int, bits: int) -> mpmath.mpf:
    poly = char_poly(ell)
    with precision(bits):
        lo = 2 * (1 - mpmath.mpf(2) ** -ell)
        hi = mpmath.mpf(2)
        # bisect to ~40 correct bits; phi(lo) < 0 < phi(hi) = 1
        for _ in range(48):
            mid = (lo + hi) / 2
            if poly(mid) < 0:
                lo = mid
            else:
                hi = mid
        x = (lo + hi) / 2
        tol = mpmath.mpf(2) ** -(bits - 4)
        for _ in range(iteration_cap(bits)):
            step = poly(x) / poly.derivative(x)
            x -= step
            if abs(step) <= tol:
                return x
    raise PrecisionFault(f"Newton iteration for the dominant root did not converge (ell={ell})")


def dominant_root(ell: int, precision_bits: int = 256) -> mpmath.mpf:
    """Real root of the characteristic polynomial in (2(1 - 2^-l), 2)."""
    _check_ell(ell)
    check_precision(precision_bits)
    x = _dominant_root_raw(ell, precision_bits + GUARD_BITS)
    with precision(precision_bits):
        return +x


def _deflate(coeffs, root):
    out = []
    acc = 0
    for c in coeffs[:-1]:
        acc = acc * root + c
        out.append(acc)
    return out


def _durand_kerner(coeffs, bits: int):
    n = len(coeffs) - 1
    lead = coeffs[0]
    monic = [c / lead for c in coeffs]

    def p(x):
        acc = 0
        for c in monic:
            acc = acc * x + c
        return acc

    # radius 0.9 seeds with a fixed angular offset to avoid symmetric stalls
    zs = [
        mpmath.mpf("0.9") * mpmath.expjpi(mpmath.mpf(2 * j) / n + mpmath.mpf("0.137"))
        for j in range(n)
    ]
    tol = mpmath.mpf(2) ** -(bits - 8)
    for _ in range(iteration_cap(bits)):
        biggest = 0
        new = []
        for i, z in enumerate(zs):
            denom = 1
            for j, w in enumerate(zs):
                if j != i:
                    denom *= z - (new[j] if j < i else w)
            step = p(z) / denom
            new.append(z - step)
            biggest = max(biggest, abs(step))
        zs = new
        if biggest <= tol:
            return zs
    raise PrecisionFault("Durand-Kerner iteration did not converge")


def _newton_polish(poly: CharPoly, z, bits: int, steps: int = 3):
    for _ in range(steps):
        d = poly.derivative(z)
        if d == 0:
            break
        z = z - poly(z) / d
    return z


def _pair_conjugates(zs, bits: int):
    """Force exact conjugate symmetry; near-real values become exactly real."""
    real_tol = mpmath.mpf(2) ** -(bits // 2)
    reals, upper, lower = [], [], []
    for z in zs:
        if abs(z.imag) <= real_tol:
            reals.append(mpmath.mpc(z.real, 0))
        elif z.imag > 0:
            upper.append(z)
        else:
            lower.append(z)
    if len(upper) != len(lower):
        raise PrecisionFault("non-real roots do not pair into conjugates")
    out = list(reals)
    remaining = list(lower)
    for z in upper:
        j = min(range(len(remaining)), key=lambda i: abs(remaining[i] - mpmath.conj(z)))
        w = remaining.pop(j)
        avg = (z + mpmath.conj(w)) / 2
        out.append(avg)
        out.append(mpmath.conj(avg))
    return out


def binet_coefficients(roots) -> list:
    """(a_i - 1)/(2 + (l+1)(a_i - 2)) for each root (dominant first)."""
    if isinstance(roots, RootSet):
        ell, bits, values = roots.ell, roots.precision_bits, roots.roots
    else:
        values = list(roots)
        ell, bits = len(values), mp.prec
    with precision(bits):
        floor = mpmath.mpf(2) ** -(bits // 2)
        out = []
        for a in values:
            denom = 2 + (ell + 1) * (a - 2)
            if abs(denom) < floor:
                raise PrecisionFault("vanishing Binet denominator")
            out.append((a - 1) / denom)
    return out


def _sort_key(z):
    return (-abs(z), mpmath.arg(z))


def _compute_roots(ell: int, precision_bits: int) -> RootSet:
    poly = char_poly(ell)
    work = precision_bits + GUARD_BITS
    alpha_hi = _dominant_root_raw(ell, work)
    with precision(work):
        rest = []
        if ell > 1:
            deflated = _deflate([mpmath.mpf(c) for c in poly.coefficients], alpha_hi)
            if len(deflated) == 2:
                rest = [mpmath.mpc(-deflated[1] / deflated[0])]
            else:
                rest = [mpmath.mpc(z) for z in _durand_kerner(deflated, work)]
            rest = [_newton_polish(poly, z, work) for z in rest]
            rest = _pair_conjugates(rest, precision_bits)
    with precision(precision_bits):
        alpha = +alpha_hi
        others = [mpmath.mpc(+z.real, +z.imag) for z in rest]
        others.sort(key=_sort_key)
        for z in others:
            if not abs(z) < 1:
                raise PrecisionFault("non-dominant root outside the unit disk")
        values = [alpha] + others
        binet = binet_coefficients(values)
        coeffs = [c / a for c, a in zip(binet, values)]
        logs = [mpmath.log(alpha)] + [mpmath.log(z) for z in others]
    with precision(work):
        residual = max(abs(poly(z)) for z in values)
    with precision(precision_bits):
        residual_bound = +residual
    lo = 2 * (1 - mpmath.mpf(2) ** -ell)
    if not lo < alpha < 2:
        raise PrecisionFault("dominant root escaped its bracket")
    return RootSet(
        ell=ell,
        precision_bits=precision_bits,
        alpha=alpha,
        others=tuple(others),
        binet=tuple(binet),
        coeffs=tuple(coeffs),
        logs=tuple(logs),
        residual_bound=residual_bound,
    )


@lru_cache(maxsize=128)
def all_roots(ell: int, precision_bits: int = 256) -> RootSet:
    """Dominant root plus the remaining l-1 roots, Binet coefficients and principal logs."""
    _check_ell(ell)
    check_precision(precision_bits)
    return _compute_roots(int(ell), int(precision_bits))
