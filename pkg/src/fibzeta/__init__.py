"""High-precision toolkit for the l-generalized Fibonacci zeta function sum_n F_n^(-s)."""
from .continuation import compositions, continuation_term, zeta_continued
from .numerics import (
    DEFAULT_PRECISION,
    DomainError,
    ErrorBound,
    FibZetaError,
    PoleProximityError,
    PrecisionFault,
    generalized_binomial,
    precision,
    rational_reconstruct,
)
from .poles import (
    PoleCandidate,
    PoleGroup,
    Window,
    corollary2_poles,
    enumerate_poles,
    pole_location,
    residue_contribution,
)
from .recurrence import FibSequence, binet_value, bounds_check, fib_sequence, rnd_check
from .roots import CharPoly, RootSet, all_roots, binet_coefficients, char_poly, dominant_root
from .special_values import RationalValue, is_negative_integer_pole, zeta_negative
from .zeta_direct import EvalResult, zeta_direct

__all__ = [name for name in dir() if not name.startswith("_")]
