"""Exact distribution of the k-coordinate equal-weight sum and its tails.

With k active coordinates of weight 1/sqrt(k), the sum takes the lattice
values (2m - k)/sqrt(k) with probability C(k, m)/2^k for m = 0..k.  All
tail functionals here are exact dyadics:

    strict_tail(k, t) = P(S > t)
    weak_tail(k, t)   = P(S >= t)
    mid_tail(k, t)    = P(S > t) + P(S = t)/2 = (strict + weak)/2

Boundary atoms are detected by exact comparison (t is an atom iff its
sign matches and t^2 equals (2m-k)^2/k for an m of the right parity);
no floating floor of (k - t*sqrt(k))/2 is ever taken.  Tail sums run
from the top of the lattice downward and stop at the exact boundary.

Pure functions over immutable values; thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .exactnum import (
    Dyadic,
    LatticeValue,
    Ordering,
    Threshold,
    cmp_lattice_threshold,
)


@dataclass(frozen=True)
class AtomTable:
    """Full exact law of the equal-weight sum: increasing atoms, dyadic masses."""

    k: int
    entries: tuple[tuple[LatticeValue, Dyadic], ...]


def _require_k(k: int) -> None:
    if k < 1:
        raise DomainError("k must be >= 1")


def pmf(k: int) -> AtomTable:
    """Atom table of the k-coordinate equal-weight sum; total mass exactly 1."""
    _require_k(k)
    entries = []
    coeff = 1  # C(k, 0)
    for m in range(k + 1):
        entries.append((LatticeValue(2 * m - k, k), Dyadic(coeff, k)))
        coeff = coeff * (k - m) // (m + 1)
    return AtomTable(k, tuple(entries))


def _boundary(k: int, t: Threshold, strict: bool) -> int:
    """Smallest m whose atom (2m-k)/sqrt(k) exceeds (or reaches) t.

    Returns k+1 when no atom qualifies.  Binary search over the increasing
    atom sequence with exact comparisons.
    """
    lo, hi = 0, k + 1
    while lo < hi:
        mid = (lo + hi) // 2
        c = cmp_lattice_threshold(LatticeValue(2 * mid - k, k), t)
        qualifies = c is Ordering.GT or (not strict and c is Ordering.EQ)
        if qualifies:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _top_sum(k: int, m_from: int) -> int:
    """Sum of C(k, m) for m in [m_from, k], accumulated from the top down."""
    if m_from > k:
        return 0
    total = 0
    coeff = 1  # C(k, k)
    for m in range(k, m_from - 1, -1):
        total += coeff
        coeff = coeff * m // (k - m + 1)
    return total


def strict_tail(k: int, t: Threshold) -> Dyadic:
    """P(S_k > t) as an exact dyadic."""
    _require_k(k)
    return Dyadic(_top_sum(k, _boundary(k, t, strict=True)), k)


def weak_tail(k: int, t: Threshold) -> Dyadic:
    """P(S_k >= t) as an exact dyadic."""
    _require_k(k)
    return Dyadic(_top_sum(k, _boundary(k, t, strict=False)), k)


def mid_tail(k: int, t: Threshold) -> Dyadic:
    """P(S_k > t) + P(S_k = t)/2; equals the strict tail off the lattice."""
    _require_k(k)
    return strict_tail(k, t).add(weak_tail(k, t)).halve()


def mid_quantile(k: int, alpha: Fraction) -> Threshold:
    """Largest threshold whose mid-tail stays >= alpha (supremum convention).

    The qualifying set {t : mid_tail(k, t) >= alpha} is a left ray; its
    supremum is always an atom of S_k, namely the largest atom a with
    P(S_k >= a) >= alpha.  The mid-tail AT the returned point may be
    below alpha; the guarantee is mid_tail > = alpha strictly left of it
    and < alpha strictly right of it.
    """
    _require_k(k)
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    num, den = alpha.numerator, alpha.denominator
    scale = den  # compare cum * den >= num * 2^k without fractions
    target = num * (1 << k)
    cum = 0
    coeff = 1  # C(k, k)
    for m in range(k, -1, -1):
        cum += coeff
        if cum * scale >= target:
            return LatticeValue(2 * m - k, k).to_threshold()
        coeff = coeff * m // (k - m + 1)
    # unreachable: cum reaches 2^k and alpha < 1
    raise AssertionError("mid_quantile failed to terminate")
