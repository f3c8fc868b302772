"""Extremal search over support sizes: envelopes and their quantiles.

The worst-case mid-tail at threshold t over nonnegative unit-norm weight
vectors of length n is attained by equal-weight vectors supported on k
coordinates, so the search reduces to

    max over k of  mid_tail(k, t),

finitely for k <= n and, for the universal envelope, over all k with a
certified truncation: once

    gaussian_upper_tail(t) + C_BE / sqrt(K) + margin  <  best so far

every remaining support size K' >= K is dominated, because the mid-tail
of a standardized k-term +-1 sum sits within the Berry-Esseen distance
C_BE / sqrt(k) of the normal tail (C_BE = 0.4748 for unit-variance
symmetric +-1 summands).  When the bound never closes before the hard
cap, the result honestly carries certificate ``hard_cap_hit`` plus a
warning instead of a silent truncation.

The k-scan uses a Pascal-triangle recurrence across k, so each support
size costs O(1) big-integer operations:

    sum_{j<=J} C(k+1, j) = 2 sum_{j<=J} C(k, j) - C(k, J)

with the strict-tail boundary index J nondecreasing in k (checked by
exact integer comparison, never by floating floor).  The direct per-k
sums in ``binomdist`` provide an independent route; the test suite
cross-checks the two.

Everything is deterministic and exact: results are bit-identical no
matter how the k-range might be partitioned across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from . import binomdist
from .errors import DomainError
from .exactnum import (
    DYADIC_ZERO,
    Dyadic,
    LatticeValue,
    Ordering,
    Threshold,
    dyadic_to_float,
)
from .normal import gaussian_upper_tail

BERRY_ESSEEN_CLOSED = "berry_esseen_closed"
HARD_CAP_HIT = "hard_cap_hit"


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for the unbounded support-size search.

    ``be_constant`` is the Berry-Esseen constant for unit-variance
    symmetric +-1 summands; ``safety_margin`` is added on the bound side
    of the comparison so float rounding can never fake a closure.
    """

    k_cap: int = 4096
    be_constant: float = 0.4748
    safety_margin: float = 1e-9
    grid_refine_limit: int = 8
    grid_atom_target: int = 30_000

    def __post_init__(self) -> None:
        if self.k_cap < 1:
            raise DomainError("k_cap must be >= 1")


@dataclass(frozen=True)
class EnvelopeResult:
    """Maximum mid-tail over the searched support sizes.

    ``argmax_k`` lists every tie; ``value`` equals mid_tail(k, t) for each
    of them and strictly exceeds it for every other searched k.
    """

    t: Threshold
    value: Dyadic
    argmax_k: tuple[int, ...]
    k_searched: int
    certificate: str
    warning: str | None = None


@dataclass(frozen=True)
class QuantileResult:
    """Smallest threshold where the envelope drops to alpha or below.

    Sandwich invariant: value_at <= alpha < left_limit, where left_limit
    is the envelope value just left of t_star (the largest weak tail at
    t_star) and witness_k_left attains it.  ``capped`` flags that some
    accept decision relied on a hard-capped search that the Berry-Esseen
    ceiling could not independently certify.
    """

    alpha: Fraction
    t_star: Threshold
    value_at: Dyadic
    left_limit: Dyadic
    witness_k_left: int
    capped: bool = False


def k_min(t: Threshold) -> int:
    """Smallest support size whose lattice reaches t: max(1, ceil(t^2)).

    Below it the tail is identically zero; at sqrt(k) == t the top atom
    still contributes half its mass to the mid-tail.
    """
    if t.sign < 0:
        raise DomainError("threshold must be >= 0")
    p, q = t.sq.numerator, t.sq.denominator
    return max(1, (p + q - 1) // q)


# ---------------------------------------------------------------------------
# Incremental scan engine
# ---------------------------------------------------------------------------

def _tail_scan(t: Threshold, k_from: int, k_to: int) -> Iterator[tuple[int, int, int]]:
    """Yield (k, strict_count, atom_coeff) for k = k_from..k_to, t >= 0.

    strict_count = sum of C(k, j) over j = 0..J where the j-th value from
    the top, a = k - 2j, satisfies a/sqrt(k) > t; atom_coeff = C(k, J+1)
    when a = k - 2(J+1) lands exactly on t, else 0.  So

        strict tail = strict_count / 2^k
        mid tail    = (2*strict_count + atom_coeff) / 2^(k+1)
        weak tail   = (strict_count + atom_coeff) / 2^k
    """
    p, q = t.sq.numerator, t.sq.denominator
    k = k_from
    J = -1          # last qualifying index from the top
    S = 0           # sum C(k, j), j = 0..J
    CJ1 = 1         # C(k, J+1)

    def qualifies(a: int, kk: int) -> bool:
        return a > 0 and a * a * q > p * kk

    while qualifies(k - 2 * (J + 1), k):
        J += 1
        S += CJ1
        CJ1 = CJ1 * (k - J) // (J + 1)

    while True:
        a = k - 2 * (J + 1)
        atom_c = CJ1 if a >= 0 and a * a * q == p * k else 0
        yield k, S, atom_c
        if k >= k_to:
            return
        # Pascal step to k+1 at fixed J, then grow J (never shrinks).
        CJ = CJ1 * (J + 1) // (k - J) if J >= 0 else 0
        S = 2 * S - CJ
        CJ1 = CJ1 * (k + 1) // (k - J)
        k += 1
        while qualifies(k - 2 * (J + 1), k):
            J += 1
            S += CJ1
            CJ1 = CJ1 * (k - J) // (J + 1)


def _cmp_raw(n1: int, e1: int, n2: int, e2: int) -> int:
    """Sign of n1/2^e1 - n2/2^e2 by shifting to the common exponent."""
    if e1 >= e2:
        diff = n1 - (n2 << (e1 - e2))
    else:
        diff = (n1 << (e2 - e1)) - n2
    return (diff > 0) - (diff < 0)


def _max_scan(
    t: Threshold,
    k_from: int,
    k_to: int,
    numerator: Callable[[int, int, int], tuple[int, int]],
    stop_bound: Callable[[int], float] | None,
) -> tuple[Dyadic, tuple[int, ...], int, str]:
    """Maximize numerator(k, strict, atom)/2^exp over the k range.

    ``stop_bound(k_next)`` (when given) returns a float upper bound valid
    for every remaining support size; the scan closes once it falls below
    the running best.  Returns (value, argmax ties, last k, certificate).
    """
    best_num, best_exp = -1, 0
    best_float = 0.0
    argmax: list[int] = []
    certificate = HARD_CAP_HIT if stop_bound is not None else BERRY_ESSEEN_CLOSED
    k_last = k_from - 1
    for k, strict, atom_c in _tail_scan(t, k_from, k_to):
        num, exp = numerator(k, strict, atom_c)
        c = 1 if best_num < 0 else _cmp_raw(num, exp, best_num, best_exp)
        if c > 0:
            best_num, best_exp = num, exp
            best_float = dyadic_to_float(num, exp)
            argmax = [k]
        elif c == 0:
            argmax.append(k)
        k_last = k
        if stop_bound is not None and stop_bound(k + 1) < best_float:
            certificate = BERRY_ESSEEN_CLOSED
            break
    return Dyadic(best_num, best_exp), tuple(argmax), k_last, certificate


def _mid_numerator(k: int, strict: int, atom_c: int) -> tuple[int, int]:
    return 2 * strict + atom_c, k + 1


def _weak_numerator(k: int, strict: int, atom_c: int) -> tuple[int, int]:
    return strict + atom_c, k


def _be_stop(t: Threshold, policy: TruncationPolicy) -> Callable[[int], float]:
    phi = gaussian_upper_tail(float(t))
    c_be = policy.be_constant
    margin = policy.safety_margin
    return lambda k: phi + c_be / math.sqrt(k) + margin


# ---------------------------------------------------------------------------
# Envelopes
# ---------------------------------------------------------------------------

def envelope_mid_tail(n: int, t: Threshold) -> EnvelopeResult:
    """Exact maximum of mid_tail(k, t) over support sizes k = 1..n.

    Exhaustive, so the certificate is trivially closed.  When every k is
    below the cutoff ceil(t^2) the value is zero and all k tie.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if t.sign < 0:
        raise DomainError("threshold must be >= 0")
    k0 = k_min(t)
    if k0 > n:
        return EnvelopeResult(t, DYADIC_ZERO, tuple(range(1, n + 1)), n,
                              BERRY_ESSEEN_CLOSED)
    value, argmax, k_last, _ = _max_scan(t, k0, n, _mid_numerator, None)
    return EnvelopeResult(t, value, argmax, k_last, BERRY_ESSEEN_CLOSED)


def universal_envelope(t: Threshold, policy: TruncationPolicy | None = None) -> EnvelopeResult:
    """Supremum of mid_tail(k, t) over all k >= 1, with a stopping certificate.

    The scan starts at ceil(t^2) and closes via the Berry-Esseen bound;
    if the bound cannot close before ``policy.k_cap`` the result carries
    certificate ``hard_cap_hit`` and an explicit warning (not an error).
    """
    policy = policy or TruncationPolicy()
    if t.sign <= 0:
        raise DomainError("universal envelope requires t > 0")
    k0 = k_min(t)
    if k0 > policy.k_cap:
        raise DomainError(f"k_cap={policy.k_cap} is below the minimum support "
                          f"size {k0} = ceil(t^2)")
    value, argmax, k_last, certificate = _max_scan(
        t, k0, policy.k_cap, _mid_numerator, _be_stop(t, policy))
    warning = None
    if certificate == HARD_CAP_HIT:
        warning = (f"search stopped at the hard cap k={policy.k_cap} before the "
                   "Berry-Esseen bound closed; larger support sizes are unverified")
    return EnvelopeResult(t, value, argmax, k_last, certificate, warning)


def _weak_max(t: Threshold, n: int | None, policy: TruncationPolicy) -> tuple[Dyadic, int, str]:
    """Largest weak tail over support sizes (the envelope's left limit at t).

    Finite when n is given, Berry-Esseen truncated otherwise.  Returns
    (value, smallest witness k, certificate).
    """
    k0 = k_min(t)
    if n is not None:
        if k0 > n:
            return DYADIC_ZERO, 1, BERRY_ESSEEN_CLOSED
        value, argmax, _, cert = _max_scan(t, k0, n, _weak_numerator, None)
    else:
        value, argmax, _, cert = _max_scan(
            t, k0, policy.k_cap, _weak_numerator, _be_stop(t, policy))
    return value, argmax[0], cert


# ---------------------------------------------------------------------------
# Atom grids
# ---------------------------------------------------------------------------

def _atoms_between(k_max: int, lo: Threshold, hi: Threshold,
                   include_lo: bool) -> list[LatticeValue]:
    """Sorted deduplicated lattice atoms of k <= k_max in (lo, hi] or [lo, hi].

    Duplicated reals keep the representative with the smallest k.
    """
    reps: dict[Fraction, LatticeValue] = {}
    for k in range(1, k_max + 1):
        m_lo = binomdist._boundary(k, lo, strict=not include_lo)
        m_hi = binomdist._boundary(k, hi, strict=True) - 1
        for m in range(m_lo, m_hi + 1):
            v = LatticeValue(2 * m - k, k)
            key = v.signed_square
            if key not in reps:
                reps[key] = v
    return [reps[key] for key in sorted(reps)]


def atom_grid(k_max: int, lo: Threshold, hi: Threshold) -> tuple[LatticeValue, ...]:
    """All atoms of the equal-weight sums with k <= k_max inside [lo, hi]."""
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    if lo > hi:
        raise DomainError("lo must be <= hi")
    return tuple(_atoms_between(k_max, lo, hi, include_lo=True))


# ---------------------------------------------------------------------------
# Quantiles
# ---------------------------------------------------------------------------

def _require_alpha(alpha: Fraction) -> None:
    if not 0 < alpha < Fraction(1, 2):
        raise DomainError("alpha must lie in (0, 1/2)")


class _UniversalEvaluator:
    """Memoized envelope evaluations plus certification bookkeeping."""

    def __init__(self, alpha: Fraction, policy: TruncationPolicy):
        self.alpha = alpha
        self.policy = policy
        self.capped = False
        self._memo: dict[Fraction, EnvelopeResult] = {}

    def envelope(self, t: Threshold) -> EnvelopeResult:
        key = t.signed_square
        if key not in self._memo:
            self._memo[key] = universal_envelope(t, self.policy)
        return self._memo[key]

    def le_alpha(self, t: Threshold) -> bool:
        env = self.envelope(t)
        if env.value.compare_to_ratio(self.alpha) is Ordering.GT:
            return False  # computed value is a lower bound: certain
        if env.certificate == HARD_CAP_HIT:
            ceiling = (gaussian_upper_tail(float(t))
                       + self.policy.be_constant / math.sqrt(self.policy.k_cap)
                       + self.policy.safety_margin)
            if ceiling > float(self.alpha):
                self.capped = True
        return True


def quantile_universal(alpha: Fraction,
                       policy: TruncationPolicy | None = None) -> QuantileResult:
    """Smallest t >= 0 with universal envelope value <= alpha.

    The envelope is nonincreasing and piecewise constant with breakpoints
    on the lattice-atom grid, so the answer is the first atom at which it
    drops to alpha or below.  The scanned grid covers every support size
    that can carry the crossing: k must satisfy weak_tail(k, t) > alpha
    somewhere in the bracket, which forces
    gaussian_upper_tail(lo) + C_BE/sqrt(k) > alpha, and k never exceeds
    the policy cap (the computed envelope has no other breakpoints).
    """
    policy = policy or TruncationPolicy()
    _require_alpha(alpha)
    ev = _UniversalEvaluator(alpha, policy)

    # The envelope equals 1/2 on [0, 1), so the walk starts at 1.
    hi_int = None
    for j in range(1, 65):
        if ev.le_alpha(Threshold.from_rational(Fraction(j))):
            hi_int = j
            break
    if hi_int is None:
        raise DomainError("alpha too small: no integer threshold up to 64 "
                          "brings the envelope below it")

    lo = Fraction(hi_int - 1)
    hi = Fraction(hi_int)
    for _ in range(policy.grid_refine_limit):
        if _grid_size_estimate(_grid_k_limit(lo, alpha, policy), lo, hi) \
                <= policy.grid_atom_target:
            break
        mid = (lo + hi) / 2
        if ev.le_alpha(Threshold.from_rational(mid)):
            hi = mid
        else:
            lo = mid

    k_grid = _grid_k_limit(lo, alpha, policy)
    lo_thr = Threshold.from_rational(lo) if lo > 0 else Threshold.zero()
    hi_thr = Threshold.from_rational(hi)
    for attempt in range(2):
        atoms = _atoms_between(k_grid, lo_thr, hi_thr, include_lo=False)
        found = _first_atom_le(atoms, ev.le_alpha)
        if found is not None:
            t_star = found.to_threshold()
            left_limit, witness, _ = _weak_max(t_star, None, policy)
            if left_limit.compare_to_ratio(alpha) is Ordering.GT:
                value_at = ev.envelope(t_star).value
                return QuantileResult(alpha, t_star, value_at, left_limit,
                                      witness, ev.capped)
        if k_grid == policy.k_cap:
            break
        k_grid = policy.k_cap  # widen once: cover every computable breakpoint
    raise DomainError("the envelope passes below alpha without attaining it at "
                      "an atom; no smallest threshold exists for this alpha")


def quantile_finite(n: int, alpha: Fraction) -> QuantileResult:
    """Smallest t >= 0 with the n-coordinate envelope at or below alpha."""
    _require_alpha(alpha)
    if n < 1:
        raise DomainError("n must be >= 1")
    if alpha < Fraction(1, 1 << (n + 1)):
        raise DomainError(f"alpha below 2^-{n + 1}: the n={n} envelope only "
                          "falls that low past its largest atom, so no "
                          "smallest threshold exists")

    def le_alpha(t: Threshold) -> bool:
        value = envelope_mid_tail(n, t).value
        return value.compare_to_ratio(alpha) is not Ordering.GT

    hi_int = None
    for j in range(1, math.isqrt(n) + 2):
        if le_alpha(Threshold.from_rational(Fraction(j))):
            hi_int = j
            break
    if hi_int is None:  # pragma: no cover - the attainability check rules this out
        raise AssertionError("integer walk failed despite attainable alpha")

    lo_thr = (Threshold.from_rational(Fraction(hi_int - 1)) if hi_int > 1
              else Threshold.zero())
    hi_thr = Threshold.from_rational(Fraction(hi_int))
    atoms = _atoms_between(n, lo_thr, hi_thr, include_lo=False)
    found = _first_atom_le(atoms, le_alpha)
    if found is None:  # pragma: no cover - crossing atom always in a full grid
        raise AssertionError("no qualifying atom inside the bracket")
    t_star = found.to_threshold()
    left_limit, witness, _ = _weak_max(t_star, n, TruncationPolicy())
    if left_limit.compare_to_ratio(alpha) is not Ordering.GT:
        raise DomainError("the envelope passes below alpha on an open interval; "
                          "no smallest threshold exists for this alpha")
    value_at = envelope_mid_tail(n, t_star).value
    return QuantileResult(alpha, t_star, value_at, left_limit, witness)


def _first_atom_le(atoms: list[LatticeValue],
                   le_alpha: Callable[[Threshold], bool]) -> LatticeValue | None:
    """Leftmost atom whose envelope value is <= alpha (monotone predicate)."""
    if not atoms:
        return None
    cache: dict[int, bool] = {}

    def pred(i: int) -> bool:
        if i not in cache:
            cache[i] = le_alpha(atoms[i].to_threshold())
        return cache[i]

    lo_i, hi_i = 0, len(atoms)
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if pred(mid):
            hi_i = mid
        else:
            lo_i = mid + 1
    return atoms[lo_i] if lo_i < len(atoms) else None


def _grid_k_limit(lo: Fraction, alpha: Fraction, policy: TruncationPolicy) -> int:
    """Largest support size whose weak tail can exceed alpha right of lo."""
    gap = float(alpha) - gaussian_upper_tail(math.sqrt(lo)) - policy.safety_margin
    if gap <= 0.0:
        return policy.k_cap
    k_be = math.ceil((policy.be_constant / gap) ** 2)
    return max(1, min(k_be, policy.k_cap))


def _grid_size_estimate(k_limit: int, lo: Fraction, hi: Fraction) -> float:
    width = float(hi - lo)
    return width / 2 * (2 / 3) * k_limit ** 1.5 + k_limit
