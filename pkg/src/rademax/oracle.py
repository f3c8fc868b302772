"""Ground-truth brute force over explicit sign patterns.

For a nonnegative rational weight vector w of length n, all 2^n sign
patterns are equally likely, so the law of sum(w_i * e_i) follows from
counting patterns per achieved value.  ``enumerate_dist`` aggregates the
counts by exact convolution over a common-denominator integer lattice
(one coordinate at a time, no floats anywhere); ``fiber`` walks the 2^n
patterns explicitly, and the test suite cross-checks the two routes.

The unit-sphere normalisation is never imposed on stored weights:
comparisons of an atom s against t * ||w|| square both sides, keeping
everything rational.  Scaling w by a positive rational therefore leaves
every normalised quantity unchanged.

``equalisation_probe`` checks the computable first-order content of the
equal-weights optimality argument: pick coordinates i, j with
w_i > w_j > 0, rotate weight between them in the direction that raises
the sum exactly on patterns with e_j = +1 (per-pattern derivative
w_i*e_j - w_j*e_i), and test whether the upper median of these slopes
over the fiber at a positive atom is positive.

Randomised searches use a self-contained 64-bit linear congruential
generator (documented below), so reports are reproducible bit-for-bit
across platforms and Python versions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import binomdist
from .envelope import envelope_mid_tail
from .errors import DomainError, EmptyFiberError, SizeLimitError
from .exactnum import Dyadic, Threshold

MAX_COORDINATES = 24

_SIGN_CHOICES = (1, -1)  # +1 first: patterns enumerate in lexicographic order


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative rational weights, not all zero."""

    w: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.w) < 1:
            raise DomainError("weight vector must have at least one entry")
        if any(x < 0 for x in self.w):
            raise DomainError("weights must be >= 0")
        if all(x == 0 for x in self.w):
            raise DomainError("weight vector must have a positive entry")
        object.__setattr__(self, "w", tuple(Fraction(x) for x in self.w))

    @property
    def n(self) -> int:
        return len(self.w)

    @property
    def norm_sq(self) -> Fraction:
        return sum((x * x for x in self.w), Fraction(0))


@dataclass(frozen=True)
class ExactDist:
    """Exact law of the weighted sign sum: ascending atoms with dyadic masses."""

    n: int
    values: tuple[Fraction, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.counts) != 1 << self.n:
            raise ValueError("pattern counts must sum to 2^n")
        if any(self.values[i] >= self.values[i + 1] for i in range(len(self.values) - 1)):
            raise ValueError("atom values must be strictly increasing")
        size = len(self.values)
        for i in range(size):
            j = size - 1 - i
            if self.values[i] != -self.values[j] or self.counts[i] != self.counts[j]:
                raise ValueError("distribution must be symmetric about 0")

    def prob(self, x: Fraction) -> Dyadic:
        try:
            i = self.values.index(x)
        except ValueError:
            return Dyadic(0, 0)
        return Dyadic(self.counts[i], self.n)

    def atoms(self) -> tuple[tuple[Fraction, Dyadic], ...]:
        return tuple((v, Dyadic(c, self.n)) for v, c in zip(self.values, self.counts))


@dataclass(frozen=True)
class Fiber:
    """All sign patterns achieving a given atom value, in lexicographic order."""

    x: Fraction
    configs: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PairProbe:
    """Slope statistics for one rotated coordinate pair (1-based, w_i > w_j).

    ``direction`` is the rotation sign that raises the fiber's upper
    median at first order; the flat slope fields describe that direction.
    ``normalized_verdict`` records the outcome for the fixed direction in
    which slopes are positive exactly on patterns with e_j = +1 (slope
    w_i e_j - w_j e_i); its failure on a concrete fiber is a research-
    relevant finding even though the other direction then succeeds.
    """

    i: int
    j: int
    direction: str
    slopes: tuple[tuple[Fraction, int], ...]  # sorted (value, multiplicity)
    n_pos: int
    n_neg: int
    n_zero: int
    upper_median_slope: Fraction
    verdict: bool
    normalized_median: Fraction
    normalized_verdict: bool


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of the fiber-slope probe at a positive atom.

    ``verdict`` certifies the first-order content of the equalisation
    claim for the selected pair: some rotation direction raises the
    fiber's upper median.  Selection prefers the first pair (index
    order) where the e_j-aligned normalized direction already works,
    then the first pair at all; ``all_pairs`` keeps every summary.
    ``applicable`` is False when every positive coordinate is equal,
    which the claim does not cover (distinct from a failed verdict).
    """

    applicable: bool
    x: Fraction
    fiber_size: int = 0
    pair: tuple[int, int] | None = None
    direction: str = "-theta"
    slopes: tuple[tuple[Fraction, int], ...] = ()
    n_pos: int = 0
    n_neg: int = 0
    n_zero: int = 0
    upper_median_slope: Fraction | None = None
    verdict: bool = False
    normalized_verdict: bool = False
    all_pairs: tuple[PairProbe, ...] = ()
    reason: str | None = None


@dataclass(frozen=True)
class SearchReport:
    """Best normalised mid-tail found by seeded random weight sampling."""

    n: int
    t: Threshold
    trials: int
    seed: int
    best_value: Dyadic
    best_weights: tuple[int, ...]
    envelope_value: Dyadic
    gap: Dyadic
    violations: tuple[tuple[tuple[int, ...], Dyadic], ...]


class Lcg:
    """64-bit linear congruential generator (Knuth's MMIX multiplier).

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64,
    seeded with one burn-in step from the user seed; draws take the top
    31 bits and reduce modulo the range size.  Entirely integer-based,
    hence identical on every platform.
    """

    MULT = 6364136223846793005
    INC = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = (seed * self.MULT + self.INC) & self.MASK

    def next_raw(self) -> int:
        self.state = (self.state * self.MULT + self.INC) & self.MASK
        return self.state >> 33

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] (modulo reduction, documented)."""
        return lo + self.next_raw() % (hi - lo + 1)


# ---------------------------------------------------------------------------
# Distribution enumeration
# ---------------------------------------------------------------------------

def _require_size(n: int) -> None:
    if n > MAX_COORDINATES:
        raise SizeLimitError(f"n={n} exceeds the brute-force guard "
                             f"({MAX_COORDINATES} coordinates)")


def _scaled_weights(w: WeightVector) -> tuple[list[int], int]:
    """Integer weights on a common denominator L (values are atoms / L)."""
    denom = math.lcm(*(x.denominator for x in w.w))
    return [int(x * denom) for x in w.w], denom


def _scaled_counts(iw: list[int]) -> dict[int, int]:
    """Counts of patterns per integer sum, by exact convolution."""
    counts = {0: 1}
    for wi in iw:
        nxt: dict[int, int] = {}
        for s, c in counts.items():
            nxt[s + wi] = nxt.get(s + wi, 0) + c
            nxt[s - wi] = nxt.get(s - wi, 0) + c
        counts = nxt
    return counts


def enumerate_dist(w: WeightVector) -> ExactDist:
    """Exact law of the weighted sign sum over all 2^n equiprobable patterns."""
    _require_size(w.n)
    iw, denom = _scaled_weights(w)
    counts = _scaled_counts(iw)
    svals = sorted(counts)
    return ExactDist(w.n,
                     tuple(Fraction(s, denom) for s in svals),
                     tuple(counts[s] for s in svals))


def dist_by_pattern_walk(w: WeightVector) -> ExactDist:
    """Same law via the explicit 2^n pattern walk (slow, independent route)."""
    _require_size(w.n)
    iw, denom = _scaled_weights(w)
    counts: dict[int, int] = {}
    for eps in itertools.product(_SIGN_CHOICES, repeat=w.n):
        s = sum(e * wi for e, wi in zip(eps, iw))
        counts[s] = counts.get(s, 0) + 1
    svals = sorted(counts)
    return ExactDist(w.n,
                     tuple(Fraction(s, denom) for s in svals),
                     tuple(counts[s] for s in svals))


# ---------------------------------------------------------------------------
# Normalised tail functionals
# ---------------------------------------------------------------------------

def _cmp_scaled_atom(s: int, t: Threshold, w2_scaled: int) -> int:
    """Sign of s/sqrt(w2_scaled) - t, all integer arithmetic."""
    ssign = (s > 0) - (s < 0)
    if ssign != t.sign:
        return 1 if ssign > t.sign else -1
    if ssign == 0:
        return 0
    p, q = t.sq.numerator, t.sq.denominator
    square_cmp = s * s * q - p * w2_scaled
    square_sign = (square_cmp > 0) - (square_cmp < 0)
    return square_sign if ssign > 0 else -square_sign


def normalized_mid_tail(w: WeightVector, t: Threshold,
                        dist: ExactDist | None = None) -> Dyadic:
    """Mid-tail of the sum normalised by ||w||: P(S > t||w||) + P(S = t||w||)/2.

    ``dist`` may carry a precomputed ``enumerate_dist(w)`` to amortise
    repeated thresholds against one weight vector.
    """
    _require_size(w.n)
    if dist is None:
        dist = enumerate_dist(w)
    iw, denom = _scaled_weights(w)
    w2_scaled = sum(x * x for x in iw)
    strict = 0
    boundary = 0
    for v, c in zip(dist.values, dist.counts):
        s_scaled = int(v * denom)
        cmp = _cmp_scaled_atom(s_scaled, t, w2_scaled)
        if cmp > 0:
            strict += c
        elif cmp == 0:
            boundary += c
    return Dyadic(2 * strict + boundary, w.n + 1)


def normalized_mid_quantile(w: WeightVector, alpha: Fraction,
                            dist: ExactDist | None = None) -> Threshold:
    """Supremum of thresholds whose normalised mid-tail stays >= alpha.

    Same supremum convention as the equal-weight case: the largest
    normalised atom s/||w|| with P(S >= s) >= alpha; its square is the
    rational s^2 / sum(w^2).
    """
    _require_size(w.n)
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    if dist is None:
        dist = enumerate_dist(w)
    target = alpha.numerator * (1 << w.n)
    scale = alpha.denominator
    cum = 0
    for v, c in zip(reversed(dist.values), reversed(dist.counts)):
        cum += c
        if cum * scale >= target:
            sign = (v > 0) - (v < 0)
            if sign == 0:
                return Threshold.zero()
            return Threshold.from_square(sign, v * v / w.norm_sq)
    raise AssertionError("normalized_mid_quantile failed to terminate")


# ---------------------------------------------------------------------------
# Fibers and the equalisation probe
# ---------------------------------------------------------------------------

def fiber(w: WeightVector, x: Fraction) -> Fiber:
    """All sign patterns with sum(w_i e_i) == x, lexicographic (+1 before -1)."""
    _require_size(w.n)
    x = Fraction(x)
    iw, denom = _scaled_weights(w)
    target = x * denom
    if target.denominator != 1:
        raise EmptyFiberError(f"{x} is not an atom of the distribution")
    target = target.numerator
    configs = tuple(
        eps for eps in itertools.product(_SIGN_CHOICES, repeat=w.n)
        if sum(e * wi for e, wi in zip(eps, iw)) == target
    )
    if not configs:
        raise EmptyFiberError(f"{x} is not an atom of the distribution")
    return Fiber(x, configs)


def _multiset(slopes: list[Fraction]) -> tuple[tuple[Fraction, int], ...]:
    out: list[list] = []
    for s in slopes:
        if out and out[-1][0] == s:
            out[-1][1] += 1
        else:
            out.append([s, 1])
    return tuple((v, c) for v, c in out)


def _pair_probe(w: WeightVector, fib: Fiber, i: int, j: int) -> PairProbe:
    """Probe one oriented pair (w_i > w_j > 0), 0-based in, 1-based out.

    The per-pattern derivative of the sum along the +theta rotation is
    w_j e_i - w_i e_j; along -theta it is w_i e_j - w_j e_i, positive
    exactly when e_j = +1 (the normalization behind the majority/bias
    argument).  The probe tries -theta first, then +theta: with unequal
    weights no slope is zero, so one of the two upper medians is always
    positive and the first-order increase direction always exists.
    """
    wi, wj = w.w[i], w.w[j]
    minus = sorted(wi * eps[j] - wj * eps[i] for eps in fib.configs)
    m = len(minus)
    med_minus = minus[m // 2]  # upper median: position floor(m/2)+1, 1-based
    if med_minus > 0:
        direction, slopes, med, verdict = "-theta", minus, med_minus, True
    else:
        plus = sorted(-s for s in minus)
        med_plus = plus[m // 2]
        if med_plus > 0:
            direction, slopes, med, verdict = "+theta", plus, med_plus, True
        else:  # impossible without zero slopes; kept for honesty
            direction, slopes, med, verdict = "-theta", minus, med_minus, False
    n_pos = sum(1 for s in slopes if s > 0)
    n_neg = sum(1 for s in slopes if s < 0)
    return PairProbe(i + 1, j + 1, direction, _multiset(slopes),
                     n_pos, n_neg, m - n_pos - n_neg,
                     med, verdict, med_minus, med_minus > 0)


def equalisation_probe(w: WeightVector, x: Fraction) -> ProbeReport:
    """First-order equalisation check at a positive atom x.

    Scans every unequal positive coordinate pair.  The selected pair is
    the first whose normalized (-theta) direction already raises the
    upper median, else the first pair whose opposite direction does;
    per-pair data for all pairs rides along in ``all_pairs``.
    """
    _require_size(w.n)
    x = Fraction(x)
    if x <= 0:
        raise DomainError("the probe requires a positive atom")
    positive = [(idx, val) for idx, val in enumerate(w.w) if val > 0]
    if len({val for _, val in positive}) <= 1:
        return ProbeReport(applicable=False, x=x,
                           reason="all nonzero coordinates are equal")
    fib = fiber(w, x)
    probes = []
    for a in range(w.n):
        for b in range(a + 1, w.n):
            if w.w[a] > 0 and w.w[b] > 0 and w.w[a] != w.w[b]:
                i, j = (a, b) if w.w[a] > w.w[b] else (b, a)
                probes.append(_pair_probe(w, fib, i, j))
    selected = next((p for p in probes if p.normalized_verdict),
                    next((p for p in probes if p.verdict), probes[0]))
    return ProbeReport(
        applicable=True,
        x=x,
        fiber_size=len(fib.configs),
        pair=(selected.i, selected.j),
        direction=selected.direction,
        slopes=selected.slopes,
        n_pos=selected.n_pos,
        n_neg=selected.n_neg,
        n_zero=selected.n_zero,
        upper_median_slope=selected.upper_median_slope,
        verdict=selected.verdict,
        normalized_verdict=selected.normalized_verdict,
        all_pairs=tuple(probes),
    )


# ---------------------------------------------------------------------------
# Random maximiser search
# ---------------------------------------------------------------------------

def random_maximizer_search(n: int, t: Threshold, trials: int, seed: int) -> SearchReport:
    """Sample integer weight vectors uniform on {1..100}^n and compare their
    normalised mid-tails against the equal-weight envelope.

    The gap envelope - best is always >= 0 if the equal-weight optimality
    holds; any violating vector is recorded verbatim.
    """
    if n > 12:
        raise SizeLimitError("random search is guarded at n <= 12")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = Lcg(seed)
    env = envelope_mid_tail(n, t).value
    best: Dyadic | None = None
    best_weights: tuple[int, ...] = ()
    violations = []
    for _ in range(trials):
        weights = tuple(rng.randint(1, 100) for _ in range(n))
        wv = WeightVector(tuple(Fraction(x) for x in weights))
        value = normalized_mid_tail(wv, t)
        if best is None or value > best:
            best, best_weights = value, weights
        if value > env:
            violations.append((weights, value))
    assert best is not None
    return SearchReport(n, t, trials, seed, best, best_weights,
                        env, env.sub(best) if env >= best else Dyadic(0, 0),
                        tuple(violations))
