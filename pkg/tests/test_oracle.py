"""Brute-force oracle: enumeration, fibers, probe, random search."""

import random
from fractions import Fraction

import pytest

from rademax.binomdist import mid_tail, pmf
from rademax.errors import DomainError, EmptyFiberError, SizeLimitError
from rademax.exactnum import DYADIC_ONE, Dyadic, Threshold
from rademax.oracle import (
    Lcg,
    WeightVector,
    dist_by_pattern_walk,
    enumerate_dist,
    equalisation_probe,
    fiber,
    normalized_mid_quantile,
    normalized_mid_tail,
    random_maximizer_search,
)

T = Threshold.parse


def W(*values) -> WeightVector:
    return WeightVector(tuple(Fraction(v) for v in values))


# ---------------------------------------------------------------------------
# enumerate_dist
# ---------------------------------------------------------------------------

def test_enumerate_examples():
    d = enumerate_dist(W(1, 1))
    assert d.atoms() == ((Fraction(-2), Dyadic(1, 2)),
                         (Fraction(0), Dyadic(1, 1)),
                         (Fraction(2), Dyadic(1, 2)))
    d = enumerate_dist(W("3/5", "4/5"))
    assert [str(v) for v, _ in d.atoms()] == ["-7/5", "-1/5", "1/5", "7/5"]
    assert all(p == Dyadic(1, 2) for _, p in d.atoms())
    d = enumerate_dist(W(1, 1, 1))
    assert [(v, p.as_fraction()) for v, p in d.atoms()] == [
        (Fraction(-3), Fraction(1, 8)), (Fraction(-1), Fraction(3, 8)),
        (Fraction(1), Fraction(3, 8)), (Fraction(3), Fraction(1, 8))]


def test_enumerate_matches_pattern_walk():
    rng = random.Random(42)
    for _ in range(40):
        n = rng.randrange(1, 9)
        vals = [Fraction(rng.randrange(0, 8), rng.randrange(1, 5)) for _ in range(n)]
        if all(x == 0 for x in vals):
            continue
        w = W(*vals)
        assert enumerate_dist(w) == dist_by_pattern_walk(w)


def test_enumerate_guards():
    with pytest.raises(SizeLimitError):
        enumerate_dist(W(*([1] * 25)))
    with pytest.raises(DomainError):
        W(0, 0)
    with pytest.raises(DomainError):
        W(-1, 2)


def test_permutation_invariance():
    rng = random.Random(11)
    for _ in range(20):
        vals = [Fraction(rng.randrange(1, 30)) for _ in range(6)]
        d1 = enumerate_dist(W(*vals))
        rng.shuffle(vals)
        d2 = enumerate_dist(W(*vals))
        assert d1 == d2


# ---------------------------------------------------------------------------
# normalised tails and quantiles
# ---------------------------------------------------------------------------

def test_normalized_mid_tail_examples():
    assert normalized_mid_tail(W(3, 4), T("1")) == Dyadic(1, 2)
    assert normalized_mid_tail(W("6/5", "8/5"), T("1")) == Dyadic(1, 2)


def test_scale_invariance():
    rng = random.Random(23)
    for _ in range(30):
        n = rng.randrange(1, 7)
        w = [Fraction(rng.randrange(1, 40)) for _ in range(n)]
        c = Fraction(rng.randrange(1, 9), rng.randrange(1, 9))
        t = T(rng.choice(["1", "3/2", "sqrt(2)", "sqrt(1/3)", "0", "2"]))
        assert normalized_mid_tail(W(*w), t) == normalized_mid_tail(W(*(c * x for x in w)), t)


def test_equal_weights_agree_with_binomdist():
    for k in range(1, 13):
        w = W(*([1] * k))
        for s in ("0", "1", "3/2", "sqrt(2)", "2", "sqrt(1/5)", "-1"):
            t = T(s)
            assert normalized_mid_tail(w, t) == mid_tail(k, t), (k, s)


def test_equal_weights_pmf_equivalence_to_16():
    # atom-for-atom agreement between enumeration and the binomial table
    for k in range(1, 17):
        dist = enumerate_dist(W(*([1] * k)))
        table = pmf(k)
        assert len(dist.values) == len(table.entries)
        for (lattice, prob), value, count in zip(table.entries, dist.values,
                                                 dist.counts):
            assert value == lattice.a and Dyadic(count, k) == prob


def test_normalized_mid_quantile_examples():
    assert normalized_mid_quantile(W(1, 1), Fraction(1, 4)) == T("sqrt(2)")
    assert normalized_mid_quantile(W(1), Fraction(1, 4)) == T("1")
    # atom at 0 exists for even equal weights: symmetric median is 0
    assert normalized_mid_quantile(W(1, 1), Fraction(1, 2)) == Threshold.zero()
    # no atom at 0: supremum convention lands on the first positive atom
    assert normalized_mid_quantile(W(1, 2), Fraction(1, 2)) == T("sqrt(1/5)")


# ---------------------------------------------------------------------------
# fibers
# ---------------------------------------------------------------------------

def test_fiber_examples():
    f = fiber(W("3/5", "4/5"), Fraction(7, 5))
    assert f.configs == ((1, 1),)
    f = fiber(W(1, 1), Fraction(0))
    assert f.configs == ((1, -1), (-1, 1))
    f = fiber(W(1, 2), Fraction(3))
    assert f.configs == ((1, 1),)
    with pytest.raises(EmptyFiberError):
        fiber(W(1, 2), Fraction(2))


def test_fiber_mass_accounting():
    rng = random.Random(4)
    for _ in range(10):
        n = rng.randrange(1, 7)
        w = W(*(rng.randrange(1, 10) for _ in range(n)))
        d = enumerate_dist(w)
        total = 0
        for v, _ in d.atoms():
            total += len(fiber(w, v).configs)
        assert total == 1 << n


# ---------------------------------------------------------------------------
# equalisation probe
# ---------------------------------------------------------------------------

def test_probe_two_coordinates():
    r = equalisation_probe(W("3/5", "4/5"), Fraction(7, 5))
    assert r.applicable and r.verdict
    assert r.pair == (2, 1)            # w_2 > w_1, 1-based
    assert r.direction == "-theta"
    assert (r.n_pos, r.n_neg, r.n_zero) == (1, 0, 0)
    assert r.upper_median_slope == Fraction(1, 5)


def test_probe_not_applicable_on_equal_weights():
    r = equalisation_probe(W(1, 1), Fraction(2))
    assert not r.applicable
    assert r.reason == "all nonzero coordinates are equal"


def test_probe_three_coordinates():
    r = equalisation_probe(W(1, 2, 4), Fraction(5))
    assert r.verdict
    assert r.pair == (3, 2)            # first pair whose -theta direction works
    assert r.direction == "-theta"
    assert r.slopes == ((Fraction(2), 1),)
    assert len(r.all_pairs) == 3


def test_probe_opposite_direction_instance():
    # fiber {(-,+)}: the e_j-aligned direction has slope 26*(-1)-14*(+1) = -40,
    # and the conditional bias P(e_1 = +1 | S = 12) is 0 (the complementary
    # sum is the two-point +-26, not unimodal), so the normalized direction
    # fails; the +theta rotation raises the fiber value at rate +40.
    r = equalisation_probe(W(14, 26), Fraction(12))
    assert r.applicable and r.verdict
    assert r.direction == "+theta"
    assert not r.normalized_verdict
    assert r.upper_median_slope == Fraction(40)
    assert r.all_pairs[0].normalized_median == Fraction(-40)


def test_probe_some_direction_always_works():
    # no pair with unequal positive weights can fail both directions:
    # zero slopes are impossible, so the two upper medians cannot straddle 0
    rng = random.Random(314)
    for _ in range(150):
        n = rng.randrange(2, 7)
        while True:
            vals = [rng.randrange(1, 50) for _ in range(n)]
            if len(set(vals)) > 1:
                break
        w = W(*vals)
        d = enumerate_dist(w)
        for x in (v for v in d.values if v > 0):
            assert equalisation_probe(w, x).verdict


def test_probe_errors():
    with pytest.raises(DomainError):
        equalisation_probe(W(1, 2), Fraction(-3))
    with pytest.raises(EmptyFiberError):
        equalisation_probe(W(1, 2), Fraction(2))


# ---------------------------------------------------------------------------
# random search
# ---------------------------------------------------------------------------

def test_lcg_determinism():
    a, b = Lcg(123), Lcg(123)
    assert [a.randint(1, 100) for _ in range(50)] == [b.randint(1, 100) for _ in range(50)]
    assert Lcg(1).next_raw() != Lcg(2).next_raw()


def test_random_search_single_coordinate():
    r = random_maximizer_search(1, T("1/2"), 5, 1)
    assert r.best_value == Dyadic(1, 1)
    assert r.gap == Dyadic(0, 0)


def test_random_search_never_beats_envelope():
    r = random_maximizer_search(3, T("1"), 300, 7)
    assert r.best_value <= Dyadic(1, 2)
    assert r.violations == ()
    r = random_maximizer_search(5, T("2"), 200, 1)
    assert r.best_value <= Dyadic(1, 5)
    assert r.violations == ()


def test_random_search_reproducible():
    assert random_maximizer_search(4, T("3/2"), 60, 9) == \
        random_maximizer_search(4, T("3/2"), 60, 9)
