import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sharpmax.core import CyclicSignal, Signal
from sharpmax.errors import DomainError
from sharpmax.operators import (
    OPERATORS,
    CanonicalZd,
    Cyclic,
    FunctionalSpec,
    MaximalFunction,
    Polynomial,
    PolynomialFamily,
    average_op,
    functional_apply,
    functional_power,
    maximal,
    maximal_centered,
    maximal_one_sided,
    maximal_uncentered,
    variation_bruteforce,
)

from conftest import cyclic_signals, fractions, signals


def windows(op, x, span):
    """(start, end) windows of the given kind through x, radius up to span."""
    if op == "os":
        return [(x, x + n) for n in range(span)]
    if op == "c":
        return [(x - r, x + r) for r in range(span)]
    return [(x - s, x + t) for s in range(span) for t in range(span)]


def brute_Z(f, op, x, span=40):
    return max(abs(sum(f(y) for y in range(s, t + 1))) / (t - s + 1) for s, t in windows(op, x, span))


def brute_cyclic(f, op, x, span):
    return max(abs(sum(f(y) for y in range(s, t + 1))) / (t - s + 1) for s, t in windows(op, x, span))


def test_one_sided_delta():
    M = MaximalFunction(Signal.delta(0), "os")
    for l in range(-10, 6):
        assert M(l) == (Fraction(1, abs(l) + 1) if l <= 0 else 0)


def test_centered_and_uncentered_delta():
    Mc = MaximalFunction(Signal.delta(0), "c")
    Mu = MaximalFunction(Signal.delta(0), "u")
    for l in range(-10, 11):
        assert Mc(l) == Fraction(1, 2 * abs(l) + 1)
        assert Mu(l) == Fraction(1, abs(l) + 1)


def test_cyclic_examples():
    assert maximal_one_sided(CyclicSignal([1, 0])).values == (1, Fraction(1, 2))
    # radius 2 wraps twice over the atom 0: window sum 2, length 5
    assert maximal_centered(CyclicSignal([1, 0, 0])).values == (1, Fraction(2, 5), Fraction(2, 5))
    for op in OPERATORS:
        assert maximal(CyclicSignal.constant(4, Fraction(3, 2)), op).values == (Fraction(3, 2),) * 4


def test_uncentered_extremizer_level_set():
    Mu = maximal_uncentered(CyclicSignal.indicator(3, [2]))
    assert sum(1 for v in Mu.values if v >= Fraction(1, 2)) == 3


@given(signals(max_len=6), st.sampled_from(OPERATORS), st.integers(-12, 12))
def test_maximal_Z_matches_brute_force(f, op, x):
    assert MaximalFunction(f, op)(x) == brute_Z(f, op, x)


@given(cyclic_signals(nonneg=False), st.sampled_from(OPERATORS))
def test_maximal_cyclic_matches_brute_force(f, op):
    out = maximal(f, op)
    span = 4 * f.L + 2 if op != "u" else 2 * f.L + 2
    assert out.values == tuple(brute_cyclic(f, op, x, span) for x in range(f.L))


@given(signals(max_len=6), signals(max_len=6), st.integers(-5, 5))
def test_sublinear_dominating_shift(f, g, s):
    for op in OPERATORS:
        Mf, Mg = MaximalFunction(f, op), MaximalFunction(g, op)
        Mfg, Ms = MaximalFunction(f + g, op), MaximalFunction(f.shift(s), op)
        for x in range(-12, 12):
            assert abs(f(x)) <= Mf(x)
            assert Mfg(x) <= Mf(x) + Mg(x)
            assert Ms(x) == Mf(x + s)
    Mc, Mu, Mo = (MaximalFunction(f, op) for op in ("c", "u", "os"))
    assert all(Mc(x) <= Mu(x) and Mo(x) <= Mu(x) for x in range(-12, 12))


@given(signals(max_len=6, nonneg=True), fractions(1, 8, 3), st.sampled_from(OPERATORS))
def test_level_set_is_exact(f, lam, op):
    M = MaximalFunction(f, op)
    E = M.level_set(lam)
    a, b = M.reach(lam)
    for x in range(a - 3, b + 4):
        assert ((x,) in E or x in E) == (M(x) >= lam)


def test_linear_average_delta():
    out = average_op(CanonicalZd(1), PolynomialFamily.linear(), [Signal.delta(0)], 4)
    assert sorted(out.items()) == [((x,), Fraction(1, 4)) for x in (-4, -3, -2, -1)]


def test_two_term_average_vanishes():
    P = PolynomialFamily(1, 2, 1, ((Polynomial.monomial((1,)), Polynomial.monomial((1,), 2)),))
    out = average_op(CanonicalZd(1), P, [Signal.delta(0), Signal.delta(0)], 2)
    assert out.is_zero()


@given(st.integers(1, 6), fractions(0, 6), st.integers(1, 8), st.integers(1, 2))
def test_average_preserves_constants(L, c, N, e):
    out = average_op(Cyclic(L), PolynomialFamily.power(e), [CyclicSignal.constant(L, c)], N)
    assert out.values == (c,) * L


@given(cyclic_signals(L_max=5), st.integers(1, 6), st.integers(1, 3))
def test_cyclic_average_brute_force(f, N, e):
    out = average_op(Cyclic(f.L), PolynomialFamily.power(e), [f], N)
    assert out.values == tuple(sum(f(x + n ** e) for n in range(1, N + 1)) / N for x in range(f.L))


def test_polynomial_eval():
    P = Polynomial(2, (((1, 1), 1), ((0, 0), -2)))
    assert P((3, -2)) == -8
    with pytest.raises(DomainError):
        Polynomial(1, (((1,), Fraction(1, 2)),))
    fam = PolynomialFamily.power(2)
    assert PolynomialFamily.from_json(fam.to_json()) == fam


def oracle_variation(r, a):
    best = Fraction(0)
    for k in range(2, len(a) + 1):
        for idx in itertools.combinations(range(len(a)), k):
            best = max(best, sum(abs(a[j] - a[i]) ** r for i, j in zip(idx, idx[1:])))
    return best


def test_functional_examples():
    assert functional_apply(FunctionalSpec.max(2), [-3, 2]) == 3
    assert functional_apply(FunctionalSpec.variation(1, 3), [0, 1, 0]) == 2
    assert functional_power(FunctionalSpec.variation(2, 4), [0, 1, 0, 1]) == 3
    assert variation_bruteforce(2, [5]) == 0
    assert variation_bruteforce(1, [0, 1]) == 1


@given(st.integers(1, 3), st.lists(fractions(-5, 5, 3), min_size=1, max_size=8))
def test_variation_dp_matches_oracle(r, a):
    assert functional_power(FunctionalSpec.variation(r, len(a)), a) == oracle_variation(r, a)


@given(st.lists(fractions(-5, 5, 3), min_size=2, max_size=9), st.integers(1, 3))
def test_truncation_monotone(a, r):
    K = len(a) - 1
    for spec in (FunctionalSpec.max(K), FunctionalSpec.variation(r, K)):
        assert functional_power(spec, a[:K]) <= functional_power(spec.with_K(K + 1), a)


def test_functional_spec_domain():
    with pytest.raises(DomainError):
        FunctionalSpec.variation(Fraction(1, 2), 3)
    with pytest.raises(DomainError):
        FunctionalSpec("jump", 3)
