import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sharpmax.constants import strong_ratio
from sharpmax.core import CyclicSignal, ExponentTuple, Signal, lebesgue_norm_power
from sharpmax.errors import DomainError
from sharpmax.operators import Cyclic, FunctionalSpec, MaximalFunction, Polynomial, PolynomialFamily
from sharpmax.suites import run_suites, SUITES
from sharpmax.transference import (
    StepFunction,
    amplify_cyclic_to_Z,
    build_transfer,
    compute_RK,
    corrupt_build,
    minimal_amplification_R,
    rokhlin_embed,
    scaling_factor,
    step_extension_dominates,
    transfer_bound_demo,
    verify_inner_identity,
)

from conftest import cyclic_signals, nonzero_signals

ONE = ExponentTuple(1, (1,))


def test_RK_examples():
    assert compute_RK(PolynomialFamily.linear(), 7) == 7
    assert compute_RK(PolynomialFamily.power(2), 3) == 9
    P = PolynomialFamily.single(Polynomial(2, (((1, 1), 1), ((0, 0), -2))))
    res = compute_RK(P, 2, with_witness=True)
    assert res.R == 6
    n, m = res.witness[0]
    assert abs(n * m - 2) == 6


@given(st.integers(1, 6), st.integers(1, 3))
def test_RK_brute_force(K, e):
    assert compute_RK(PolynomialFamily.power(e), K) == max(abs(n) ** e for n in range(-K, K + 1))


def test_build_values_are_orbit_samples():
    f = CyclicSignal([1, 2, 5])
    b = build_transfer(Cyclic(3), PolynomialFamily.linear(), [f], 4, ONE)
    for x in range(3):
        for l in range(1, b.side + 1):
            assert b.value(0, x, (l,)) == f(x + l - b.side)


def test_build_scaling_delta():
    f = CyclicSignal.indicator(2, [0])
    b = build_transfer(Cyclic(2), PolynomialFamily.linear(), [f], 3, ONE)
    s = b.scaling[0]
    assert s.lhs == s.rhs == 3 * b.R * 1
    assert b.scaling_ok


def test_build_zero():
    b = build_transfer(Cyclic(3), PolynomialFamily.linear(), [CyclicSignal([0, 0, 0])], 3, ONE)
    assert all(g.is_zero() for g in b.F[0])
    rep = transfer_bound_demo(Cyclic(3), PolynomialFamily.linear(), [CyclicSignal([0, 0, 0])], FunctionalSpec.max(3), ONE, (3,))
    assert rep["rows"][0]["strong"]["lhs"] == rep["rows"][0]["strong"]["rhs"] == 0


def test_build_domain():
    with pytest.raises(DomainError):
        build_transfer(Cyclic(2), PolynomialFamily.linear(), [CyclicSignal([1, 0])], 2, ONE)
    with pytest.raises(DomainError):
        build_transfer(Cyclic(2), PolynomialFamily.linear(), [CyclicSignal([1, 0, 0])], 3, ONE)


@pytest.mark.parametrize("L,e,kind", list(itertools.product((2, 3), (1, 2), ("max", "var"))))
def test_inner_identity(L, e, kind):
    O = FunctionalSpec.max(3) if kind == "max" else FunctionalSpec.variation(2, 3)
    f = CyclicSignal([Fraction(i + 1, 2) for i in range(L)]).rotate(1)
    for K in (3, 4, 5):
        b = build_transfer(Cyclic(L), PolynomialFamily.power(e), [f], K, ONE)
        rep = verify_inner_identity(b, O)
        assert rep.holds and rep.checked == L * (K - 2) * b.R


def test_inner_box_is_exhaustive():
    b = build_transfer(Cyclic(2), PolynomialFamily.linear(), [CyclicSignal.indicator(2, [0])], 3, ONE)
    assert list(b.inner_box()) == [(l,) for l in range(b.R + 1, 2 * b.R + 1)]
    assert verify_inner_identity(b, FunctionalSpec.max(3)).holds


def test_corruption_is_located():
    b = build_transfer(Cyclic(2), PolynomialFamily.linear(), [CyclicSignal.indicator(2, [0])], 4, ONE)
    bad = corrupt_build(b)
    rep = verify_inner_identity(bad, FunctionalSpec.max(4))
    assert not rep.holds
    assert rep.mismatches and rep.mismatches[0]["x"] == 0


def test_two_dimensional_family():
    P = PolynomialFamily(2, 1, 1, ((Polynomial.monomial((1,)),), (Polynomial.monomial((2,)),)))
    f = CyclicSignal([1, 0, 2])
    b = build_transfer(Cyclic(3, steps=(1, 1)), P, [f], 3, ONE)
    assert verify_inner_identity(b, FunctionalSpec.max(3)).holds
    assert b.scaling_ok


def test_bilinear_family():
    P = PolynomialFamily(1, 2, 1, ((Polynomial.monomial((1,)), Polynomial.monomial((1,), 2)),))
    p = ExponentTuple.diagonal(2, 2)
    fs = [CyclicSignal([1, 2]), CyclicSignal([3, 1])]
    b = build_transfer(Cyclic(2), P, fs, 3, p)
    assert verify_inner_identity(b, FunctionalSpec.max(3)).holds
    rep = transfer_bound_demo(Cyclic(2), P, fs, FunctionalSpec.max(3), p, (3,))
    assert rep["holds"]


def test_scaling_factors():
    rep = transfer_bound_demo(Cyclic(2), PolynomialFamily.linear(), [CyclicSignal([1, 0])], FunctionalSpec.max(3), ONE)
    assert [r["scaling_factor"] for r in rep["rows"]] == [3, 2, Fraction(5, 3)]
    assert rep["holds"]
    for K in range(3, 12):
        assert scaling_factor(K, 7, 1, ONE) == Fraction(K, K - 2)


@pytest.mark.parametrize("p", [1, 2, 3, Fraction(3, 2)])
def test_transfer_inequality(p):
    f = CyclicSignal([2, 0, 1])
    for O in (FunctionalSpec.max(3), FunctionalSpec.variation(2, 3)):
        rep = transfer_bound_demo(Cyclic(3), PolynomialFamily.power(2), [f], O, ExponentTuple.diagonal(p), (3, 4))
        assert rep["holds"]
        assert all(r["containment"] for r in rep["rows"])


def test_amplification_example():
    a = amplify_cyclic_to_Z(CyclicSignal([1, 0]), 2, 64, Fraction(1, 100))
    assert a.ok and a.excess > 0
    assert a.lhs == a.main_part + a.tail_part
    M = MaximalFunction(a.F, "os")
    assert a.lhs == sum(M(l) ** 2 for l in range(-127, 129))


def test_amplification_constant_tail():
    f = CyclicSignal.constant(2, 3)
    a = amplify_cyclic_to_Z(f, 2, 16, Fraction(1, 100))
    M = MaximalFunction(a.F, "os")
    assert all(M(l) >= f.mean() / 2 for l in range(-31, 1))
    assert a.ok


def test_amplification_degenerate_eps():
    a = amplify_cyclic_to_Z(CyclicSignal.constant(2, 1), 2, 16, Fraction(99, 100))
    assert not a.checks["precondition"] and a.diagnostic
    with pytest.raises(DomainError):
        amplify_cyclic_to_Z(CyclicSignal([1, 0]), 2, 4, 1)


@pytest.mark.parametrize("op", ["os", "c", "u"])
def test_amplification_operators(op):
    R, build = minimal_amplification_R(CyclicSignal([1, 0]), 2, Fraction(1, 200), op=op)
    assert R is not None and build.ok
    rho = strong_ratio(CyclicSignal([1, 0]), op, 2).exact_power
    assert build.lhs > rho * build.norm_F


def test_embedding_examples():
    e = rokhlin_embed(Signal.delta(1), 4, 1)
    assert e.f.values == (0, 0, 0, 1) and e.norm_equal and e.holds
    e = rokhlin_embed(Signal({1: 3, 2: 1}), 8, 1, L=2)
    assert e.holds and e.lhs >= e.rhs


@given(st.lists(st.integers(0, 6), min_size=1, max_size=6), st.integers(0, 3), st.sampled_from([1, 2, 3, Fraction(3, 2)]))
def test_embedding_random(vals, extra, p):
    if not any(vals):
        vals[0] = 1
    L = len(vals)
    F = Signal({i + 1: v for i, v in enumerate(vals)})
    e = rokhlin_embed(F, 2 * L + extra, p, L=L)
    assert e.norm_equal and e.pointwise and e.holds
    assert lebesgue_norm_power(e.f, 1) == lebesgue_norm_power(F, 1)


def test_step_examples():
    rep = step_extension_dominates(Signal.delta(0), [Fraction(1, 2)])
    assert rep.holds and rep.rows[0]["continuous"] == rep.rows[0]["discrete"] == 1
    rep = step_extension_dominates(Signal.indicator([1, 2, 3]), [Fraction(3, 2), 2, Fraction(5, 2)])
    assert all(r["continuous"] == r["discrete"] == 1 for r in rep.rows)


@given(nonzero_signals(max_len=5, hi=6), st.fractions(-4, 10, max_denominator=6))
def test_step_maximal_against_grid(f, x):
    step = StepFunction.from_signal(f)
    best = step.uncentered_maximal(x)
    grid = [x + Fraction(k, 4) for k in range(-48, 49)]
    for s in grid:
        for t in grid:
            if s <= x <= t and s < t:
                assert step.integral(s, t) / (t - s) <= best
    assert best <= max(v for _, v in f.items())
    assert step_extension_dominates(f, [x]).holds


def test_suites_pass():
    res = run_suites(seed=3, trials=10)
    assert [r["suite"] for r in res] == list(SUITES)
    assert all(r["ok"] for r in res), [r for r in res if not r["ok"]]
