"""Randomized invariant suites behind ``sharpmax verify-suite``.

Each suite takes a seeded ``random.Random`` and a trial count and returns
``(ok, detail)``.  Suites are deterministic for a fixed seed.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .constants import (
    MELAS,
    cp_phi,
    cp_root,
    one_sided_covering_certificate,
    uncentered_extremizer,
    uncentered_weak_constant_cyclic,
    weak_constant_cyclic,
    weak_ratio,
    window_problem,
)
from .core import (
    CyclicSignal,
    ExponentTuple,
    Signal,
    lebesgue_norm,
    level_set,
    weak_norm,
)
from .lp import lp_solve, vertex_enumeration
from .operators import (
    OPERATORS,
    CanonicalZd,
    Cyclic,
    FunctionalSpec,
    MaximalFunction,
    PolynomialFamily,
    average_op,
    functional_power,
    maximal,
    variation_bruteforce,
)
from .transference import (
    amplify_cyclic_to_Z,
    build_transfer,
    rokhlin_embed,
    step_extension_dominates,
    transfer_bound_demo,
    verify_inner_identity,
)


def random_signal(rng, size=8, vmax=10, signed=False, start=None, dense=False):
    lo = rng.randint(-5, 5) if start is None else start
    vals = {}
    for i in range(rng.randint(1, size)):
        v = rng.randint(-vmax if signed else 0, vmax)
        if dense and v == 0:
            v = 1
        vals[lo + i] = Fraction(v, rng.randint(1, 3))
    if not any(vals.values()):
        vals[lo] = Fraction(1)
    return Signal(vals)


def random_cyclic(rng, L, vmax=6, signed=False):
    vals = [Fraction(rng.randint(-vmax if signed else 0, vmax), rng.randint(1, 3)) for _ in range(L)]
    if not any(vals):
        vals[0] = Fraction(1)
    return CyclicSignal(vals)


def suite_norms(rng, trials):
    for _ in range(trials):
        g = random_signal(rng, signed=True)
        if weak_norm(g, 1) > lebesgue_norm(g, 1):
            return False, f"Chebyshev fails for {g}"
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
        for q in (1, "inf"):
            if lebesgue_norm(g.scale(c), q) != abs(c) * lebesgue_norm(g, q):
                return False, f"homogeneity fails at q={q}"
        lams = sorted({abs(v) for _, v in g.items()})
        for a, b in zip(lams, lams[1:]):
            if not level_set(g, b) <= level_set(g, a):
                return False, "level sets not monotone"
    return True, f"{trials} signals"


def suite_maximal(rng, trials):
    for _ in range(trials):
        f, g = random_signal(rng), random_signal(rng)
        s = rng.randint(-4, 4)
        for op in OPERATORS:
            Mf, Mg, Mfg = MaximalFunction(f, op), MaximalFunction(g, op), MaximalFunction(f + g, op)
            Ms = MaximalFunction(f.shift(s), op)
            for x in range(-15, 15):
                if abs(f(x)) > Mf(x):
                    return False, f"domination fails ({op})"
                if Mfg(x) > Mf(x) + Mg(x):
                    return False, f"sublinearity fails ({op})"
                if Ms(x) != Mf(x + s):
                    return False, f"shift commutation fails ({op})"
            Mc, Mu = MaximalFunction(f, "c"), MaximalFunction(f, "u")
            if any(Mc(x) > Mu(x) for x in range(-15, 15)):
                return False, "centered exceeds uncentered"
        L = rng.randint(1, 5)
        h = random_cyclic(rng, L, signed=True)
        for op in OPERATORS:
            a = maximal(h, op)
            dbl = maximal(h, op, n_max=4 * L)
            if a != dbl:
                return False, f"cyclic truncation guard fails ({op}, L={L})"
    return True, f"{trials} pairs"


def suite_average(rng, trials):
    for _ in range(trials):
        N = rng.randint(1, 5)
        f = random_signal(rng, size=4, signed=True)
        g = random_signal(rng, size=4)
        P = PolynomialFamily(1, 2, 1, ((PolynomialFamily.power(rng.randint(1, 2)).polys[0][0], PolynomialFamily.linear().polys[0][0]),))
        out = average_op(CanonicalZd(1), P, [f, g], N)
        for x in range(-40, 40):
            ref = sum((f(x + P.polys[0][0]((n,))) * g(x + n) for n in range(1, N + 1)), Fraction(0)) / N
            if out((x,)) != ref:
                return False, f"average mismatch at {x}"
    return True, f"{trials} families"


def suite_variation(rng, trials):
    for _ in range(trials):
        K = rng.randint(1, 10)
        r = rng.choice((1, 2, 3))
        a = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(K + 1)]
        spec = FunctionalSpec.variation(r, K)
        if functional_power(spec, a[:K]) != variation_bruteforce(r, a[:K]):
            return False, f"DP differs from brute force on {a[:K]}"
        for kind in (FunctionalSpec.max(K), spec):
            if functional_power(kind, a[:K]) > functional_power(kind.with_K(K + 1), a):
                return False, "truncation monotonicity fails"
    return True, f"{trials} sequences"


def suite_covering(rng, trials):
    for _ in range(trials):
        f = random_signal(rng, size=20, vmax=10)
        lam = Fraction(rng.randint(1, 20), rng.randint(1, 6))
        cert = one_sided_covering_certificate(f, lam)
        if not cert.validate():
            return False, f"invalid certificate for {f}, {lam}"
        le, covered, l1 = cert.bound()
        if not le <= covered <= l1:
            return False, "covering bound fails"
    for M in range(0, 51):
        if weak_ratio(Signal.delta(0), Fraction(1, M + 1), "os").value != 1:
            return False, f"delta witness ratio is not 1 at M={M}"
    return True, f"{trials} certificates"


def suite_lp(rng, trials):
    for _ in range(trials):
        L = rng.randint(1, 4)
        windows = [(rng.randint(0, L - 1), 2 * rng.randint(0, L) + 1) for _ in range(rng.randint(1, L))]
        prob = window_problem(L, windows)
        sol = lp_solve(prob)
        if not sol.verify(prob):
            return False, f"nonzero residuals on {windows}"
        if vertex_enumeration(prob)[0] != sol.objective_value:
            return False, f"oracle disagrees on {windows}"
    return True, f"{trials} LPs"


def suite_cyclic_constants(rng, trials, L_max=4):
    for L in range(1, L_max + 1):
        u = weak_constant_cyclic(L, "u")
        if u.value != uncentered_weak_constant_cyclic(L):
            return False, f"uncentered search differs from closed form at L={L}"
        f, lam = uncentered_extremizer(L)
        if weak_ratio(f, lam, "u").value != u.value:
            return False, f"extremizer fails at L={L}"
        if L <= 3:
            c = weak_constant_cyclic(L, "c")
            if not c.solution.verify(c.problem) or MELAS.compare(c.value) >= 0:
                return False, f"centered constant check fails at L={L}"
            if c.replay().value != c.value:
                return False, f"centered witness does not replay at L={L}"
    return True, f"L <= {L_max}"


def suite_cp(rng, trials):
    for p in (Fraction(3, 2), Fraction(2), Fraction(3), Fraction(5)):
        if cp_phi(p, Fraction(1)) != -2:
            return False, f"phi(1) != -2 at p={p}"
        root = cp_root(p)
        if not root.certified:
            return False, f"no sign change at p={p}"
    return True, "4 exponents"


def suite_transfer(rng, trials):
    count = 0
    for L, e, O in itertools.product((2, 3), (1, 2), (FunctionalSpec.max(3), FunctionalSpec.variation(2, 3))):
        if count >= max(trials, 1):
            break
        count += 1
        f = random_cyclic(rng, L)
        P = PolynomialFamily.power(e)
        for K in (3, 4):
            b = build_transfer(Cyclic(L), P, [f], K, ExponentTuple(1, (1,)))
            if not b.scaling_ok:
                return False, "norm scaling fails"
            if not verify_inner_identity(b, O).holds:
                return False, f"inner identity fails (L={L}, P=n^{e}, K={K})"
        rep = transfer_bound_demo(Cyclic(L), P, [f], O, ExponentTuple(1, (1,)), K_list=(3, 4))
        if not rep["holds"]:
            return False, "transfer inequality fails"
    return True, f"{count} configurations"


def suite_embedding(rng, trials):
    for _ in range(trials):
        L = rng.randint(1, 6)
        F = Signal({k: Fraction(rng.randint(0, 6), rng.randint(1, 2)) for k in range(1, L + 1)})
        if F.is_zero():
            F = Signal.delta(1)
        M = rng.randint(2 * L, 3 * L + 2)
        for p in (1, 2):
            e = rokhlin_embed(F, M, p, L=L)
            if not (e.norm_equal and e.holds):
                return False, f"embedding check fails for {F}, M={M}"
    a = amplify_cyclic_to_Z(CyclicSignal([1, 0]), 2, 64, Fraction(1, 100))
    if not a.ok or a.excess <= 0:
        return False, a.diagnostic or "amplification has no excess"
    return True, f"{trials} embeddings"


def suite_step(rng, trials):
    for _ in range(trials):
        f = random_signal(rng, size=6, vmax=8)
        a, b = f.hull()
        xs = [Fraction(rng.randint(4 * (a - 2), 4 * (b + 2)), 4) + Fraction(rng.randint(0, 3), 7)]
        if not step_extension_dominates(f, xs).holds:
            return False, f"step extension fails for {f} at {xs}"
    return True, f"{trials} samples"


SUITES = {
    "core-norms": (suite_norms, "Chebyshev, homogeneity, level-set monotonicity"),
    "maximal-operators": (suite_maximal, "domination, sublinearity, shift commutation, cyclic truncation"),
    "averages": (suite_average, "average_op against a direct double loop"),
    "variation": (suite_variation, "variation DP against brute force and truncation monotonicity"),
    "covering": (suite_covering, "covering certificates and the delta witness family"),
    "lp": (suite_lp, "simplex optimality certificates and the vertex oracle"),
    "cyclic-constants": (suite_cyclic_constants, "cyclic weak constants, closed form and surd comparison"),
    "cp-root": (suite_cp, "c_p bracketing and phi(1) = -2"),
    "transference": (suite_transfer, "inner identity, norm scaling, transfer inequality"),
    "embedding": (suite_embedding, "long-cycle embedding and periodic amplification"),
    "step-extension": (suite_step, "continuous step extension dominates the discrete operator"),
}


def run_suites(seed: int = 0, trials: int = 100, names=None):
    results = []
    for name, (fn, _) in SUITES.items():
        if names and name not in names:
            continue
        rng = random.Random(f"{seed}:{name}")
        try:
            ok, detail = fn(rng, trials)
        except Exception as exc:  # a crash is a failing suite, itemized
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"suite": name, "ok": ok, "detail": detail})
    return results
