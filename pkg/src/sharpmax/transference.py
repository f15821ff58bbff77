"""Transference from finite cyclic systems to ``Z^d`` and back.

The product construction ``F_j^K(x, l) = f_j(T^{-K R_K + l} x)`` on
``Z_L x [K R_K]^d``, the inner-box identity, the norm scaling and the
finite-K transfer inequality; the periodic amplification from ``Z_L`` to
``Z``; the embedding of a finitely supported signal into a long cycle; and
the comparison between a discrete signal and its step extension to the line.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .core import (
    DEFAULT_BITS,
    INF,
    CyclicSignal,
    ExponentTuple,
    HighPrec,
    Signal,
    _to_mpf,
    as_fraction,
    lebesgue_norm,
    lebesgue_norm_power,
    parse_exponent,
    rational_power,
    weak_norm,
    weak_norm_power,
)
from .errors import BudgetExceeded, DegenerateInputError, DomainError
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
)

DEFAULT_TRANSFER_BUDGET = 2_000_000


# -- R_K ------------------------------------------------------------------------


@dataclass(frozen=True)
class RKResult:
    """``R_K`` and a point of the box where ``|P_ij| = R_K`` (None if all vanish)."""

    R: int
    witness: Optional[tuple]

    def __int__(self):
        return self.R


def compute_RK(P: PolynomialFamily, K: int, budget: int = DEFAULT_TRANSFER_BUDGET, with_witness: bool = False):
    """Least positive integer bounding every ``|P_ij(l)|`` on ``||l||_inf <= K``."""
    if K < 0:
        raise DomainError("K must be nonnegative")
    if (2 * K + 1) ** P.k > budget:
        raise BudgetExceeded(f"box of {(2 * K + 1) ** P.k} points exceeds the budget")
    best, where = 0, None
    for l in itertools.product(range(-K, K + 1), repeat=P.k):
        for i in range(P.d):
            for j in range(P.m):
                v = abs(P.polys[i][j](l))
                if v > best:
                    best, where = v, (l, i, j)
    R = max(best, 1)
    if with_witness:
        return RKResult(R, where if best == R else None)
    return R


# -- the product construction ----------------------------------------------------


def _orbit_point(system: Cyclic, x: int, shift) -> int:
    return (x + sum(system.step(i) * s for i, s in enumerate(shift))) % system.L


@dataclass(frozen=True)
class ScalingCheck:
    """``||F_j||^p`` against ``(K R)^d ||f_j||^p`` (exact powers when ``p`` is an integer)."""

    j: int
    p: object
    lhs: object
    rhs: object
    holds: bool


@dataclass(frozen=True)
class TransferenceBuild:
    """``F[j][x]`` is the signal ``l -> F_j^K(x, l)`` on ``Z^d``."""

    system: Cyclic
    P: PolynomialFamily
    f: tuple
    K: int
    R: int
    p: ExponentTuple
    F: tuple
    scaling: tuple = field(default=(), compare=False)

    @property
    def d(self) -> int:
        return self.P.d

    @property
    def side(self) -> int:
        return self.K * self.R

    def value(self, j: int, x: int, l) -> Fraction:
        return self.F[j][x % self.system.L](tuple(l))

    def inner_box(self):
        rng = range(self.R + 1, (self.K - 1) * self.R + 1)
        return itertools.product(rng, repeat=self.d)

    @property
    def scaling_ok(self) -> bool:
        return all(s.holds for s in self.scaling)


def _values_multiset(build_F_j, w) -> Counter:
    out = Counter()
    for sig in build_F_j:
        for _, v in sig.items():
            out[abs(v)] += 1
    return out


def _scaling_checks(system, f, F, side, d, p: ExponentTuple):
    checks = []
    box = side ** d
    for j, (fj, Fj) in enumerate(zip(f, F)):
        pj = p.ps[j]
        if pj == INF:
            lhs = max((abs(v) for sig in Fj for _, v in sig.items()), default=Fraction(0))
            rhs = lebesgue_norm(fj, INF)
            checks.append(ScalingCheck(j, pj, lhs, rhs, lhs == rhs))
        elif pj.denominator == 1:
            e = pj.numerator
            lhs = system.w * sum((abs(v) ** e for sig in Fj for _, v in sig.items()), Fraction(0))
            rhs = box * lebesgue_norm_power(fj, pj)
            checks.append(ScalingCheck(j, pj, lhs, rhs, lhs == rhs))
        else:
            # equal multisets of |values| give equal sums for every exponent
            lhs = _values_multiset(Fj, system.w)
            rhs = Counter({v: c * box for v, c in Counter(abs(v) for _, v in fj.items()).items()})
            checks.append(ScalingCheck(j, pj, dict(lhs), dict(rhs), lhs == rhs))
    return tuple(checks)


def build_transfer(
    system: Cyclic,
    P: PolynomialFamily,
    f: Sequence[CyclicSignal],
    K: int,
    p: ExponentTuple,
    budget: int = DEFAULT_TRANSFER_BUDGET,
) -> TransferenceBuild:
    if not isinstance(system, Cyclic):
        raise DomainError("the source system must be cyclic")
    f = tuple(f)
    if len(f) != P.m or len(p.ps) != P.m:
        raise DomainError("need one function and one exponent per column of the family")
    if any(not isinstance(g, CyclicSignal) or g.L != system.L for g in f):
        raise DomainError(f"functions must live on Z_{system.L}")
    if system.steps is not None and len(system.steps) != P.d:
        raise DomainError("one rotation step per transformation is required")
    if K < 3:
        raise DomainError("the inner box is empty unless K >= 3")
    R = compute_RK(P, K, budget)
    side = K * R
    d = P.d
    if system.L * side ** d * P.m > budget:
        raise BudgetExceeded(f"product space of {system.L * side ** d} points exceeds the budget")
    F = []
    for fj in f:
        per_x = []
        for x in range(system.L):
            vals = {}
            for l in itertools.product(range(1, side + 1), repeat=d):
                v = fj(_orbit_point(system, x, [li - side for li in l]))
                if v:
                    vals[l] = v
            per_x.append(Signal(vals, d=d))
        F.append(tuple(per_x))
    F = tuple(F)
    checks = _scaling_checks(system, f, F, side, d, p)
    return TransferenceBuild(system, P, f, K, R, p, F, checks)


def corrupt_build(build: TransferenceBuild, j: int = 0, x: int = 0, l=None, delta=None) -> TransferenceBuild:
    """Copy of ``build`` with one value of ``F_j(x, .)`` changed inside the inner box."""
    if l is None:
        l = (build.R + 2,) * build.d if build.K * build.R > build.R + 2 else (build.R + 1,) * build.d
    l = tuple(l)
    if delta is None:
        top = max((abs(v) for g in build.f for _, v in g.items()), default=Fraction(0))
        delta = 10 * (top + 1)
    sig = build.F[j][x]
    vals = dict(sig.items())
    vals[l] = sig(l) + as_fraction(delta)
    new_j = list(build.F[j])
    new_j[x] = Signal(vals, d=build.d)
    F = list(build.F)
    F[j] = tuple(new_j)
    return replace(build, F=tuple(F))


# -- inner identity ---------------------------------------------------------------


@dataclass
class InnerIdentityReport:
    holds: bool
    checked: int
    mismatches: list


def _product_averages(build: TransferenceBuild, Ns):
    """``avg[x][N]``: the Signal ``l -> A_N F^K(x, l)`` on ``Z^d``."""
    zd = CanonicalZd(build.d)
    out = []
    for x in range(build.system.L):
        fs = [build.F[j][x] for j in range(build.P.m)]
        out.append({N: average_op(zd, build.P, fs, N) for N in Ns})
    return out


def _source_averages(build: TransferenceBuild, Ns):
    return {N: average_op(build.system, build.P, build.f, N) for N in Ns}


def verify_inner_identity(build: TransferenceBuild, O: FunctionalSpec, N_list=None) -> InnerIdentityReport:
    """Compare ``O_K`` of the product averages with ``O_K`` of the source averages
    at every ``(x, l)`` with ``l`` in the inner box ``{R+1, ..., (K-1)R}^d``."""
    Ns = list(range(1, build.K + 1)) if N_list is None else sorted(N_list)
    if any(N < 1 or N > build.K for N in Ns):
        raise DomainError("averaging lengths must lie in [K]")
    O = O.with_K(len(Ns))
    prod = _product_averages(build, Ns)
    src = _source_averages(build, Ns)
    exact = O.kind == "max" or O.r.denominator == 1
    mismatches = []
    checked = 0
    for x in range(build.system.L):
        for l in build.inner_box():
            checked += 1
            y = _orbit_point(build.system, x, [li - build.side for li in l])
            a = [prod[x][N](l) for N in Ns]
            b = [src[N](y) for N in Ns]
            if exact:
                va, vb = functional_power(O, a), functional_power(O, b)
                ok = va == vb
            else:
                va, vb = a, b
                ok = a == b
            if not ok:
                mismatches.append({"x": x, "l": list(l), "product": va, "source": vb})
    return InnerIdentityReport(not mismatches, checked, mismatches)


# -- the finite-K transfer inequality ---------------------------------------------------


class _Sampled:
    """Minimal signal-like view (``items`` and ``weight``) used for norms on the product."""

    def __init__(self, items, weight):
        self._items = [(k, v) for k, v in items if v]
        self.weight = weight

    def items(self):
        return iter(self._items)


def _functional_field(build, O, Ns):
    """Exact ``O_K(...) ** e`` on the product and on the source, ``e = O.exact_power``."""
    prod = _product_averages(build, Ns)
    src = _source_averages(build, Ns)
    G = []
    for x in range(build.system.L):
        pts = set()
        for N in Ns:
            pts.update(prod[x][N].support)
        for l in sorted(pts):
            G.append(((x, l), functional_power(O, [prod[x][N](l) for N in Ns])))
    g = [(x, functional_power(O, [src[N](x) for N in Ns])) for x in range(build.system.L)]
    return G, g


def scaling_factor(K: int, R: int, d: int, p: ExponentTuple, bits: int = DEFAULT_BITS):
    """``((K-2)R)^(-d/p0) * (K R)^(d/p1 + ... + d/pm)``; equals ``(K/(K-2))^(d/p0)``."""
    inv0 = Fraction(0) if p.p0 == INF else 1 / p.p0
    invs = sum((Fraction(0) if q == INF else 1 / q for q in p.ps), Fraction(0))
    a = rational_power(Fraction((K - 2) * R), -d * inv0, bits)
    b = rational_power(Fraction(K * R), d * invs, bits)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return rational_power(Fraction(K, K - 2), d * inv0, bits)


def _weighted_power_sum(items, w, q: Fraction):
    return w * sum((v ** q.numerator for _, v in items), Fraction(0))


def _norm_pair(norm, G, g, w, q, e, copies, p0, bits=DEFAULT_BITS):
    """HighPrec ``||G||_p0`` and ``copies**(1/p0) * ||g||_p0`` from the exact e-th powers."""
    with mpmath.workprec(bits):
        inv = 1 / mpmath.mpf(e)
        a = mpmath.power(_to_mpf(norm(_Sampled(G, w), q, bits)), inv)
        b = mpmath.power(_to_mpf(norm(_Sampled(g, w), q, bits)), inv)
        b *= mpmath.power(copies, 1 / _to_mpf(p0))
        return HighPrec(a, bits), HighPrec(b, bits)


def transfer_bound_demo(
    system: Cyclic,
    P: PolynomialFamily,
    f: Sequence[CyclicSignal],
    O: FunctionalSpec,
    p: ExponentTuple,
    K_list=(3, 4, 5),
    kinds=("strong", "weak"),
    budget: int = DEFAULT_TRANSFER_BUDGET,
) -> dict:
    """Both sides of ``||O_K(A F^K)||_p0 >= ((K-2)R_K)^(d/p0) ||O_K(A f)||_p0`` per K.

    With ``e = O.exact_power`` and ``q = p0/e`` an integer, both sides are
    compared exactly in the form ``sum w (O^e)^q``.  Independently of ``q``,
    the multiset of values of ``O_K(A F^K)`` on the inner box must equal
    ``((K-2)R)^d`` copies of the values of ``O_K(A f)``, which implies the
    inequality for every monotone norm; that check is exact in all cases.
    """
    if not isinstance(p, ExponentTuple):
        raise DomainError("expected an ExponentTuple")
    rows = []
    all_hold = True
    for K in K_list:
        build = build_transfer(system, P, f, K, p, budget)
        Ns = list(range(1, K + 1))
        OK = O.with_K(K)
        e = OK.exact_power
        G, g = _functional_field(build, OK, Ns)
        copies = ((K - 2) * build.R) ** build.d
        inner = set(build.inner_box())
        inner_vals = Counter(v for (x, l), v in G if l in inner)
        zero_inner = system.L * len(inner) - sum(inner_vals.values())
        if zero_inner:
            inner_vals[Fraction(0)] += zero_inner
        src_vals = Counter(v for _, v in g)
        containment = inner_vals == Counter({v: c * copies for v, c in src_vals.items()})
        row = {
            "K": K,
            "R_K": build.R,
            "inner_points": len(inner),
            "scaling_factor": scaling_factor(K, build.R, build.d, p),
            "norm_scaling": build.scaling_ok,
            "containment": containment,
        }
        p0 = p.p0
        q = None if p0 == INF else p0 / e
        for kind in kinds:
            if kind == "strong":
                if q is None:
                    lhs = max((v for _, v in G), default=Fraction(0))
                    rhs = max((v for _, v in g), default=Fraction(0))
                    holds = lhs >= rhs
                elif q.denominator == 1:
                    lhs = _weighted_power_sum(G, system.w, q)
                    rhs = copies * _weighted_power_sum(g, system.w, q)
                    holds = lhs >= rhs
                else:
                    lhs, rhs = _norm_pair(lebesgue_norm, G, g, system.w, q, e, copies, p0)
                    holds = containment and not lhs < rhs
            elif kind == "weak":
                if q is None:
                    raise DomainError("weak transfer needs a finite p0")
                if q.denominator == 1:
                    lhs = weak_norm_power(_Sampled(G, system.w), q)
                    rhs = copies * weak_norm_power(_Sampled(g, system.w), q)
                    holds = lhs >= rhs
                else:
                    lhs, rhs = _norm_pair(weak_norm, G, g, system.w, q, e, copies, p0)
                    holds = containment and not lhs < rhs
            else:
                raise DomainError(f"unknown inequality kind {kind!r}")
            row[kind] = {"lhs": lhs, "rhs": rhs, "holds": holds, "power": q}
            all_hold = all_hold and holds
        all_hold = all_hold and containment and build.scaling_ok
        rows.append(row)
    return {"rows": rows, "holds": all_hold, "exponent": e if rows else None}


# -- amplification Z_L -> Z ------------------------------------------------------------


@dataclass
class AmplificationBuild:
    L: int
    R: int
    eps: Fraction
    p: int
    op: str
    f: CyclicSignal
    F: Signal
    lhs: Fraction
    main_part: Fraction
    tail_part: Fraction
    rho_power: Fraction
    norm_F: Fraction
    bracket: Fraction
    checks: dict
    diagnostic: Optional[str] = None

    @property
    def excess(self) -> Fraction:
        """``||M F 1_W||_p^p - rho^p ||F||_p^p``."""
        return self.lhs - self.rho_power * self.norm_F

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _tail_constants(op):
    # sides of the support carrying a tail, and the window-length factor in the tail bound
    return {"os": (1, 2), "u": (2, 2), "c": (2, 4)}[op]


def amplify_cyclic_to_Z(f: CyclicSignal, p, R: int, eps, rho_power=None, op: str = "os") -> AmplificationBuild:
    """Periodize ``f`` over ``[RL]`` and check the amplified lower bound exactly.

    ``rho_power`` is ``rho_L ** p`` for the best known ratio on ``Z_L``
    (default: the ratio of ``f`` itself).  The checks are the precondition
    ``ratio(f) >= (1-eps) rho`` together with a bracket above 1, the bulk estimate on ``[RL]``, the pointwise
    tail estimate on the adjacent block(s), the resulting bracketed bound,
    and the strict excess over ``rho^p ||F||_p^p``.
    """
    p = parse_exponent(p)
    if p == INF or p.denominator != 1 or p <= 1:
        raise DomainError("amplification is checked exactly for integer p > 1")
    if op not in OPERATORS:
        raise DomainError(f"unknown operator {op!r}")
    if any(v < 0 for _, v in f.items()):
        raise DomainError("amplification needs f >= 0")
    if f.is_zero():
        raise DegenerateInputError("amplification of the zero function")
    if R < 1:
        raise DomainError("R must be positive")
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    e = p.numerator
    L = f.L
    f1 = f.with_weight(1)
    Mf = maximal(f1, op)
    ratio_power = lebesgue_norm_power(Mf, p) / lebesgue_norm_power(f1, p)
    rho_power = ratio_power if rho_power is None else as_fraction(rho_power)

    F = Signal({l: f1(l) for l in range(1, R * L + 1) if f1(l)})
    norm_F = lebesgue_norm_power(F, p)
    MF = MaximalFunction(F, op)
    sides, c = _tail_constants(op)
    lo = -R * L + 1
    hi = R * L if sides == 1 else 2 * R * L
    main = sum((MF(l) ** e for l in range(1, R * L + 1)), Fraction(0))
    tail_pts = list(range(lo, 1)) + (list(range(R * L + 1, hi + 1)) if sides == 2 else [])
    tail = sum((MF(l) ** e for l in tail_pts), Fraction(0))
    lhs = main + tail

    one = 1 - eps
    point_floor = lebesgue_norm_power(Mf, p) / (c ** e * L ** (e + 1))
    bracket = one ** (2 * e) + sides * one ** e / (c * L) ** e
    checks = {
        # the bound forces an excess only when the bracket exceeds 1
        "precondition": ratio_power >= one ** e * rho_power and bracket > 1,
        "pointwise_tail": all(MF(l) ** e >= point_floor for l in tail_pts),
        "bulk": main >= one ** (2 * e) * rho_power * norm_F,
        "tail": tail >= sides * one ** e * rho_power * norm_F / (c * L) ** e,
        "bound": lhs >= bracket * rho_power * norm_F,
        "excess": lhs > rho_power * norm_F,
    }
    diag = None
    failed = [k for k, v in checks.items() if not v]
    if failed:
        margin = lhs - bracket * rho_power * norm_F
        diag = f"failed {', '.join(failed)} at R={R}, eps={eps}; margin {margin}, excess {lhs - rho_power * norm_F}"
    return AmplificationBuild(L, R, eps, e, op, f, F, lhs, main, tail, rho_power, norm_F, bracket, checks, diag)


def minimal_amplification_R(f: CyclicSignal, p, eps, rho_power=None, op: str = "os", R_max: int = 4096):
    """First ``R`` in ``1, 2, 4, ...`` for which every check passes, with its build."""
    R = 1
    last = None
    while R <= R_max:
        last = amplify_cyclic_to_Z(f, p, R, eps, rho_power, op)
        if last.ok:
            return R, last
        R *= 2
    return None, last


# -- embedding into a long cycle ----------------------------------------------------------


@dataclass
class EmbeddingBuild:
    L: int
    M: int
    F: Signal
    f: CyclicSignal
    norm_equal: bool
    pointwise: bool
    lhs: object
    rhs: object
    holds: bool


def rokhlin_embed(F: Signal, M: int, p, L: Optional[int] = None, weight=1) -> EmbeddingBuild:
    """Place ``F`` (supported in ``[L]``) on ``Z_M`` by ``f(-l) = F(L+1-l)``, ``l in [L]``.

    ``lhs`` is the one-sided maximal norm on ``Z_M`` and ``rhs`` that of
    ``M_os F`` restricted to ``[L]`` (p-th powers for integer p).  The
    pointwise flag records ``M f(M-L-1+k) >= M F(k)`` for ``k in [L]``, which
    gives the inequality for every ``p``.
    """
    p = parse_exponent(p)
    if F.d != 1:
        raise DomainError("embedding expects a signal on Z")
    if L is None:
        L = max((x for (x,), _ in F.items()), default=1)
    if any(not 1 <= x <= L for (x,), _ in F.items()):
        raise DomainError(f"support must lie in [1, {L}]")
    if M < 2 * L:
        raise DomainError("host cycle must have length at least 2L")
    vals = [Fraction(0)] * M
    for l in range(1, L + 1):
        vals[(-l) % M] = F(L + 1 - l)
    f = CyclicSignal(vals, weight)
    w = f.weight
    Mf = maximal(f, "os")
    MF = MaximalFunction(F, "os") if not F.is_zero() else None
    restricted = Signal({k: MF(k) for k in range(1, L + 1)} if MF else {})
    pointwise = all(Mf(M - L - 1 + k) >= (MF(k) if MF else 0) for k in range(1, L + 1))
    if p == INF:
        norm_equal = lebesgue_norm(f, INF) == lebesgue_norm(F, INF)
        lhs, rhs = lebesgue_norm(Mf, INF), lebesgue_norm(restricted, INF)
        holds = lhs >= rhs
    elif p.denominator == 1:
        norm_equal = lebesgue_norm_power(f, p) == w * lebesgue_norm_power(F, p)
        lhs = lebesgue_norm_power(Mf, p)
        rhs = w * lebesgue_norm_power(restricted, p)
        holds = lhs >= rhs
    else:
        norm_equal = Counter(abs(v) for _, v in f.items()) == Counter(abs(v) for _, v in F.items())
        lhs, rhs = lebesgue_norm(Mf, p), lebesgue_norm(restricted.scale(1), p)
        holds = pointwise
    return EmbeddingBuild(L, M, F, f, norm_equal, pointwise, lhs, rhs, holds and pointwise)


# -- step extension to the line -------------------------------------------------------------


@dataclass(frozen=True)
class StepFunction:
    """Value ``values[i]`` on ``[breakpoints[i], breakpoints[i+1])``, zero outside."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        b = tuple(as_fraction(x) for x in self.breakpoints)
        v = tuple(as_fraction(x) for x in self.values)
        if len(b) != len(v) + 1 or any(b[i] >= b[i + 1] for i in range(len(v))):
            raise DomainError("need increasing breakpoints, one more than values")
        if any(x < 0 for x in v):
            raise DomainError("step functions here are nonnegative")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_signal(cls, f: Signal) -> "StepFunction":
        """``f_cont(x) = f(l)`` for ``x in [l, l+1)``."""
        if f.is_zero():
            return cls((Fraction(0), Fraction(1)), (Fraction(0),))
        a, b = f.hull()
        return cls(tuple(range(a, b + 2)), tuple(f(l) for l in range(a, b + 1)))

    def integral(self, s, t) -> Fraction:
        s, t = as_fraction(s), as_fraction(t)
        if t < s:
            raise DomainError("empty interval")
        total = Fraction(0)
        b = self.breakpoints
        for i, v in enumerate(self.values):
            lo, hi = max(s, b[i]), min(t, b[i + 1])
            if hi > lo:
                total += v * (hi - lo)
        return total

    def uncentered_maximal(self, x):
        """Sup of averages over closed intervals containing ``x``.

        Between consecutive breakpoints the average is monotone in each
        endpoint, so the sup is attained with endpoints in breakpoints and x.
        """
        x = as_fraction(x)
        cands = sorted(set(self.breakpoints) | {x})
        left = [s for s in cands if s <= x]
        right = [t for t in cands if t >= x]
        best = Fraction(0)
        for s in left:
            for t in right:
                if t > s:
                    avg = self.integral(s, t) / (t - s)
                    if avg > best:
                        best = avg
        return best


@dataclass
class StepReport:
    holds: bool
    rows: list


def step_extension_dominates(f_dis: Signal, sample_xs) -> StepReport:
    """``M_R^u f_cont(x) >= M^u f_dis(floor(x))`` at every sample."""
    if f_dis.d != 1:
        raise DomainError("step extension is defined on Z")
    if any(v < 0 for _, v in f_dis.items()):
        raise DomainError("f_dis must be nonnegative")
    step = StepFunction.from_signal(f_dis)
    Md = MaximalFunction(f_dis, "u") if not f_dis.is_zero() else None
    rows = []
    ok = True
    for x in sample_xs:
        x = as_fraction(x)
        cont = step.uncentered_maximal(x)
        disc = Md(math.floor(x)) if Md else Fraction(0)
        good = cont >= disc
        ok = ok and good
        rows.append({"x": x, "continuous": cont, "discrete": disc, "holds": good})
    return StepReport(ok, rows)
