"""Polynomial averaging operators, the three ergodic maximal operators and
the truncated sequence functionals (maximum and r-variation)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .core import (
    DEFAULT_BITS,
    CyclicSignal,
    HighPrec,
    Signal,
    _to_mpf,
    as_fraction,
    exact_root,
)
from .errors import ArityError, BudgetExceeded, DomainError

OPERATORS = ("os", "c", "u")

DEFAULT_AVERAGE_BUDGET = 2_000_000


# -- polynomial orbit data ----------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in ``k`` variables, stored as ``(exponents, coeff)`` terms."""

    k: int
    terms: tuple

    def __post_init__(self):
        clean = {}
        for exps, c in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.k or any(e < 0 for e in exps):
                raise DomainError(f"bad exponent vector {exps} for k={self.k}")
            if int(c) != c:
                raise DomainError("polynomial coefficients must be integers")
            clean[exps] = clean.get(exps, 0) + int(c)
        object.__setattr__(self, "terms", tuple(sorted((e, c) for e, c in clean.items() if c)))

    @classmethod
    def monomial(cls, exps, coeff=1):
        exps = tuple(exps)
        return cls(len(exps), ((exps, coeff),))

    def __call__(self, n) -> int:
        total = 0
        for exps, c in self.terms:
            t = c
            for v, e in zip(n, exps):
                t *= v ** e
            total += t
        return total


@dataclass(frozen=True)
class PolynomialFamily:
    """``d x m`` array of ``k``-variate integer polynomials ``P[i][j]``.

    Integer coefficients make every ``P[i][j]`` map ``Z^k`` into ``Z``, which
    is all the averaging operators need.
    """

    d: int
    m: int
    k: int
    polys: tuple

    def __post_init__(self):
        polys = tuple(tuple(row) for row in self.polys)
        if len(polys) != self.d or any(len(row) != self.m for row in polys):
            raise DomainError("polynomial array must have shape d x m")
        for row in polys:
            for p in row:
                if p.k != self.k:
                    raise DomainError("all polynomials must have the same number of variables")
        object.__setattr__(self, "polys", polys)

    @classmethod
    def single(cls, poly: Polynomial):
        return cls(1, 1, poly.k, ((poly,),))

    @classmethod
    def linear(cls):
        """``P(n) = n`` with ``d = m = k = 1``."""
        return cls.single(Polynomial.monomial((1,)))

    @classmethod
    def power(cls, e: int):
        return cls.single(Polynomial.monomial((e,)))

    def orbit_vector(self, j: int, n) -> tuple:
        """``(P[1][j](n), ..., P[d][j](n))``."""
        return tuple(self.polys[i][j](n) for i in range(self.d))

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "k": self.k,
            "polys": [[[[list(e), c] for e, c in p.terms] for p in row] for row in self.polys],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PolynomialFamily":
        d, m, k = int(doc["d"]), int(doc["m"]), int(doc["k"])
        rows = []
        for row in doc["polys"]:
            rows.append(tuple(Polynomial(k, tuple((tuple(e), c) for e, c in p)) for p in row))
        return cls(d, m, k, tuple(rows))


# -- systems ------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalZd:
    """``Z^d`` with counting measure and the ``d`` coordinate shifts."""

    d: int = 1


@dataclass(frozen=True)
class Cyclic:
    """``Z_L`` with atom weight ``w``.

    With ``d > 1`` transformations, ``T_i`` is rotation by ``steps[i]``
    (default 1 for every i), so the family commutes.
    """

    L: int
    w: Fraction = Fraction(1)
    steps: Optional[tuple] = None

    def __post_init__(self):
        if self.L < 1:
            raise DomainError("cycle length must be positive")
        object.__setattr__(self, "w", as_fraction(self.w))

    def step(self, i: int) -> int:
        return 1 if self.steps is None else self.steps[i]


def average_op(system, P: PolynomialFamily, f: Sequence, N: int, budget: int = DEFAULT_AVERAGE_BUDGET):
    """``x -> E_{n in [N]^k} prod_j f_j(T_1^{P_1j(n)} ... T_d^{P_dj(n)} x)``, exactly."""
    f = tuple(f)
    if len(f) != P.m:
        raise ArityError(f"family expects {P.m} functions, got {len(f)}")
    if N < 1:
        raise DomainError("N must be a positive integer")
    box = list(itertools.product(range(1, N + 1), repeat=P.k))
    scale = Fraction(1, N ** P.k)

    if isinstance(system, CanonicalZd):
        if any(not isinstance(g, Signal) or g.d != system.d for g in f):
            raise DomainError(f"canonical system expects signals on Z^{system.d}")
        if system.d != P.d:
            raise DomainError("polynomial family and system disagree on d")
        if len(box) * max(len(f[0].support), 1) > budget:
            raise BudgetExceeded(f"averaging needs {len(box) * len(f[0].support)} evaluations")
        acc = {}
        for n in box:
            shifts = [P.orbit_vector(j, n) for j in range(P.m)]
            s0 = shifts[0]
            for y, v0 in f[0].items():
                x = tuple(a - b for a, b in zip(y, s0))
                prod = v0
                for j in range(1, P.m):
                    if not prod:
                        break
                    prod *= f[j](tuple(a + b for a, b in zip(x, shifts[j])))
                if prod:
                    acc[x] = acc.get(x, 0) + prod
        return Signal({x: scale * v for x, v in acc.items()}, d=system.d)

    if isinstance(system, Cyclic):
        L = system.L
        if any(not isinstance(g, CyclicSignal) or g.L != L for g in f):
            raise DomainError(f"cyclic system expects signals on Z_{L}")
        if len(box) * L > budget:
            raise BudgetExceeded(f"averaging needs {len(box) * L} evaluations")
        offsets = []
        for n in box:
            offsets.append(
                [sum(system.step(i) * P.polys[i][j](n) for i in range(P.d)) for j in range(P.m)]
            )
        out = []
        for x in range(L):
            total = Fraction(0)
            for offs in offsets:
                prod = Fraction(1)
                for g, o in zip(f, offs):
                    prod *= g(x + o)
                    if not prod:
                        break
                total += prod
            out.append(scale * total)
        return CyclicSignal(out, f[0].weight)

    raise DomainError(f"unknown system {system!r}")


# -- maximal operators ----------------------------------------------------------


def _check_op(op):
    if op not in OPERATORS:
        raise DomainError(f"operator must be one of {OPERATORS}, got {op!r}")


class MaximalFunction:
    """Pointwise maximal function of a finitely supported ``f`` on ``Z``.

    The output has infinite support, so it is kept lazy: evaluate it at
    points, restrict it to a window, or ask for a (finite) level set.

    Every window that reaches past the support hull ``[a, b]`` on a side
    where it could stop at the hull has the same sum and a longer length,
    so only windows with endpoints inside ``[a, b]`` (or at ``x``) matter.
    """

    def __init__(self, f: Signal, op: str):
        _check_op(op)
        if not isinstance(f, Signal) or f.d != 1:
            raise DomainError("maximal operators on Z take 1-dimensional signals")
        self.f = f
        self.op = op
        hull = f.hull()
        if hull is None:
            self.a = self.b = 0
            self._prefix = [Fraction(0), Fraction(0)]
        else:
            self.a, self.b = hull
            pre = [Fraction(0)]
            for x in range(self.a, self.b + 1):
                pre.append(pre[-1] + f(x))
            self._prefix = pre
        self.l1 = sum((abs(v) for _, v in f.items()), Fraction(0))
        self._cache = {}
        # integer prefix sums scaled by a common denominator, for exact threshold tests
        self._den = math.lcm(*(v.denominator for v in self._prefix))
        self._iprefix = [int(v * self._den) for v in self._prefix]

    def window_sum(self, s: int, t: int) -> Fraction:
        """Sum of ``f`` over ``{s, ..., t}``."""
        s, t = max(s, self.a), min(t, self.b)
        if s > t:
            return Fraction(0)
        return self._prefix[t - self.a + 1] - self._prefix[s - self.a]

    def window_meets(self, s: int, t: int, lam: Fraction) -> bool:
        """``|sum of f over {s..t}| >= lam * (t - s + 1)``, in integer arithmetic."""
        lo, hi = max(s, self.a), min(t, self.b)
        total = self._iprefix[hi - self.a + 1] - self._iprefix[lo - self.a] if lo <= hi else 0
        return abs(total) * lam.denominator >= lam.numerator * self._den * (t - s + 1)

    def meets(self, x: int, lam) -> bool:
        """``M f(x) >= lam`` without forming any average."""
        lam = as_fraction(lam)
        v = self._cache.get(x)
        if v is not None:
            return v >= lam
        if self.f.is_zero():
            return False
        return any(self.window_meets(s, t, lam) for s, t in self._windows(x))

    def _windows(self, x: int):
        """Admissible windows ``(s, t)`` through ``x`` that meet the support hull."""
        a, b = self.a, self.b
        if self.op == "os":
            for n in range(max(0, a - x), max(0, b - x) + 1):
                yield x, x + n
        elif self.op == "c":
            for r in range(max(0, a - x, x - b), max(abs(x - a), abs(x - b)) + 1):
                yield x - r, x + r
        else:
            for r1 in range(max(0, x - b), max(0, x - a) + 1):
                for r2 in range(max(0, a - x), max(0, b - x) + 1):
                    yield x - r1, x + r2

    def _eval(self, x: int) -> Fraction:
        if self.f.is_zero():
            return Fraction(0)
        best = Fraction(0)
        for s, t in self._windows(x):
            v = abs(self.window_sum(s, t)) / (t - s + 1)
            if v > best:
                best = v
        return best

    def __call__(self, x) -> Fraction:
        if isinstance(x, tuple):
            (x,) = x
        v = self._cache.get(x)
        if v is None:
            v = self._cache[x] = self._eval(x)
        return v

    def reach(self, lam) -> tuple:
        """Interval outside of which ``|Mf| < lam`` (``|Mf(x)| <= ||f||_1/(dist+1)``)."""
        lam = as_fraction(lam)
        if lam <= 0:
            raise DomainError("level must be positive")
        spread = int(self.l1 / lam)
        # forward windows from x > b see nothing
        return self.a - spread, self.b if self.op == "os" else self.b + spread

    def level_set(self, lam) -> frozenset:
        lo, hi = self.reach(lam)
        lam = as_fraction(lam)
        return frozenset((x,) for x in range(lo, hi + 1) if self.meets(x, lam))

    def restrict(self, lo: int, hi: int) -> Signal:
        return Signal({x: self(x) for x in range(lo, hi + 1)})

    def __repr__(self):
        return f"MaximalFunction(op={self.op!r}, hull=[{self.a}, {self.b}])"


def _cyclic_bound(L: int, op: str, n_max):
    if n_max is not None:
        if n_max < 0:
            raise DomainError("window bound must be nonnegative")
        return n_max
    return L if op == "os" else 2 * L


def _cyclic_maximal(f: CyclicSignal, op: str, n_max=None) -> CyclicSignal:
    L = f.L
    n = _cyclic_bound(L, op, n_max)
    # prefix sums of the periodic extension on [-n, n + L)
    base = -n
    ext = [f(i) for i in range(base, L + n)]
    pre = [Fraction(0)]
    for v in ext:
        pre.append(pre[-1] + v)

    def wsum(s, t):
        return pre[t - base + 1] - pre[s - base]

    out = []
    for x in range(L):
        best = Fraction(0)
        if op == "os":
            for k in range(n + 1):
                v = abs(wsum(x, x + k)) / (k + 1)
                if v > best:
                    best = v
        elif op == "c":
            for r in range(n + 1):
                v = abs(wsum(x - r, x + r)) / (2 * r + 1)
                if v > best:
                    best = v
        else:
            for r1 in range(n + 1):
                for r2 in range(n + 1):
                    v = abs(wsum(x - r1, x + r2)) / (r1 + r2 + 1)
                    if v > best:
                        best = v
        out.append(best)
    return CyclicSignal(out, f.weight)


def maximal(f, op: str, n_max=None):
    """Dispatch to the one-sided (``os``), centered (``c``) or uncentered (``u``) operator.

    On ``Z_L`` windows are truncated at ``n_max`` (default ``L`` for the
    one-sided operator and ``2L`` otherwise).  Radii ``<= L - 1`` already
    attain the supremum: a window longer than a period splits off a full
    period, leaving a convex combination of the mean and a shorter window
    average, and the mean itself is dominated by a short window.
    """
    _check_op(op)
    if isinstance(f, CyclicSignal):
        return _cyclic_maximal(f, op, n_max)
    return MaximalFunction(f, op)


def maximal_one_sided(f, n_max=None):
    return maximal(f, "os", n_max)


def maximal_centered(f, n_max=None):
    return maximal(f, "c", n_max)


def maximal_uncentered(f, n_max=None):
    return maximal(f, "u", n_max)


# -- sequence functionals -------------------------------------------------------


@dataclass(frozen=True)
class FunctionalSpec:
    """Truncated functional: ``max`` of ``|a_n|`` or the r-variation, over ``n <= K``."""

    kind: str
    K: int
    r: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("max", "variation"):
            raise DomainError(f"unknown functional {self.kind!r}")
        if self.K < 1:
            raise DomainError("truncation length K must be positive")
        r = as_fraction(self.r)
        if self.kind == "variation" and r < 1:
            raise DomainError("r-variation needs r >= 1")
        object.__setattr__(self, "r", r)

    @classmethod
    def max(cls, K: int):
        return cls("max", K)

    @classmethod
    def variation(cls, r, K: int):
        return cls("variation", K, as_fraction(r))

    def with_K(self, K: int) -> "FunctionalSpec":
        return FunctionalSpec(self.kind, K, self.r)

    @property
    def exact_power(self) -> int:
        """Exponent ``e`` such that ``functional_power`` returns value**e exactly."""
        if self.kind == "max":
            return 1
        if self.r.denominator != 1:
            raise DomainError("exact powers need an integer r")
        return self.r.numerator


def variation_power(a: Sequence, r) -> Fraction:
    """``sup (sum_j |a_{n_j} - a_{n_{j-1}}|**r)`` over increasing index chains, exactly.

    ``best[j]`` is the largest sum over chains ending at ``j``.
    """
    r = as_fraction(r)
    if r < 1:
        raise DomainError("r-variation needs r >= 1")
    if r.denominator != 1:
        raise DomainError("exact variation power needs an integer r")
    e = r.numerator
    a = [as_fraction(v) for v in a]
    best = [Fraction(0)] * len(a)
    for j in range(1, len(a)):
        bj = Fraction(0)
        aj = a[j]
        for i in range(j):
            v = best[i] + abs(aj - a[i]) ** e
            if v > bj:
                bj = v
        best[j] = bj
    return max(best, default=Fraction(0))


def _variation_highprec(a, r: Fraction, bits: int):
    with mpmath.workprec(bits + 16):
        rr = _to_mpf(r)
        vals = [_to_mpf(as_fraction(v)) for v in a]
        best = [mpmath.mpf(0)] * len(vals)
        for j in range(1, len(vals)):
            best[j] = max(
                [mpmath.mpf(0)] + [best[i] + mpmath.power(abs(vals[j] - vals[i]), rr) for i in range(j)]
            )
        top = max(best, default=mpmath.mpf(0))
        return HighPrec(+mpmath.power(top, 1 / rr), bits)


def _check_length(spec: FunctionalSpec, a):
    if len(a) != spec.K:
        raise DomainError(f"functional truncated at K={spec.K} got {len(a)} terms")


def functional_power(spec: FunctionalSpec, a: Sequence) -> Fraction:
    """Exact ``O_K(a) ** spec.exact_power``."""
    _check_length(spec, a)
    if spec.kind == "max":
        return max((abs(as_fraction(v)) for v in a), default=Fraction(0))
    return variation_power(a, spec.r)


def functional_apply(spec: FunctionalSpec, a: Sequence, bits: int = DEFAULT_BITS):
    """``O_K(a_1, ..., a_K)``; a Fraction for the maximum, and for the
    variation whenever the r-th root of the exact power is rational."""
    _check_length(spec, a)
    if spec.kind == "max":
        return functional_power(spec, a)
    if spec.r.denominator != 1:
        return _variation_highprec(a, spec.r, bits)
    s = variation_power(a, spec.r)
    root = exact_root(s, spec.r.numerator)
    if root is not None:
        return root
    with mpmath.workprec(bits):
        return HighPrec(mpmath.root(_to_mpf(s), spec.r.numerator), bits)


BRUTEFORCE_MAX_K = 20


def variation_bruteforce(r, a: Sequence) -> Fraction:
    """Oracle: r-th power of the r-variation by enumerating all index subsets."""
    r = as_fraction(r)
    if r.denominator != 1 or r < 1:
        raise DomainError("brute force needs an integer r >= 1")
    if len(a) > BRUTEFORCE_MAX_K:
        raise BudgetExceeded(f"2^{len(a)} subsets exceed the enumeration budget")
    e = r.numerator
    a = [as_fraction(v) for v in a]
    best = Fraction(0)
    K = len(a)
    for mask in range(1 << K):
        idx = [i for i in range(K) if mask >> i & 1]
        s = sum((abs(a[j] - a[i]) ** e for i, j in zip(idx, idx[1:])), Fraction(0))
        if s > best:
            best = s
    return best
