"""Sharp constants of the weak (1,1) and strong (p,p) maximal inequalities.

Exact ratios for concrete witnesses, the greedy covering certificate for
the one-sided operator on ``Z``, exhaustive LP searches for the weak
constants on finite cycles, the root ``c_p`` and the table of reference
values on ``Z``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .core import (
    DEFAULT_BITS,
    INF,
    CyclicSignal,
    HighPrec,
    Signal,
    _to_mpf,
    as_fraction,
    exact_root,
    lebesgue_norm,
    lebesgue_norm_power,
    level_set,
    parse_exponent,
    rational_power,
)
from .errors import BudgetExceeded, DegenerateInputError, DomainError
from .lp import LpProblem, LpSolution, lp_solve, vertex_enumeration
from .operators import OPERATORS, MaximalFunction, maximal

# -- exact comparison against quadratic surds ------------------------------------


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number ``(a + b*sqrt(c)) / d`` with ``b >= 0``, ``c >= 0``, ``d > 0``."""

    a: int
    b: int
    c: int
    d: int

    def compare(self, x) -> int:
        """Sign of ``x - self``, decided with integer arithmetic only."""
        x = as_fraction(x)
        t = self.d * x - self.a
        rhs = self.b * self.b * self.c  # (b sqrt c)^2
        if t < 0:
            return -1 if rhs > 0 or t < 0 else 0
        tt = t * t
        return (tt > rhs) - (tt < rhs)

    def __gt__(self, x):
        return self.compare(x) < 0

    def __lt__(self, x):
        return self.compare(x) > 0

    def highprec(self, bits: int = DEFAULT_BITS) -> HighPrec:
        with mpmath.workprec(bits):
            return HighPrec((self.a + self.b * mpmath.sqrt(self.c)) / self.d, bits)

    def __float__(self):
        return (self.a + self.b * math.sqrt(self.c)) / self.d

    def __str__(self):
        return f"({self.a}+{self.b}*sqrt({self.c}))/{self.d}"


MELAS = QuadraticSurd(11, 1, 61, 12)


# -- ratio reports ---------------------------------------------------------------


@dataclass
class RatioReport:
    """One witness ratio; ``value`` is exact whenever the arithmetic allows.

    ``exact_power`` holds ``value ** p`` as a Fraction when that is rational.
    For ratios on ``Z`` with ``1 < p < inf`` only a window of the output is
    summed, so ``value`` is a lower bound and ``details['upper']`` an upper one.
    """

    operator: str
    p: object
    kind: str
    value: object
    witness: object
    level: Optional[Fraction] = None
    exact_power: Optional[Fraction] = None
    lower_bound: bool = False
    details: dict = field(default_factory=dict)

    def replay(self) -> bool:
        if self.kind == "weak":
            again = weak_ratio(self.witness, self.level, self.operator, self.p)
        elif "certificate" in self.details:
            return self.details["certificate"].verify() == self.exact_power
        else:
            again = strong_ratio(self.witness, self.operator, self.p, **self.details.get("options", {}))
        if self.exact_power is not None:
            return again.exact_power == self.exact_power
        return again.value == self.value


def _root_of_power(x: Fraction, p, bits=DEFAULT_BITS):
    """``x ** (1/p)`` exactly when rational, else HighPrec."""
    if p == 1:
        return x
    if p.denominator == 1:
        r = exact_root(x, p.numerator)
        if r is not None:
            return r
    with mpmath.workprec(bits):
        return HighPrec(mpmath.power(_to_mpf(x), 1 / _to_mpf(p)), bits)


def _maximal_level_set(Mf, lam):
    if isinstance(Mf, MaximalFunction):
        return Mf.level_set(lam)
    return level_set(Mf, lam)


def weak_ratio(f, lam, op: str, p=1, n_max=None) -> RatioReport:
    """``lam * mu(M f >= lam)**(1/p) / ||f||_p``."""
    p = parse_exponent(p)
    lam = as_fraction(lam)
    if p == INF:
        raise DomainError("weak ratios need finite p")
    if lam <= 0:
        raise DomainError("level must be positive")
    if f.is_zero():
        raise DegenerateInputError("ratio of the zero function")
    Mf = maximal(f, op, n_max)
    E = _maximal_level_set(Mf, lam)
    mu = len(E) * f.weight
    power = None
    if p.denominator == 1:
        power = lam ** p.numerator * mu / lebesgue_norm_power(f, p)
        value = _root_of_power(power, p)
    else:
        with mpmath.workprec(DEFAULT_BITS):
            num = _to_mpf(lam) * mpmath.power(_to_mpf(mu), 1 / _to_mpf(p))
            value = HighPrec(num / _to_mpf(lebesgue_norm(f, p)), DEFAULT_BITS)
    return RatioReport(op, p, "weak", value, f, level=lam, exact_power=power, details={"level_set_size": len(E)})


def _line_tail_bound(l1: Fraction, W: int, p: Fraction) -> Fraction:
    """Bound on ``sum |Mf(x)|**p`` over points farther than ``W`` from the hull.

    Uses ``|Mf(x)| <= ||f||_1 / (dist + 1)`` and an integral comparison.
    """
    e = p.numerator
    return 2 * l1 ** e * Fraction(1, (W + 1) ** (e - 1)) / (e - 1)


def strong_ratio(f, op: str, p, window: Optional[int] = None) -> RatioReport:
    """``||M f||_p / ||f||_p``.

    On ``Z`` with finite ``p`` the output is summed over the hull widened by
    ``window`` on each side, giving an exact lower bound; the remaining tail
    is bounded above (integer ``p`` only) and stored in ``details``.
    """
    p = parse_exponent(p)
    if op not in OPERATORS:
        raise DomainError(f"unknown operator {op!r}")
    if f.is_zero():
        raise DegenerateInputError("ratio of the zero function")
    if p != INF and p <= 1:
        raise DomainError("strong ratios are considered for p in (1, inf]")
    Mf = maximal(f, op)
    if isinstance(f, CyclicSignal):
        if p == INF:
            value = lebesgue_norm(Mf, INF) / lebesgue_norm(f, INF)
            return RatioReport(op, p, "strong", value, f, exact_power=value)
        if p.denominator == 1:
            power = lebesgue_norm_power(Mf, p) / lebesgue_norm_power(f, p)
            return RatioReport(op, p, "strong", _root_of_power(power, p), f, exact_power=power)
        with mpmath.workprec(DEFAULT_BITS):
            v = _to_mpf(lebesgue_norm(Mf, p)) / _to_mpf(lebesgue_norm(f, p))
        return RatioReport(op, p, "strong", HighPrec(v, DEFAULT_BITS), f)

    a, b = f.hull()
    if p == INF:
        sup = max(Mf(x) for x in range(a, b + 1))
        value = sup / lebesgue_norm(f, INF)
        return RatioReport(op, p, "strong", value, f, exact_power=value)
    if window is None:
        window = 4 * (b - a + 1) + 16
    Mwin = Mf.restrict(a - window, b + window)
    opts = {"window": window}
    if p.denominator != 1:
        with mpmath.workprec(DEFAULT_BITS):
            v = _to_mpf(lebesgue_norm(Mwin, p)) / _to_mpf(lebesgue_norm(f, p))
        return RatioReport(op, p, "strong", HighPrec(v, DEFAULT_BITS), f, lower_bound=True, details={"options": opts})
    norm_p = lebesgue_norm_power(f, p)
    partial = lebesgue_norm_power(Mwin, p) / norm_p
    tail = _line_tail_bound(Mf.l1, window, p) / norm_p
    return RatioReport(
        op,
        p,
        "strong",
        _root_of_power(partial, p),
        f,
        exact_power=partial,
        lower_bound=True,
        details={
            "options": opts,
            "tail_power_bound": tail,
            "upper": _root_of_power(partial + tail, p),
        },
    )


# -- covering certificate (one-sided weak (1,1) on Z) --------------------------------


@dataclass(frozen=True)
class CoveringCertificate:
    """Disjoint blocks ``D_j`` covering ``{M_os f >= lam}``, each of average ``>= lam``.

    ``blocks[j]`` is ``(start, end)`` or None when ``D_j`` is empty.
    """

    f: Signal
    level: Fraction
    anchors: tuple
    radii: tuple
    blocks: tuple

    def block_points(self, j):
        blk = self.blocks[j]
        return () if blk is None else tuple(range(blk[0], blk[1] + 1))

    def validate(self) -> bool:
        seen = set()
        for j in range(len(self.blocks)):
            pts = self.block_points(j)
            if seen.intersection(pts):
                return False
            seen.update(pts)
            if pts and sum((self.f(x) for x in pts), Fraction(0)) < self.level * len(pts):
                return False
        return set(self.anchors) <= seen

    def bound(self):
        """``(lam * |E|, sum of f over the blocks, ||f||_1)``; nondecreasing for valid certificates of f >= 0."""
        covered = sum((self.f(x) for j in range(len(self.blocks)) for x in self.block_points(j)), Fraction(0))
        return self.level * len(self.anchors), covered, lebesgue_norm(self.f, 1)


def one_sided_covering_certificate(f: Signal, lam) -> CoveringCertificate:
    """Greedy block construction: anchor every point of the level set, stretch
    each block to the shortest forward window of average ``>= lam``, then
    remove what earlier blocks already cover."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise DomainError("level must be positive")
    if any(v < 0 for _, v in f.items()):
        raise DomainError("the covering argument needs f >= 0")
    Mf = MaximalFunction(f, "os")
    anchors = sorted(x for (x,) in Mf.level_set(lam))
    radii, blocks = [], []
    reach = None  # right end of the union of earlier blocks
    for l in anchors:
        n = max(0, Mf.a - l)  # shorter windows miss the support
        while not Mf.window_meets(l, l + n, lam):
            n += 1
        radii.append(n)
        start = l if reach is None else max(l, reach + 1)
        end = l + n
        blocks.append((start, end) if start <= end else None)
        reach = end if reach is None else max(reach, end)
    return CoveringCertificate(f, lam, tuple(anchors), tuple(radii), tuple(blocks))


# -- window LPs on Z_L ------------------------------------------------------------


def window_row(L: int, start: int, length: int) -> tuple:
    """Multiplicities of each residue in the window ``{start, ..., start+length-1}`` mod L."""
    row = [0] * L
    for i in range(start, start + length):
        row[i % L] += 1
    return tuple(row)


def window_problem(L: int, windows, box=True) -> LpProblem:
    """``min sum x`` subject to ``sum_W x >= |W|`` for each window and ``0 <= x <= L``."""
    rows, rhs, labels = [], [], []
    for start, length in windows:
        rows.append(window_row(L, start, length))
        rhs.append(length)
        labels.append(("window", start, length))
    if box:
        for l in range(L):
            rows.append(tuple(-int(i == l) for i in range(L)))
            rhs.append(-L)
            labels.append(("box", l))
    return LpProblem(L, (1,) * L, tuple(rows), tuple(rhs), tuple(labels))


def centered_problem(L: int, E, radii) -> LpProblem:
    return window_problem(L, [(l - n, 2 * n + 1) for l, n in zip(E, radii)])


def _dihedral(L: int, reflect: bool):
    maps = [lambda x, s=s: (x + s) % L for s in range(L)]
    if reflect:
        maps += [lambda x, s=s: (s - x) % L for s in range(L)]
    return maps


def _canonical_subsets(L: int, reflect: bool, reduce: bool):
    """Nonempty subsets of Z_L, one per orbit of the symmetry group when reducing."""
    group = _dihedral(L, reflect)
    for size in range(1, L + 1):
        for E in itertools.combinations(range(L), size):
            if reduce and any(tuple(sorted(g(x) for x in E)) < E for g in group):
                continue
            yield E


def _row_key(L: int, rows, group_maps):
    """Canonical form of a set of window rows under the symmetry group."""
    best = None
    for g in group_maps:
        perm = [g(i) for i in range(L)]
        moved = []
        for r in rows:
            nr = [0] * L
            for i, v in enumerate(r):
                nr[perm[i]] = v
            moved.append(tuple(nr))
        key = tuple(sorted(set(moved)))
        if best is None or key < best:
            best = key
    return best


@dataclass
class CyclicConstant:
    """Result of an exhaustive weak (1,1) search on ``Z_L``.

    ``point`` is the minimizing vertex of the winning LP, normalized so the
    level is 1; ``value = |E| / sum(point)``.
    """

    L: int
    op: str
    value: Fraction
    E: tuple
    windows: tuple
    point: tuple
    problem: LpProblem
    solution: LpSolution
    lp_count: int
    configs: int
    n_max: Optional[int] = None

    def witness(self) -> CyclicSignal:
        return CyclicSignal(self.point)

    def replay(self) -> RatioReport:
        return weak_ratio(self.witness(), 1, self.op, 1)


DEFAULT_SEARCH_BUDGET = 400_000


def _solve_lp(problem: LpProblem, solver: str):
    if solver == "simplex":
        sol = lp_solve(problem)
        return sol.objective_value, sol
    if solver == "vertices":
        value, point = vertex_enumeration(problem)
        return value, point
    raise DomainError(f"unknown LP solver {solver!r}")


def _centered_configs(L, n_max, reduce):
    group = _dihedral(L, True)
    for E in _canonical_subsets(L, True, reduce):
        stab = [g for g in group if tuple(sorted(g(x) for x in E)) == E] if reduce else []
        for radii in itertools.product(range(n_max + 1), repeat=len(E)):
            if reduce and len(stab) > 1:
                pairs = tuple(zip(E, radii))
                if any(tuple(sorted((g(l), n) for l, n in pairs)) < pairs for g in stab):
                    continue
            yield E, tuple((l - n, 2 * n + 1) for l, n in zip(E, radii))


def _one_sided_configs(L, n_max, reduce):
    for E in _canonical_subsets(L, False, reduce):
        for lengths in itertools.product(range(1, n_max + 2), repeat=len(E)):
            yield E, tuple(zip(E, lengths))


def _arc_points(L, start, length):
    return frozenset((start + i) % L for i in range(length))


def _uncentered_configs(L, reduce):
    """Covers of ``E`` by arcs inside ``E``; the arcs are the good windows.

    A window of average ``>= 1`` puts all of its points in the level set of
    the uncentered maximal function, so covers by arcs inside ``E`` lose
    nothing, and it suffices to extend the cover at its smallest uncovered
    point.
    """
    for E in _canonical_subsets(L, True, reduce):
        Eset = frozenset(E)
        arcs = {}
        for length in range(1, L + 1):
            for start in range(L if length < L else 1):
                pts = _arc_points(L, start, length)
                if pts <= Eset:
                    arcs.setdefault(pts, (start, length))
        containing = {x: [(pts, w) for pts, w in arcs.items() if x in pts] for x in E}

        def extend(uncovered, chosen):
            if not uncovered:
                yield tuple(chosen)
                return
            x = min(uncovered)
            for pts, w in containing[x]:
                yield from extend(uncovered - pts, chosen + [w])

        # canonical ordering avoids revisiting the same family
        seen = set()
        for cover in extend(Eset, []):
            key = tuple(sorted(cover))
            if key in seen:
                continue
            seen.add(key)
            yield E, key


def weak_constant_cyclic(
    L: int,
    op: str,
    n_max: Optional[int] = None,
    reduce: bool = True,
    solver: str = "simplex",
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> CyclicConstant:
    """Exhaustive weak (1,1) constant of ``op`` on ``Z_L``.

    Every pair ``(f, lam)`` rescales to ``lam = 1`` with ``0 <= f <= L``; a
    choice of level set ``E`` and of one window per point of ``E`` gives the
    polyhedron of admissible ``f``, and the LP minimum of ``sum f`` over it
    yields the ratio ``|E| / min``.  Configurations equivalent under the
    symmetries of the cycle (rotations, plus reflections for the two-sided
    operators) are visited once and LP values are memoized on the
    canonical row set.
    """
    if L < 1:
        raise DomainError("cycle length must be positive")
    if op == "c":
        n_max = 2 * L if n_max is None else n_max
        if n_max < 0:
            raise DomainError("radius bound must be nonnegative")
        total = sum(math.comb(L, s) * (n_max + 1) ** s for s in range(1, L + 1))
        configs = _centered_configs(L, n_max, reduce)
    elif op == "os":
        n_max = L if n_max is None else n_max
        total = sum(math.comb(L, s) * (n_max + 1) ** s for s in range(1, L + 1))
        configs = _one_sided_configs(L, n_max, reduce)
    elif op == "u":
        n_max = None
        total = math.comb(2 * L, L) * L ** 2  # crude bound on generated covers
        configs = _uncentered_configs(L, reduce)
    else:
        raise DomainError(f"unknown operator {op!r}")
    if total > budget:
        raise BudgetExceeded(f"search over Z_{L} would visit up to {total} configurations (budget {budget})")

    group = _dihedral(L, op != "os")
    memo = {}
    best = None
    count = 0
    for E, windows in configs:
        count += 1
        rows = [window_row(L, s, n) for s, n in windows]
        key = _row_key(L, rows, group) if reduce else tuple(sorted(set(rows)))
        if key not in memo:
            memo[key] = _solve_lp(window_problem(L, windows), solver)[0]
        ratio = Fraction(len(E)) / memo[key]
        if best is None or ratio > best[0]:
            best = (ratio, E, windows)
    ratio, E, windows = best
    problem = window_problem(L, windows)
    solution = lp_solve(problem)
    return CyclicConstant(L, op, ratio, E, windows, solution.point, problem, solution, len(memo), count, n_max)


def centered_weak_constant_cyclic(L: int, n_max: Optional[int] = None, **kw) -> CyclicConstant:
    """``C^c(Z_L, 1)``: exact rational, by exhaustive LP search (radii ``<= n_max``, default ``2L``)."""
    return weak_constant_cyclic(L, "c", n_max, **kw)


def uncentered_weak_constant_cyclic(L: int) -> Fraction:
    """Closed form ``(2*ceil(L/2) - 1) / ceil(L/2)``."""
    if L < 1:
        raise DomainError("cycle length must be positive")
    h = -(-L // 2)
    return Fraction(2 * h - 1, h)


def uncentered_extremizer(L: int):
    """Indicator of the single atom ``ceil(L/2)`` with level ``1/ceil(L/2)``."""
    h = -(-L // 2)
    return CyclicSignal.indicator(L, [h]), Fraction(1, h)


def uncentered_weak_constant_search(L: int, **kw) -> CyclicConstant:
    return weak_constant_cyclic(L, "u", **kw)


# -- c_p ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CpRoot:
    """Bracket ``[lo, hi]`` with ``phi(lo) < 0 < phi(hi)`` around ``c_p``.

    When bisection lands on a rational root (``p = 3/2`` gives 4), ``exact``
    holds that root and ``lo == hi``.
    """

    p: Fraction
    value: HighPrec
    lo: HighPrec
    hi: HighPrec
    phi_lo: HighPrec
    phi_hi: HighPrec
    iterations: int
    exact: Optional[Fraction] = None

    @property
    def certified(self) -> bool:
        if self.exact is not None:
            return cp_phi_exact(self.p, self.exact) == 0
        return self.phi_lo < 0 < self.phi_hi


def cp_phi_exact(p: Fraction, x: Fraction):
    """``phi(x)`` as a Fraction when ``x**p`` is rational, else None."""
    a = rational_power(x, p)
    b = rational_power(x, p - 1)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (p - 1) * a - p * b - 1
    return None


def cp_phi(p: Fraction, x):
    """``(p-1) x^p - p x^(p-1) - 1``; exact for rational ``x`` and integer ``p``."""
    if isinstance(x, Fraction) and p.denominator == 1:
        e = p.numerator
        return (p - 1) * x ** e - p * x ** (e - 1) - 1
    xp = _to_mpf(x)
    pp = _to_mpf(p)
    return (pp - 1) * mpmath.power(xp, pp) - pp * mpmath.power(xp, pp - 1) - 1


def _mpf_to_fraction(x) -> Fraction:
    m, e = mpmath.mpf(x).man_exp
    return Fraction(int(m)) * Fraction(2) ** int(e)


def cp_root(p, tol=Fraction(1, 10 ** 30), bits: int = DEFAULT_BITS) -> CpRoot:
    """Unique positive root of ``(p-1) x^p - p x^(p-1) - 1`` by bisection.

    ``phi`` is negative on ``(0, 1]`` (``phi(1) = -2``) and increasing on
    ``(1, inf)``, so the bracket starts at 1 and doubles its right end.
    """
    p = parse_exponent(p)
    if p == INF or p <= 1:
        raise DomainError("c_p is defined for 1 < p < inf")
    tol = as_fraction(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    if cp_phi_exact(p, Fraction(1)) != -2:
        raise AssertionError("phi(1) = -2 fails")
    with mpmath.workprec(bits):
        lo, hi = mpmath.mpf(1), mpmath.mpf(2)
        while cp_phi(p, hi) <= 0:
            lo, hi = hi, 2 * hi
        t = _to_mpf(tol)
        it = 0
        exact = None
        while hi - lo > t and it <= 4 * bits:
            mid = (lo + hi) / 2
            it += 1
            v = cp_phi(p, mid)
            if v == 0:
                q = _mpf_to_fraction(mid)
                if cp_phi_exact(p, q) == 0:
                    exact = q
                    lo = hi = mid
                    break
            if v < 0:
                lo = mid
            else:
                hi = mid
        for end in (lo, hi):
            if exact is None and cp_phi(p, end) == 0:
                q = _mpf_to_fraction(end)
                if cp_phi_exact(p, q) == 0:
                    exact = q
                    lo = hi = end
        mid = (lo + hi) / 2
        return CpRoot(
            p,
            HighPrec(mid, bits),
            HighPrec(lo, bits),
            HighPrec(hi, bits),
            HighPrec(cp_phi(p, lo), bits),
            HighPrec(cp_phi(p, hi), bits),
            it,
            exact,
        )


# -- reference values on Z --------------------------------------------------------------


@dataclass(frozen=True)
class ReferenceConstant:
    op: str
    p: object
    kind: str
    value: object
    source: str


def reference_constants(cp_exponents=(Fraction(3, 2), Fraction(2), Fraction(3))) -> list:
    """Known sharp constants on ``Z`` (weak at p = 1, strong otherwise)."""
    table = [
        ReferenceConstant("os", Fraction(1), "weak", Fraction(1), "covering argument"),
        ReferenceConstant("u", Fraction(1), "weak", Fraction(2), "covering with overlap 2; delta witness"),
        ReferenceConstant("c", Fraction(1), "weak", MELAS, "Melas constant via discrete/continuous comparison"),
    ]
    for op in OPERATORS:
        table.append(ReferenceConstant(op, INF, "strong", Fraction(1), "trivial sup bound"))
    for p in cp_exponents:
        table.append(ReferenceConstant("u", Fraction(p), "strong", cp_root(p).value, "c_p"))
    return table


def reference_value(op: str, p, kind: str):
    p = parse_exponent(p)
    for ref in reference_constants(cp_exponents=(p,) if p != INF and p > 1 and op == "u" else ()):
        if ref.op == op and ref.p == p and ref.kind == kind:
            return ref
    return None


# -- strong-type lower bounds by search ------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    """Bounds for :func:`strong_ratio_search`; the search is deterministic given ``seed``."""

    seed: int = 0
    sweeps: int = 3
    max_support: int = 8
    value_max: int = 6
    random_starts: int = 4
    moves: tuple = (Fraction(0), Fraction(1, 2), Fraction(2, 3), Fraction(3, 2), Fraction(2))
    family_sizes: tuple = (16, 128, 1024, 10000)
    family_params: tuple = ((Fraction(3, 5), Fraction(4, 5)),)
    family_scale: int = 10 ** 6
    offsets: int = 40
    pad_factor: int = 2

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "sweeps": self.sweeps,
            "max_support": self.max_support,
            "value_max": self.value_max,
            "random_starts": self.random_starts,
            "family_sizes": list(self.family_sizes),
            "offsets": self.offsets,
        }


@dataclass(frozen=True)
class LineCertificate:
    """Exact lower bound on ``||M f||_p^p / ||f||_p^p`` for integer-valued ``f >= 0`` on Z.

    ``windows[i] = (s, t)`` is a window containing ``x = lo + i``; its
    average bounds ``M f(x)`` from below.  Terms are rounded down to
    multiples of ``1/denominator``; points beyond the listed range are
    bounded through the single window reaching across the whole support.
    """

    values: tuple
    start: int
    op: str
    p: int
    lo: int
    windows: tuple
    denominator: int = 2 ** 64

    def verify(self) -> Fraction:
        vals = self.values
        a, b = self.start, self.start + len(vals) - 1
        pre = [0]
        for v in vals:
            pre.append(pre[-1] + v)
        e = self.p
        D = self.denominator
        acc = 0
        for i, (s, t) in enumerate(self.windows):
            x = self.lo + i
            if not s <= x <= t:
                raise DomainError(f"window {(s, t)} does not contain {x}")
            if self.op == "c" and x - s != t - x:
                raise DomainError("centered windows must be symmetric")
            if self.op == "os" and s != x:
                raise DomainError("one-sided windows must start at the point")
            S = pre[min(t, b) - a + 1] - pre[max(s, a) - a] if min(t, b) >= max(s, a) else 0
            acc += (S ** e * D) // ((t - s + 1) ** e)
        total = pre[-1]
        hi = self.lo + len(self.windows) - 1
        tail = Fraction(0)
        # left tail: x < lo, window [x, b] (or centered at x reaching b)
        K = b - self.lo + 2
        if self.op == "c":
            tail += Fraction(total ** e, 2 * (e - 1)) / Fraction(2 * K - 1) ** (e - 1)
        else:
            tail += Fraction(total ** e, e - 1) / Fraction(K) ** (e - 1)
        if self.op != "os":
            K = hi - a + 2
            if self.op == "c":
                tail += Fraction(total ** e, 2 * (e - 1)) / Fraction(2 * K - 1) ** (e - 1)
            else:
                tail += Fraction(total ** e, e - 1) / Fraction(K) ** (e - 1)
        norm = sum(v ** e for v in vals)
        return (Fraction(acc, D) + tail) / norm


def _exhaustive_windows(full: np.ndarray, op: str):
    """Best window for every point of a short array, by direct scan."""
    N = len(full)
    P = np.concatenate([[0.0], np.cumsum(full)])
    best = np.zeros(N)
    bs = np.arange(N)
    bt = np.arange(N)
    for x in range(N):
        if op == "os":
            t = np.arange(x, N)
            avg = (P[t + 1] - P[x]) / (t - x + 1)
            k = int(np.argmax(avg))
            best[x], bs[x], bt[x] = avg[k], x, t[k]
        elif op == "c":
            r = np.arange(0, min(x, N - 1 - x) + 1)
            avg = (P[x + r + 1] - P[x - r]) / (2 * r + 1)
            k = int(np.argmax(avg))
            best[x], bs[x], bt[x] = avg[k], x - r[k], x + r[k]
        else:
            s = np.arange(0, x + 1)[:, None]
            t = np.arange(x, N)[None, :]
            avg = (P[t + 1] - P[s]) / (t - s + 1)
            i, j = np.unravel_index(int(np.argmax(avg)), avg.shape)
            best[x], bs[x], bt[x] = avg[i, j], i, x + j
    return best, bs, bt


def _grid_windows(full: np.ndarray, op: str, count: int):
    """Lower envelope of the maximal function using windows with offsets on a geometric grid."""
    N = len(full)
    P = np.concatenate([[0.0], np.cumsum(full)])
    xs = np.arange(N)
    best = full.astype(float).copy()
    bs = xs.copy()
    bt = xs.copy()
    offs = np.unique(np.concatenate([np.arange(0, 20), np.geomspace(1, N, count).astype(np.int64)]))
    if op == "c":
        pairs = [(r, r) for r in offs]
    elif op == "os":
        pairs = [(0, r) for r in offs]
    else:
        pairs = [(u, v) for u in offs for v in offs]
    for u, v in pairs:
        s = np.maximum(xs - u, 0)
        t = np.minimum(xs + v, N - 1)
        if op == "c":
            r = np.minimum(xs - s, t - xs)
            s, t = xs - r, xs + r
        avg = (P[t + 1] - P[s]) / (t - s + 1)
        better = avg > best
        if better.any():
            best[better] = avg[better]
            bs[better] = s[better]
            bt[better] = t[better]
    return best, bs, bt


def _line_search_eval(values: np.ndarray, op: str, p: float, cfg: SearchConfig, exhaustive: bool):
    """Float lower bound on the ratio plus the windows that realize it."""
    n = len(values)
    pad = cfg.pad_factor * n + 8
    N = n + 2 * pad
    full = np.zeros(N)
    full[pad : pad + n] = values
    if exhaustive:
        best, bs, bt = _exhaustive_windows(full, op)
    else:
        best, bs, bt = _grid_windows(full, op, cfg.offsets)
    num = float(np.sum(best ** p))
    T = float(values.sum())
    K = n + pad + 1
    sides = 1 if op == "os" else 2
    num += sides * T ** p * K ** (1 - p) / (p - 1) / (2 ** p if op == "c" else 1)
    den = float(np.sum(values ** p))
    ratio = (num / den) ** (1 / p)
    return ratio, pad, bs - pad, bt - pad


def _family(op: str, half: int, alpha: Fraction, c: Fraction, scale: int):
    a, cc = float(alpha), float(c)
    if op == "os":
        l = np.arange(0, half + 1)
        vals = (half - l + cc) ** (-a)
    else:
        l = np.arange(-half, half + 1)
        vals = (np.abs(l) + cc) ** (-a)
    return np.maximum(np.rint(vals * scale), 1).astype(np.int64)


def _certify_line(values, op, p, cfg, exhaustive):
    ratio, pad, bs, bt = _line_search_eval(values.astype(float), op, float(p), cfg, exhaustive)
    cert = LineCertificate(
        tuple(int(v) for v in values),
        0,
        op,
        int(p),
        -pad,
        tuple(zip(bs.tolist(), bt.tolist())),
    )
    return cert


def strong_ratio_search(system, op: str, p, config: SearchConfig = SearchConfig()) -> RatioReport:
    """Certified lower bound for the strong (p,p) constant of ``op`` on ``system``.

    ``system`` is ``"Z"`` or a cycle length ``L``.  On ``Z_L`` the search is
    coordinate ascent over nonnegative rational signals with exact ratios.
    On ``Z`` the candidates are sampled power-law profiles (the slowly
    varying near-extremizers) together with coordinate ascent on small
    random supports; the winner is certified exactly by
    :class:`LineCertificate` (integer ``p``).
    """
    p = parse_exponent(p)
    if op not in OPERATORS:
        raise DomainError(f"unknown operator {op!r}")
    if p == INF:
        f = Signal.delta(0) if system == "Z" else CyclicSignal.indicator(int(system), [0])
        return RatioReport(op, p, "strong", Fraction(1), f, exact_power=Fraction(1), lower_bound=True)
    if p <= 1:
        raise DomainError("strong constants are searched for p in (1, inf]")
    rng = random.Random(config.seed)
    if system == "Z":
        return _search_line(op, p, config, rng)
    return _search_cycle(int(system), op, p, config, rng)


def _power_key(report: RatioReport):
    return report.exact_power if report.exact_power is not None else report.value


def _search_cycle(L, op, p, cfg, rng):
    def score(vals):
        if not any(vals):
            return None
        return strong_ratio(CyclicSignal(vals), op, p)

    starts = [[Fraction(1)] + [Fraction(0)] * (L - 1)]
    starts.append([Fraction(1)] * L)
    for _ in range(cfg.random_starts):
        starts.append([Fraction(rng.randint(0, cfg.value_max)) for _ in range(L)])
    best = None
    for vals in starts:
        cur = score(vals)
        if cur is None:
            continue
        for _ in range(cfg.sweeps):
            improved = False
            for i in range(L):
                for mv in cfg.moves:
                    trial = list(vals)
                    trial[i] = trial[i] * mv if trial[i] else mv
                    rep = score(trial)
                    if rep is not None and _power_key(rep) > _power_key(cur):
                        vals, cur, improved = trial, rep, True
            if not improved:
                break
        if best is None or _power_key(cur) > _power_key(best):
            best = cur
    best.lower_bound = True
    best.details["search_config"] = cfg.to_json()
    return best


def _search_line(op, p, cfg, rng):
    integral = p.denominator == 1
    pf = float(p)
    candidates = []
    for _ in range(cfg.random_starts):
        size = rng.randint(1, cfg.max_support)
        vals = np.array([rng.randint(0, cfg.value_max) for _ in range(size)], dtype=np.int64)
        if vals.sum() == 0:
            vals[0] = 1
        score = _line_search_eval(vals.astype(float), op, pf, cfg, True)[0]
        for _ in range(cfg.sweeps):
            improved = False
            for i in range(size):
                for mv in cfg.moves:
                    trial = vals.copy()
                    trial[i] = int(trial[i] * mv) if trial[i] else int(mv * cfg.value_max)
                    if trial.sum() == 0:
                        continue
                    s = _line_search_eval(trial.astype(float), op, pf, cfg, True)[0]
                    if s > score + 1e-12:
                        vals, score, improved = trial, s, True
            if not improved:
                break
        candidates.append((score, vals, True))
    for half in cfg.family_sizes:
        for alpha, c in cfg.family_params:
            vals = _family(op, half, alpha * 2 / p if op != "os" else 1 / p, c, cfg.family_scale)
            exhaustive = len(vals) <= 64
            score = _line_search_eval(vals.astype(float), op, pf, cfg, exhaustive)[0]
            candidates.append((score, vals, exhaustive))
    candidates.sort(key=lambda t: -t[0])
    score, vals, exhaustive = candidates[0]
    witness = Signal.from_sequence([int(v) for v in vals])
    details = {"search_config": cfg.to_json(), "float_estimate": score, "certified": integral}
    if integral:
        cert = _certify_line(vals, op, p, cfg, exhaustive)
        power = cert.verify()
        details["certificate"] = cert
        return RatioReport(op, p, "strong", _root_of_power(power, p), witness, exact_power=power, lower_bound=True, details=details)
    with mpmath.workprec(DEFAULT_BITS):
        value = HighPrec(mpmath.mpf(score), DEFAULT_BITS)
    return RatioReport(op, p, "strong", value, witness, lower_bound=True, details=details)
