"""Exact rational linear programming.

Problems have the form ``minimize c.x  s.t.  G x >= h,  x >= 0`` with
rational data.  :func:`lp_solve` is a dense two-phase tableau simplex using
Bland's rule (so it terminates) and returns a basic feasible solution,
i.e. a vertex, together with dual multipliers that certify optimality.
:func:`vertex_enumeration` solves the same problem by brute force over all
``n``-subsets of constraints; it shares no code with the simplex path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import BudgetExceeded, DomainError, InfeasibleError

ZERO = Fraction(0)


@dataclass(frozen=True)
class LpProblem:
    """``min objective.x`` subject to ``rows[i].x >= rhs[i]`` and ``x >= 0``."""

    n_vars: int
    objective: tuple
    rows: tuple
    rhs: tuple
    labels: tuple = ()

    def __post_init__(self):
        obj = tuple(Fraction(c) for c in self.objective)
        rows = tuple(tuple(Fraction(v) for v in r) for r in self.rows)
        rhs = tuple(Fraction(v) for v in self.rhs)
        if len(obj) != self.n_vars or any(len(r) != self.n_vars for r in rows):
            raise DomainError("LP dimensions are inconsistent")
        if len(rows) != len(rhs):
            raise DomainError("one right-hand side per row is required")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", rhs)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def slack(self, x) -> List[Fraction]:
        return [sum((a * v for a, v in zip(r, x)), ZERO) - b for r, b in zip(self.rows, self.rhs)]

    def value(self, x) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), ZERO)

    def is_feasible(self, x) -> bool:
        return all(v >= 0 for v in x) and all(s >= 0 for s in self.slack(x))


@dataclass(frozen=True)
class LpSolution:
    point: tuple
    objective_value: Fraction
    duals: tuple
    basis: tuple = field(default=(), compare=False)

    def residuals(self, problem: LpProblem) -> dict:
        """Exact violations of the optimality conditions; all zero when certified."""
        x, y = self.point, self.duals
        slack = problem.slack(x)
        reduced = [
            c - sum((problem.rows[i][j] * y[i] for i in range(problem.n_rows)), ZERO)
            for j, c in enumerate(problem.objective)
        ]
        return {
            "primal": sum((max(-s, ZERO) for s in slack), ZERO) + sum((max(-v, ZERO) for v in x), ZERO),
            "dual": sum((max(-v, ZERO) for v in y), ZERO) + sum((max(-r, ZERO) for r in reduced), ZERO),
            "slackness": sum((abs(yi * si) for yi, si in zip(y, slack)), ZERO)
            + sum((abs(xj * rj) for xj, rj in zip(x, reduced)), ZERO),
            "gap": abs(problem.value(x) - sum((yi * hi for yi, hi in zip(y, problem.rhs)), ZERO)),
        }

    def verify(self, problem: LpProblem) -> bool:
        return all(v == 0 for v in self.residuals(problem).values()) and (
            self.objective_value == problem.value(self.point)
        )


@dataclass(frozen=True)
class FarkasCertificate:
    """``y >= 0`` with ``G^T y <= 0`` and ``h.y > 0``: no ``x >= 0`` has ``G x >= h``."""

    multipliers: tuple

    def verify(self, problem: LpProblem) -> bool:
        y = self.multipliers
        if any(v < 0 for v in y):
            return False
        for j in range(problem.n_vars):
            if sum((problem.rows[i][j] * y[i] for i in range(problem.n_rows)), ZERO) > 0:
                return False
        return sum((a * b for a, b in zip(y, problem.rhs)), ZERO) > 0


def _pivot(T, r, col):
    piv = T[r][col]
    row = [v / piv for v in T[r]] if piv != 1 else T[r]
    T[r] = row
    for i, other in enumerate(T):
        if i != r:
            f = other[col]
            if f:
                T[i] = [a - f * b if b else a for a, b in zip(other, row)]


def _run_bland(T, basis, eligible, max_iter):
    """Drive the objective row (last row of ``T``) to nonnegative reduced costs."""
    z = len(T) - 1
    for _ in range(max_iter):
        zrow = T[z]
        enter = next((j for j in eligible if zrow[j] < 0), None)
        if enter is None:
            return
        leave, best = None, None
        for i in range(z):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise DomainError("LP is unbounded")
        _pivot(T, leave, enter)
        basis[leave] = enter
    raise RuntimeError("simplex iteration cap reached")


def _objective_row(T, basis, costs, ncols):
    m = len(basis)
    row = list(costs) + [ZERO]
    for i in range(m):
        cb = costs[basis[i]]
        if cb:
            r = T[i]
            row = [a - cb * b for a, b in zip(row, r)]
    return row


def lp_solve(problem: LpProblem, max_iter: int = 10_000) -> LpSolution:
    """Exact optimum at a vertex, with a dual certificate.

    Raises :class:`InfeasibleError` carrying a :class:`FarkasCertificate`
    when the feasible region is empty.
    """
    n, m = problem.n_vars, problem.n_rows
    # columns: x (n) | surplus (m) | artificial (one per row with rhs > 0)
    sign = [(-1 if h <= 0 else 1) for h in problem.rhs]
    art_rows = [i for i in range(m) if sign[i] == 1]
    n_art = len(art_rows)
    ncols = n + m + n_art
    T = []
    basis = []
    ident = []
    for i in range(m):
        s = sign[i]
        row = [s * a for a in problem.rows[i]] + [ZERO] * (m + n_art) + [s * problem.rhs[i]]
        row[n + i] = Fraction(-s)
        if s == 1:
            col = n + m + art_rows.index(i)
            row[col] = Fraction(1)
        else:
            col = n + i
        basis.append(col)
        ident.append(col)
        T.append(row)

    real_cols = list(range(n + m))
    if n_art:
        phase1 = [ZERO] * (n + m) + [Fraction(1)] * n_art
        T.append(_objective_row(T, basis, phase1, ncols))
        _run_bland(T, basis, list(range(ncols)), max_iter)
        if -T[-1][-1] > 0:
            pi = [sum((phase1[basis[k]] * T[k][ident[i]] for k in range(m)), ZERO) for i in range(m)]
            cert = FarkasCertificate(tuple(sign[i] * pi[i] for i in range(m)))
            raise InfeasibleError("LP is infeasible", cert)
        T.pop()
        # pivot zero-level artificials out where a real column allows it
        for i in range(m):
            if basis[i] >= n + m:
                col = next((j for j in real_cols if T[i][j] != 0), None)
                if col is not None:
                    _pivot(T, i, col)
                    basis[i] = col

    costs = list(problem.objective) + [ZERO] * (m + n_art)
    T.append(_objective_row(T, basis, costs, ncols))
    _run_bland(T, basis, real_cols, max_iter)

    x = [ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = T[i][-1]
    pi = [sum((costs[basis[k]] * T[k][ident[i]] for k in range(m)), ZERO) for i in range(m)]
    duals = tuple(sign[i] * pi[i] for i in range(m))
    return LpSolution(tuple(x), problem.value(x), duals, tuple(basis))


# -- independent oracle -----------------------------------------------------------


def solve_exact(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of the square system ``A x = b`` or None if singular."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        pv = M[c][c]
        M[c] = [v / pv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * bb for a, bb in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def vertex_enumeration(problem: LpProblem, max_subsets: int = 200_000):
    """Minimum over all vertices, found by solving every ``n``-subset of
    tight constraints.  Returns ``(value, vertex)``, or None if no vertex."""
    n = problem.n_vars
    cons = [(r, h) for r, h in zip(problem.rows, problem.rhs)]
    for j in range(n):
        cons.append((tuple(Fraction(int(i == j)) for i in range(n)), ZERO))
    total = 1
    for i in range(n):
        total = total * (len(cons) - i) // (i + 1)
    if total > max_subsets:
        raise BudgetExceeded(f"{total} constraint subsets exceed the oracle budget")
    best = None
    for subset in itertools.combinations(range(len(cons)), n):
        sol = solve_exact([cons[i][0] for i in subset], [cons[i][1] for i in subset])
        if sol is None or not problem.is_feasible(sol):
            continue
        v = problem.value(sol)
        if best is None or v < best[0]:
            best = (v, tuple(sol))
    return best
