"""Exact scalars, signal containers and (weak) Lebesgue quasinorms.

Two measure spaces are housed here: ``Z^d`` with counting measure
(:class:`Signal`) and the cycle ``Z_L`` whose atoms all carry the same
weight ``w`` (:class:`CyclicSignal`).  All stored values are
:class:`fractions.Fraction`; quantities that are irrational in general
(``q``-th roots) are returned as :class:`HighPrec`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import mpmath

from .errors import DomainError

Rational = Fraction
INF = math.inf

DEFAULT_BITS = 256


@functools.total_ordering
@dataclass(frozen=True)
class HighPrec:
    """A multiprecision float tagged with the precision it was computed at."""

    value: mpmath.mpf
    bits: int = DEFAULT_BITS

    @classmethod
    def of(cls, x, bits: int = DEFAULT_BITS) -> "HighPrec":
        with mpmath.workprec(bits):
            return cls(_to_mpf(x), bits)

    def __float__(self):
        return float(self.value)

    def _other(self, other):
        if isinstance(other, HighPrec):
            return other.value
        return _to_mpf(other)

    def __eq__(self, other):
        with mpmath.workprec(self.bits):
            return self.value == self._other(other)

    def __lt__(self, other):
        with mpmath.workprec(self.bits):
            return self.value < self._other(other)

    def __hash__(self):
        return hash((float(self.value), self.bits))

    def __repr__(self):
        with mpmath.workprec(self.bits):
            digits = max(15, int(self.bits * 0.30103) - 2)
            return f"HighPrec({mpmath.nstr(self.value, digits)}, bits={self.bits})"


def _to_mpf(x):
    if isinstance(x, HighPrec):
        return x.value
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, ``"a/b"`` strings and ``[num, den]`` pairs."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational value")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_exponent(x):
    """Exponent in ``(0, inf]``: a Fraction, or ``math.inf``."""
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    if isinstance(x, float):
        if x == INF:
            return INF
        raise TypeError("floating exponents are not accepted; pass a Fraction")
    q = as_fraction(x)
    if q <= 0:
        raise DomainError(f"exponent must be positive, got {q}")
    return q


def integer_root(a: int, n: int):
    """Return ``r`` with ``r**n == a`` if it exists (``a >= 0``), else None."""
    if a < 0:
        return None
    if a < 2:
        return a
    if n == 1:
        return a
    if n == 2:
        r = math.isqrt(a)
    else:
        r = int(round(a ** (1.0 / n))) if a.bit_length() < 1000 else 1 << (a.bit_length() // n)
        # Newton refinement from any start works since we check neighbours.
        while True:
            nr = ((n - 1) * r + a // r ** (n - 1)) // n
            if nr >= r:
                break
            r = nr
        while r ** n > a:
            r -= 1
        while (r + 1) ** n <= a:
            r += 1
    return r if r ** n == a else None


def exact_root(x: Fraction, n: int):
    """Exact rational ``n``-th root of a nonnegative rational, or None."""
    num = integer_root(x.numerator, n)
    if num is None:
        return None
    den = integer_root(x.denominator, n)
    if den is None:
        return None
    return Fraction(num, den)


def rational_power(x: Fraction, q: Fraction, bits: int = DEFAULT_BITS):
    """``x**q`` for ``x >= 0``: exact when possible, HighPrec otherwise."""
    if q.denominator == 1:
        return x ** q.numerator
    r = exact_root(x, q.denominator)
    if r is not None:
        return r ** q.numerator
    with mpmath.workprec(bits):
        return HighPrec(mpmath.power(_to_mpf(x), _to_mpf(q)), bits)


class Signal:
    """Finitely supported function ``Z^d -> Q``.

    Points are stored as integer tuples; for ``d == 1`` plain ints are
    accepted everywhere and wrapped.  Zero values are never stored, and
    evaluation off the support returns 0.
    """

    __slots__ = ("d", "_values")
    weight = Fraction(1)

    def __init__(self, values: Mapping = None, d: int = 1):
        if d < 1:
            raise DomainError("dimension must be positive")
        self.d = d
        store = {}
        for point, v in (values or {}).items():
            v = as_fraction(v)
            if v:
                store[self._key(point)] = v
        self._values = store

    def _key(self, point):
        if isinstance(point, int):
            point = (point,)
        point = tuple(int(c) for c in point)
        if len(point) != self.d:
            raise DomainError(f"point {point} does not lie in Z^{self.d}")
        return point

    @classmethod
    def delta(cls, point=0, value=1, d: int = 1):
        return cls({point: value}, d=d)

    @classmethod
    def indicator(cls, points: Iterable, d: int = 1):
        return cls({p: 1 for p in points}, d=d)

    @classmethod
    def from_sequence(cls, values, start: int = 0):
        """1-dimensional signal with ``values[i]`` placed at ``start + i``."""
        return cls({start + i: v for i, v in enumerate(values)})

    def __call__(self, point) -> Fraction:
        return self._values.get(self._key(point), Fraction(0))

    def items(self):
        return self._values.items()

    @property
    def support(self) -> frozenset:
        return frozenset(self._values)

    def is_zero(self) -> bool:
        return not self._values

    def hull(self):
        """Bounding interval ``(a, b)`` of the support of a 1-d signal."""
        if self.d != 1:
            raise DomainError("hull is defined for d = 1 only")
        if not self._values:
            return None
        pts = [p[0] for p in self._values]
        return min(pts), max(pts)

    def shift(self, offset):
        """``x -> self(x + offset)``, i.e. composition with a translation."""
        off = self._key(offset)
        return Signal({tuple(a - b for a, b in zip(p, off)): v for p, v in self.items()}, d=self.d)

    def scale(self, c):
        c = as_fraction(c)
        return Signal({p: c * v for p, v in self.items()}, d=self.d)

    def __add__(self, other: "Signal") -> "Signal":
        if other.d != self.d:
            raise DomainError("dimension mismatch")
        out = dict(self._values)
        for p, v in other.items():
            out[p] = out.get(p, 0) + v
        return Signal(out, d=self.d)

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        return isinstance(other, Signal) and self.d == other.d and self._values == other._values

    def __hash__(self):
        return hash((self.d, frozenset(self._values.items())))

    def __repr__(self):
        body = ", ".join(f"{p if self.d > 1 else p[0]}: {v}" for p, v in sorted(self._values.items()))
        return f"Signal(d={self.d}, {{{body}}})"


class CyclicSignal:
    """Function on ``Z_L`` with every atom carrying weight ``w``.

    Index arithmetic is modulo ``L``; the transformation is ``x -> x + 1``.
    """

    __slots__ = ("L", "values", "weight")

    def __init__(self, values, weight=1):
        values = tuple(as_fraction(v) for v in values)
        if not values:
            raise DomainError("a cyclic signal needs at least one atom")
        self.L = len(values)
        self.values = values
        self.weight = as_fraction(weight)
        if self.weight <= 0:
            raise DomainError("atom weight must be positive")

    @classmethod
    def constant(cls, L: int, c=1, weight=1):
        return cls([c] * L, weight)

    @classmethod
    def indicator(cls, L: int, points, weight=1):
        pts = {p % L for p in points}
        return cls([1 if i in pts else 0 for i in range(L)], weight)

    def __call__(self, x) -> Fraction:
        return self.values[x % self.L]

    def items(self):
        return ((i, v) for i, v in enumerate(self.values) if v)

    @property
    def total_measure(self) -> Fraction:
        return self.L * self.weight

    def mean(self) -> Fraction:
        return sum(self.values, Fraction(0)) / self.L

    def is_zero(self) -> bool:
        return not any(self.values)

    def rotate(self, s: int) -> "CyclicSignal":
        """``x -> self(x + s)``."""
        return CyclicSignal([self(i + s) for i in range(self.L)], self.weight)

    def scale(self, c):
        c = as_fraction(c)
        return CyclicSignal([c * v for v in self.values], self.weight)

    def with_weight(self, w) -> "CyclicSignal":
        return CyclicSignal(self.values, w)

    def __add__(self, other):
        if other.L != self.L or other.weight != self.weight:
            raise DomainError("cyclic signals live on different systems")
        return CyclicSignal([a + b for a, b in zip(self.values, other.values)], self.weight)

    def __eq__(self, other):
        return (
            isinstance(other, CyclicSignal)
            and self.values == other.values
            and self.weight == other.weight
        )

    def __hash__(self):
        return hash((self.values, self.weight))

    def __repr__(self):
        vals = ", ".join(str(v) for v in self.values)
        if self.weight == 1:
            return f"CyclicSignal([{vals}])"
        return f"CyclicSignal([{vals}], weight={self.weight})"


AnySignal = Union[Signal, CyclicSignal]


@dataclass(frozen=True)
class ExponentTuple:
    """Exponents ``(p0, p1, ..., pm)`` tied by ``1/p1 + ... + 1/pm = 1/p0``."""

    p0: object
    ps: tuple

    def __post_init__(self):
        p0 = parse_exponent(self.p0)
        ps = tuple(parse_exponent(p) for p in self.ps)
        if not ps:
            raise DomainError("at least one input exponent is required")
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "ps", ps)
        if _reciprocal(p0) != sum((_reciprocal(p) for p in ps), Fraction(0)):
            raise DomainError(f"Hoelder scaling fails for p0={p0}, p={ps}")

    @classmethod
    def diagonal(cls, p, m: int = 1):
        """``(p/m, p, ..., p)``, the usual exponent for ``m`` equal inputs."""
        p = parse_exponent(p)
        return cls(p if p == INF else p / m, (p,) * m)

    @property
    def m(self) -> int:
        return len(self.ps)


def _reciprocal(p) -> Fraction:
    return Fraction(0) if p == INF else 1 / p


def measure(g: AnySignal, points) -> Fraction:
    return len(points) * g.weight


def _check_q(q):
    q = parse_exponent(q)
    return q


def lebesgue_norm_power(g: AnySignal, q) -> Fraction:
    """Exact ``||g||_q ** q`` for a positive integer ``q``."""
    q = _check_q(q)
    if q == INF or q.denominator != 1:
        raise DomainError("the exact q-th power needs a positive integer q")
    n = q.numerator
    return g.weight * sum((abs(v) ** n for _, v in g.items()), Fraction(0))


def lebesgue_norm(g: AnySignal, q, bits: int = DEFAULT_BITS):
    """``||g||_q``; exact when ``q`` is 1, infinite, or the root is rational."""
    q = _check_q(q)
    if q == INF:
        return max((abs(v) for _, v in g.items()), default=Fraction(0))
    if q.denominator == 1:
        s = lebesgue_norm_power(g, q)
        r = exact_root(s, q.numerator)
        if r is not None:
            return r
        with mpmath.workprec(bits):
            return HighPrec(mpmath.root(_to_mpf(s), q.numerator), bits)
    with mpmath.workprec(bits + 16):
        qq = _to_mpf(q)
        s = mpmath.fsum(mpmath.power(_to_mpf(abs(v)), qq) for _, v in g.items())
        val = mpmath.power(s * _to_mpf(g.weight), 1 / qq)
    with mpmath.workprec(bits):
        return HighPrec(+val, bits)


def level_set(g: AnySignal, lam) -> frozenset:
    """Closed superlevel set ``{x : |g(x)| >= lam}`` for ``lam > 0``."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise DomainError("level must be positive")
    return frozenset(p for p, v in g.items() if abs(v) >= lam)


def weak_level(g: AnySignal, q):
    """Level ``lam`` attaining ``sup lam * mu(|g| >= lam)**(1/q)``, or None for g = 0.

    The supremum over the closed superlevel sets is attained at one of the
    finitely many values of ``|g|``.  Candidates are compared through
    ``lam**a * mu**b`` with ``q = a/b``, which keeps the comparison exact.
    """
    q = _check_q(q)
    if q == INF:
        raise DomainError("the weak quasinorm is defined for finite q")
    levels = sorted({abs(v) for _, v in g.items()}, reverse=True)
    if not levels:
        return None
    a, b = q.numerator, q.denominator
    best, best_key = None, None
    count = 0
    counts = {}
    for _, v in g.items():
        counts[abs(v)] = counts.get(abs(v), 0) + 1
    for lam in levels:
        count += counts[lam]
        key = lam ** a * (count * g.weight) ** b
        if best_key is None or key > best_key:
            best, best_key = lam, key
    return best


def weak_norm(g: AnySignal, q, bits: int = DEFAULT_BITS):
    """Weak Lebesgue quasinorm ``||g||_{q, inf}``; a Fraction when q = 1."""
    lam = weak_level(g, q)
    if lam is None:
        return Fraction(0)
    q = parse_exponent(q)
    mu = measure(g, level_set(g, lam))
    root = rational_power(mu, 1 / q, bits)
    if isinstance(root, HighPrec):
        with mpmath.workprec(bits):
            return HighPrec(_to_mpf(lam) * root.value, bits)
    return lam * root


def weak_norm_power(g: AnySignal, q) -> Fraction:
    """Exact ``||g||_{q,inf} ** q`` for integer ``q``."""
    q = parse_exponent(q)
    if q == INF or q.denominator != 1:
        raise DomainError("the exact q-th power needs a positive integer q")
    lam = weak_level(g, q)
    if lam is None:
        return Fraction(0)
    return lam ** q.numerator * measure(g, level_set(g, lam))


# -- file formats -----------------------------------------------------------


def fraction_to_json(x: Fraction):
    return [x.numerator, x.denominator]


def signal_to_json(g: AnySignal) -> dict:
    if isinstance(g, CyclicSignal):
        return {
            "L": g.L,
            "w": fraction_to_json(g.weight),
            "values": [fraction_to_json(v) for v in g.values],
        }
    entries = [[list(p), fraction_to_json(v)] for p, v in sorted(g.items())]
    return {"d": g.d, "entries": entries}


def _exact_number(x) -> Fraction:
    if isinstance(x, float):
        raise DomainError("floating literals are not accepted in exact documents")
    return as_fraction(x)


def signal_from_json(doc: dict) -> AnySignal:
    if "L" in doc:
        vals = [_exact_number(v) for v in doc["values"]]
        if len(vals) != int(doc["L"]):
            raise DomainError("length of 'values' disagrees with 'L'")
        return CyclicSignal(vals, _exact_number(doc.get("w", [1, 1])))
    d = int(doc["d"])
    values = {}
    for point, v in doc["entries"]:
        key = tuple(int(c) for c in point)
        if key in values:
            raise DomainError(f"duplicate entry at {key}")
        values[key] = _exact_number(v)
    return Signal(values, d=d)
