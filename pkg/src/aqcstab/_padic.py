"""Exact arithmetic in Q_p with per-value absolute precision.

A nonzero element is stored as ``p**valuation * unit`` with ``unit`` a
residue modulo ``p**(abs_prec - valuation)`` coprime to ``p``.  Zero is
canonical (``valuation = INF``, ``unit = 0``) and still carries the absolute
precision to which it is known; an *exact* zero has ``abs_prec = INF``.

Precision is tracked zealously: sums keep the smaller absolute precision,
products and quotients keep the smaller relative precision.  Norms are never
floats; they are valuations compared as integers (see :class:`NormVal`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from . import kernels as _k

INF = math.inf
DEFAULT_PREC = 64


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp(n: int | Fraction, p: int):
    """p-adic valuation of a rational; ``INF`` for zero."""
    if n == 0:
        return INF
    if isinstance(n, int):
        return _k.split(n, p)[0]
    q = Fraction(n)
    return _k.split(q.numerator, p)[0] - _k.split(q.denominator, p)[0]


@dataclass(frozen=True, order=False)
class NormVal:
    """The ultrametric norm ``p**(-w)``; ``w = INF`` is the zero norm.

    Comparison operators compare *norms*, so ``a < b`` iff ``a.w > b.w``.
    """

    w: int | float

    @property
    def is_zero(self) -> bool:
        return self.w == INF

    def __lt__(self, other: NormVal) -> bool:
        return self.w > other.w

    def __le__(self, other: NormVal) -> bool:
        return self.w >= other.w

    def __gt__(self, other: NormVal) -> bool:
        return self.w < other.w

    def __ge__(self, other: NormVal) -> bool:
        return self.w <= other.w

    def __mul__(self, other: NormVal) -> NormVal:
        return NormVal(self.w + other.w)

    def scaled(self, shift: int) -> NormVal:
        """Multiply the norm by ``p**(-shift)``."""
        return NormVal(self.w + shift)

    @staticmethod
    def max(*norms: NormVal) -> NormVal:
        return NormVal(min(n.w for n in norms))

    def to_fraction(self, p: int) -> Fraction:
        if self.w == INF:
            return Fraction(0)
        return Fraction(p) ** (-self.w)

    def __str__(self) -> str:
        return "inf" if self.w == INF else str(self.w)


class PAdic:
    __slots__ = ("prime", "valuation", "unit", "abs_prec")

    def __init__(self, prime: int, valuation, unit: int, abs_prec):
        if unit == 0:
            if valuation != INF:
                raise ValueError("zero must have infinite valuation")
        else:
            if unit % prime == 0:
                raise ValueError("unit must be coprime to the prime")
            if not abs_prec > valuation:
                raise ValueError("abs_prec must exceed the valuation")
            unit %= _k.ppow(prime, abs_prec - valuation)
        self.prime = prime
        self.valuation = valuation
        self.unit = unit
        self.abs_prec = abs_prec

    # -- construction -------------------------------------------------------

    @classmethod
    def _wrap(cls, p: int, t: tuple) -> PAdic:
        return _new(p, *t)

    @classmethod
    def zero(cls, p: int, abs_prec=INF) -> PAdic:
        obj = object.__new__(cls)
        obj.prime = p
        obj.valuation = INF
        obj.unit = 0
        obj.abs_prec = abs_prec
        return obj

    def _triple(self) -> tuple:
        if self.unit == 0:
            return self.abs_prec, 0, self.abs_prec
        return self.valuation, self.unit, self.abs_prec

    # -- queries ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True when the value is zero to its known precision."""
        return self.unit == 0

    @property
    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.abs_prec == INF

    @property
    def rel_prec(self):
        return 0 if self.unit == 0 else self.abs_prec - self.valuation

    @property
    def certified_valuation(self):
        """A valuation lower bound that is guaranteed for the true value."""
        return self.abs_prec if self.unit == 0 else self.valuation

    def norm(self) -> NormVal:
        return NormVal(self.valuation)

    def to_fraction(self) -> Fraction:
        """The canonical rational representative ``p**v * unit``."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.prime) ** self.valuation * self.unit

    def truncate(self, abs_prec) -> PAdic:
        """Forget digits at and beyond ``p**abs_prec``."""
        if abs_prec >= self.abs_prec:
            return self
        if self.unit == 0:
            return PAdic.zero(self.prime, abs_prec)
        return PAdic._wrap(
            self.prime, _k.normalize(self.prime, self.valuation, self.unit, abs_prec)
        )

    def equals(self, other, prec=None) -> bool:
        """Equality modulo ``p**min(abs_prec_a, abs_prec_b[, prec])``."""
        other = self._coerce_add(other)
        d = self - other
        if prec is not None and prec < d.abs_prec:
            d = d.truncate(prec)
        return d.unit == 0

    def is_identical(self, other: PAdic) -> bool:
        return (
            self.prime == other.prime
            and self.valuation == other.valuation
            and self.unit == other.unit
            and self.abs_prec == other.abs_prec
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, (PAdic, int, Rational)):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __bool__(self) -> bool:
        return self.unit != 0

    def __repr__(self) -> str:
        p = self.prime
        tail = "" if self.abs_prec == INF else f" + O({p}^{self.abs_prec})"
        if self.unit == 0:
            return f"PAdic({p}: 0{tail})"
        return f"PAdic({p}: {p}^{self.valuation} * {self.unit}{tail})"

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: PAdic) -> None:
        if other.prime != self.prime:
            raise ValueError(f"prime mismatch: {self.prime} vs {other.prime}")

    def _coerce_add(self, other) -> PAdic:
        if isinstance(other, PAdic):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            if q == 0:
                return PAdic.zero(self.prime)
            a = self.abs_prec
            if a == INF:
                return from_fraction(q, self.prime)
            return from_fraction(q, self.prime, abs_prec=a)
        raise TypeError(f"cannot combine PAdic with {type(other).__name__}")

    def _coerce_mul(self, other) -> PAdic:
        if isinstance(other, PAdic):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            if q == 0:
                return PAdic.zero(self.prime)
            rel = self.rel_prec if self.unit else DEFAULT_PREC
            return from_fraction(q, self.prime, rel)
        raise TypeError(f"cannot combine PAdic with {type(other).__name__}")

    def __add__(self, other) -> PAdic:
        p = self.prime
        if type(other) is PAdic and other.prime == p:
            # hot path: both operands carry finite precision
            a, b = self.abs_prec, other.abs_prec
            if a != INF and b != INF:
                ua, ub = self.unit, other.unit
                return _new(p, *_k.add(p, self.valuation if ua else a, ua, a,
                                       other.valuation if ub else b, ub, b))
        if type(other) is int and self.abs_prec != INF:
            if other == 0:
                return self
            p = self.prime
            a = self.abs_prec
            return PAdic._wrap(p, _k.add(p, *self._triple(), *_k.from_fraction(other, 1, p, a)))
        try:
            b = self._coerce_add(other)
        except TypeError:
            return NotImplemented
        if b.unit == 0 and b.abs_prec == INF:
            return self
        if self.unit == 0 and self.abs_prec == INF:
            return b
        p = self.prime
        return PAdic._wrap(p, _k.add(p, *self._triple(), *b._triple()))

    __radd__ = __add__

    def __neg__(self) -> PAdic:
        if self.unit == 0:
            return self
        return PAdic._wrap(
            self.prime, _k.neg(self.prime, self.valuation, self.unit, self.abs_prec)
        )

    def __sub__(self, other) -> PAdic:
        try:
            b = self._coerce_add(other)
        except TypeError:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other) -> PAdic:
        try:
            b = self._coerce_add(other)
        except TypeError:
            return NotImplemented
        return b + (-self)

    def _int_triple(self, c: int) -> tuple:
        # an exact integer factor, carried at this value's relative precision
        vc, uc = _k.split(c, self.prime)
        return vc, uc, vc + (self.abs_prec - self.valuation if self.unit else DEFAULT_PREC)

    def __mul__(self, other) -> PAdic:
        p = self.prime
        if type(other) is int:
            if other == 0 or (self.unit == 0 and self.abs_prec == INF):
                return PAdic.zero(p)
            return PAdic._wrap(p, _k.mul(p, *self._triple(), *self._int_triple(other)))
        try:
            b = self._coerce_mul(other)
        except TypeError:
            return NotImplemented
        if (self.unit == 0 and self.abs_prec == INF) or (
            b.unit == 0 and b.abs_prec == INF
        ):
            return PAdic.zero(p)
        return PAdic._wrap(p, _k.mul(p, *self._triple(), *b._triple()))

    __rmul__ = __mul__

    def __truediv__(self, other) -> PAdic:
        p = self.prime
        if type(other) is int:
            if other == 0:
                raise ZeroDivisionError("p-adic division by zero")
            if self.unit == 0 and self.abs_prec == INF:
                return self
            return PAdic._wrap(p, _k.div(p, *self._triple(), *self._int_triple(other)))
        try:
            b = self._coerce_mul(other)
        except TypeError:
            return NotImplemented
        if b.unit == 0:
            raise ZeroDivisionError("p-adic division by zero")
        if self.unit == 0 and self.abs_prec == INF:
            return self
        return PAdic._wrap(p, _k.div(p, *self._triple(), *b._triple()))

    def __rtruediv__(self, other) -> PAdic:
        try:
            a = self._coerce_mul(other)
        except TypeError:
            return NotImplemented
        return a / self

    def shift(self, e: int) -> PAdic:
        """Multiply by ``p**e`` exactly (valuation and precision move by e)."""
        if self.unit == 0:
            return PAdic.zero(self.prime, self.abs_prec + e)
        return PAdic._wrap(
            self.prime, (self.valuation + e, self.unit, self.abs_prec + e)
        )


_alloc = object.__new__


def _new(p: int, v, u: int, a) -> PAdic:
    obj = _alloc(PAdic)
    obj.prime = p
    obj.valuation = v if u else INF
    obj.unit = u
    obj.abs_prec = a
    return obj


# -- module-level operations ------------------------------------------------


def from_rational(
    num: int, den: int, p: int, target_prec: int = DEFAULT_PREC, *, abs_prec=None
) -> PAdic:
    """Embed ``num/den`` into Q_p.

    The result carries ``target_prec`` digits of relative precision, or is
    known modulo ``p**abs_prec`` when ``abs_prec`` is given.  ``num == 0``
    gives the exact zero unless ``abs_prec`` is given.
    """
    if type(p) is not int or p not in _PRIMES:
        _require_prime(p)
    if not den:
        raise ValueError("from_rational: zero denominator")
    if not num:
        return PAdic.zero(p, INF if abs_prec is None else abs_prec)
    if abs_prec is None:
        if target_prec < 1:
            raise ValueError(f"target_prec must be >= 1, got {target_prec}")
        return _new(p, *_k.from_fraction_rel(num, den, p, target_prec))
    return _embed(num, den, p, abs_prec)


_PRIMES: set[int] = set()


def _require_prime(p) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime, got {p!r}")
    if len(_PRIMES) < 1024:
        _PRIMES.add(int(p))


def _embed(num: int, den: int, p: int, abs_prec: int) -> PAdic:
    """Unchecked embedding of num/den modulo p**abs_prec."""
    if num == 0:
        return PAdic.zero(p, abs_prec)
    return PAdic._wrap(p, _k.from_fraction(num, den, p, abs_prec))


def from_fraction(q, p: int, target_prec: int = DEFAULT_PREC, *, abs_prec=None) -> PAdic:
    q = Fraction(q)
    return from_rational(q.numerator, q.denominator, p, target_prec, abs_prec=abs_prec)


def add(a: PAdic, b: PAdic) -> PAdic:
    a._check(b)
    return a + b


def sub(a: PAdic, b: PAdic) -> PAdic:
    a._check(b)
    return a - b


def mul(a: PAdic, b: PAdic) -> PAdic:
    a._check(b)
    return a * b


def div(a: PAdic, b: PAdic) -> PAdic:
    a._check(b)
    return a / b


def norm(a: PAdic) -> NormVal:
    return NormVal(a.valuation)
