"""Limit constructions Q, A_1, C_1 and their recombination into A, Q, C.

Each limit is the stabilized value of ``s_n = F(b**n x) / c**n``.  The
increments are checked against the closed-form per-step bound from
:mod:`aqcstab.control`; when that bound grows (slope >= 1) it certifies the
whole tail, so ``s_n`` agrees with the limit modulo ``p**b(n+1)``.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction

from ..control import Theorem, increment_bound_affine
from ..padic import INF, PAdic, vp
from .models import EvenPart, GMap, HMap, OddPart, PadicFunction, even_odd_split


class Kind(str, enum.Enum):
    QUADRATIC = "QUADRATIC"
    ADDITIVE_RAW = "ADDITIVE_RAW"
    CUBIC_RAW = "CUBIC_RAW"
    ADDITIVE = "ADDITIVE"
    CUBIC = "CUBIC"
    QUAD_FINAL = "QUAD_FINAL"


@dataclass(frozen=True)
class StabilizationPolicy:
    max_iter: int = 48
    slack: int = 4  # only used when no certified tail bound is available
    # With a certified bound, jump straight to the stopping index and check
    # only the last increment instead of walking every step.
    extrapolate: bool = True


class StabilizationError(RuntimeError):
    def __init__(self, stage: str, x: int, iterations: int, last_w, reason: str):
        self.stage = stage
        self.x = x
        self.iterations = iterations
        self.last_increment_w = last_w
        self.reason = reason
        super().__init__(
            f"{stage} limit at x={x} did not stabilize after {iterations} "
            f"iterations: {reason} (last increment valuation {last_w})"
        )


@dataclass(frozen=True)
class LimitTrace:
    value: PAdic
    iterations: int
    increments: tuple  # certified valuation of each increment
    certified: bool
    tail_w: int | float | None


def stabilize(term, bound, target, policy: StabilizationPolicy, stage: str, x: int) -> LimitTrace:
    """Run ``s_n = term(n)`` until the limit is pinned to ``target`` digits.

    ``bound`` is ``(b0, slope)`` of the certified increment bound, ``None`` for
    an identically zero bound, or ``False`` when no bound is known.
    """
    certified = bound is None or (bound is not False and bound[1] >= 1)

    def b(n):
        return INF if bound is None else bound[0] + bound[1] * n

    if certified and policy.extrapolate:
        return _jump(term, bound, b, target, policy, stage, x)

    prev = term(0)
    incs = []
    last_w = None
    s = prev
    for n in range(1, policy.max_iter + 1):
        s = term(n)
        d = s - prev
        last_w = d.certified_valuation
        incs.append(last_w)
        if bound is not False and not d.is_zero and d.valuation < b(n):
            raise StabilizationError(
                stage, x, n, last_w,
                f"increment valuation {d.valuation} violates certified bound {b(n)}",
            )
        if certified:
            tail = b(n + 1)
            if tail >= target:
                return LimitTrace(s.truncate(target), n, tuple(incs), True, tail)
        elif last_w >= target - policy.slack:
            return LimitTrace(s.truncate(last_w), n, tuple(incs), False, None)
        prev = s
    if certified:
        tail = b(policy.max_iter + 1)
        return LimitTrace(s.truncate(min(target, tail)), policy.max_iter, tuple(incs), True, tail)
    raise StabilizationError(stage, x, policy.max_iter, last_w, "increments stayed above the cap")


def _jump(term, bound, b, target, policy, stage, x) -> LimitTrace:
    # the walk stops at the first n with b(n+1) >= target, capped at max_iter
    if bound is None:
        n = 1
    else:
        b0, slope = bound
        n = max(1, -(-(target - b0) // slope) - 1)
        n = min(int(n), policy.max_iter)
    prev, s = term(n - 1), term(n)
    d = s - prev
    if not d.is_zero and d.valuation < b(n):
        raise StabilizationError(
            stage, x, n, d.valuation,
            f"increment valuation {d.valuation} violates certified bound {b(n)}",
        )
    tail = b(n + 1)
    return LimitTrace(s.truncate(min(target, tail)), n, (d.certified_valuation,), True, tail)


class LimitFn(PadicFunction):
    """A limit function evaluated pointwise with an idempotent point cache."""

    def __init__(self, kind: Kind, base: PadicFunction, scale: int, step_div: int,
                 theorem: Theorem, degree: int, policy: StabilizationPolicy | None = None):
        self.kind = Kind(kind)
        self.base = base
        self.prime = base.prime
        self.k = base.k
        self.prec = base.prec
        self.scale = scale
        self.step_div = step_div
        self.theorem = theorem
        self.degree = degree
        self.policy = policy or StabilizationPolicy()
        self.control = base.control
        self._step_w = vp(step_div, self.prime)
        self._cache: dict = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"LimitFn({self.kind.value}, max_iter={self.policy.max_iter})"

    def trace(self, x: int, prec=None) -> LimitTrace:
        target = self.default_prec(x) if prec is None else max(prec, self.default_prec(x))
        key = (x, target)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if x == 0:
            tr = LimitTrace(PAdic.zero(self.prime, target), 0, (), True, INF)
        else:
            bound = increment_bound_affine(self.theorem, self.control, self.k, x)
            sw, base, scale, sd = self._step_w, self.base, self.scale, self.step_div

            def term(n):
                return base(scale**n * x, target + n * sw) / sd**n

            tr = stabilize(term, bound, target, self.policy, self.kind.value, x)
        with self._lock:
            # first writer wins; concurrent fills compute identical values
            return self._cache.setdefault(key, tr)

    def evaluate(self, x: int, prec: int) -> PAdic:
        return self.trace(x, prec).value


class ScaledFn(PadicFunction):
    """factor * inner(x), used for A = -A_1/6 and C = C_1/6."""

    def __init__(self, kind: Kind, inner: PadicFunction, factor: Fraction):
        self.kind = Kind(kind)
        self.inner = inner
        self.factor = Fraction(factor)
        self.prime = inner.prime
        self.k = inner.k
        self.prec = inner.prec
        self.degree = inner.degree
        self.control = inner.control
        self._shift = vp(self.factor, self.prime)

    @property
    def policy(self):
        return self.inner.policy

    def evaluate(self, x, prec):
        return self.inner(x, prec - self._shift) * self.factor


def limit_quadratic_fn(fe: PadicFunction, policy=None, kind=Kind.QUADRATIC) -> LimitFn:
    k = fe.k
    return LimitFn(kind, fe, k, k * k, Theorem.T21, 2, policy)


def limit_additive_fn(fo: PadicFunction, policy=None) -> LimitFn:
    return LimitFn(Kind.ADDITIVE_RAW, GMap(fo), 2, 2, Theorem.T22, 1, policy)


def limit_cubic_fn(fo: PadicFunction, policy=None) -> LimitFn:
    return LimitFn(Kind.CUBIC_RAW, HMap(fo), 2, 8, Theorem.T23, 3, policy)


def limit_quadratic(fe: PadicFunction, x: int, policy=None) -> PAdic:
    """Q(x) = lim f_e(k^n x) / k^(2n)."""
    return limit_quadratic_fn(fe, policy)(x)


def limit_additive(fo: PadicFunction, x: int, policy=None) -> PAdic:
    """A_1(x) = lim g(2^n x) / 2^n with g(x) = f_o(2x) - 8 f_o(x)."""
    return limit_additive_fn(fo, policy)(x)


def limit_cubic(fo: PadicFunction, x: int, policy=None) -> PAdic:
    """C_1(x) = lim h(2^n x) / 8^n with h(x) = f_o(2x) - 2 f_o(x)."""
    return limit_cubic_fn(fo, policy)(x)


def combine_odd(A1: PadicFunction, C1: PadicFunction) -> tuple[ScaledFn, ScaledFn]:
    return (
        ScaledFn(Kind.ADDITIVE, A1, Fraction(-1, 6)),
        ScaledFn(Kind.CUBIC, C1, Fraction(1, 6)),
    )


@dataclass
class Decomposition:
    f: PadicFunction
    fe: EvenPart
    fo: OddPart
    g: GMap
    h: HMap
    Q: LimitFn
    A1: LimitFn
    C1: LimitFn
    A: ScaledFn
    C: ScaledFn

    def triple(self):
        return self.A, self.Q, self.C


def decompose_full(f: PadicFunction, policy=None) -> Decomposition:
    """even/odd split -> Q from f_e, A_1 and C_1 from f_o -> A, C."""
    fe, fo = even_odd_split(f)
    Q = limit_quadratic_fn(fe, policy, Kind.QUAD_FINAL)
    A1 = limit_additive_fn(fo, policy)
    C1 = limit_cubic_fn(fo, policy)
    A, C = combine_odd(A1, C1)
    return Decomposition(f, fe, fo, A1.base, C1.base, Q, A1, C1, A, C)
