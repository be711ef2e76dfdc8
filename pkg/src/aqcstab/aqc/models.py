"""Function models G = Z -> Q_p and the views derived from them.

Every function object answers ``f(x, prec)`` with a :class:`PAdic` known to
absolute precision at least ``prec``.  When ``prec`` is omitted the working
precision ``N + degree * v_p(x)`` is used, i.e. ``N`` digits relative to the
natural scale of a degree-``degree`` homogeneous function at ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .. import kernels as _k
from ..control import ControlFn
from ..padic import DEFAULT_PREC, INF, PAdic, _embed, is_prime, vp


def _v0(x: int, p: int) -> int:
    return 0 if x == 0 else _k.split(x, p)[0]


class PadicFunction:
    """Base class for functions Z -> Q_p with precision-on-demand evaluation."""

    prime: int
    k: int
    prec: int = DEFAULT_PREC
    degree: int = 1
    control: ControlFn  # bound on the defect ||D f(x, y)||

    def default_prec(self, x: int) -> int:
        return self.prec + self.degree * _v0(x, self.prime)

    def __call__(self, x: int, prec=None) -> PAdic:
        if prec is None:
            prec = self.default_prec(x)
        return self.evaluate(x, prec)

    def evaluate(self, x: int, prec: int) -> PAdic:
        raise NotImplementedError


@dataclass(frozen=True)
class Perturbation:
    """Deterministic hashed perturbation with ||delta(x)|| <= p**-eps_w |x|**r."""

    seed: int
    eps_w: int
    r: int

    def exponent_and_unit(self, x: int, p: int) -> tuple[int, int]:
        h = _k.mix64(self.seed, x)
        offset = h % 3
        u = h >> 8
        if u % p == 0:
            u += 1
        if h & 4:
            u = -u
        return self.eps_w + self.r * _v0(x, p) + offset, u

    def parts(self, x: int, p: int) -> tuple[int, int]:
        """delta(x) as an integer fraction ``(num, den)``."""
        if x == 0:
            return 0, 1
        e, u = self.exponent_and_unit(x, p)
        if e >= 0:
            return u * p**e, 1
        return u, p ** (-e)

    def value(self, x: int, p: int) -> Fraction:
        return Fraction(*self.parts(x, p))


class FnModel(PadicFunction):
    """f(x) = a0 + a1 x + a2 x^2 + a3 x^3 + delta(x)."""

    degree = 1

    def __init__(self, coeffs, prime: int = 2, k: int = 2,
                 perturbation: Perturbation | None = None, prec: int = DEFAULT_PREC):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) == 3:
            coeffs = (Fraction(0),) + coeffs
        if len(coeffs) != 4:
            raise ValueError("coeffs must be (a1, a2, a3) or (a0, a1, a2, a3)")
        if not is_prime(prime):
            raise ValueError(f"prime must be prime, got {prime}")
        if k in (0, 1, -1):
            raise ValueError(f"k must satisfy k not in {{0, 1, -1}}, got {k}")
        if perturbation is not None and coeffs[0] != 0:
            raise ValueError("a0 must be 0 when a perturbation is enabled (phi(0, 0) = 0)")
        if prec < 1:
            raise ValueError("prec must be positive")
        self.coeffs = coeffs
        den = math.lcm(*(c.denominator for c in coeffs))
        self._num = tuple(int(c * den) for c in coeffs)
        self._den = den
        self.prime = prime
        self.k = k
        self.perturbation = perturbation
        self.prec = prec
        if perturbation is None:
            self.control = ControlFn(prime, INF, 0)
        else:
            self.control = ControlFn(prime, perturbation.eps_w, perturbation.r)

    def __repr__(self):
        a = ", ".join(str(c) for c in self.coeffs)
        return f"FnModel(({a}), p={self.prime}, k={self.k}, {self.perturbation})"

    def poly(self, x: int) -> Fraction:
        a0, a1, a2, a3 = self.coeffs
        return a0 + x * (a1 + x * (a2 + x * a3))

    def delta(self, x: int) -> Fraction:
        if self.perturbation is None:
            return Fraction(0)
        return self.perturbation.value(x, self.prime)

    def exact_parts(self, x: int) -> tuple[int, int]:
        n0, n1, n2, n3 = self._num
        num = n0 + x * (n1 + x * (n2 + x * n3))
        if self.perturbation is None:
            return num, self._den
        dn, dd = self.perturbation.parts(x, self.prime)
        return num * dd + dn * self._den, self._den * dd

    def exact(self, x: int) -> Fraction:
        return Fraction(*self.exact_parts(x))

    def evaluate(self, x: int, prec: int) -> PAdic:
        num, den = self.exact_parts(x)
        if num == 0:
            return PAdic.zero(self.prime)
        return _embed(num, den, self.prime, prec)


def eval_model(f: FnModel, x: int, prec=None) -> PAdic:
    return f(x, prec)


class _View(PadicFunction):
    def __init__(self, base: PadicFunction):
        self.base = base
        self.prime = base.prime
        self.k = base.k
        self.prec = base.prec


class EvenPart(_View):
    """f_e(x) = (f(x) + f(-x)) / 2."""

    degree = 2

    def __init__(self, base):
        super().__init__(base)
        self.control = base.control.halved()
        self._v2 = vp(2, self.prime)

    def evaluate(self, x, prec):
        q = prec + self._v2
        return (self.base(x, q) + self.base(-x, q)) / 2


class OddPart(_View):
    """f_o(x) = (f(x) - f(-x)) / 2."""

    degree = 1

    def __init__(self, base):
        super().__init__(base)
        self.control = base.control.halved()
        self._v2 = vp(2, self.prime)

    def evaluate(self, x, prec):
        q = prec + self._v2
        return (self.base(x, q) - self.base(-x, q)) / 2


class GMap(_View):
    """g(x) = f(2x) - 8 f(x)."""

    degree = 1

    def __init__(self, base):
        super().__init__(base)
        self.control = base.control

    def evaluate(self, x, prec):
        return self.base(2 * x, prec) - self.base(x, prec) * 8


class HMap(_View):
    """h(x) = f(2x) - 2 f(x)."""

    degree = 3

    def __init__(self, base):
        super().__init__(base)
        self.control = base.control

    def evaluate(self, x, prec):
        return self.base(2 * x, prec) - self.base(x, prec) * 2


def even_odd_split(f: PadicFunction) -> tuple[EvenPart, OddPart]:
    return EvenPart(f), OddPart(f)


def g_map(f: PadicFunction, x: int, prec=None) -> PAdic:
    return GMap(f)(x, prec)


def h_map(f: PadicFunction, x: int, prec=None) -> PAdic:
    return HMap(f)(x, prec)


def diff_operator(f: PadicFunction, x: int, y: int, prec=None) -> PAdic:
    """Df(x,y) = f(x+ky) + f(x-ky) - k^2 f(x+y) - k^2 f(x-y) - 2(1-k^2) f(x)."""
    k = f.k
    if prec is None:
        prec = max(f.default_prec(x), f.default_prec(y))
    kk = k * k
    return (
        f(x + k * y, prec)
        + f(x - k * y, prec)
        - (f(x + y, prec) + f(x - y, prec)) * kk
        - f(x, prec) * (2 * (1 - kk))
    )
