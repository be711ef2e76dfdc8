"""Independent exact cross-checks over the rationals.

Nothing here touches p-adic arithmetic: polynomials are expanded with exact
rational coefficients, so the results can serve as ground truth for the
limit pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class BivarPoly:
    """Sparse polynomial in (x, y) with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def const(cls, c) -> BivarPoly:
        return cls({(0, 0): c})

    @classmethod
    def linear(cls, a, b) -> BivarPoly:
        """a*x + b*y."""
        return cls({(1, 0): a, (0, 1): b})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, BivarPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: BivarPoly) -> BivarPoly:
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return BivarPoly(out)

    def __neg__(self) -> BivarPoly:
        return BivarPoly({key: -c for key, c in self.terms.items()})

    def __sub__(self, other: BivarPoly) -> BivarPoly:
        return self + (-other)

    def __mul__(self, other) -> BivarPoly:
        if not isinstance(other, BivarPoly):
            return BivarPoly({key: c * other for key, c in self.terms.items()})
        out: dict = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                out[(i + k, j + l)] = out.get((i + k, j + l), 0) + a * b
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> BivarPoly:
        out = BivarPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x, y) -> Fraction:
        return sum((c * Fraction(x) ** i * Fraction(y) ** j
                    for (i, j), c in self.terms.items()), Fraction(0))

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def __repr__(self) -> str:
        if not self.terms:
            return "BivarPoly(0)"
        parts = [f"{c}*x^{i}*y^{j}" for (i, j), c in sorted(self.terms.items())]
        return "BivarPoly(" + " + ".join(parts) + ")"


def _check_k(k: int) -> None:
    if k in (0, 1, -1):
        raise ValueError(f"k must satisfy k not in {{0, 1, -1}}, got {k}")


def _monomial_at(degree: int, a, b) -> BivarPoly:
    """(a*x + b*y)**degree."""
    return BivarPoly.linear(a, b) ** degree


def expand_D(degree: int, k: int) -> BivarPoly:
    """LHS - RHS of the mixed equation with f = x**degree, fully expanded.

    f(x+ky) + f(x-ky) - k^2 f(x+y) - k^2 f(x-y) - 2(1-k^2) f(x)
    """
    if not 0 <= degree <= 4:
        raise ValueError("degree must be in 0..4")
    _check_k(k)
    kk = k * k
    return (
        _monomial_at(degree, 1, k)
        + _monomial_at(degree, 1, -k)
        - kk * _monomial_at(degree, 1, 1)
        - kk * _monomial_at(degree, 1, -1)
        - 2 * (1 - kk) * _monomial_at(degree, 1, 0)
    )


def expand_eq12(degree: int) -> BivarPoly:
    """LHS - RHS of f(2x+y) + f(2x-y) = 2f(x+y) + 2f(x-y) + 12f(x) for f = x**degree."""
    if not 0 <= degree <= 4:
        raise ValueError("degree must be in 0..4")
    return (
        _monomial_at(degree, 2, 1)
        + _monomial_at(degree, 2, -1)
        - 2 * _monomial_at(degree, 1, 1)
        - 2 * _monomial_at(degree, 1, -1)
        - 12 * _monomial_at(degree, 1, 0)
    )


def check_cubic_eq12(k_unused=None) -> bool:
    """True when f = x^3 solves the cubic equation identically."""
    return expand_eq12(3).is_zero()


# -- univariate ground truth --------------------------------------------------


@dataclass(frozen=True)
class UPoly:
    """Univariate polynomial as a coefficient tuple, lowest degree first."""

    coeffs: tuple

    @classmethod
    def of(cls, *coeffs) -> UPoly:
        c = [Fraction(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    def __add__(self, other: UPoly) -> UPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UPoly.of(*(s + t for s, t in zip(a, b)))

    def scale(self, c) -> UPoly:
        return UPoly.of(*(a * c for a in self.coeffs))

    def __sub__(self, other: UPoly) -> UPoly:
        return self + other.scale(-1)

    def compose_scale(self, s) -> UPoly:
        """x -> f(s*x)."""
        return UPoly.of(*(a * Fraction(s) ** i for i, a in enumerate(self.coeffs)))

    def part(self, degree: int) -> UPoly:
        c = [Fraction(0)] * (degree + 1)
        if degree < len(self.coeffs):
            c[degree] = self.coeffs[degree]
        return UPoly.of(*c)

    def even(self) -> UPoly:
        return UPoly.of(*(a if i % 2 == 0 else 0 for i, a in enumerate(self.coeffs)))

    def odd(self) -> UPoly:
        return UPoly.of(*(a if i % 2 else 0 for i, a in enumerate(self.coeffs)))

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class Recovery:
    A: UPoly
    Q: UPoly
    C: UPoly
    g: UPoly
    h: UPoly
    A1: UPoly
    C1: UPoly

    def triple(self):
        return self.A, self.Q, self.C


def recovery_oracle(a1, a2, a3, k: int = 2) -> Recovery:
    """Expected decomposition of the exact solution a1 x + a2 x^2 + a3 x^3.

    g and h are expanded symbolically from the odd part; the limits of
    g(2^n x)/2^n and h(2^n x)/8^n keep exactly the degree-1 and degree-3
    parts, since every other monomial is scaled away.
    """
    _check_k(k)
    f = UPoly.of(0, a1, a2, a3)
    fo, fe = f.odd(), f.even()
    g = fo.compose_scale(2) - fo.scale(8)
    h = fo.compose_scale(2) - fo.scale(2)
    A1, C1 = g.part(1), h.part(3)
    Q = fe.part(2)
    return Recovery(A1.scale(Fraction(-1, 6)), Q, C1.scale(Fraction(1, 6)), g, h, A1, C1)

