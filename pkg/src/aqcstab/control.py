"""Control function phi(x, y) = eps * max(|x|, |y|)**r and derived bounds.

Everything here is valuation arithmetic on integers.  Each quantity is
computed two ways where it matters: by direct evaluation of phi at the
scaled integer arguments, and by the closed affine form in the sequence
index that the power-max family admits.  The two must agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .padic import INF, NormVal, is_prime, vp


class Theorem(str, enum.Enum):
    T21 = "T21"  # quadratic, even f
    T22 = "T22"  # additive, odd f
    T23 = "T23"  # cubic, odd f
    T24 = "T24"  # additive + cubic, odd f
    T25 = "T25"  # full decomposition


class InconclusiveError(RuntimeError):
    """A nested max whose tail could not be certified."""


@dataclass(frozen=True)
class ControlFn:
    """phi(x, y) = p**(-eps_w) * max(|x|_p, |y|_p)**r, phi(0, 0) = 0.

    ``eps_w = INF`` encodes phi == 0 (an exact solution).
    """

    prime: int
    eps_w: int | float
    r: int
    variant: str = "POWER_MAX"

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"prime must be prime, got {self.prime}")
        if self.r < 0:
            raise ValueError(f"r must be nonnegative, got {self.r}")
        if self.variant != "POWER_MAX":
            raise ValueError(f"unsupported control variant {self.variant!r}")

    @property
    def is_zero(self) -> bool:
        return self.eps_w == INF

    def halved(self) -> ControlFn:
        """phi / |2|: the defect bound inherited by the even and odd parts."""
        if self.is_zero:
            return self
        return ControlFn(self.prime, self.eps_w - vp(2, self.prime), self.r)

    def __call__(self, x: int, y: int) -> NormVal:
        return phi(self, x, y)


def phi(cf: ControlFn, x: int, y: int) -> NormVal:
    if (x == 0 and y == 0) or cf.eps_w == INF:
        return NormVal(INF)
    p = cf.prime
    return NormVal(cf.eps_w + cf.r * min(vp(x, p), vp(y, p)))


def m_terms(k: int) -> list[tuple[int, int, int]]:
    """The eleven ``(coefficient, a, b)`` triples of the nested max M(x).

    Each term is ``|coefficient| * phi(a*x, b*x)``.
    """
    c = 2 * (k * k - 1)
    kk = k * k
    return [
        (c, 1, 1),
        (kk, 2, 1),
        (1, 1, 2),
        (1, k + 1, 1),
        (1, k - 1, 1),
        (1, 1, 1),
        (kk, 2, 2),
        (c, 1, 2),
        (1, 1, 3),
        (1, 2 * k + 1, 1),
        (1, 2 * k - 1, 1),
    ]


def _check_k(k: int) -> None:
    if k in (0, 1, -1):
        raise ValueError(f"k must satisfy k not in {{0, 1, -1}}, got {k}")


def big_max_M(cf: ControlFn, x: int, k: int) -> NormVal:
    """max over the eleven weighted phi terms bounding f(4x)-10f(2x)+16f(x)."""
    _check_k(k)
    p = cf.prime
    return NormVal(
        min(vp(c, p) + phi(cf, a * x, b * x).w for c, a, b in m_terms(k))
    )


def m_offset(cf: ControlFn, k: int) -> int:
    """Constant ``c`` with ``M(y) = eps_w + r*v(y) + c`` for every ``y != 0``."""
    p, r = cf.prime, cf.r
    return min(vp(c, p) + r * min(vp(a, p), vp(b, p)) for c, a, b in m_terms(k))


# -- phi-tilde ----------------------------------------------------------------


@dataclass(frozen=True)
class PhiTildeResult:
    value: NormVal
    attained_index: int
    terms_examined: int
    tail_certified: bool
    slope: int | None = None

    def certified(self) -> NormVal:
        if not self.tail_certified:
            raise InconclusiveError(
                f"phi-tilde tail not certified after {self.terms_examined} terms "
                f"(term valuation slope {self.slope})"
            )
        return self.value


def _phi_tilde(term, closed, start: int, max_terms: int) -> PhiTildeResult:
    """max over terms ``start, start+1, ...`` given as valuations.

    ``closed`` is ``(intercept, slope)`` of the exact affine form
    ``term(i) = intercept + slope*i``, or None when every term is zero.
    """
    if closed is None:
        return PhiTildeResult(NormVal(INF), start, 0, True, None)
    intercept, slope = closed
    best, best_i = INF, start
    examined = 0
    for i in range(start, start + max_terms):
        w = term(i)
        if w != intercept + slope * i:
            raise AssertionError(
                f"closed form disagrees with direct evaluation at index {i}: "
                f"{w} != {intercept} + {slope}*{i}"
            )
        examined += 1
        if w < best:
            best, best_i = w, i
        # two direct terms pin the affine form; slope >= 0 means later terms
        # never exceed the current maximum norm
        if examined >= 2 and slope >= 0:
            return PhiTildeResult(NormVal(best), best_i, examined, True, slope)
    return PhiTildeResult(NormVal(best), best_i, examined, False, slope)


def phi_tilde_Q(cf: ControlFn, x: int, k: int, max_terms: int = 32) -> PhiTildeResult:
    """max_j |k|**(-2j) * phi(0, k**j x), j >= 0."""
    _check_k(k)
    p = cf.prime
    vk = vp(k, p)

    def term(j):
        return phi(cf, 0, k**j * x).w - 2 * j * vk

    closed = None
    if x != 0 and not cf.is_zero:
        closed = (cf.eps_w + cf.r * vp(x, p), (cf.r - 2) * vk)
    return _phi_tilde(term, closed, 0, max_terms)


def _phi_tilde_odd(cf, x, k, max_terms, weight):
    _check_k(k)
    p = cf.prime
    v2 = vp(2, p)

    def term(m):
        return big_max_M(cf, 2 ** (m - 1) * x, k).w - weight * m * v2

    closed = None
    if x != 0 and not cf.is_zero:
        c = m_offset(cf, k)
        closed = (
            cf.eps_w + cf.r * (vp(x, p) - v2) + c,
            (cf.r - weight) * v2,
        )
    return _phi_tilde(term, closed, 1, max_terms)


def phi_tilde_terms(which: str, cf: ControlFn, x: int, k: int, count: int) -> list:
    """The first ``count`` term valuations of phi-tilde ``which`` in {Q, A, C}."""
    _check_k(k)
    p = cf.prime
    if which == "Q":
        vk = vp(k, p)
        return [phi(cf, 0, k**j * x).w - 2 * j * vk for j in range(count)]
    weight = {"A": 1, "C": 3}[which]
    v2 = vp(2, p)
    return [big_max_M(cf, 2 ** (m - 1) * x, k).w - weight * m * v2
            for m in range(1, count + 1)]


def phi_tilde_A(cf: ControlFn, x: int, k: int, max_terms: int = 32) -> PhiTildeResult:
    """max_{m>=1} |2|**(-m) * M(2**(m-1) x)."""
    return _phi_tilde_odd(cf, x, k, max_terms, 1)


def phi_tilde_C(cf: ControlFn, x: int, k: int, max_terms: int = 32) -> PhiTildeResult:
    """max_{m>=1} |8|**(-m) * M(2**(m-1) x)."""
    return _phi_tilde_odd(cf, x, k, max_terms, 3)


# -- per-step increment bounds ----------------------------------------------


def increment_bound(theorem: Theorem, cf: ControlFn, k: int, x: int, n: int) -> int | float:
    """Valuation of the bound on the n-th increment of the limit sequence.

    T21: |2 k^(2n)|^-1 phi(0, k^(n-1) x)
    T22: |2^n k^2 (k^2-1)|^-1 M(2^(n-1) x)
    T23: |8^n k^2 (k^2-1)|^-1 M(2^(n-1) x)
    """
    _check_k(k)
    p = cf.prime
    if theorem == Theorem.T21:
        return phi(cf, 0, k ** (n - 1) * x).w - vp(2, p) - 2 * n * vp(k, p)
    weight = {Theorem.T22: 1, Theorem.T23: 3}[Theorem(theorem)]
    return (
        big_max_M(cf, 2 ** (n - 1) * x, k).w
        - weight * n * vp(2, p)
        - vp(k * k * (k * k - 1), p)
    )


def increment_bound_affine(theorem: Theorem, cf: ControlFn, k: int, x: int):
    """``(b0, slope)`` with ``increment_bound(n) == b0 + slope*n`` for n >= 1.

    None when the bound is identically the zero norm.
    """
    if x == 0 or cf.is_zero:
        return None
    p, r, e = cf.prime, cf.r, cf.eps_w
    v2, vk, vx = vp(2, p), vp(k, p), vp(x, p)
    if theorem == Theorem.T21:
        return e + r * (vx - vk) - v2, (r - 2) * vk
    weight = {Theorem.T22: 1, Theorem.T23: 3}[Theorem(theorem)]
    b0 = e + r * (vx - v2) + m_offset(cf, k) - vp(k * k * (k * k - 1), p)
    return b0, (r - weight) * v2


# -- hypothesis decisions ----------------------------------------------------


@dataclass(frozen=True)
class Condition:
    label: str  # e.g. "2.39b"
    family: str  # base equation, e.g. "2.31"
    kind: str  # "limit0" (terms must tend to 0) or "exists" (max must exist)
    slope: int
    intercept: int | float  # term valuation at n = 0 for x = y = 1
    holds: bool

    def describe(self) -> str:
        need = "-> 0" if self.kind == "limit0" else "max exists"
        verdict = "holds" if self.holds else "FAILS"
        return f"({self.label}) {need}: valuation slope {self.slope} -> {verdict}"


@dataclass(frozen=True)
class Decision:
    theorem: Theorem
    holds: bool
    conditions: tuple[Condition, ...] = field(default_factory=tuple)
    notes: tuple[str, ...] = ()

    @property
    def failing(self) -> list[Condition]:
        return [c for c in self.conditions if not c.holds]

    @property
    def failing_families(self) -> set[str]:
        return {c.family for c in self.failing}


def _families(cf: ControlFn, k: int) -> dict[str, tuple[str, int, int | float]]:
    """family -> (kind, slope, intercept at x = y = 1) for every hypothesis."""
    p, r, e = cf.prime, cf.r, cf.eps_w
    v2, vk = vp(2, p), vp(k, p)
    kk1 = vp(k * k * (k * k - 1), p)
    c = m_offset(cf, k)
    sq = (r - 2) * vk
    return {
        "2.1": ("limit0", sq, e),
        "2.2": ("limit0", sq, e - r * vk - v2),
        "2.3": ("exists", sq, e),
        "2.10": ("limit0", (r - 1) * v2, e + min(r * v2, 3 * v2)),
        "2.11": ("limit0", (r - 1) * v2, e - r * v2 + c - kk1),
        "2.12": ("exists", (r - 1) * v2, e - r * v2 + c),
        "2.31": ("limit0", (r - 3) * v2, e + min(r * v2, v2)),
        "2.32": ("limit0", (r - 3) * v2, e - r * v2 + c - kk1),
        "2.33": ("exists", (r - 3) * v2, e - r * v2 + c),
        "2.42c": ("limit0", (r - 2) * v2, e),
    }


# theorem -> [(label, family)]; T24/T25 also carry the hypotheses their
# proofs inherit from Theorems 2.1-2.3 (Cauchy-ness of each sequence)
_THEOREM_CONDITIONS = {
    Theorem.T21: [("2.1", "2.1"), ("2.2", "2.2"), ("2.3", "2.3")],
    Theorem.T22: [("2.10", "2.10"), ("2.11", "2.11"), ("2.12", "2.12")],
    Theorem.T23: [("2.31", "2.31"), ("2.32", "2.32"), ("2.33", "2.33")],
    Theorem.T24: [
        ("2.39a", "2.10"), ("2.39b", "2.31"),
        ("2.11", "2.11"), ("2.32", "2.32"),
        ("2.12", "2.12"), ("2.33", "2.33"),
    ],
    Theorem.T25: [
        ("2.42a", "2.10"), ("2.42b", "2.31"), ("2.42c", "2.42c"),
        ("2.1", "2.1"), ("2.2", "2.2"),
        ("2.11", "2.11"), ("2.32", "2.32"),
        ("2.3", "2.3"), ("2.12", "2.12"), ("2.33", "2.33"),
    ],
}

_T25_NOTE = (
    "(2.42) scales the quadratic hypothesis by 2 while Q is built with k; "
    "both readings (2.42c) and (2.1) are required"
)


def check_admissibility(cf: ControlFn, k: int, theorem: Theorem) -> Decision:
    """Decide the limit hypotheses of a theorem in closed form.

    For the power-max family every hypothesis term has valuation affine in
    n with an x-independent slope, so a limit-to-zero holds iff the slope
    is positive and a nested max exists iff the slope is nonnegative.
    """
    _check_k(k)
    theorem = Theorem(theorem)
    fam = _families(cf, k)
    conds = []
    for label, family in _THEOREM_CONDITIONS[theorem]:
        kind, slope, intercept = fam[family]
        if cf.is_zero:
            ok = True
        elif kind == "limit0":
            ok = slope > 0
        else:
            ok = slope >= 0
        conds.append(Condition(label, family, kind, slope, intercept, ok))
    notes = (_T25_NOTE,) if theorem == Theorem.T25 else ()
    return Decision(theorem, all(c.holds for c in conds), tuple(conds), notes)


_UNIQUENESS_FAMILIES = {
    Theorem.T21: ["2.3"],
    Theorem.T22: ["2.12"],
    Theorem.T23: ["2.33"],
    Theorem.T24: ["2.12", "2.33"],
    Theorem.T25: ["2.12", "2.3", "2.33"],
}


def check_uniqueness_condition(cf: ControlFn, k: int, theorem: Theorem) -> Decision:
    """Decide lim_i lim_n max_{i<=j<n+i} term_j = 0.

    The inner max over a window of an affine valuation sequence tends to the
    zero norm as i grows iff the slope is positive; no sample point enters.
    """
    _check_k(k)
    theorem = Theorem(theorem)
    fam = _families(cf, k)
    conds = []
    for family in _UNIQUENESS_FAMILIES[theorem]:
        _, slope, intercept = fam[family]
        ok = cf.is_zero or slope > 0
        conds.append(Condition(f"uniq:{family}", family, "limit0", slope, intercept, ok))
    return Decision(theorem, all(c.holds for c in conds), tuple(conds))
