import random
import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aqcstab.aqc import (
    CheckId, FnModel, Perturbation, StabilizationError, StabilizationPolicy,
    combine_odd, decompose_full, diff_exact, diff_operator, eval_model,
    even_odd_split, g_map, h_map, limit_additive, limit_cubic, limit_quadratic,
    limit_quadratic_fn, stabilize, verify_additivity, verify_bound, verify_defect,
    verify_functional_eq, verify_homogeneity, verify_increment,
)
from aqcstab.control import ControlFn, Theorem
from aqcstab.padic import INF, PAdic, from_fraction, vp

P4 = Perturbation(1, 20, 4)
XS = st.integers(-5000, 5000).filter(bool)


def exact(*coeffs, k=2):
    return FnModel(coeffs, k=k)


def perturbed(r=4, seed=1):
    return FnModel((3, 5, 7), perturbation=Perturbation(seed, 20, r))


def as_int(a: PAdic, x) -> bool:
    return a.equals(from_fraction(Fraction(x), a.prime, abs_prec=a.abs_prec))


# -- models -------------------------------------------------------------------


def test_eval_model_examples():
    assert as_int(eval_model(exact(3, 0, 0), 2), 6)
    assert eval_model(perturbed(), 0).is_exact_zero
    assert as_int(eval_model(exact(3, 5, 7), 1), 15)


def test_model_validation():
    with pytest.raises(ValueError):
        FnModel((1, 3, 5, 7), perturbation=P4)
    with pytest.raises(ValueError):
        FnModel((3, 5, 7), k=-1)
    with pytest.raises(ValueError):
        FnModel((3, 5, 7), prime=6)
    with pytest.raises(ValueError):
        FnModel((3, 5))


def test_perturbation_valuation():
    rng = random.Random(3)
    for _ in range(200):
        x = rng.randint(-(10**9), 10**9) or 7
        e, u = P4.exponent_and_unit(x, 2)
        assert u % 2
        off = vp(P4.value(x, 2), 2) - (20 + 4 * vp(x, 2))
        assert off in (0, 1, 2) and off == e - 20 - 4 * vp(x, 2)
    assert P4.value(0, 2) == 0


def test_diff_operator_examples():
    for x, y in [(1, 1), (3, -5), (17, 4)]:
        assert diff_operator(exact(0, 1, 0), x, y).is_zero
        assert diff_operator(exact(0, 0, 1), x, y).is_zero
    quartic = FnModel((0, 0, 0, 0))
    quartic.exact = lambda x: Fraction(x**4)
    assert diff_exact(quartic, 1, 1) == 24
    assert vp(diff_exact(quartic, 1, 1), 2) == 3


def test_even_odd_examples():
    f = exact(3, 5, 7)
    fe, fo = even_odd_split(f)
    for x in (1, -3, 8, 1000):
        assert as_int(fe(x), 5 * x * x)
        assert as_int(fo(x), 3 * x + 7 * x**3)
    fe_odd, _ = even_odd_split(exact(1, 0, 1))
    assert all(fe_odd(x).is_zero for x in range(-20, 20))


@given(XS)
def test_even_plus_odd_is_f(x):
    f = perturbed()
    fe, fo = even_odd_split(f)
    assert (fe(x, 80) + fo(x, 80)).equals(f(x, 80))
    assert fe(-x).equals(fe(x))
    assert fo(-x).equals(-fo(x))


def test_g_h_examples():
    assert all(g_map(exact(0, 0, 1), x).is_zero for x in range(1, 30))
    assert all(h_map(exact(1, 0, 0), x).is_zero for x in range(1, 30))
    _, fo = even_odd_split(exact(3, 5, 7))
    for x in (1, 5, -12):
        assert as_int(g_map(fo, x), -18 * x)
        assert as_int(h_map(fo, x), 42 * x**3)


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50), XS, XS)
def test_D_is_linear(a, b, x, y):
    f, g = perturbed(seed=1), perturbed(seed=2)
    lhs = (a * diff_exact(f, x, y) + b * diff_exact(g, x, y))
    combo = FnModel((0, 0, 0))
    combo.exact = lambda t: a * f.exact(t) + b * g.exact(t)
    assert diff_exact(combo, x, y) == lhs


# -- limits -------------------------------------------------------------------


def test_limit_examples_exact():
    fe, fo = even_odd_split(exact(3, 5, 7))
    for x in (1, -7, 64):
        assert as_int(limit_quadratic(fe, x), 5 * x * x)
        assert as_int(limit_additive(fo, x), -18 * x)
        assert as_int(limit_cubic(fo, x), 42 * x**3)
    assert limit_quadratic(fe, 0).is_zero
    assert limit_quadratic_fn(fe).trace(3).iterations == 1
    _, cube = even_odd_split(exact(0, 0, 1))
    assert all(limit_additive(cube, x).is_zero for x in (1, 2, 3))
    _, lin = even_odd_split(exact(1, 0, 0))
    assert all(limit_cubic(lin, x).is_zero for x in (1, 2, 3))


def test_quadratic_limit_near_even_part():
    f = FnModel((0, 1, 0), perturbation=Perturbation(1, 20, 3))
    fe, _ = even_odd_split(f)
    assert (limit_quadratic(fe, 1) - fe(1)).certified_valuation >= 17


def test_combine_odd():
    d = decompose_full(exact(3, 5, 7))
    A, C = combine_odd(d.A1, d.C1)
    assert as_int(A(5), 15) and as_int(C(5), 7 * 125)
    zero = decompose_full(exact(0, 0, 7))
    assert all(zero.A(x).is_zero for x in (1, 2, 9))


def test_decompose_zero_function():
    d = decompose_full(exact(0, 0, 0))
    assert all(fn(x).is_zero for fn in d.triple() for x in (1, -4, 12))


def test_cubic_limit_fails_at_r3():
    d = decompose_full(perturbed(r=3))
    with pytest.raises(StabilizationError) as e:
        d.C1(1)
    assert e.value.stage == "CUBIC_RAW"
    assert e.value.iterations == 48
    assert "CUBIC_RAW" in str(e.value)


def test_perturbed_limits_recover_polynomial():
    d = decompose_full(perturbed())
    for x in (1, 3, -1000, 4096):
        A, Q, C = (fn(x) for fn in d.triple())
        assert as_int(A, 3 * x) and as_int(Q, 5 * x * x) and as_int(C, 7 * x**3)


def test_jump_matches_walk():
    f = perturbed()
    jump = decompose_full(f, StabilizationPolicy(extrapolate=True))
    walk = decompose_full(f, StabilizationPolicy(extrapolate=False))
    for x in (1, 2, -3, 96, 4095):
        for a, b in zip(jump.triple(), walk.triple()):
            assert a(x).is_identical(b(x))
        assert jump.C1.trace(x).iterations == walk.C1.trace(x).iterations


def test_depth_independence():
    f = perturbed()
    d24 = decompose_full(f, StabilizationPolicy(max_iter=24))
    d48 = decompose_full(f, StabilizationPolicy(max_iter=48))
    for x in range(-40, 41):
        for a, b in zip(d24.triple(), d48.triple()):
            u, v = a(x), b(x)
            assert u.equals(v, prec=min(u.abs_prec, v.abs_prec))


def test_stabilize_flags_bound_violation():
    seq = [from_fraction(Fraction(1, 2**n), 2, abs_prec=60) for n in range(10)]
    with pytest.raises(StabilizationError) as e:
        stabilize(lambda n: seq[n], (5, 1), 40, StabilizationPolicy(extrapolate=False), "T", 1)
    assert "violates" in e.value.reason


def test_stabilize_empirical_rule():
    seq = [from_fraction(Fraction(2**n), 2, abs_prec=30) for n in range(40)]
    tr = stabilize(lambda n: seq[n], False, 30, StabilizationPolicy(), "T", 1)
    assert not tr.certified and tr.iterations == 27  # increment n has valuation n - 1


def test_cache_is_deterministic_under_threads():
    d = decompose_full(perturbed())
    xs = list(range(1, 60))
    out = {}

    def work(tag):
        out[tag] = [d.C(x) for x in xs]

    ts = [threading.Thread(target=work, args=(i,)) for i in range(4)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    first = out[0]
    assert all(all(a.is_identical(b) for a, b in zip(first, out[i])) for i in out)


@settings(max_examples=30, deadline=None)
@given(XS)
def test_parity_and_homogeneity(x):
    d = decompose_full(perturbed())
    assert d.Q(-x).equals(d.Q(x))
    assert d.A(-x).equals(-d.A(x))
    assert d.C(-x).equals(-d.C(x))
    for cid, fn in ((CheckId.HOM_Q, d.Q), (CheckId.HOM_A, d.A), (CheckId.HOM_C, d.C)):
        assert verify_homogeneity(cid, fn, x, 56).passed


# -- verification -------------------------------------------------------------


def test_bound_examples():
    f = perturbed(r=3)
    d = decompose_full(f)
    cf = f.control
    assert verify_bound(CheckId.B25, f, d, cf, 1).bound_w == 17
    assert verify_bound(CheckId.B214, f, d, cf, 1).bound_w == 16
    row = verify_bound(CheckId.B235, f, d, cf, 1)
    assert row.bound_w == 12 and not row.passed and row.note == "unstable:CUBIC_RAW"


def test_exact_bound_rows_are_zero():
    f = exact(0, 5, 0)
    d = decompose_full(f)
    row = verify_bound(CheckId.B25, f, d, f.control, 3)
    assert row.passed and row.actual_w == INF and row.bound_w == INF


def test_b244_reports_both_verdicts():
    f = perturbed()
    d = decompose_full(f)
    row = verify_bound(CheckId.B244, f, d, f.control, 1, slack_w=2)
    assert row.slack_bound_w == row.bound_w - 2
    assert row.passed and row.passed_slack and row.ok


def test_functional_eq_and_additivity():
    f = perturbed()
    d = decompose_full(f)
    pairs = [(1, 1), (5, -3), (64, 7)]
    for fn in d.triple():
        assert all(r.passed for r in verify_functional_eq(fn, pairs, 56))
    assert verify_functional_eq(d.Q, pairs, 56)[0].check_id == CheckId.DQ_ZERO
    assert all(verify_additivity(d.A, x, y, 56).passed for x, y in pairs)


def test_defect_guarantee_exact():
    rng = random.Random(11)
    for r in (0, 3, 4, 7):
        f = perturbed(r=r)
        for _ in range(50):
            x, y = rng.randint(-4096, 4096), rng.randint(-4096, 4096)
            assert verify_defect(f, f.control, x, y).passed


def test_increment_examples():
    f = exact(3, 5, 7)
    cf = ControlFn(2, INF, 0)
    assert verify_increment(Theorem.T21, f, cf, 3, 2).actual_w == INF
    g = perturbed(r=3)
    d = decompose_full(g)
    rows = [verify_increment(Theorem.T21, g, g.control, 1, n, d) for n in range(1, 17)]
    assert all(r.passed for r in rows)
    assert [r.bound_w for r in rows] == [16 + n for n in range(1, 17)]


def test_cubic_increments_differ_by_weight():
    f = perturbed()
    d = decompose_full(f)
    for x in (1, 3, 40):
        for n in range(1, 10):
            a = verify_increment(Theorem.T22, f, f.control, x, n, d).actual_w
            c = verify_increment(Theorem.T23, f, f.control, x, n, d).actual_w
            assert c == a - 2 * n
