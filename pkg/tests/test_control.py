import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aqcstab.control import (
    ControlFn, InconclusiveError, Theorem, big_max_M, check_admissibility,
    check_uniqueness_condition, increment_bound, increment_bound_affine, m_terms,
    phi, phi_tilde_A, phi_tilde_C, phi_tilde_Q, phi_tilde_terms,
)
from aqcstab.padic import INF, NormVal, vp

CF3 = ControlFn(2, 20, 3)
CF4 = ControlFn(2, 20, 4)
XS = st.integers(-(10**6), 10**6).filter(bool)


def test_phi_examples():
    assert phi(CF3, 1, 1).w == 20
    assert phi(CF3, 4, 2).w == 23
    assert phi(CF3, 0, 0).w == INF
    assert CF3(4, 2) == NormVal(23)


def test_control_validation():
    with pytest.raises(ValueError):
        ControlFn(4, 20, 3)
    with pytest.raises(ValueError):
        ControlFn(2, 20, -1)
    with pytest.raises(ValueError):
        ControlFn(2, 20, 3, variant="OTHER")


def test_halved():
    assert CF3.halved().eps_w == 19
    assert ControlFn(3, 20, 3).halved().eps_w == 20
    assert ControlFn(2, INF, 0).halved().is_zero


def test_big_max_examples():
    assert big_max_M(CF3, 1, 2).w == 20
    assert big_max_M(CF3, 0, 2).w == INF
    assert big_max_M(ControlFn(2, 20, 0), 1, 2).w == 20
    assert len(m_terms(2)) == 11


def test_big_max_rejects_bad_k():
    with pytest.raises(ValueError):
        big_max_M(CF3, 1, 1)


def test_phi_tilde_Q_examples():
    r = phi_tilde_Q(CF3, 1, 2)
    assert (r.value.w, r.attained_index, r.tail_certified) == (20, 0, True)
    assert phi_tilde_Q(CF3, 0, 2).value.w == INF
    r8 = phi_tilde_Q(CF3, 8, 2)
    assert (r8.value.w, r8.attained_index) == (29, 0)


def test_phi_tilde_A_examples():
    r = phi_tilde_A(CF3, 1, 2)
    assert (r.value.w, r.attained_index) == (19, 1)
    assert phi_tilde_A(CF3, 0, 2).value.w == INF
    # r = 2 still grows by one per term, so the tail is certified
    assert phi_tilde_A(ControlFn(2, 20, 2), 1, 2).tail_certified


def test_phi_tilde_A_divergent_is_inconclusive():
    r = phi_tilde_A(ControlFn(2, 20, 0), 1, 2)
    assert not r.tail_certified
    with pytest.raises(InconclusiveError):
        r.certified()


def test_phi_tilde_C_examples():
    r = phi_tilde_C(CF3, 1, 2)
    assert (r.value.w, r.tail_certified) == (17, True)
    assert phi_tilde_C(CF3, 0, 2).value.w == INF
    r4 = phi_tilde_C(CF4, 1, 2)
    assert (r4.value.w, r4.attained_index) == (17, 1)


def test_admissibility_default_r3_cubic_fails():
    # at r = 3 the cubic limit terms have constant valuation
    for th in (Theorem.T21, Theorem.T22):
        assert check_admissibility(CF3, 2, th).holds
    for th in (Theorem.T23, Theorem.T24, Theorem.T25):
        d = check_admissibility(CF3, 2, th)
        assert not d.holds
        assert "2.31" in d.failing_families


def test_admissibility_r4_all_hold():
    for th in Theorem:
        assert check_admissibility(CF4, 2, th).holds
        assert check_uniqueness_condition(CF4, 2, th).holds


def test_admissibility_negative_examples():
    d = check_admissibility(ControlFn(3, 20, 1), 3, Theorem.T21)
    assert not d.holds and d.failing[0].slope == -1
    d = check_admissibility(ControlFn(3, 20, 3), 2, Theorem.T22)
    assert "2.10" in d.failing_families
    d = check_admissibility(ControlFn(2, 20, 1), 2, Theorem.T22)
    assert "2.11" in d.failing_families
    assert not check_uniqueness_condition(ControlFn(2, 20, 1), 2, Theorem.T22).holds


def test_t25_note_mentions_both_readings():
    d = check_admissibility(CF4, 2, Theorem.T25)
    assert any("2.42c" in n for n in d.notes)
    labels = {c.label for c in d.conditions}
    assert {"2.42c", "2.1"} <= labels


def test_zero_control_always_admissible():
    cf = ControlFn(3, INF, 0)
    for th in Theorem:
        assert check_admissibility(cf, 2, th).holds


def test_uniqueness_is_x_independent():
    d1 = check_uniqueness_condition(CF4, 2, Theorem.T25)
    d2 = check_uniqueness_condition(CF4, 2, Theorem.T25)
    assert d1 == d2


# -- properties ---------------------------------------------------------------


@given(XS)
def test_phi_tilde_Q_dominates_first_term(x):
    assert phi_tilde_Q(CF4, x, 2).value >= phi(CF4, 0, x)


@given(XS, st.sampled_from([3, 4, 5]))
def test_phi_tilde_even(x, r):
    cf = ControlFn(2, 20, r)
    for fn in (phi_tilde_Q, phi_tilde_A, phi_tilde_C):
        assert fn(cf, x, 2).value == fn(cf, -x, 2).value


def test_C_terms_are_A_terms_shifted():
    rng = random.Random(5)
    for _ in range(100):
        x = rng.randint(-(10**6), 10**6) or 1
        ta = phi_tilde_terms("A", CF3, x, 2, 8)
        tc = phi_tilde_terms("C", CF3, x, 2, 8)
        assert all(c == a - 2 * m * vp(2, 2) for m, (a, c) in enumerate(zip(ta, tc), 1))


def test_phi_tilde_is_min_of_terms():
    for which, fn in (("Q", phi_tilde_Q), ("A", phi_tilde_A), ("C", phi_tilde_C)):
        for x in (1, 3, 8, -40):
            assert fn(CF4, x, 2).value.w == min(phi_tilde_terms(which, CF4, x, 2, 40))


@given(XS)
def test_phi_tilde_depth_independent(x):
    vals = {phi_tilde_C(CF4, x, 2, t).value for t in (8, 16, 32)}
    assert len(vals) == 1


@given(XS, st.integers(1, 30), st.sampled_from(list(Theorem)[:3]),
       st.sampled_from([(2, 2), (2, 4), (3, 3), (5, 10)]), st.integers(0, 6))
def test_increment_bound_affine_matches_direct(x, n, th, pk, r):
    p, k = pk
    cf = ControlFn(p, 20, r)
    b0, slope = increment_bound_affine(th, cf, k, x)
    assert increment_bound(th, cf, k, x, n) == b0 + slope * n
