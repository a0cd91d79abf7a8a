"""Closed forms vs independent enumeration, recurrence twins, and asymptotics."""

from fractions import Fraction
from math import ceil, floor, log

import pytest

from mallows_postdoc.closedform import (
    asymptotic_f,
    case31_value,
    h1,
    h2,
    j3,
    t1,
    t1_two,
    t2,
    t2_recurrence,
    threshold_roots,
    w1_star,
    w1_star_recurrence,
    w1_total,
    w1_two,
    w1_two_solved,
    w2,
    w2_asymptotic_ratio,
    w2_recurrence,
    w2_win_ratio,
)
from mallows_postdoc.engine import level_recurrence
from mallows_postdoc.qpoly import p_factorial, p_poly

from conftest import (
    all_perms,
    first_pick_type1,
    first_pick_two,
    first_pick_type2,
    weighted_sum,
)

SPOT_THETAS = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 4))


# ---------------------------------------------------------------------------
# exhaustive cross-checks (small n here; the full n<=7 grid runs in acceptance)


@pytest.mark.parametrize("theta", SPOT_THETAS)
def test_t2_w2_match_enumeration(theta):
    for n in range(1, 7):
        for k in range(0, n + 1):
            expect = weighted_sum(n, theta, lambda p: first_pick_type2(p, k) is None)
            assert t2(n, k, theta) == expect
            if n >= 2 and k <= n - 1:
                def wins(p):
                    i = first_pick_type2(p, k)
                    return i is not None and p[i - 1] == n - 1
                assert w2(n, k, theta) == weighted_sum(n, theta, wins)


@pytest.mark.parametrize("theta", SPOT_THETAS)
def test_t1_w1_match_enumeration(theta):
    for n in range(2, 7):
        for k in range(0, n + 1):
            expect = weighted_sum(n, theta, lambda p: first_pick_type1(p, k) is None)
            assert t1(n, k, theta) == expect
        for k in range(0, n):
            def star_wins(p):
                i = first_pick_type1(p, k)
                return i is not None and p[i - 1] == n - 1
            def total_wins(p):
                i = first_pick_type1(p, k)
                pick = i if i is not None else n
                return p[pick - 1] == n - 1
            assert w1_star(n, k, theta) == weighted_sum(n, theta, star_wins)
            assert w1_total(n, k, theta) == weighted_sum(n, theta, total_wins)


@pytest.mark.parametrize("theta", SPOT_THETAS)
def test_two_threshold_family_matches_enumeration(theta):
    for n in range(3, 7):
        for k1 in range(1, n + 1):
            for k2 in range(k1, n + 1):
                expect = weighted_sum(
                    n, theta, lambda p: first_pick_two(p, k1, k2) is None
                )
                assert t1_two(n, k1, k2, theta) == expect
        for k1 in range(1, n - 1):
            for k2 in range(k1, n - 1):
                def wins(p):
                    i = first_pick_two(p, k1, k2)
                    return i is not None and p[i - 1] == n - 1
                assert w1_two(n, k1, k2, theta) == weighted_sum(n, theta, wins)


# ---------------------------------------------------------------------------
# recurrence / solved-form twins


@pytest.mark.parametrize("theta", SPOT_THETAS)
def test_recurrence_twins_agree(theta):
    for n in range(1, 8):
        for k in range(0, n + 1):
            assert t2_recurrence(n, k, theta) == t2(n, k, theta)
    for n in range(2, 8):
        for k in range(1, n):
            assert w2_recurrence(n, k, theta) == w2(n, k, theta)
            assert w1_star_recurrence(n, k, theta) == w1_star(n, k, theta)
    for n in range(4, 8):
        for k1 in range(1, n - 2):
            for k2 in range(k1, n - 2):
                assert w1_two_solved(n, k1, k2, theta) == w1_two(n, k1, k2, theta)


def test_w1_two_recurrence_vs_solved_exact_example():
    assert w1_two(5, 1, 2, Fraction(3, 4)) == w1_two_solved(5, 1, 2, Fraction(3, 4))


def test_w1_two_base_case_against_enumeration():
    from mallows_postdoc.closedform import _w1_two_base

    for theta in SPOT_THETAS:
        for k2 in range(1, 6):
            for k1 in range(1, k2 + 1):
                n = k2 + 1

                def wins(p):
                    i = first_pick_two(p, k1, k2)
                    return i is not None and p[i - 1] == n - 1

                assert _w1_two_base(k1, k2, theta) == weighted_sum(n, theta, wins)


# ---------------------------------------------------------------------------
# pinned examples


def test_t2_examples():
    for k in range(1, 6):
        assert t2(k, k, Fraction(2)) == p_factorial(k, Fraction(2))
    assert t2(4, 2, Fraction(1)) == 12
    assert t2(2, 0, Fraction(5)) == 1
    assert t2(1, 0, Fraction(5)) == 1
    with pytest.raises(ValueError):
        t2(3, 4, Fraction(1))


def test_w2_examples():
    for n, k in ((5, 2), (7, 3), (6, 1)):
        assert w2(n, k, Fraction(1)) == Fraction(
            k * (n - k), n * (n - 1)
        ) * p_factorial(n, Fraction(1))
    theta = Fraction(2, 3)
    for k in (1, 2, 4):
        assert w2(k + 1, k, theta) == theta * p_factorial(k, theta)
    assert w2(4, 2, Fraction(1)) == 8
    assert w2(10, 5, Fraction(1)) / p_factorial(10, Fraction(1)) == Fraction(25, 90)


def test_w2_k0_equals_k1():
    for theta in SPOT_THETAS:
        for n in (3, 5, 6):
            assert w2(n, 0, theta) == w2(n, 1, theta)


def test_t1_examples():
    assert t1(5, 0, Fraction(3)) == 0
    assert t1(3, 1, Fraction(1)) == 2
    assert t1(3, 1, Fraction(2)) == 12  # theta^2 (P_2)! = 4 * 3
    assert t1(3, 3, Fraction(1)) == 6


def test_w1_star_examples():
    theta = Fraction(5, 7)
    for k in (1, 2, 3):
        assert w1_star(k + 1, k, theta) == 0
        assert w1_star(k + 2, k, theta) == p_factorial(k, theta)


def test_w1_total_examples():
    theta = Fraction(2, 5)
    for n in (3, 5, 6):
        assert w1_total(n, n - 1, theta) == theta * p_factorial(n - 1, theta)
    # theta -> 0+: the identity order dominates and the rule wins on it
    tiny = 1e-8
    ratio = w1_total(8, 6, tiny) / p_factorial(8, tiny)
    assert ratio == pytest.approx(1.0, abs=1e-7)


def test_t1_two_examples():
    assert t1_two(4, 1, 2, Fraction(1)) == 2
    for n in (4, 5):
        for k1 in range(1, n + 1):
            for k2 in range(k1, n + 1):
                assert t1_two(n, k1, k2, Fraction(1)) == k1 * (k2 - 1) * p_factorial(
                    n - 2, Fraction(1)
                )
    with pytest.raises(ValueError):
        t1_two(4, 0, 2, Fraction(1))


def test_w1_two_rejects_k1_zero():
    with pytest.raises(ValueError):
        w1_two(6, 0, 2, Fraction(1))


# ---------------------------------------------------------------------------
# asymptotics


@pytest.mark.parametrize(
    "x,y,theta,expected",
    [
        (4, 3, 0.75, 0.30267334),
        (3, 2, 0.51, 0.37365098),
        (76, 69, 0.99, 0.25158519),
    ],
)
def test_asymptotic_f_reference_points(x, y, theta, expected):
    assert asymptotic_f(x, y, theta) == pytest.approx(expected, abs=1e-6)


def test_asymptotic_f_domain():
    with pytest.raises(ValueError):
        asymptotic_f(3, 4, 0.75)
    with pytest.raises(ValueError):
        asymptotic_f(3, 2, 0.4)


def test_asymptotic_f_matches_finite_ratio():
    n = 80
    theta = Fraction(3, 4)
    for x, y in ((4, 3), (3, 2), (6, 2)):
        finite = w1_two(n, n - x, n - y, theta) / p_factorial(n, theta)
        assert float(finite) == pytest.approx(
            float(asymptotic_f(x, y, theta)), abs=1e-7
        )


def test_case31_examples():
    theta = Fraction(3, 10)
    assert case31_value(2, theta) == (1 - theta) * (1 - theta + theta * theta)
    assert case31_value(2, 0.3) == pytest.approx(0.553, abs=1e-9)
    for i in range(1, 50):
        th = i / 100.0
        delta = case31_value(2, th) - case31_value(3, th)
        assert delta == pytest.approx((1 - 2 * th) * (1 - th) ** 2, abs=1e-12)
    with pytest.raises(ValueError):
        case31_value(1, 0.3)


def test_case31_decreasing_past_three():
    for th in (0.05, 0.2, 0.35, 0.49):
        for x in range(3, 12):
            assert case31_value(x + 1, th) < case31_value(x, th)


def test_case31_matches_finite_ratio():
    n = 60
    theta = Fraction(3, 10)
    for x in (2, 3, 4):
        finite = w1_total(n, n - x, theta) / p_factorial(n, theta)
        assert float(finite) == pytest.approx(float(case31_value(x, theta)), abs=1e-9)


@pytest.mark.parametrize(
    "k,theta,expected",
    [
        (2, 1.5, 0.32134993),
        (1, 2.0, 0.36219565),
        (15, 1.05, 0.25746213),
    ],
)
def test_w2_asymptotic_ratio_reference_points(k, theta, expected):
    assert w2_asymptotic_ratio(k, theta) == pytest.approx(expected, abs=1e-6)


def test_w2_asymptotic_ratio_domain():
    with pytest.raises(ValueError):
        w2_asymptotic_ratio(2, 1.0)
    with pytest.raises(ValueError):
        w2_asymptotic_ratio(0, 1.5)


def test_w2_win_ratio_equals_exact_ratio():
    for theta, n in ((Fraction(3, 2), 30), (Fraction(2), 20), (Fraction(11, 10), 40)):
        for k in (1, 2, 5):
            exact = w2(n, k, theta) / p_factorial(n, theta)
            assert w2_win_ratio(n, k, float(theta)) == pytest.approx(
                float(exact), rel=1e-12
            )


def test_w2_win_ratio_approaches_limit():
    for theta in (1.3, 2.0, 4.0):
        assert w2_win_ratio(2000, 2, theta) == pytest.approx(
            w2_asymptotic_ratio(2, theta), rel=1e-9
        )


# ---------------------------------------------------------------------------
# root equations


def test_j3_closed_form_at_half():
    assert j3(0.5) == pytest.approx(log(1.5) / log(2.0), abs=1e-9)


def test_h1_sign_structure_around_root():
    for theta in (0.55, 0.7, 0.9):
        roots = threshold_roots(theta)
        assert h1(roots.j1, theta) == pytest.approx(0.0, abs=1e-8)
        assert h1(roots.j1 - 1e-4, theta) > 0
        assert h1(roots.j1 + 1e-4, theta) < 0
        assert h2(roots.j2, theta) == pytest.approx(0.0, abs=1e-8)


def test_root_ordering():
    for theta in (0.55, 0.7, 0.9):
        roots = threshold_roots(theta)
        assert roots.j2 > roots.j1
        # j3 sits below j1, which is exactly what keeps h1(j3) positive
        assert roots.j3 < roots.j1
        assert h1(roots.j3, theta) > 0
        assert 1 - theta ** roots.j1 - theta ** (roots.j1 + 1) > 0


def test_threshold_roots_domain():
    with pytest.raises(ValueError):
        threshold_roots(0.4)
    with pytest.raises(ValueError):
        threshold_roots(1.0)


def test_mid_reference_second_threshold_brackets_j1():
    # The second-maximum distance y of the tabulated optimum tracks the h1
    # root in these rows. The maximum-side distance x does NOT track j2 in
    # general (theta = 0.9 has j2 = 11.95 but optimum x = 9), so only the
    # j1 relation is asserted.
    for theta, y in ((0.8, 3), (0.9, 7)):
        roots = threshold_roots(theta)
        assert y in (floor(roots.j1), ceil(roots.j1))


# ---------------------------------------------------------------------------
# per-length numerator closed forms vs the level recurrence


@pytest.mark.parametrize("theta", [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3, 4)])
@pytest.mark.parametrize("n", [5, 9, 12])
def test_level_numerators_match_claimed_closed_forms(n, theta):
    table = level_recurrence(n, theta, "finite")
    pf = p_factorial(n - 2, theta)
    for k in range(2, n + 1):
        expected_q2 = theta ** (2 * n - 2 * k + 1) * pf / p_factorial(k - 2, theta)
        assert table.q2[k] == expected_q2
    for k in range(1, n + 1):
        expected_q1 = (
            theta ** (n - k - 1) * p_poly(n - k, theta) * pf / p_factorial(k - 1, theta)
        )
        assert table.q1[k] == expected_q1
