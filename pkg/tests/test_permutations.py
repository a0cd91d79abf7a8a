from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mallows_postdoc.permutations import (
    PrefixClass,
    apply_prefix_operator,
    classify_pattern,
    earlier_larger_counts,
    inversions,
    is_ltr_maximum,
    is_ltr_second_maximum,
    pattern_of,
    prefix_pattern,
    prefix_patterns,
)

from conftest import all_perms, ref_inversions


@pytest.mark.parametrize(
    "p,expected",
    [
        ((1, 2, 3), 0),
        ((3, 2, 1), 3),
        ((1, 6, 5, 2, 4, 3), 8),  # frozen brute-force pair count
    ],
)
def test_inversions_examples(p, expected):
    assert inversions(p) == expected


def test_prefix_pattern_examples():
    pre = prefix_pattern((1, 6, 5, 2, 4, 3), 4)
    assert pre.pattern == (1, 4, 3, 2)
    assert pre.host_length == 6
    assert prefix_pattern((1, 6, 5, 2, 4, 3), 6).kind is PrefixClass.FULL_LENGTH
    assert prefix_pattern((2, 1, 3, 4), 3).kind is PrefixClass.TYPE_I
    assert prefix_pattern((2, 1, 3, 4), 3).pattern == (2, 1, 3)


def test_prefix_pattern_out_of_range():
    with pytest.raises(ValueError):
        prefix_pattern((2, 1, 3), 0)
    with pytest.raises(ValueError):
        prefix_pattern((2, 1, 3), 4)


def test_prefix_enforces_class_invariant():
    from mallows_postdoc.permutations import Prefix

    Prefix((2, 1), 4, PrefixClass.TYPE_II)
    with pytest.raises(ValueError):
        Prefix((2, 1), 4, PrefixClass.TYPE_I)
    with pytest.raises(ValueError):
        Prefix((2, 1), 2, PrefixClass.TYPE_II)  # full length, not type II


def test_classification_rules():
    assert classify_pattern((1, 2), 4) is PrefixClass.TYPE_I
    assert classify_pattern((2, 1), 4) is PrefixClass.TYPE_II
    assert classify_pattern((2, 3, 1), 4) is PrefixClass.OTHER
    assert classify_pattern((2, 3, 1), 3) is PrefixClass.FULL_LENGTH
    # position 1 is a maximum, never a second maximum
    assert classify_pattern((1,), 3) is PrefixClass.TYPE_I


def test_apply_prefix_operator_examples():
    assert apply_prefix_operator((1, 2), (2, 3, 1)) == (2, 3, 1)
    assert apply_prefix_operator((2, 1), (2, 3, 1)) == (3, 2, 1)
    # applying a prefix's own pattern is the identity action
    for p in all_perms(4):
        assert apply_prefix_operator(pattern_of(p[:3]), p) == p
        if pattern_of(p[:3]) == (1, 2, 3):
            assert apply_prefix_operator((1, 2, 3), p) == p
    with pytest.raises(ValueError):
        apply_prefix_operator((1, 2, 3, 4), (2, 1, 3))


def test_prefix_patterns_incremental_matches_direct():
    for p in all_perms(5):
        chain = list(prefix_patterns(p))
        assert chain == [pattern_of(p[:k]) for k in range(1, 6)]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_kendall_prefix_equivalence_exhaustive(n):
    """Rearranging a prefix shifts the inversion count by the pattern change only.

    General form: inversions(p) - inversions(g_tau p) equals
    inversions(pattern of p's prefix) - inversions(tau); on the operator's
    defining domain (ascending prefix) this is the identity-vs-tau statement.
    """
    inv = {p: ref_inversions(p) for p in all_perms(n)}
    for k in range(1, n + 1):
        for tau in permutations(range(1, k + 1)):
            shift = ref_inversions(tau)
            for p in all_perms(n):
                moved = apply_prefix_operator(tau, p)
                assert inv[p] - inv[moved] == ref_inversions(pattern_of(p[:k])) - shift
                if pattern_of(p[:k]) == tuple(range(1, k + 1)):
                    assert inv[p] - inv[moved] == -shift


@given(st.permutations(list(range(1, 8))), st.data())
@settings(max_examples=200, deadline=None)
def test_operator_is_a_bijection(p, data):
    p = tuple(p)
    k = data.draw(st.integers(min_value=1, max_value=len(p)))
    tau = tuple(data.draw(st.permutations(list(range(1, k + 1)))))
    original = pattern_of(p[:k])
    moved = apply_prefix_operator(tau, p)
    assert pattern_of(moved[:k]) == tau
    assert apply_prefix_operator(original, moved) == p


def test_earlier_larger_counts_and_ltr_flags():
    p = (3, 1, 4, 2, 5)
    assert earlier_larger_counts(p) == (0, 1, 0, 2, 0)
    assert [is_ltr_maximum(p, i) for i in range(1, 6)] == [True, False, True, False, True]
    assert [is_ltr_second_maximum(p, i) for i in range(1, 6)] == [
        False,
        True,
        False,
        False,
        False,
    ]
    assert not is_ltr_second_maximum(p, 1)


def test_earlier_larger_counts_sum_to_inversions():
    for p in all_perms(5):
        assert sum(earlier_larger_counts(p)) == ref_inversions(p)
