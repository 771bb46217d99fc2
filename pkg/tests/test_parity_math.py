from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sethlab.errors import ParameterError
from sethlab.parity_math import OnesSet, big_binom, binom_parity, nested_binom_parity, ones


def test_small_examples():
    assert binom_parity(5, 2) == 0  # C(5,2) = 10
    assert binom_parity(7, 3) == 1  # C(7,3) = 35
    assert binom_parity(0, 0) == 1
    with pytest.raises(ParameterError):
        binom_parity(2, 3)


def test_ones_sets():
    assert ones(0b1010) == {1, 3}
    assert OnesSet.of(5) <= OnesSet.of(7)
    assert OnesSet.of(12).value() == 12


def test_nested():
    # C(C(4,2), 3) = C(6,3) = 20
    assert nested_binom_parity(4, 2, 3) == 0
    # C(C(2,2), 1) = 1
    assert nested_binom_parity(2, 2, 1) == 1
    assert nested_binom_parity(1, 2, 0) == 1
    assert nested_binom_parity(1, 2, 1) == 0


def test_big_binom_range():
    assert big_binom(10, 3) == 120
    with pytest.raises(ParameterError):
        big_binom(10**5, 2)


@given(st.integers(0, 2**200), st.data())
def test_matches_exact_binomial_for_huge_a(a, data):
    b = data.draw(st.integers(0, min(a, 60)))
    assert binom_parity(a, b) == comb(a, b) % 2


@given(st.integers(1, 500), st.data())
def test_pascal_rule(a, data):
    b = data.draw(st.integers(1, a - 1)) if a > 1 else 1
    if b < a:
        assert binom_parity(a, b) == binom_parity(a - 1, b - 1) ^ binom_parity(a - 1, b)


@given(st.integers(0, 300))
def test_symmetry_and_row_weight(a):
    row = [binom_parity(a, b) for b in range(a + 1)]
    assert row == row[::-1]
    # an odd-entry count of 2^popcount(a)
    assert sum(row) == 2 ** bin(a).count("1")
