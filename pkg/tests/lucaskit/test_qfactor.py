import math

import pytest

from hypothesis import given
from hypothesis import strategies as st

from lucaskit.exceptions import CapExceededError
from lucaskit.qfactor import (
    QIndex,
    chain_congruence_check,
    factorize,
    gcd_q_p_check,
    lemma6_check,
    product_identity_check,
    q_family,
    q_mod_p,
    ratio_identity_check,
    two_digit_closed_form_check,
    unit_block_ratio_check,
)
from lucaskit.radix import PrimeModulus


@pytest.mark.parametrize(
    "n, p, digits, blocks, q",
    [
        (5, 3, (2, 1), (2, 6), 10),
        (7, 2, (1, 1, 1), (1, 2, 24), 105),
        (4, 5, (4,), (24,), 1),
        (0, 5, (), (), 1),
    ],
)
def test_factorize(n, p, digits, blocks, q):
    factorization = factorize(n, p)
    assert factorization.digits.digits == digits
    assert factorization.blocks == blocks
    assert factorization.q == q
    assert factorization.q * factorization.block_product == math.factorial(n)


def test_factorize_respects_cap():
    with pytest.raises(CapExceededError):
        factorize(50, 7, cap=49)


@pytest.mark.parametrize("n, p", [(5, 3), (7, 2), (4, 5), (250, 3), (1000, 7)])
def test_q_mod_p(n, p):
    assert q_mod_p(n, p).value == 1


@pytest.mark.parametrize("n, p", [(7, 2), (5, 3), (3, 5), (300, 2)])
def test_gcd_q_p_check(n, p):
    assert gcd_q_p_check(n, p)


@pytest.mark.parametrize(
    "n, p, k, i, expected",
    [
        (7, 2, 1, 0, 105),
        (7, 2, 1, 1, 5),
        (5, 3, 1, 1, 1),
        (5, 3, 1, 0, 10),
    ],
)
def test_q_family(n, p, k, i, expected):
    assert q_family(QIndex(n, PrimeModulus(p), k, i)) == expected


@pytest.mark.parametrize(
    "n, p, k, i",
    [
        (7, 2, 0, 0),
        (7, 2, 3, 0),
        (7, 2, 1, 2),
        (5, 3, 1, -1),
    ],
)
def test_q_index_rejects_out_of_range_positions(n, p, k, i):
    with pytest.raises(ValueError):
        QIndex(n, PrimeModulus(p), k, i)


def test_q_index_accessors():
    idx = QIndex(100, 3, 2, 1)
    assert idx.modulus == PrimeModulus(3)
    assert idx.digit == 2
    assert idx.upper == 11
    assert idx.lower == 1
    assert idx.successor() == QIndex(100, PrimeModulus(3), 2, 2)


@pytest.mark.parametrize(
    "n, p, k, i",
    [
        (7, 2, 1, 0),
        (5, 3, 1, 0),
        (11, 2, 1, 0),
        (100, 3, 2, 1),
        (260, 5, 1, 0),
        (250, 5, 3, 1),
    ],
)
def test_ratio_identity_check(n, p, k, i):
    assert ratio_identity_check(QIndex(n, PrimeModulus(p), k, i))


def test_ratio_identity_needs_a_successor():
    with pytest.raises(ValueError):
        ratio_identity_check(QIndex(7, PrimeModulus(2), 1, 1))


@pytest.mark.parametrize(
    "n, p, k",
    [
        (7, 2, 1),
        (5, 3, 1),
        (100, 3, 2),
        (100, 3, 3),
        (7, 2, 5),
    ],
)
def test_chain_congruence_check(n, p, k):
    assert chain_congruence_check(n, p, k)


def test_chain_congruence_needs_positive_position():
    with pytest.raises(ValueError):
        chain_congruence_check(7, 2, 0)


@pytest.mark.parametrize("n, p, i", [(7, 2, 0), (5, 3, 0), (5, 3, 1), (104, 5, 3)])
def test_unit_block_ratio_check(n, p, i):
    assert unit_block_ratio_check(n, p, i)


def test_unit_block_ratio_check_range():
    with pytest.raises(ValueError):
        unit_block_ratio_check(5, 3, 2)


@pytest.mark.parametrize(
    "a, i, p",
    [
        (2, 0, 5),
        (1, 1, 3),
        (2, 1, 3),
        (0, 3, 7),
        (4, 2, 5),
        (1, 4, 2),
    ],
)
def test_lemma6_check(a, i, p):
    assert lemma6_check(a, i, p)


def test_lemma6_check_needs_a_digit():
    with pytest.raises(ValueError):
        lemma6_check(5, 1, 5)


def test_lemma6_check_with_zero_digit_skips_the_exponent():
    assert lemma6_check(0, 10**6, 5, cap=0)


def test_lemma6_check_applies_the_cap_before_the_exponent():
    with pytest.raises(CapExceededError):
        lemma6_check(2, 3, 7, cap=2 * 7**3 - 1)
    assert lemma6_check(2, 3, 7, cap=2 * 7**3)


@pytest.mark.parametrize("n, p", [(5, 3), (7, 5), (24, 5), (3, 2), (120, 11)])
def test_two_digit_closed_form_check(n, p):
    assert two_digit_closed_form_check(n, p)


@pytest.mark.parametrize("n, p", [(4, 5), (25, 5), (0, 3)])
def test_two_digit_closed_form_needs_two_digits(n, p):
    with pytest.raises(ValueError):
        two_digit_closed_form_check(n, p)


@pytest.mark.parametrize("m, n, p", [(10, 3, 7), (7, 5, 2), (100, 10, 3), (124, 62, 5)])
def test_product_identity_check(m, n, p):
    assert product_identity_check(m, n, p)


def test_product_identity_needs_dominated_digits():
    with pytest.raises(ValueError):
        product_identity_check(6, 3, 5)


@pytest.mark.property_based
@given(
    n=st.integers(min_value=1, max_value=400),
    p=st.sampled_from([2, 3, 5, 7, 11]),
)
def test_every_q_family_member_is_congruent_to_one(n, p):
    modulus = PrimeModulus(p)
    digits = factorize(n, modulus).digits
    for k in range(1, len(digits)):
        for i in range(digits[k] + 1):
            assert q_family(QIndex(n, modulus, k, i)) % p == 1
