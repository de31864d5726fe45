import pytest

from permpoly.exceptions import NotPrime, ParseError
from permpoly.utils import (
    code_order_tuples,
    coefficient_tuples,
    from_digits,
    is_prime,
    parse_codes,
    parse_terms,
    split_prime_power,
    to_digits,
)

PRIME_POWERS = [
    (2, (2, 1)),
    (4, (2, 2)),
    (8, (2, 3)),
    (25, (5, 2)),
    (27, (3, 3)),
]

CODE_LISTS = [
    ("2,1,1", [2, 1, 1]),
    (" 0 ", [0]),
    ("", []),
    ("1,0,0", [1, 0, 0]),
]

MALFORMED = ["2,x", "1,,2", "-1", "1.5"]


@pytest.mark.parametrize("q, expected", PRIME_POWERS)
def test_split_prime_power(q, expected):
    assert split_prime_power(q) == expected


@pytest.mark.parametrize("q", [1, 6, 12, 100])
def test_not_prime_power(q):
    with pytest.raises(NotPrime):
        split_prime_power(q)


def test_is_prime():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("text, expected", CODE_LISTS)
def test_parse_codes(text, expected):
    assert parse_codes(text) == expected


@pytest.mark.parametrize("text", MALFORMED)
def test_parse_codes_malformed(text):
    with pytest.raises(ParseError):
        parse_codes(text)


def test_parse_terms():
    assert parse_terms("0:3,1:1") == [(0, 3), (1, 1)]
    assert parse_terms("") == []
    for text in ("3", "0:x", "-1:2"):
        with pytest.raises(ParseError):
            parse_terms(text)


def test_digits():
    assert to_digits(13, 2, 4) == [1, 0, 1, 1]
    assert to_digits(9, 4, 2) == [1, 2]
    assert from_digits([1, 2], 4) == 9


def test_enumeration_orders():
    assert list(coefficient_tuples(2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(code_order_tuples(2, 2)) == [(0, 0), (1, 0), (0, 1), (1, 1)]
