import itertools
import logging

from typing import Iterator, List, Tuple

from sympy import factorint
from sympy.ntheory.primetest import isprime

from permpoly.exceptions import NotPrime, ParseError


def is_prime(p: int) -> bool:
    """
    Checks whether the given integer is a prime.

    Args:
        p: Candidate characteristic.

    Returns:
        True if p is prime, False otherwise (including p < 2).
    """
    return p >= 2 and bool(isprime(p))


def split_prime_power(q: int) -> Tuple[int, int]:
    """
    Splits a prime power q into (p, n) with q = p^n.

    Args:
        q: Field size of the subfield, e.g. 4, 8, 25.

    Returns:
        Tuple[int, int]: The characteristic and the degree.

    Raises:
        NotPrime: q is not a power of a single prime.
    """
    if q < 2:
        raise NotPrime(f"{q} is not a prime power.")

    factors = factorint(q)
    if len(factors) != 1:
        raise NotPrime(f"{q} is not a prime power. (factors: {dict(factors)})")

    (p, n), = factors.items()
    return int(p), int(n)


def to_digits(code: int, base: int, length: int) -> List[int]:
    """Little-endian base-`base` digits of `code`, padded to `length`."""
    digits = []
    for _ in range(length):
        code, digit = divmod(code, base)
        digits.append(digit)

    return digits


def from_digits(digits, base: int) -> int:
    code = 0
    for digit in reversed(digits):
        code = code * base + digit

    return code


def coefficient_tuples(size: int, length: int) -> Iterator[Tuple[int, ...]]:
    """
    Enumerates coefficient tuples (c_0, ..., c_{length-1}) in lexicographic order.

    c_0 varies slowest; h searches and audit families enumerate in this order.
    """
    return itertools.product(range(size), repeat=length)


def code_order_tuples(size: int, length: int) -> Iterator[Tuple[int, ...]]:
    """
    Coefficient tuples (c_0, ..., c_{length-1}) by increasing integer code sum c_i size^i.

    Default irreducible polynomials are the first irreducible tail in this order.
    """
    for code in range(size**length):
        yield tuple(to_digits(code, size, length))


def parse_codes(text: str) -> List[int]:
    """
    Parses a comma separated list of integer codes, low-to-high.

    "2,1,1" is x^2 + x + 2 over F_5. An empty string (or "0") is the zero polynomial.

    Args:
        text: The coefficient list as written on the command line or in a file.

    Returns:
        List[int]: The codes, trailing zeros included as written.
    """
    text = text.strip()
    if text == "":
        return []

    try:
        codes = [int(part) for part in text.split(",")]
    except ValueError:
        raise ParseError(f"Malformed coefficient list: {text!r}")

    if any(code < 0 for code in codes):
        raise ParseError(f"Negative code in coefficient list: {text!r}")

    return codes


def parse_terms(text: str) -> List[Tuple[int, int]]:
    """
    Parses a linearized polynomial written as "i:code,i:code".

    "0:3,1:1" is 3x + x^p. Each pair means code * x^(p^i).

    Args:
        text: The term list.

    Returns:
        List[Tuple[int, int]]: (i, code) pairs in the order written.
    """
    text = text.strip()
    if text == "":
        return []

    terms = []
    for part in text.split(","):
        index, sep, code = part.partition(":")
        if not sep:
            raise ParseError(f"Linearized term is not of the form i:code: {part!r}")
        try:
            terms.append((int(index), int(code)))
        except ValueError:
            raise ParseError(f"Malformed linearized term: {part!r}")

    if any(index < 0 or code < 0 for index, code in terms):
        raise ParseError(f"Negative index or code in linearized terms: {text!r}")

    return terms


def format_codes(codes) -> str:
    return ",".join(str(code) for code in codes)


def setup_logging(verbosity: int = 0):
    """
    Configures the root logger for command line use.

    Args:
        verbosity: 0 for warnings only, 1 for info, 2 or more for debug.
    """
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    logging.basicConfig(
        level=level,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
