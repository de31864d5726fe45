import logging

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem, gf_strip

from permpoly.exceptions import (
    DivisionByZero,
    MixedTowers,
    NotInSubfield,
    NotPrime,
    PermPolyError,
    Reducible,
    SizeLimitExceeded,
)
from permpoly.namespace import BASE_TABLE_LIMIT, DEFAULT_SIZE_LIMIT, TABLE_LIMIT
from permpoly.utils import code_order_tuples, coefficient_tuples, from_digits, is_prime, to_digits

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False, slots=True)
class FieldElement:
    """
    An element of F_{q^m}, stored by its integer code.

    The code is sum_i d_i q^i where d_i is the i-th tower coordinate, itself the
    F_q code sum_j c_ij p^j. Codes below q are exactly the embedded F_q elements.

    Usage:
        tower = make_tower(2, 2, 2, [1, 1, 1], [2, 1, 1])
        y = tower.element(4)
        print(y ** 4 == y + tower.one)
    """

    code: int
    tower: "FieldTower"

    @property
    def coords(self) -> Tuple[Tuple[int, ...], ...]:
        return self.tower.coords(self)

    def __add__(self, other):
        return self.tower.add(self, other)

    def __sub__(self, other):
        return self.tower.sub(self, other)

    def __mul__(self, other):
        return self.tower.mul(self, other)

    def __truediv__(self, other):
        return self.tower.mul(self, self.tower.inv(other))

    def __neg__(self):
        return self.tower.neg(self)

    def __pow__(self, k: int):
        return self.tower.pow(self, k)

    def inverse(self):
        return self.tower.inv(self)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.code == other.code and (
            self.tower is other.tower or self.tower == other.tower
        )

    def __hash__(self):
        return hash((self.code, self.tower._hash))

    def __lt__(self, other):
        return self.code < other.code

    def __int__(self):
        return self.code

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"FieldElement({self.code})"


class FieldTower:
    """
    The tower F_p < F_q = F_{p^n} < F_{q^m}.

    F_q is F_p[t]/(base_poly) and F_{q^m} is F_q[y]/(ext_poly). Both polynomials
    are coefficient lists, low-to-high; ext_poly holds F_q codes. Omitted
    polynomials default to the monic irreducible with the smallest integer code.

    Towers are immutable once built. Arithmetic on towers of at most
    TABLE_LIMIT elements goes through log/antilog tables built on first use;
    larger towers use schoolbook products reduced by ext_poly.

    Usage:
        tower = FieldTower(2, 1, 3)
        t = tower.element(2)
        print(t * t ** 2)
    """

    def __init__(
        self,
        p: int,
        n: int,
        m: int,
        base_poly: Optional[Sequence[int]] = None,
        ext_poly: Optional[Sequence[int]] = None,
        size_limit: int = DEFAULT_SIZE_LIMIT,
    ):
        if not is_prime(p):
            raise NotPrime(f"Characteristic {p} is not a prime.")

        if n < 1 or m < 1:
            raise PermPolyError(f"Degrees must be positive. (n: {n}, m: {m})")

        self.p = p
        self.n = n
        self.m = m
        self.q = p**n
        self.order = self.q**m
        self.degree = n * m
        self.size_limit = size_limit

        if self.order > size_limit:
            raise SizeLimitExceeded(
                f"Field of size {p}^{self.degree} = {self.order} exceeds the limit {size_limit}."
            )

        if base_poly is None:
            self.base_poly = self._default_base_poly()
        else:
            self.base_poly = self._checked_base_poly(base_poly)

        if ext_poly is None:
            self.ext_poly = self._default_ext_poly()
        else:
            self.ext_poly = self._checked_ext_poly(ext_poly)

        self.key = (p, n, m, self.base_poly, self.ext_poly)
        self._hash = hash(self.key)

        logger.debug(
            "Built tower p=%d n=%d m=%d base_poly=%s ext_poly=%s",
            p,
            n,
            m,
            self.base_poly,
            self.ext_poly,
        )

    # Construction

    def _default_base_poly(self) -> Tuple[int, ...]:
        for tail in code_order_tuples(self.p, self.n):
            candidate = tail + (1,)
            if self._base_irreducible(candidate):
                return candidate

        raise PermPolyError(f"No irreducible polynomial of degree {self.n} over F_{self.p}.")

    def _checked_base_poly(self, poly: Sequence[int]) -> Tuple[int, ...]:
        poly = tuple(int(c) for c in poly)
        if len(poly) != self.n + 1 or poly[-1] != 1:
            raise Reducible(f"base_poly must be monic of degree {self.n}. (base_poly: {poly})")

        if any(not 0 <= c < self.p for c in poly):
            raise Reducible(f"base_poly coefficients must lie in [0, {self.p}). (base_poly: {poly})")

        if not self._base_irreducible(poly):
            raise Reducible(f"base_poly {poly} is reducible over F_{self.p}.")

        return poly

    def _base_irreducible(self, poly: Tuple[int, ...]) -> bool:
        if len(poly) == 2:
            return True
        return bool(gf_irreducible_p(list(reversed(poly)), self.p, ZZ))

    def _default_ext_poly(self) -> Tuple[int, ...]:
        for tail in code_order_tuples(self.q, self.m):
            candidate = tail + (1,)
            if self._ext_irreducible(candidate):
                return candidate

        raise PermPolyError(f"No irreducible polynomial of degree {self.m} over F_{self.q}.")

    def _checked_ext_poly(self, poly: Sequence[int]) -> Tuple[int, ...]:
        poly = tuple(int(c) for c in poly)
        if len(poly) != self.m + 1 or poly[-1] != 1:
            raise Reducible(f"ext_poly must be monic of degree {self.m}. (ext_poly: {poly})")

        if any(not 0 <= c < self.q for c in poly):
            raise Reducible(f"ext_poly coefficients must be F_{self.q} codes. (ext_poly: {poly})")

        if not self._ext_irreducible(poly):
            raise Reducible(f"ext_poly {poly} is reducible over F_{self.q}.")

        return poly

    def _ext_irreducible(self, poly: Tuple[int, ...]) -> bool:
        """
        Trial division by every monic polynomial over F_q of degree at most deg/2.
        """
        degree = len(poly) - 1
        if degree == 1:
            return True

        if poly[0] == 0:
            return False

        for d in range(1, degree // 2 + 1):
            for tail in coefficient_tuples(self.q, d):
                if not any(self._base_poly_rem(poly, tail + (1,))):
                    return False

        return True

    def _base_poly_rem(self, dividend: Sequence[int], divisor: Sequence[int]) -> List[int]:
        """Remainder of two polynomials over F_q (code lists, low-to-high, divisor monic)."""
        rem = list(dividend)
        d = len(divisor) - 1
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            for i in range(d + 1):
                if divisor[i]:
                    rem[k - d + i] = self._sub_codes(rem[k - d + i], self._base_mul(c, divisor[i]))

        return rem[:d]

    # F_p digit arithmetic, shared by both levels

    def _add_codes(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b

        p = self.p
        result = 0
        place = 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            result += ((da + db) % p) * place
            place *= p

        return result

    def _neg_codes(self, a: int) -> int:
        if self.p == 2:
            return a

        p = self.p
        result = 0
        place = 1
        while a:
            a, da = divmod(a, p)
            result += ((p - da) % p) * place
            place *= p

        return result

    def _sub_codes(self, a: int, b: int) -> int:
        return self._add_codes(a, self._neg_codes(b))

    # F_q multiplication

    def _base_mul_direct(self, a: int, b: int) -> int:
        f = gf_strip(list(reversed(to_digits(a, self.p, self.n))))
        g = gf_strip(list(reversed(to_digits(b, self.p, self.n))))
        product = gf_rem(gf_mul(f, g, self.p, ZZ), list(reversed(self.base_poly)), self.p, ZZ)
        return from_digits([int(c) for c in reversed(product)], self.p)

    @cached_property
    def _base_tables(self):
        if self.q > BASE_TABLE_LIMIT:
            return None
        return _log_tables(self.q, self._base_mul_direct)

    def _base_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0

        tables = self._base_tables
        if tables is None:
            return self._base_mul_direct(a, b)

        exp, log = tables
        return exp[(log[a] + log[b]) % (self.q - 1)]

    # F_{q^m} multiplication

    def _mul_direct(self, a: int, b: int) -> int:
        m = self.m
        x = to_digits(a, self.q, m)
        y = to_digits(b, self.q, m)

        product = [0] * (2 * m - 1)
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj:
                    product[i + j] = self._add_codes(product[i + j], self._base_mul(xi, yj))

        # y^m = -(e_0 + e_1 y + ... + e_{m-1} y^{m-1})
        for k in range(2 * m - 2, m - 1, -1):
            c = product[k]
            if c == 0:
                continue
            product[k] = 0
            for i in range(m):
                e = self.ext_poly[i]
                if e:
                    product[k - m + i] = self._sub_codes(product[k - m + i], self._base_mul(c, e))

        return from_digits(product[:m], self.q)

    @cached_property
    def _tables(self):
        if self.order > TABLE_LIMIT:
            return None
        logger.debug("Building log tables for a field of %d elements", self.order)
        return _log_tables(self.order, self._mul_direct)

    def _mul_codes(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0

        tables = self._tables
        if tables is None:
            return self._mul_direct(a, b)

        exp, log = tables
        return exp[(log[a] + log[b]) % (self.order - 1)]

    def _pow_codes(self, a: int, k: int) -> int:
        if k < 0:
            a = self._inv_code(a)
            k = -k

        if k == 0:
            return 1

        if a == 0:
            return 0

        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[(log[a] * k) % (self.order - 1)]

        result = 1
        while k:
            if k & 1:
                result = self._mul_direct(result, a)
            a = self._mul_direct(a, a)
            k >>= 1

        return result

    def _inv_code(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("Zero has no multiplicative inverse.")

        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[(-log[a]) % (self.order - 1)]

        return self._pow_codes(a, self.order - 2)

    # Elements

    def element(self, code: int) -> FieldElement:
        code = int(code)
        if not 0 <= code < self.order:
            raise PermPolyError(f"Code {code} is outside [0, {self.order}).")
        return FieldElement(code, self)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def coords(self, x: FieldElement) -> Tuple[Tuple[int, ...], ...]:
        """Tower coordinates: m digits over F_q, each n residues mod p."""
        return tuple(
            tuple(to_digits(d, self.p, self.n)) for d in to_digits(x.code, self.q, self.m)
        )

    def from_coords(self, coords: Sequence[Sequence[int]]) -> FieldElement:
        if len(coords) != self.m or any(len(d) != self.n for d in coords):
            raise PermPolyError(f"Expected {self.m} coordinates of {self.n} residues each.")

        if any(not 0 <= c < self.p for d in coords for c in d):
            raise PermPolyError(f"Residues must lie in [0, {self.p}).")

        return self.element(from_digits([from_digits(d, self.p) for d in coords], self.q))

    def vector(self, x: FieldElement) -> List[int]:
        """The n*m residues of x in the F_p basis y^i t^j, index i*n + j."""
        return to_digits(x.code, self.p, self.degree)

    def from_vector(self, vector: Sequence[int]) -> FieldElement:
        return FieldElement(from_digits([int(c) % self.p for c in vector], self.p), self)

    def _check(self, *elements: FieldElement):
        for x in elements:
            if x.tower is not self and x.tower != self:
                raise MixedTowers(f"{x!r} belongs to a different tower.")

    def add(self, x: FieldElement, y: FieldElement) -> FieldElement:
        self._check(x, y)
        return FieldElement(self._add_codes(x.code, y.code), self)

    def sub(self, x: FieldElement, y: FieldElement) -> FieldElement:
        self._check(x, y)
        return FieldElement(self._sub_codes(x.code, y.code), self)

    def neg(self, x: FieldElement) -> FieldElement:
        self._check(x)
        return FieldElement(self._neg_codes(x.code), self)

    def mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        self._check(x, y)
        return FieldElement(self._mul_codes(x.code, y.code), self)

    def inv(self, x: FieldElement) -> FieldElement:
        self._check(x)
        return FieldElement(self._inv_code(x.code), self)

    def pow(self, x: FieldElement, k: int) -> FieldElement:
        self._check(x)
        return FieldElement(self._pow_codes(x.code, k), self)

    def frobenius_p(self, x: FieldElement, i: int = 1) -> FieldElement:
        """x^(p^i); the exponent index is taken mod n*m."""
        self._check(x)
        return FieldElement(self._pow_codes(x.code, self.p ** (i % self.degree)), self)

    def frobenius_q(self, x: FieldElement, k: int = 1) -> FieldElement:
        """x^(q^k) by n*k applications of x -> x^p."""
        if k < 0:
            raise PermPolyError(f"Frobenius power must be non-negative. (k: {k})")

        self._check(x)
        code = x.code
        for _ in range((self.n * k) % self.degree):
            code = self._pow_codes(code, self.p)

        return FieldElement(code, self)

    # Subfield

    def in_subfield(self, x: FieldElement) -> bool:
        """All coordinates above index 0 vanish; equivalent to x^q = x."""
        self._check(x)
        return x.code < self.q

    def embed(self, c: int) -> FieldElement:
        """Places the F_q code c at tower coordinate 0."""
        c = int(c)
        if not 0 <= c < self.q:
            raise PermPolyError(f"{c} is not an F_{self.q} code.")
        return FieldElement(c, self)

    def project_subfield(self, x: FieldElement) -> int:
        if not self.in_subfield(x):
            raise NotInSubfield(f"{x!r} is not fixed by x -> x^{self.q}.")
        return x.code

    def elements(self, which: str = "full") -> Iterator[FieldElement]:
        if which == "full":
            size = self.order
        elif which == "subfield":
            size = self.q
        else:
            raise PermPolyError(f"Unknown enumeration {which!r}; expected full or subfield.")

        for code in range(size):
            yield FieldElement(code, self)

    def __eq__(self, other):
        if not isinstance(other, FieldTower):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return self._hash

    def to_dict(self):
        return {
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "order": self.order,
            "base_poly": list(self.base_poly),
            "ext_poly": list(self.ext_poly),
        }

    def __str__(self):
        info = self.to_dict()
        return (
            f"Characteristic      {info['p']}\n"
            f"Subfield            F_{info['q']} (n = {info['n']})\n"
            f"Extension degree    {info['m']}\n"
            f"Field size          {info['order']}\n"
            f"Base polynomial     {_render(info['base_poly'], 't')}\n"
            f"Ext polynomial      {_render(info['ext_poly'], 'y')}\n"
        )

    def __repr__(self):
        return f"FieldTower(p={self.p}, n={self.n}, m={self.m})"


def _render(coeffs: Sequence[int], var: str) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        power = "1" if i == 0 else var if i == 1 else f"{var}^{i}"
        if i == 0:
            terms.append(str(c))
        elif c == 1:
            terms.append(power)
        else:
            terms.append(f"[{c}]{power}")

    return " + ".join(terms) if terms else "0"


def _log_tables(order: int, mul) -> Tuple[List[int], List[int]]:
    """
    Exponential and logarithm tables of a field of the given order.

    The generator is the smallest code whose order is exactly order - 1.
    """
    group = order - 1
    primes = list(factorint(group)) if group > 1 else []

    def power(a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = mul(result, a)
            a = mul(a, a)
            k >>= 1
        return result

    generator = 1
    for g in range(1, order):
        if all(power(g, group // r) != 1 for r in primes):
            generator = g
            break

    exp = [0] * group
    log = [0] * order
    x = 1
    for k in range(group):
        exp[k] = x
        log[x] = k
        x = mul(x, generator)

    return exp, log


def make_tower(
    p: int,
    n: int,
    m: int,
    base_poly: Optional[Sequence[int]] = None,
    ext_poly: Optional[Sequence[int]] = None,
    size_limit: int = DEFAULT_SIZE_LIMIT,
) -> FieldTower:
    return FieldTower(p, n, m, base_poly, ext_poly, size_limit)


def frobenius_q(x: FieldElement, k: int = 1) -> FieldElement:
    return x.tower.frobenius_q(x, k)


def embed(tower: FieldTower, c: int) -> FieldElement:
    return tower.embed(c)


def project_subfield(x: FieldElement) -> int:
    return x.tower.project_subfield(x)


def enumerate_field(tower: FieldTower, which: str = "full") -> Iterator[FieldElement]:
    return tower.elements(which)
