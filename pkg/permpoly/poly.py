import logging

from functools import cached_property
from math import gcd
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from permpoly import linalg
from permpoly.exceptions import MixedTowers, NotInSubfield, NotInvertible, PermPolyError
from permpoly.field import FieldElement, FieldTower

logger = logging.getLogger(__name__)


class SubfieldPoly:
    """
    An ordinary polynomial with coefficients in F_q ("base") or F_{q^m} ("ext").

    Coefficients are tower elements, low-to-high, trailing zeros stripped;
    the zero polynomial has no coefficients and degree -1.

    Usage:
        tower = make_tower(5, 1, 1)
        h = SubfieldPoly.from_codes(tower, [2, 1, 1])
        print(h(tower.one))
    """

    def __init__(self, tower: FieldTower, coeffs: Iterable[FieldElement], over: str = "ext"):
        if over not in ("base", "ext"):
            raise PermPolyError(f"Unknown coefficient field {over!r}; expected base or ext.")

        coeffs = list(coeffs)
        for c in coeffs:
            if c.tower is not tower and c.tower != tower:
                raise MixedTowers(f"Coefficient {c!r} belongs to a different tower.")
            if over == "base" and not tower.in_subfield(c):
                raise NotInSubfield(f"Coefficient {c!r} of an F_q polynomial is not in F_{tower.q}.")

        while coeffs and coeffs[-1].code == 0:
            coeffs.pop()

        self.tower = tower
        self.coeffs: Tuple[FieldElement, ...] = tuple(coeffs)
        self.over = over

    @classmethod
    def from_codes(cls, tower: FieldTower, codes: Sequence[int], over: str = "base"):
        """F_q codes for "base" (embedded), tower codes for "ext"."""
        if over == "base":
            return cls(tower, [tower.embed(c) for c in codes], "base")
        return cls(tower, [tower.element(c) for c in codes], over)

    @classmethod
    def constant(cls, tower: FieldTower, c: FieldElement):
        return cls(tower, [c], "base" if tower.in_subfield(c) else "ext")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def codes(self) -> List[int]:
        return [c.code for c in self.coeffs]

    def __call__(self, x: FieldElement) -> FieldElement:
        return eval_poly(self, x)

    def __eq__(self, other):
        if not isinstance(other, SubfieldPoly):
            return NotImplemented
        return self.tower == other.tower and self.codes == other.codes

    def __hash__(self):
        return hash((self.tower, tuple(self.codes)))

    def __str__(self):
        return ",".join(str(code) for code in self.codes)

    def __repr__(self):
        return f"SubfieldPoly([{self}], over={self.over!r})"


def eval_poly(f: SubfieldPoly, x: FieldElement) -> FieldElement:
    """Horner evaluation."""
    if x.tower is not f.tower and x.tower != f.tower:
        raise MixedTowers(f"{x!r} does not belong to the polynomial's tower.")

    result = f.tower.zero
    for c in reversed(f.coeffs):
        result = result * x + c

    return result


class LinearizedPoly:
    """
    An additive polynomial sum a_i x^(p^i) over F_{q^m}, indices in [0, n*m).

    When every index is a multiple of n the polynomial is a q-polynomial
    sum a_i x^(q^(i/n)). Indices are reduced mod n*m and zero coefficients dropped.

    Usage:
        tower = make_tower(2, 1, 3)
        trace = LinearizedPoly.trace(tower)
        print(kernel(trace))
    """

    def __init__(self, tower: FieldTower, terms: Mapping[int, FieldElement]):
        merged: Dict[int, FieldElement] = {}
        for index, coeff in terms.items():
            if coeff.tower is not tower and coeff.tower != tower:
                raise MixedTowers(f"Coefficient {coeff!r} belongs to a different tower.")
            index = index % tower.degree
            merged[index] = merged[index] + coeff if index in merged else coeff

        self.tower = tower
        self.terms: Dict[int, FieldElement] = {
            index: merged[index] for index in sorted(merged) if merged[index].code != 0
        }

    @classmethod
    def from_pairs(cls, tower: FieldTower, pairs: Iterable[Tuple[int, int]]):
        terms: Dict[int, FieldElement] = {}
        for index, code in pairs:
            coeff = tower.element(code)
            index = index % tower.degree
            terms[index] = terms[index] + coeff if index in terms else coeff
        return cls(tower, terms)

    @classmethod
    def zero(cls, tower: FieldTower):
        return cls(tower, {})

    @classmethod
    def identity(cls, tower: FieldTower):
        return cls(tower, {0: tower.one})

    @classmethod
    def scalar(cls, tower: FieldTower, c: FieldElement):
        return cls(tower, {0: c})

    @classmethod
    def monomial(cls, tower: FieldTower, index: int, c: FieldElement = None):
        """c x^(p^index)."""
        return cls(tower, {index: tower.one if c is None else c})

    @classmethod
    def frobenius(cls, tower: FieldTower, k: int = 1):
        """x^(q^k)."""
        return cls(tower, {tower.n * k: tower.one})

    @classmethod
    def trace(cls, tower: FieldTower):
        """x + x^q + ... + x^(q^(m-1))."""
        terms: Dict[int, FieldElement] = {}
        for i in range(tower.m):
            index = (tower.n * i) % tower.degree
            terms[index] = terms[index] + tower.one if index in terms else tower.one
        return cls(tower, terms)

    @classmethod
    def frobenius_minus_identity(cls, tower: FieldTower):
        """x^q - x."""
        return cls.frobenius(tower) - cls.identity(tower)

    @property
    def q_poly(self) -> bool:
        return all(index % self.tower.n == 0 for index in self.terms)

    @property
    def fq_coeffs(self) -> bool:
        return all(self.tower.in_subfield(c) for c in self.terms.values())

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return [(index, c.code) for index, c in self.terms.items()]

    def coefficient_sum(self) -> FieldElement:
        """a_0 + a_1 + ... + a_{m-1}: the value of L on F_q for an F_q-coefficient q-polynomial."""
        total = self.tower.zero
        for c in self.terms.values():
            total = total + c
        return total

    def __call__(self, x: FieldElement) -> FieldElement:
        return eval_linearized(self, x)

    def __add__(self, other: "LinearizedPoly"):
        if other.tower != self.tower:
            raise MixedTowers("Linearized polynomials belong to different towers.")
        terms = dict(self.terms)
        for index, c in other.terms.items():
            terms[index] = terms[index] + c if index in terms else c
        return LinearizedPoly(self.tower, terms)

    def __neg__(self):
        return LinearizedPoly(self.tower, {index: -c for index, c in self.terms.items()})

    def __sub__(self, other: "LinearizedPoly"):
        return self + (-other)

    def scale(self, c: FieldElement):
        """c * L(x)."""
        return LinearizedPoly(self.tower, {index: c * a for index, a in self.terms.items()})

    @cached_property
    def matrix(self) -> "AdditiveMatrix":
        return to_matrix(self)

    def __eq__(self, other):
        if not isinstance(other, LinearizedPoly):
            return NotImplemented
        return self.tower == other.tower and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.tower, tuple(self.pairs)))

    def __str__(self):
        return ",".join(f"{index}:{code}" for index, code in self.pairs)

    def __repr__(self):
        return f"LinearizedPoly({self})"


def eval_linearized(L: LinearizedPoly, x: FieldElement) -> FieldElement:
    tower = L.tower
    result = tower.zero
    for index, c in L.terms.items():
        result = result + c * tower.frobenius_p(x, index)

    return result


class AdditiveMatrix:
    """
    The (n*m) x (n*m) matrix over F_p of an additive map of F_{q^m}.

    Column i holds the residues of the image of the i-th basis vector y^a t^b,
    i = a*n + b.
    """

    def __init__(self, tower: FieldTower, entries: np.ndarray):
        size = tower.degree
        entries = np.asarray(entries, dtype=np.int64) % tower.p
        if entries.shape != (size, size):
            raise PermPolyError(f"Expected a {size}x{size} matrix. (shape: {entries.shape})")

        self.tower = tower
        self.entries = entries

    def apply(self, x: FieldElement) -> FieldElement:
        vector = np.array(self.tower.vector(x), dtype=np.int64)
        return self.tower.from_vector((self.entries @ vector) % self.tower.p)

    def table(self) -> np.ndarray:
        """Image codes of every element, indexed by input code."""
        tower = self.tower
        powers = tower.p ** np.arange(tower.degree, dtype=np.int64)
        vectors = (np.arange(tower.order, dtype=np.int64)[:, None] // powers) % tower.p
        return ((vectors @ self.entries.T) % tower.p) @ powers

    def __matmul__(self, other: "AdditiveMatrix"):
        if other.tower != self.tower:
            raise MixedTowers("Matrices belong to different towers.")
        return AdditiveMatrix(self.tower, (self.entries @ other.entries) % self.tower.p)

    @cached_property
    def _rank(self) -> int:
        return linalg.rank(self.entries, self.tower.p)

    def rank(self) -> int:
        return self._rank

    def is_invertible(self) -> bool:
        return self.rank() == self.tower.degree

    @cached_property
    def _inverse(self):
        return linalg.inverse(self.entries, self.tower.p)

    def inverse(self) -> "AdditiveMatrix":
        if self._inverse is None:
            raise NotInvertible("Additive map is not a bijection.")
        return AdditiveMatrix(self.tower, self._inverse)

    def __eq__(self, other):
        if not isinstance(other, AdditiveMatrix):
            return NotImplemented
        return self.tower == other.tower and np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"AdditiveMatrix({self.entries.tolist()})"


def _basis(tower: FieldTower) -> List[FieldElement]:
    return [tower.element(tower.p**i) for i in range(tower.degree)]


def matrix_of(tower: FieldTower, fmap) -> AdditiveMatrix:
    """Matrix of an arbitrary map, read off the basis; only meaningful if fmap is additive."""
    columns = [tower.vector(fmap(b)) for b in _basis(tower)]
    return AdditiveMatrix(tower, np.array(columns, dtype=np.int64).T)


def to_matrix(L: LinearizedPoly) -> AdditiveMatrix:
    return matrix_of(L.tower, L)


def multiplication_matrix(tower: FieldTower, c: FieldElement) -> AdditiveMatrix:
    """Matrix of x -> c*x."""
    return matrix_of(tower, lambda x: c * x)


def compose(L1: LinearizedPoly, L2: LinearizedPoly) -> AdditiveMatrix:
    """Matrix of L1(L2(x))."""
    return L1.matrix @ L2.matrix


def _decode_rows(tower: FieldTower, vectors: np.ndarray) -> List[FieldElement]:
    powers = np.array([tower.p**i for i in range(tower.degree)], dtype=np.int64)
    codes = sorted(int(code) for code in vectors @ powers)
    return [tower.element(code) for code in codes]


def kernel_of(matrix: AdditiveMatrix) -> List[FieldElement]:
    tower = matrix.tower
    basis = linalg.nullspace(matrix.entries, tower.p)
    return _decode_rows(tower, linalg.span(basis, tower.p))


def kernel(L: LinearizedPoly) -> List[FieldElement]:
    """
    All roots of L in F_{q^m}, sorted by code.

    Computed from the null space over F_p; the size is p^(n*m - rank).
    """
    return kernel_of(L.matrix)


def image(L: LinearizedPoly) -> List[FieldElement]:
    """L(F_{q^m}) sorted by code, from the column space over F_p."""
    tower = L.tower
    basis = linalg.column_basis(L.matrix.entries, tower.p)
    return _decode_rows(tower, linalg.span(basis, tower.p))


def is_linearized_permutation(L: LinearizedPoly) -> bool:
    return L.matrix.is_invertible()


def linearized_solve(L: LinearizedPoly, c: FieldElement) -> FieldElement:
    """The unique x with L(x) = c."""
    return L.matrix.inverse().apply(c)


def check_commutation(L: LinearizedPoly, B: LinearizedPoly) -> bool:
    """B(L(x)) = L(B(x)) as maps."""
    if L.tower != B.tower:
        raise MixedTowers("Linearized polynomials belong to different towers.")
    return compose(B, L) == compose(L, B)


def dickson_eval(nn: int, a: FieldElement, x: FieldElement) -> FieldElement:
    """
    D_nn(x, a) via D_0 = 2, D_1 = x, D_k = x D_{k-1} - a D_{k-2}.
    """
    if nn < 0:
        raise PermPolyError(f"Dickson degree must be non-negative. (nn: {nn})")

    tower = x.tower
    previous = tower.embed(2 % tower.p)
    if nn == 0:
        return previous

    current = x
    for _ in range(nn - 1):
        previous, current = current, x * current - a * previous

    return current


def is_monomial_pp(j: int, tower: FieldTower, which: str = "ext") -> bool:
    """x^j permutes F_q ("base") or F_{q^m} ("ext") iff gcd(j, size - 1) = 1."""
    if j < 1:
        raise PermPolyError(f"Monomial exponent must be positive. (j: {j})")

    if which not in ("base", "ext"):
        raise PermPolyError(f"Unknown field {which!r}; expected base or ext.")

    size = tower.q if which == "base" else tower.order
    return gcd(j, size - 1) == 1
