import itertools
import random

import pytest

from permpoly.exceptions import NotInSubfield, NotInvertible, PermPolyError
from permpoly.field import make_tower
from permpoly.namespace import EXHAUSTIVE_LIMIT
from permpoly.poly import (
    LinearizedPoly,
    SubfieldPoly,
    check_commutation,
    compose,
    dickson_eval,
    image,
    is_linearized_permutation,
    is_monomial_pp,
    kernel,
    linearized_solve,
    matrix_of,
    multiplication_matrix,
)

MONOMIALS = [
    (3, (2, 1, 2), "ext", False),
    (5, (2, 3, 2), "ext", True),
    (1, (2, 2, 2), "base", True),
    (3, (2, 2, 2), "base", False),
    (7, (2, 2, 2), "ext", True),
    (5, (2, 2, 2), "ext", False),
]

ADDITIVE_TOWERS = [(2, 2, 2), (3, 1, 3), (2, 3, 2), (2, 3, 5)]

SCALAR_TOWERS = [(2, 2, 2), (2, 3, 2), (3, 1, 3), (5, 1, 2)]


class TestSubfieldPoly:

    def setup_class(self):
        self.f5 = make_tower(5, 1, 1)
        self.f16 = make_tower(2, 2, 2)

    def test_evaluate(self):
        h = SubfieldPoly.from_codes(self.f5, [2, 1, 1])
        assert h(self.f5.one) == self.f5.element(4)
        assert str(h) == "2,1,1"

    def test_trailing_zeros(self):
        assert SubfieldPoly.from_codes(self.f5, [1, 0, 0]).degree == 0
        assert SubfieldPoly.from_codes(self.f5, []).degree == -1
        assert SubfieldPoly.from_codes(self.f5, [0, 0])(self.f5.one) == self.f5.zero

    def test_base_coefficients(self):
        with pytest.raises(NotInSubfield):
            SubfieldPoly(self.f16, [self.f16.element(4)], "base")
        with pytest.raises(PermPolyError):
            SubfieldPoly.from_codes(self.f16, [4])
        h = SubfieldPoly.from_codes(self.f16, [4], "ext")
        assert h.over == "ext"

    def test_equality(self):
        assert SubfieldPoly.from_codes(self.f5, [1, 2, 0]) == SubfieldPoly.from_codes(self.f5, [1, 2])


class TestLinearizedF8:

    def setup_class(self):
        self.tower = make_tower(2, 1, 3)
        self.trace = LinearizedPoly.trace(self.tower)

    def test_trace_kernel(self):
        assert [x.code for x in kernel(self.trace)] == [0, 2, 4, 6]

    def test_trace_image(self):
        assert [x.code for x in image(self.trace)] == [0, 1]

    def test_trace_is_not_permutation(self):
        assert not is_linearized_permutation(self.trace)
        with pytest.raises(NotInvertible):
            linearized_solve(self.trace, self.tower.one)

    def test_str(self):
        assert str(self.trace) == "0:1,1:1,2:1"
        assert str(LinearizedPoly.zero(self.tower)) == ""


class TestLinearizedF16:

    def setup_class(self):
        self.tower = make_tower(2, 2, 2)
        self.y = self.tower.element(4)
        self.frob = LinearizedPoly.frobenius(self.tower)

    def test_index_reduction(self):
        assert LinearizedPoly.monomial(self.tower, 4) == LinearizedPoly.identity(self.tower)
        assert LinearizedPoly.from_pairs(self.tower, [(0, 1), (4, 1)]) == LinearizedPoly.zero(self.tower)

    def test_flags(self):
        assert self.frob.q_poly and self.frob.fq_coeffs
        assert not LinearizedPoly.monomial(self.tower, 1).q_poly
        assert not LinearizedPoly.scalar(self.tower, self.y).fq_coeffs

    def test_trace_value(self):
        assert LinearizedPoly.trace(self.tower)(self.y) == self.tower.one

    def test_frobenius_minus_identity(self):
        L = LinearizedPoly.frobenius_minus_identity(self.tower)
        assert [x.code for x in kernel(L)] == [0, 1, 2, 3]
        assert len(image(L)) == 4

    def test_solve(self):
        for c in self.tower.elements():
            assert self.frob(linearized_solve(self.frob, c)) == c

    def test_commutation(self):
        assert check_commutation(self.frob, LinearizedPoly.trace(self.tower))
        assert not check_commutation(LinearizedPoly.scalar(self.tower, self.y), self.frob)

    def test_compose(self):
        square = compose(self.frob, self.frob)
        assert square == LinearizedPoly.identity(self.tower).matrix

    def test_multiplication_matrix(self):
        for c in self.tower.elements():
            for d in (self.y, self.tower.element(7)):
                assert multiplication_matrix(self.tower, c) @ multiplication_matrix(self.tower, d) == multiplication_matrix(self.tower, c * d)

    def test_matrix_table(self):
        L = LinearizedPoly.from_pairs(self.tower, [(0, 5), (1, 9), (3, 2)])
        assert L.matrix.table().tolist() == [L(x).code for x in self.tower.elements()]
        assert all(L.matrix.apply(x) == L(x) for x in self.tower.elements())

    def test_matrix_of_map(self):
        assert matrix_of(self.tower, lambda x: x * self.y) == multiplication_matrix(self.tower, self.y)

    def test_arithmetic(self):
        L = LinearizedPoly.from_pairs(self.tower, [(0, 5), (2, 9)])
        for x in self.tower.elements():
            assert (L + self.frob)(x) == L(x) + self.frob(x)
            assert (L - L)(x) == self.tower.zero
            assert L.scale(self.y)(x) == self.y * L(x)


def test_frobenius_matrix():
    tower = make_tower(2, 1, 2)
    square = LinearizedPoly.monomial(tower, 1)
    assert square.matrix.entries.tolist() == [[1, 1], [0, 1]]


@pytest.mark.parametrize("degrees", [(2, 2, 2), (2, 3, 2), (3, 1, 2)])
def test_rank_nullity(degrees):
    tower = make_tower(*degrees)
    rng = random.Random(11)
    for _ in range(20):
        pairs = [(i, rng.randrange(tower.order)) for i in range(tower.degree) if rng.random() < 0.5]
        L = LinearizedPoly.from_pairs(tower, pairs)
        assert len(kernel(L)) * len(image(L)) == tower.order
        assert (len(kernel(L)) == 1) == is_linearized_permutation(L)


@pytest.mark.parametrize("degrees", ADDITIVE_TOWERS)
def test_additivity(degrees):
    tower = make_tower(*degrees)
    rng = random.Random(23)
    L = LinearizedPoly.from_pairs(tower, [(i, rng.randrange(1, tower.order)) for i in (0, 1, tower.n)])
    if tower.order <= EXHAUSTIVE_LIMIT:
        pairs = itertools.product(tower.elements(), repeat=2)
    else:
        pairs = [(tower.element(rng.randrange(tower.order)), tower.element(rng.randrange(tower.order))) for _ in range(1000)]

    for x, y in pairs:
        assert L(x + y) == L(x) + L(y)


@pytest.mark.parametrize("degrees", SCALAR_TOWERS)
def test_scalar_law(degrees):
    tower = make_tower(*degrees)
    rng = random.Random(5)
    L = LinearizedPoly.from_pairs(tower, [(tower.n * i, rng.randrange(1, tower.q)) for i in range(tower.m)])
    assert L.q_poly and L.fq_coeffs
    for a in tower.elements("subfield"):
        for x in tower.elements():
            assert a * L(x) == L(a * x)


def test_scalar_law_needs_q_poly():
    tower = make_tower(2, 2, 2)
    square = LinearizedPoly.monomial(tower, 1)
    t = tower.element(2)
    assert not square.q_poly
    assert t * square(tower.one) != square(t)


def test_coefficient_sum():
    tower = make_tower(2, 2, 2)
    L = LinearizedPoly.from_pairs(tower, [(0, 2), (2, 3)])
    for c in tower.elements("subfield"):
        assert L(c) == L.coefficient_sum() * c


def test_dickson_char_two():
    tower = make_tower(2, 1, 3)
    for a in tower.elements():
        for x in tower.elements():
            expected = x**5 + a * x**3 + a * a * x
            assert dickson_eval(5, a, x) == expected


def test_dickson_closed_form():
    # D_n(u + a/u, a) = u^n + (a/u)^n
    tower = make_tower(5, 1, 2)
    a = tower.element(3)
    for u in tower.elements():
        if u.code:
            v = a / u
            for nn in range(7):
                assert dickson_eval(nn, a, u + v) == u**nn + v**nn


def test_dickson_negative():
    tower = make_tower(2, 1, 3)
    with pytest.raises(PermPolyError):
        dickson_eval(-1, tower.one, tower.one)


@pytest.mark.parametrize("j, degrees, which, expected", MONOMIALS)
def test_monomial_criterion(j, degrees, which, expected):
    assert is_monomial_pp(j, make_tower(*degrees), which) == expected


@pytest.mark.parametrize("which", ["subfield", "full", ""])
def test_monomial_criterion_unknown_field(which):
    with pytest.raises(PermPolyError):
        is_monomial_pp(3, make_tower(2, 1, 3), which)
