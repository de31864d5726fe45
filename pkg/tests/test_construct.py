import pytest

from permpoly.construct import (
    FieldFunction,
    Thm3Instance,
    Thm21Instance,
    Thm41Instance,
    build_thm3,
    build_thm21,
    build_thm41,
    certify_thm41,
    check_thm21_cond1,
    check_thm21_cond2,
    check_thm21_hypotheses,
    cor22_instance,
    cor23_instance,
    cor41_instance,
    example21_instance,
    find_linear_translators,
    is_linear_translator,
    predicate_cor23,
    predicate_thm3,
    predicate_thm41,
    translator_counterexample,
    verify_thm21,
)
from permpoly.exceptions import (
    GcdViolation,
    HypothesisViolation,
    IndexOutOfRange,
    InvalidInstance,
    MixedTowers,
    NotPermutationL,
    NotPermutationL1,
    NotSurjectiveF,
    NotTranslator,
    ZeroAlpha,
)
from permpoly.field import make_tower
from permpoly.oracle import is_permutation
from permpoly.poly import LinearizedPoly, SubfieldPoly
from permpoly.symm import SymmetricKind, trace_rel

X_H_TABLE = [(0, 0), (1, 4), (2, 1), (3, 2), (4, 3)]


class TestExample21:

    def setup_class(self):
        self.tower = make_tower(2, 3, 3)
        self.instances = [example21_instance(self.tower, a) for a in self.tower.elements("subfield") if a.code]

    def test_count(self):
        assert len(self.instances) == 7

    def test_conditions_hold(self):
        for inst in self.instances:
            report = verify_thm21(inst)
            assert report.hypotheses.holds
            assert report.cond1 and report.cond2
            assert report.predicate is True

    def test_oracle(self):
        for inst in self.instances:
            assert is_permutation(build_thm21(inst), self.tower).is_permutation

    def test_formula(self):
        a = self.tower.element(2)
        F = build_thm21(example21_instance(self.tower, a))
        for x in self.tower.elements():
            t = trace_rel(x)
            assert F(x) == a * a * x + x * x * (t**3 - a * t)

    def test_rejects_bad_a(self):
        with pytest.raises(HypothesisViolation):
            example21_instance(self.tower, self.tower.zero)
        with pytest.raises(HypothesisViolation):
            example21_instance(self.tower, self.tower.element(8))
        f25 = make_tower(5, 1, 2)
        with pytest.raises(HypothesisViolation):
            example21_instance(f25, f25.one)


class TestThm21:

    def setup_class(self):
        self.tower = make_tower(2, 2, 2)
        self.one = SubfieldPoly.from_codes(self.tower, [1])
        self.identity = LinearizedPoly.identity(self.tower)
        self.trace = LinearizedPoly.trace(self.tower)

    def test_empty_sum(self):
        with pytest.raises(InvalidInstance):
            Thm21Instance(self.tower, [], [], [], self.trace)

    def test_length_mismatch(self):
        with pytest.raises(InvalidInstance):
            Thm21Instance(self.tower, [self.identity], [], [self.one], self.trace)

    def test_mixed_towers(self):
        other = make_tower(2, 1, 4)
        with pytest.raises(MixedTowers):
            Thm21Instance(self.tower, [self.identity], [self.tower.zero], [self.one], LinearizedPoly.trace(other))

    def test_constant_map(self):
        gamma = self.tower.element(7)
        inst = Thm21Instance(self.tower, [LinearizedPoly.zero(self.tower)], [gamma], [self.one], self.identity)
        F = build_thm21(inst)
        assert all(F(x) == gamma for x in self.tower.elements())
        report = verify_thm21(inst)
        assert report.hypotheses.holds
        assert report.cond1 is False
        assert report.cond1_witness == (0, 1)
        assert not is_permutation(F, self.tower).is_permutation

    def test_clause_a(self):
        h = SubfieldPoly.from_codes(self.tower, [0, 1], "ext")
        inst = Thm21Instance(self.tower, [self.identity], [self.tower.zero], [h], self.identity)
        report = check_thm21_hypotheses(inst)
        assert report.failed == ["a"]
        assert report.counterexamples["a"]["x"] == 4
        with pytest.raises(HypothesisViolation):
            build_thm21(inst)

    def test_clause_c(self):
        L = LinearizedPoly.scalar(self.tower, self.tower.element(4))
        inst = Thm21Instance(self.tower, [L], [self.tower.zero], [self.one], self.trace)
        report = check_thm21_hypotheses(inst)
        assert report.clauses == {"a": True, "b": True, "c": False, "d": True}
        assert report.counterexamples["c"] == {"i": 1}

    def test_clause_d(self):
        B = LinearizedPoly.monomial(self.tower, 1)
        inst = Thm21Instance(self.tower, [self.identity], [self.tower.zero], [self.one], B)
        report = check_thm21_hypotheses(inst)
        assert report.failed == ["d"]
        assert report.counterexamples["d"] == {"c": 2}
        assert verify_thm21(inst).predicate is None

    def test_cond2_witness(self):
        inst = cor22_instance(LinearizedPoly.zero(self.tower), SubfieldPoly.from_codes(self.tower, [0, 1]))
        report = verify_thm21(inst)
        assert report.cond1 is True
        assert report.cond2 is False
        assert report.cond2_witness == (0, 1)
        assert not check_thm21_cond2(inst)
        assert not is_permutation(build_thm21(inst), self.tower).is_permutation

    def test_identity_plus_trace(self):
        # x + x Tr(x) over F_16 / F_4: G(y) = y + y^2, not injective on F_4
        inst = cor22_instance(self.identity, SubfieldPoly.from_codes(self.tower, [0, 1]))
        assert not check_thm21_cond1(inst)
        assert not is_permutation(build_thm21(inst), self.tower).is_permutation

    def test_report_serialises(self):
        inst = cor22_instance(self.identity, self.one)
        report = verify_thm21(inst)
        info = report.to_dict()
        assert info["predicate"] == report.predicate
        assert info["hypotheses"]["holds"] is True
        assert "Condition (1)" in str(report)


class TestThm3:

    def setup_class(self):
        self.f25 = make_tower(5, 1, 2)
        self.h = SubfieldPoly.from_codes(self.f25, [2, 1, 1])

    def test_x_h_table(self):
        for c, expected in X_H_TABLE:
            x = self.f25.element(c)
            assert (x * self.h(x)).code == expected

    def test_certified(self):
        inst = Thm3Instance(self.f25, "lambda", 1, self.h)
        assert predicate_thm3(inst)
        assert is_permutation(build_thm3(inst), self.f25).is_permutation

    def test_h_zero_at_zero(self):
        inst = Thm3Instance(self.f25, "lambda", 1, SubfieldPoly.from_codes(self.f25, [0, 1]))
        assert not predicate_thm3(inst)
        assert not is_permutation(build_thm3(inst), self.f25).is_permutation

    def test_gcd(self):
        tower = make_tower(5, 1, 3)
        inst = Thm3Instance(tower, "lambda", 2, SubfieldPoly.from_codes(tower, [1]))
        with pytest.raises(GcdViolation):
            build_thm3(inst)
        with pytest.raises(GcdViolation):
            Thm3Instance(self.f25, "mu", 2, self.h).check()

    def test_index(self):
        with pytest.raises(IndexOutOfRange):
            predicate_thm3(Thm3Instance(self.f25, "lambda", 2, self.h))

    def test_h_over_subfield(self):
        h = SubfieldPoly.from_codes(self.f25, [7], "ext")
        with pytest.raises(HypothesisViolation):
            Thm3Instance(self.f25, "lambda", 1, h)

    def test_unknown_variant(self):
        with pytest.raises(InvalidInstance):
            Thm3Instance(self.f25, "nu", 1, self.h)


class TestTranslators:

    def setup_class(self):
        self.tower = make_tower(2, 2, 2)
        self.trace = FieldFunction(self.tower, trace_rel, name="tr")

    def test_trace_translators(self):
        certs = find_linear_translators(SymmetricKind("trace"), self.tower)
        assert len(certs) == 15
        assert all(cert.a == trace_rel(cert.alpha) for cert in certs)
        assert [cert.alpha.code for cert in certs] == list(range(1, 16))

    def test_wrong_constant(self):
        alpha = self.tower.element(4)
        assert is_linear_translator(self.trace, alpha, self.tower.one)
        assert not is_linear_translator(self.trace, alpha, self.tower.element(2))
        assert translator_counterexample(self.trace, alpha, self.tower.element(2)) == (0, 1)

    def test_zero_alpha(self):
        with pytest.raises(ZeroAlpha):
            is_linear_translator(self.trace, self.tower.zero, self.tower.zero)

    def test_table_function(self):
        f = FieldFunction(self.tower, table=[trace_rel(x).code for x in self.tower.elements()])
        assert f.table == self.trace.table
        with pytest.raises(InvalidInstance):
            FieldFunction(self.tower, table=[0] * 15)


class TestThm41:

    def setup_class(self):
        self.tower = make_tower(2, 2, 2)
        self.identity = LinearizedPoly.identity(self.tower)
        self.frob = LinearizedPoly.frobenius(self.tower)
        self.tr = SymmetricKind("trace")
        self.h = [0, 1, 3, 2]

    def test_certificate(self):
        gamma = self.tower.element(6)
        inst = Thm41Instance(self.tower, self.frob, self.identity, gamma, self.h, self.tr)
        cert = certify_thm41(inst)
        assert self.frob(cert.alpha) == gamma
        assert cert.b == trace_rel(cert.alpha)
        assert not cert.trivial

    def test_trivial(self):
        inst = Thm41Instance(self.tower, self.identity, self.identity, self.tower.zero, [0, 0, 0, 0], self.tr)
        cert = certify_thm41(inst)
        assert cert.trivial and cert.b == self.tower.zero
        assert predicate_thm41(inst)
        assert is_permutation(build_thm41(inst), self.tower).is_permutation

    def test_equivalence_sample(self):
        for gamma in self.tower.elements():
            for h in ([0, 1, 3, 2], [1, 1, 1, 1], [0, 0, 1, 1], [3, 2, 1, 0]):
                inst = Thm41Instance(self.tower, self.identity, self.identity, gamma, h, self.tr)
                assert predicate_thm41(inst) == is_permutation(build_thm41(inst), self.tower).is_permutation

    def test_not_permutation_l1(self):
        inst = Thm41Instance(self.tower, LinearizedPoly.trace(self.tower), self.identity, self.tower.one, self.h, self.tr)
        with pytest.raises(NotPermutationL1):
            certify_thm41(inst)

    def test_l1_not_fq_linear(self):
        inst = Thm41Instance(self.tower, LinearizedPoly.monomial(self.tower, 1), self.identity, self.tower.one, self.h, self.tr)
        with pytest.raises(HypothesisViolation):
            certify_thm41(inst)

    def test_not_surjective(self):
        inst = Thm41Instance(self.tower, self.identity, self.identity, self.tower.one, self.h, [0] * 16)
        with pytest.raises(NotSurjectiveF):
            certify_thm41(inst)

    def test_not_fq_valued(self):
        inst = Thm41Instance(self.tower, self.identity, self.identity, self.tower.one, self.h, list(range(16)))
        with pytest.raises(HypothesisViolation):
            certify_thm41(inst)

    def test_not_translator(self):
        square_trace = FieldFunction(self.tower, lambda x: trace_rel(x) ** 2, name="tr^2")
        inst = Thm41Instance(self.tower, self.identity, self.identity, self.tower.element(4), self.h, square_trace)
        with pytest.raises(NotTranslator):
            certify_thm41(inst)

    def test_bad_h_table(self):
        with pytest.raises(InvalidInstance):
            Thm41Instance(self.tower, self.identity, self.identity, self.tower.one, [0, 1, 2], self.tr)
        with pytest.raises(InvalidInstance):
            Thm41Instance(self.tower, self.identity, self.identity, self.tower.one, [0, 1, 2, 4], self.tr)

    def test_h_polynomial(self):
        h = SubfieldPoly.from_codes(self.tower, [1, 1])
        inst = Thm41Instance(self.tower, self.identity, self.identity, self.tower.one, h, self.tr)
        assert inst.h == (1, 0, 3, 2)

    def test_constant_collapse(self):
        f5 = make_tower(5, 1, 2)
        identity = LinearizedPoly.identity(f5)
        inst = cor41_instance(identity, f5.element(3), [0, 4, 3, 2, 1], SymmetricKind("trace"))
        assert certify_thm41(inst).b == f5.one
        assert not predicate_thm41(inst)
        assert not is_permutation(build_thm41(inst), f5).is_permutation


class TestCor23:

    def setup_class(self):
        self.tower = make_tower(2, 2, 2)
        self.h = SubfieldPoly.from_codes(self.tower, [1, 1])

    def test_trace_zero(self):
        identity = LinearizedPoly.identity(self.tower)
        assert predicate_cor23(identity, self.tower.zero, self.h)
        assert predicate_cor23(identity, self.tower.one, self.h) == is_permutation(
            build_thm21(cor23_instance(identity, self.tower.one, self.h)), self.tower
        ).is_permutation

    def test_not_permutation(self):
        with pytest.raises(NotPermutationL):
            predicate_cor23(LinearizedPoly.frobenius_minus_identity(self.tower), self.tower.one, self.h)

    def test_not_q_polynomial(self):
        with pytest.raises(HypothesisViolation):
            predicate_cor23(LinearizedPoly.monomial(self.tower, 1), self.tower.one, self.h)
