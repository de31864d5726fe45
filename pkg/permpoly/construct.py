import logging

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from permpoly import linalg
from permpoly.exceptions import (
    GcdViolation,
    HypothesisViolation,
    ImageEscape,
    InternalError,
    InvalidInstance,
    MixedTowers,
    NotPermutationL,
    NotPermutationL1,
    NotSurjectiveF,
    NotTranslator,
    PermPolyError,
    ZeroAlpha,
)
from permpoly.field import FieldElement, FieldTower
from permpoly.namespace import DEFAULT_SEED, EXHAUSTIVE_LIMIT
from permpoly.poly import (
    AdditiveMatrix,
    LinearizedPoly,
    SubfieldPoly,
    check_commutation,
    image,
    is_linearized_permutation,
    kernel,
    linearized_solve,
    multiplication_matrix,
)
from permpoly.symm import SymmetricKind, evaluate, trace_rel

logger = logging.getLogger(__name__)

FieldMap = Callable[[FieldElement], FieldElement]


class FieldFunction:
    """
    A function F_{q^m} -> F_{q^m}, tabulated by code on first use.

    Wraps a callable, or an explicit table of Q output codes. Translator
    certificates computed for it are memoised on the instance.
    """

    def __init__(self, tower: FieldTower, function: Optional[FieldMap] = None, table=None, name: str = "f"):
        if (function is None) == (table is None):
            raise PermPolyError("A field function needs exactly one of a callable or a table.")

        if table is not None:
            table = tuple(int(code) for code in table)
            if len(table) != tower.order or any(not 0 <= code < tower.order for code in table):
                raise InvalidInstance(f"Function table for {name} must hold {tower.order} codes in [0, {tower.order}).")
            self.__dict__["table"] = table

        self.tower = tower
        self.function = function
        self.name = name
        self._translators: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {}

    @cached_property
    def table(self) -> Tuple[int, ...]:
        return tuple(self.function(x).code for x in self.tower.elements())

    def __call__(self, x: FieldElement) -> FieldElement:
        return FieldElement(self.table[x.code], self.tower)

    def values(self) -> set:
        return set(self.table)

    def __repr__(self):
        return f"FieldFunction({self.name})"


def as_function(tower: FieldTower, f, name: str = "f") -> FieldFunction:
    """Accepts a FieldFunction, a SymmetricKind, a SubfieldPoly, a code table or a callable."""
    if isinstance(f, FieldFunction):
        return f
    if isinstance(f, SymmetricKind):
        f.validate(tower)
        return FieldFunction(tower, lambda x: evaluate(f, x), name=f.name)
    if isinstance(f, SubfieldPoly):
        return FieldFunction(tower, f, name=name)
    if callable(f):
        return FieldFunction(tower, f, name=name)
    return FieldFunction(tower, table=f, name=name)


@lru_cache(maxsize=None)
def subfield_scalar_matrices(tower: FieldTower) -> Tuple[AdditiveMatrix, ...]:
    """Matrices of x -> c x for every c in F_q, in code order."""
    return tuple(multiplication_matrix(tower, c) for c in tower.elements("subfield"))


def is_fq_linear(matrix: AdditiveMatrix) -> bool:
    """The additive map commutes with multiplication by every c in F_q."""
    return all(matrix @ scalar == scalar @ matrix for scalar in subfield_scalar_matrices(matrix.tower))


def _bijective_on_subfield(tower: FieldTower, g: FieldMap) -> bool:
    return len({g(c).code for c in tower.elements("subfield")}) == tower.q


# Sums of (L_i(x) + gamma_i) h_i(B(x))


@dataclass(frozen=True)
class Thm21Instance:
    """
    F(x) = sum_i (L_i(x) + gamma_i) h_i(B(x)) over one tower.

    h_i may have F_{q^m} coefficients as long as h_i(B(F_{q^m})) lies in F_q.
    """

    tower: FieldTower
    L_list: Tuple[LinearizedPoly, ...]
    gamma_list: Tuple[FieldElement, ...]
    h_list: Tuple[SubfieldPoly, ...]
    B: LinearizedPoly

    def __post_init__(self):
        for name in ("L_list", "gamma_list", "h_list"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

        if not self.L_list:
            raise InvalidInstance("A thm21 instance needs at least one summand (k >= 1).")

        if not len(self.L_list) == len(self.gamma_list) == len(self.h_list):
            raise InvalidInstance(
                f"Summand lists differ in length. (L: {len(self.L_list)}, gamma: {len(self.gamma_list)}, h: {len(self.h_list)})"
            )

        members = [self.B, *self.L_list, *self.gamma_list, *self.h_list]
        if any(item.tower != self.tower for item in members):
            raise MixedTowers("All parts of a thm21 instance must share one tower.")

    @property
    def k(self) -> int:
        return len(self.L_list)

    @property
    def summands(self):
        return zip(self.L_list, self.gamma_list, self.h_list)

    def describe(self) -> dict:
        return {
            "B": str(self.B),
            "terms": [
                {"L": str(L), "gamma": gamma.code, "h": str(h)} for L, gamma, h in self.summands
            ],
        }


THM21_CLAUSES = {
    "a": "h_i(B(x)) lies in F_q for every x",
    "b": "B and every L_i are additive",
    "c": "B(L_i(x)) = L_i(B(x))",
    "d": "B(cx) = cB(x) for every c in F_q",
}


@dataclass
class Thm21Hypotheses:
    """Which hypothesis clauses of a thm21 instance hold, with the first counterexample of each failure."""

    clauses: Dict[str, bool]
    counterexamples: Dict[str, dict] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.clauses.values())

    @property
    def failed(self) -> List[str]:
        return [name for name, ok in self.clauses.items() if not ok]

    def to_dict(self):
        return {
            "holds": self.holds,
            "clauses": dict(self.clauses),
            "counterexamples": dict(self.counterexamples),
        }

    def __str__(self):
        lines = []
        for name, ok in self.clauses.items():
            line = f"  ({name}) {THM21_CLAUSES[name]:<40} {'holds' if ok else 'FAILS'}"
            if name in self.counterexamples:
                line += f"  {self.counterexamples[name]}"
            lines.append(line)
        return "\n".join(lines)


def _image_in_subfield(inst: Thm21Instance) -> Tuple[bool, Optional[dict]]:
    """Clause (a), scanning x in code order."""
    tower = inst.tower
    checked = set()
    for x in tower.elements():
        b = inst.B(x)
        if b.code in checked:
            continue
        checked.add(b.code)
        for i, h in enumerate(inst.h_list, start=1):
            value = h(b)
            if not tower.in_subfield(value):
                return False, {"x": x.code, "i": i, "B(x)": b.code, "h_i(B(x))": value.code}

    return True, None


def _check_points(tower: FieldTower) -> np.ndarray:
    """Every code of a field with at most EXHAUSTIVE_LIMIT elements, else a fixed-seed sample of that size."""
    if tower.order <= EXHAUSTIVE_LIMIT:
        return np.arange(tower.order, dtype=np.int64)

    rng = np.random.default_rng(DEFAULT_SEED)
    return np.sort(rng.choice(tower.order, EXHAUSTIVE_LIMIT, replace=False))


def check_thm21_hypotheses(inst: Thm21Instance) -> Thm21Hypotheses:
    tower = inst.tower
    clauses = {}
    counterexamples = {}

    clauses["a"], witness = _image_in_subfield(inst)
    if witness:
        counterexamples["a"] = witness

    clauses["b"] = True
    points = _check_points(tower)
    for label, L in [("B", inst.B)] + [(f"L_{i}", L) for i, L in enumerate(inst.L_list, start=1)]:
        direct = np.array([L(tower.element(code)).code for code in points], dtype=np.int64)
        if tower.order <= EXHAUSTIVE_LIMIT:
            via_matrix = L.matrix.table()
        else:
            via_matrix = np.array([L.matrix.apply(tower.element(code)).code for code in points], dtype=np.int64)
        mismatch = np.nonzero(direct != via_matrix)[0]
        if mismatch.size:
            clauses["b"] = False
            counterexamples["b"] = {"map": label, "x": int(points[mismatch[0]])}
            break

    clauses["c"] = True
    for i, L in enumerate(inst.L_list, start=1):
        if not check_commutation(L, inst.B):
            clauses["c"] = False
            counterexamples["c"] = {"i": i}
            break

    clauses["d"] = True
    for c, scalar in zip(tower.elements("subfield"), subfield_scalar_matrices(tower)):
        if inst.B.matrix @ scalar != scalar @ inst.B.matrix:
            clauses["d"] = False
            counterexamples["d"] = {"c": c.code}
            break

    report = Thm21Hypotheses(clauses, counterexamples)
    if not report.holds:
        logger.debug("thm21 hypotheses fail: %s %s", report.failed, counterexamples)

    return report


def build_thm21(inst: Thm21Instance) -> FieldMap:
    ok, witness = _image_in_subfield(inst)
    if not ok:
        raise HypothesisViolation(f"Clause (a) fails: {THM21_CLAUSES['a']}. (counterexample: {witness})")

    summands = list(inst.summands)
    B = inst.B

    def F(x: FieldElement) -> FieldElement:
        b = B(x)
        total = x.tower.zero
        for L, gamma, h in summands:
            total = total + (L(x) + gamma) * h(b)
        return total

    return F


def _cond1(inst: Thm21Instance) -> Tuple[bool, Optional[Tuple[int, int]]]:
    S = image(inst.B)
    members = {y.code for y in S}
    shifted = [(L, inst.B(gamma), h) for L, gamma, h in inst.summands]

    first_preimage: Dict[int, int] = {}
    collision = None
    for y in S:
        value = y.tower.zero
        for L, b_gamma, h in shifted:
            value = value + (L(y) + b_gamma) * h(y)

        if value.code not in members:
            raise ImageEscape(f"G({y.code}) = {value.code} leaves B(F_q^m).")

        if value.code in first_preimage:
            if collision is None:
                collision = (first_preimage[value.code], y.code)
        else:
            first_preimage[value.code] = y.code

    return collision is None, collision


def check_thm21_cond1(inst: Thm21Instance) -> bool:
    """G(x) = sum_i (L_i(x) + B(gamma_i)) h_i(x) is a bijection of S = B(F_{q^m})."""
    return _cond1(inst)[0]


def _cond2(inst: Thm21Instance) -> Tuple[bool, Optional[Tuple[int, int]]]:
    tower = inst.tower
    S = image(inst.B)
    ker_B = [x for x in kernel(inst.B) if x.code != 0]
    B_entries = inst.B.matrix.entries

    for y in S:
        M_y = LinearizedPoly.zero(tower)
        for L, h in zip(inst.L_list, inst.h_list):
            M_y = M_y + L.scale(h(y))

        joint = np.vstack([M_y.matrix.entries, B_entries])
        trivial = linalg.rank(joint, tower.p) == tower.degree

        witness = next((x for x in ker_B if M_y(x).code == 0), None)
        if trivial != (witness is None):
            raise InternalError(f"Joint kernel and kernel scan disagree. (y: {y.code})")

        if witness is not None:
            return False, (y.code, witness.code)

    return True, None


def check_thm21_cond2(inst: Thm21Instance) -> bool:
    """For every y in B(F_{q^m}), ker(sum_i h_i(y) L_i) meets ker(B) only in 0."""
    return _cond2(inst)[0]


@dataclass
class Thm21Report:
    hypotheses: Thm21Hypotheses
    cond1: Optional[bool] = None
    cond1_witness: Optional[Tuple[int, int]] = None
    cond2: Optional[bool] = None
    cond2_witness: Optional[Tuple[int, int]] = None

    @property
    def predicate(self) -> Optional[bool]:
        if self.cond1 is None or self.cond2 is None:
            return None
        return self.cond1 and self.cond2

    def to_dict(self):
        return {
            "hypotheses": self.hypotheses.to_dict(),
            "cond1": self.cond1,
            "cond1_collision": list(self.cond1_witness) if self.cond1_witness else None,
            "cond2": self.cond2,
            "cond2_witness": (
                {"y": self.cond2_witness[0], "x": self.cond2_witness[1]} if self.cond2_witness else None
            ),
            "predicate": self.predicate,
        }

    def __str__(self):
        return (
            f"Hypotheses\n{self.hypotheses}\n"
            f"Condition (1)       {self.cond1}"
            + (f"  collision {self.cond1_witness}" if self.cond1_witness else "")
            + "\n"
            f"Condition (2)       {self.cond2}"
            + (f"  (y, x) = {self.cond2_witness}" if self.cond2_witness else "")
            + "\n"
            f"Predicate           {self.predicate}\n"
        )


def verify_thm21(inst: Thm21Instance) -> Thm21Report:
    report = Thm21Report(check_thm21_hypotheses(inst))
    if not report.hypotheses.holds:
        return report

    report.cond1, report.cond1_witness = _cond1(inst)
    report.cond2, report.cond2_witness = _cond2(inst)
    return report


def thm21_predicate(inst: Thm21Instance) -> bool:
    return check_thm21_cond1(inst) and check_thm21_cond2(inst)


def thm21_admissible(inst: Thm21Instance) -> bool:
    return check_thm21_hypotheses(inst).holds


# Special cases with B = Tr


def _one(tower: FieldTower) -> SubfieldPoly:
    return SubfieldPoly(tower, [tower.one], "base")


def cor21_instance(L1: LinearizedPoly, L2: LinearizedPoly, gamma: FieldElement, h: SubfieldPoly) -> Thm21Instance:
    """L1(x) + (L2(x) + gamma) h(Tr(x)) as (L1 + 0) 1 + (L2 + gamma) h with B = Tr."""
    tower = L1.tower
    return Thm21Instance(
        tower,
        (L1, L2),
        (tower.zero, gamma),
        (_one(tower), h),
        LinearizedPoly.trace(tower),
    )


def cor22_instance(L: LinearizedPoly, h: SubfieldPoly) -> Thm21Instance:
    """L(x) + x h(Tr(x))."""
    tower = L.tower
    return cor21_instance(L, LinearizedPoly.identity(tower), tower.zero, h)


def cor23_instance(L: LinearizedPoly, gamma: FieldElement, h: SubfieldPoly) -> Thm21Instance:
    """L(x) + gamma h(Tr(x))."""
    return cor21_instance(L, LinearizedPoly.zero(L.tower), gamma, h)


def example21_instance(tower: FieldTower, a: FieldElement) -> Thm21Instance:
    """a^2 x + x^2 (Tr(x)^3 - a Tr(x)) for a in F_q^*, in characteristic 2."""
    if tower.p != 2:
        raise HypothesisViolation(f"The x^2 summand is additive only in characteristic 2. (p: {tower.p})")

    if a.code == 0 or not tower.in_subfield(a):
        raise HypothesisViolation(f"a must be a nonzero element of F_{tower.q}. (a: {a.code})")

    h = SubfieldPoly(tower, [tower.zero, -a, tower.zero, tower.one], "base")
    return cor21_instance(
        LinearizedPoly.scalar(tower, a * a),
        LinearizedPoly.monomial(tower, 1),
        tower.zero,
        h,
    )


def predicate_cor23(L: LinearizedPoly, gamma: FieldElement, h: SubfieldPoly) -> bool:
    """(a_0 + ... + a_{m-1}) x + Tr(gamma) h(x) permutes F_q."""
    tower = L.tower
    if not (L.q_poly and L.fq_coeffs):
        raise HypothesisViolation("L must be a q-polynomial with coefficients in F_q.")

    if not is_linearized_permutation(L):
        raise NotPermutationL(f"L = {L} does not permute F_{tower.order}.")

    s = L.coefficient_sum()
    t = trace_rel(gamma)
    return _bijective_on_subfield(tower, lambda c: s * c + t * h(c))


# x h(lambda_j(x)) and x h(mu_j(x))


@dataclass(frozen=True)
class Thm3Instance:
    """x h(lambda_j(x)) (variant "lambda") or x h(mu_j(x)) (variant "mu"), h over F_q."""

    tower: FieldTower
    variant: str
    j: int
    h: SubfieldPoly

    def __post_init__(self):
        if self.variant not in ("lambda", "mu"):
            raise InvalidInstance(f"Unknown variant {self.variant!r}; expected lambda or mu.")

        if self.h.tower != self.tower:
            raise MixedTowers("h belongs to a different tower.")

        if not all(self.tower.in_subfield(c) for c in self.h.coeffs):
            raise HypothesisViolation(f"h must have coefficients in F_{self.tower.q}. (h: {self.h})")

    @property
    def kind(self) -> SymmetricKind:
        return SymmetricKind(self.variant, self.j)

    def check(self):
        tower = self.tower
        self.kind.validate(tower)

        if self.variant == "lambda" and gcd(self.j, tower.q - 1) != 1:
            raise GcdViolation(f"thm31 needs gcd(j, q - 1) = 1. (j: {self.j}, q: {tower.q})")

        if self.variant == "mu" and gcd(self.j, tower.order - 1) != 1:
            raise GcdViolation(f"thm32 needs gcd(j, q^m - 1) = 1. (j: {self.j}, q^m: {tower.order})")

    def describe(self) -> dict:
        return {"variant": self.variant, "j": self.j, "h": str(self.h)}


def build_thm3(inst: Thm3Instance) -> FieldMap:
    inst.check()
    kind = inst.kind
    h = inst.h

    def F(x: FieldElement) -> FieldElement:
        return x * h(evaluate(kind, x))

    return F


def predicate_thm3(inst: Thm3Instance) -> bool:
    """h(0) != 0 and x h(x)^j permutes F_q."""
    inst.check()
    tower = inst.tower
    h = inst.h

    if h(tower.zero).code == 0:
        return False

    return _bijective_on_subfield(tower, lambda c: c * h(c) ** inst.j)


# Linear translators


@dataclass(frozen=True)
class LinearTranslatorCert:
    """alpha is an a-linear translator of f: f(x + u alpha) - f(x) = u a for all x, u."""

    alpha: FieldElement
    a: FieldElement
    f: FieldFunction = field(compare=False, repr=False)

    def to_dict(self):
        return {"alpha": self.alpha.code, "a": self.a.code}


def translator_counterexample(f, alpha: FieldElement, a: FieldElement) -> Optional[Tuple[int, int]]:
    """The first (x, u) in code order violating the translator identity, or None."""
    tower = alpha.tower
    if alpha.code == 0:
        raise ZeroAlpha("A linear translator must be nonzero.")

    fn = as_function(tower, f)
    key = (alpha.code, a.code)
    if key in fn._translators:
        return fn._translators[key]

    steps = [(u, u * alpha, u * a) for u in tower.elements("subfield")]
    witness = None
    for x in tower.elements():
        fx = fn(x)
        for u, shift, target in steps:
            if fn(x + shift) - fx != target:
                witness = (x.code, u.code)
                break
        if witness:
            break

    if witness is None and fn(alpha) - fn(tower.zero) != a:
        raise InternalError(f"Translator constant differs from f(alpha) - f(0). (alpha: {alpha.code}, a: {a.code})")

    fn._translators[key] = witness
    return witness


def is_linear_translator(f, alpha: FieldElement, a: FieldElement) -> bool:
    return translator_counterexample(f, alpha, a) is None


def find_linear_translators(f, tower: FieldTower) -> List[LinearTranslatorCert]:
    """Every (alpha, a) certificate of f; a is pinned to f(alpha) - f(0)."""
    fn = as_function(tower, f)
    f0 = fn(tower.zero)
    certs = []
    for alpha in tower.elements():
        if alpha.code == 0:
            continue
        a = fn(alpha) - f0
        if not tower.in_subfield(a):
            continue
        if is_linear_translator(fn, alpha, a):
            certs.append(LinearTranslatorCert(alpha, a, fn))

    logger.debug("%s has %d linear translators", fn.name, len(certs))
    return certs


# L1(x) + L2(gamma) h(f(x))


def _h_table(tower: FieldTower, h) -> Tuple[int, ...]:
    if isinstance(h, SubfieldPoly):
        values = [h(c) for c in tower.elements("subfield")]
        if not all(tower.in_subfield(v) for v in values):
            raise HypothesisViolation(f"h = {h} does not map F_{tower.q} into itself.")
        return tuple(v.code for v in values)

    table = tuple(int(code) for code in h)
    if len(table) != tower.q or any(not 0 <= code < tower.q for code in table):
        raise InvalidInstance(f"h must be a table of {tower.q} F_{tower.q} codes. (h: {list(table)})")
    return table


@dataclass(frozen=True)
class Thm41Instance:
    """
    G(x) = L1(x) + L2(gamma) h(f(x)).

    h: F_q -> F_q is kept as a table of q codes (polynomials are sampled);
    f: F_{q^m} -> F_q is a FieldFunction.
    """

    tower: FieldTower
    L1: LinearizedPoly
    L2: LinearizedPoly
    gamma: FieldElement
    h: Tuple[int, ...]
    f: FieldFunction

    def __post_init__(self):
        object.__setattr__(self, "h", _h_table(self.tower, self.h))
        object.__setattr__(self, "f", as_function(self.tower, self.f))

        if any(item.tower != self.tower for item in (self.L1, self.L2, self.gamma, self.f)):
            raise MixedTowers("All parts of a thm41 instance must share one tower.")

    def describe(self) -> dict:
        return {
            "L1": str(self.L1),
            "L2": str(self.L2),
            "gamma": self.gamma.code,
            "h": list(self.h),
            "f": self.f.name,
        }


@dataclass(frozen=True)
class Thm41Certificate:
    """The translator alpha = L1^{-1}(L2(gamma)) and its constant b; trivial when L2(gamma) = 0."""

    l2_gamma: FieldElement
    alpha: FieldElement
    b: FieldElement

    @property
    def trivial(self) -> bool:
        return self.l2_gamma.code == 0

    def to_dict(self):
        return {"L2(gamma)": self.l2_gamma.code, "alpha": self.alpha.code, "b": self.b.code}


def certify_thm41(inst: Thm41Instance) -> Thm41Certificate:
    tower = inst.tower

    if not is_linearized_permutation(inst.L1):
        raise NotPermutationL1(f"L1 = {inst.L1} does not permute F_{tower.order}.")

    if not is_fq_linear(inst.L1.matrix):
        raise HypothesisViolation(f"L1 = {inst.L1} is not F_{tower.q}-linear.")

    values = inst.f.values()
    outside = sorted(code for code in values if code >= tower.q)
    if outside:
        raise HypothesisViolation(f"f is not F_{tower.q}-valued. (first value outside: {outside[0]})")

    if len(values) != tower.q:
        raise NotSurjectiveF(f"f takes {len(values)} of the {tower.q} values of F_{tower.q}.")

    l2_gamma = inst.L2(inst.gamma)
    if l2_gamma.code == 0:
        return Thm41Certificate(l2_gamma, tower.zero, tower.zero)

    alpha = linearized_solve(inst.L1, l2_gamma)
    b = inst.f(alpha) - inst.f(tower.zero)
    witness = translator_counterexample(inst.f, alpha, b)
    if witness is not None:
        raise NotTranslator(
            f"L1^-1(L2(gamma)) = {alpha.code} is not a {b.code}-linear translator of {inst.f.name}. (x, u) = {witness}"
        )

    return Thm41Certificate(l2_gamma, alpha, b)


def build_thm41(inst: Thm41Instance) -> FieldMap:
    cert = certify_thm41(inst)
    tower = inst.tower
    L1, f, h = inst.L1, inst.f, inst.h
    v = cert.l2_gamma

    def G(x: FieldElement) -> FieldElement:
        return L1(x) + v * tower.embed(h[f.table[x.code]])

    return G


def predicate_thm41(inst: Thm41Instance) -> bool:
    """L2(gamma) = 0, or x + b h(x) permutes F_q."""
    cert = certify_thm41(inst)
    if cert.trivial:
        return True

    tower = inst.tower
    b = cert.b
    return _bijective_on_subfield(tower, lambda c: c + b * tower.embed(inst.h[c.code]))


def cor41_instance(L: LinearizedPoly, gamma: FieldElement, h, f) -> Thm41Instance:
    """L(x) + L(gamma) h(f(x))."""
    return Thm41Instance(L.tower, L, L, gamma, h, f)
