import itertools
import logging

from dataclasses import dataclass
from typing import Callable, FrozenSet, List

from permpoly.exceptions import IndexOutOfRange, InternalError, NotInSubfield, ParseError
from permpoly.field import FieldElement, FieldTower
from permpoly.namespace import KIND_ALIASES, SYMMETRIC_KINDS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymmetricKind:
    """
    Selects one of the F_q-valued functions: trace, lambda_j or mu_j.

    Written on the command line as "tr", "lambda:<j>" or "mu:<j>".
    """

    kind: str
    j: int = 1

    @classmethod
    def parse(cls, text: str) -> "SymmetricKind":
        name, sep, index = text.strip().partition(":")
        kind = KIND_ALIASES.get(name.lower())
        if kind is None:
            raise ParseError(f"Unknown symmetric function {text!r}; expected tr, lambda:<j> or mu:<j>.")

        if kind == "trace":
            if sep and index != "1":
                raise ParseError(f"The trace takes no index. (got: {text!r})")
            return cls("trace", 1)

        if not sep:
            raise ParseError(f"{kind} needs an index, e.g. {kind}:2.")

        try:
            return cls(kind, int(index))
        except ValueError:
            raise ParseError(f"Malformed index in {text!r}.")

    def validate(self, tower: FieldTower):
        if self.kind not in SYMMETRIC_KINDS:
            raise ParseError(f"Unknown symmetric kind {self.kind!r}; expected one of {', '.join(SYMMETRIC_KINDS)}.")

        if self.kind == "trace":
            if self.j != 1:
                raise IndexOutOfRange(f"The trace is the index-1 function. (j: {self.j})")
        elif self.kind == "lambda":
            if not 1 <= self.j <= tower.m - 1:
                raise IndexOutOfRange(f"lambda_j needs 1 <= j <= m - 1 = {tower.m - 1}. (j: {self.j})")
        elif not 1 <= self.j <= tower.order - 1:
            raise IndexOutOfRange(f"mu_j needs 1 <= j <= q^m - 1 = {tower.order - 1}. (j: {self.j})")

    @property
    def name(self) -> str:
        if self.kind == "trace":
            return "tr"
        return f"{self.kind}:{self.j}"

    def __str__(self):
        return self.name


def _subfield_valued(value: FieldElement) -> FieldElement:
    tower = value.tower
    try:
        return tower.embed(tower.project_subfield(value))
    except NotInSubfield as exc:
        raise InternalError(f"Symmetric function left F_{tower.q}. (value: {value!r})") from exc


def conjugates(x: FieldElement) -> List[FieldElement]:
    """x, x^q, ..., x^(q^(m-1))."""
    tower = x.tower
    result = [x]
    for _ in range(tower.m - 1):
        result.append(tower.frobenius_q(result[-1], 1))
    return result


def trace_rel(x: FieldElement) -> FieldElement:
    """Tr_{F_{q^m}/F_q}(x)."""
    total = x.tower.zero
    for c in conjugates(x):
        total = total + c

    return _subfield_valued(total)


def lambda_j(x: FieldElement, j: int) -> FieldElement:
    """
    sigma_j evaluated at the conjugates of x.

    Expands prod_i (T + x^(q^i)) one factor at a time, keeping the elementary
    symmetric functions e_0..e_m of the factors seen so far.
    """
    tower = x.tower
    SymmetricKind("lambda", j).validate(tower)

    sigma = [tower.one] + [tower.zero] * tower.m
    for c in conjugates(x):
        for k in range(tower.m, 0, -1):
            sigma[k] = sigma[k] + c * sigma[k - 1]

    return _subfield_valued(sigma[j])


def lambda_j_direct(x: FieldElement, j: int) -> FieldElement:
    """sigma_j as the sum over index tuples i_1 < ... < i_j of x^(q^i_1 + ... + q^i_j)."""
    tower = x.tower
    SymmetricKind("lambda", j).validate(tower)

    total = tower.zero
    for indices in itertools.combinations(range(tower.m), j):
        exponent = sum(tower.q**i for i in indices)
        total = total + x**exponent

    return _subfield_valued(total)


def mu_j(x: FieldElement, j: int) -> FieldElement:
    """Tr(x^j)."""
    SymmetricKind("mu", j).validate(x.tower)
    return trace_rel(x**j)


def evaluate(kind: SymmetricKind, x: FieldElement) -> FieldElement:
    if kind.kind == "trace":
        return trace_rel(x)
    if kind.kind == "lambda":
        return lambda_j(x, kind.j)
    return mu_j(x, kind.j)


def symmetric_function(kind: SymmetricKind) -> Callable[[FieldElement], FieldElement]:
    def function(x: FieldElement) -> FieldElement:
        return evaluate(kind, x)

    function.__name__ = kind.name
    return function


def image_of(kind: SymmetricKind, tower: FieldTower) -> FrozenSet[FieldElement]:
    """The exhaustive image of the selected function over F_{q^m}."""
    kind.validate(tower)
    values = frozenset(evaluate(kind, x) for x in tower.elements())
    logger.debug("Image of %s over F_%d has %d elements", kind, tower.order, len(values))
    return values
