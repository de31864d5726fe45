"""
Exhaustive ground truth: bijectivity of maps, images, and audits comparing
each construction's criterion against the maps it builds.
"""

import logging
import random
import time

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from permpoly.construct import (
    Thm3Instance,
    Thm21Instance,
    Thm41Instance,
    as_function,
    build_thm3,
    build_thm21,
    cor23_instance,
    example21_instance,
    predicate_cor23,
    predicate_thm3,
)
from permpoly.exceptions import ImageEscape, MixedTowers
from permpoly.field import FieldElement, FieldTower
from permpoly.namespace import AUDIT_LIMIT, DEFAULT_SEED, THM3_VARIANTS
from permpoly.poly import LinearizedPoly, SubfieldPoly, is_linearized_permutation
from permpoly.symm import SymmetricKind
from permpoly.utils import coefficient_tuples, format_codes

logger = logging.getLogger(__name__)

FieldMap = Callable[[FieldElement], FieldElement]

# Smallest slice of the domain handed to one worker.
MIN_CHUNK = 256


@dataclass
class PermutationReport:
    is_permutation: bool
    domain_size: int
    image_size: int
    first_collision: Optional[Tuple[int, int]] = None
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self, timing: bool = False):
        info = {
            "is_permutation": self.is_permutation,
            "domain_size": self.domain_size,
            "image_size": self.image_size,
            "first_collision": list(self.first_collision) if self.first_collision else None,
        }
        if timing:
            info["elapsed"] = round(self.elapsed, 6)
        return info

    def __str__(self):
        return (
            f"Permutation         {self.is_permutation}\n"
            f"Domain Size         {self.domain_size}\n"
            f"Image Size          {self.image_size}\n"
            f"First Collision     {self.first_collision}\n"
        )


def _domain_codes(tower: FieldTower, domain) -> np.ndarray:
    if domain is None:
        return np.arange(tower.order, dtype=np.int64)

    codes = set()
    for x in domain:
        if isinstance(x, FieldElement):
            if x.tower != tower:
                raise MixedTowers(f"{x!r} belongs to a different tower.")
            codes.add(x.code)
        else:
            codes.add(tower.element(x).code)

    return np.array(sorted(codes), dtype=np.int64)


def _evaluate(fmap: FieldMap, tower: FieldTower, codes: np.ndarray, workers: int = 1) -> np.ndarray:
    """Output codes of fmap, aligned with codes. Chunks are contiguous and merged in order."""

    def run(chunk: np.ndarray) -> List[int]:
        return [fmap(FieldElement(int(code), tower)).code for code in chunk]

    chunks = max(1, min(workers, len(codes) // MIN_CHUNK))
    if chunks == 1:
        return np.array(run(codes), dtype=np.int64)

    with ThreadPoolExecutor(max_workers=chunks) as pool:
        parts = list(pool.map(run, np.array_split(codes, chunks)))

    return np.array([code for part in parts for code in part], dtype=np.int64)


def is_permutation(fmap: FieldMap, tower: FieldTower, domain=None, workers: int = 1) -> PermutationReport:
    """
    Evaluates fmap once on every element of the domain (the whole field by default).

    For a proper subset the image must stay inside it, otherwise ImageEscape.
    The reported collision (x1, x2) has the smallest x2 in code order and x1 its first preimage.
    """
    start = time.perf_counter()
    codes = _domain_codes(tower, domain)
    outputs = _evaluate(fmap, tower, codes, workers)

    if domain is not None:
        inside = np.isin(outputs, codes)
        if not inside.all():
            first = int(np.argmin(inside))
            raise ImageEscape(
                f"Map sends {int(codes[first])} to {int(outputs[first])}, outside the domain."
            )

    values, first_index = np.unique(outputs, return_index=True)
    repeated = np.ones(len(outputs), dtype=bool)
    repeated[first_index] = False

    collision = None
    if repeated.any():
        second = int(np.argmax(repeated))
        lookup = dict(zip(values.tolist(), first_index.tolist()))
        collision = (int(codes[lookup[int(outputs[second])]]), int(codes[second]))

    report = PermutationReport(
        is_permutation=collision is None,
        domain_size=len(codes),
        image_size=len(values),
        first_collision=collision,
        elapsed=time.perf_counter() - start,
    )
    logger.debug("Bijectivity check: %s", report.to_dict())
    return report


def image(fmap: FieldMap, tower: FieldTower, domain=None, workers: int = 1) -> List[int]:
    codes = _domain_codes(tower, domain)
    return sorted(set(_evaluate(fmap, tower, codes, workers).tolist()))


def permutation_table(fmap: FieldMap, tower: FieldTower, workers: int = 1) -> List[Tuple[int, int]]:
    """(input_code, output_code) rows sorted by input."""
    codes = _domain_codes(tower, None)
    outputs = _evaluate(fmap, tower, codes, workers)
    return list(zip(codes.tolist(), outputs.tolist()))


# Families


@dataclass
class Family:
    """A described, possibly sampled, sequence of (instance_id, instance) pairs."""

    description: str
    instances: Iterable[Tuple[str, object]]
    seed: Optional[int] = None

    def __iter__(self) -> Iterator[Tuple[str, object]]:
        return iter(self.instances)


def _select(total: int, max_instances: int, seed: int) -> Tuple[Sequence[int], Optional[int]]:
    """All indices when the space is small enough, otherwise a seeded sorted sample."""
    if total <= max_instances:
        return range(total), None

    rng = random.Random(seed)
    return sorted(rng.sample(range(total), max_instances)), seed


def _unrank(index: int, radices: Sequence[int]) -> List[int]:
    """Mixed-radix digits of index, most significant first."""
    digits = []
    for radix in reversed(radices):
        index, digit = divmod(index, radix)
        digits.append(digit)
    return digits[::-1]


def _subfield_polys(tower: FieldTower, max_deg: int) -> List[SubfieldPoly]:
    return [
        SubfieldPoly.from_codes(tower, codes)
        for codes in coefficient_tuples(tower.q, max_deg + 1)
    ]


def thm3_family(
    tower: FieldTower,
    variant: str,
    j: int,
    max_deg: int,
    max_instances: int = AUDIT_LIMIT,
    seed: int = DEFAULT_SEED,
) -> Family:
    """x h(lambda_j(x)) or x h(mu_j(x)) for every h over F_q of degree at most max_deg."""
    length = max_deg + 1
    total = tower.q**length
    indices, used_seed = _select(total, max_instances, seed)

    def generate():
        for index in indices:
            codes = _unrank(index, [tower.q] * length)
            h = SubfieldPoly.from_codes(tower, codes)
            yield f"h={format_codes(codes)}", Thm3Instance(tower, variant, j, h)

    description = f"{variant} j={j} max_deg={max_deg} over F_{tower.order}/F_{tower.q}"
    return Family(description, generate(), used_seed)


THM21_L_LABELS = ("x", "x^q", "cx")
THM21_B_LABELS = ("tr", "id", "x^q-x")


def thm21_family(
    towers: Sequence[FieldTower],
    ks: Sequence[int] = (1, 2),
    max_instances: int = AUDIT_LIMIT,
    seed: int = DEFAULT_SEED,
    c_code: int = 2,
    gamma_code: Optional[int] = None,
) -> Family:
    """
    thm21 instances with L_i in {x, x^q, cx}, B in {Tr, x, x^q - x},
    gamma_i in {0, gamma} and h_i every polynomial of degree at most 1 over F_q.

    c defaults to t (code 2), gamma to y (code q). Each (tower, k) block
    larger than max_instances is sampled on its own.
    """
    blocks = []
    sampled = False
    for tower in towers:
        c = tower.element(c_code)
        gamma = tower.element(tower.q if gamma_code is None else gamma_code)
        Ls = (LinearizedPoly.identity(tower), LinearizedPoly.frobenius(tower), LinearizedPoly.scalar(tower, c))
        Bs = (LinearizedPoly.trace(tower), LinearizedPoly.identity(tower), LinearizedPoly.frobenius_minus_identity(tower))
        gammas = (tower.zero, gamma)
        hs = _subfield_polys(tower, 1)
        term_radices = [len(Ls), len(gammas), len(hs)]

        for k in ks:
            radices = [len(Bs)] + term_radices * k
            indices, used_seed = _select(prod(radices), max_instances, seed)
            sampled = sampled or used_seed is not None
            blocks.append((tower, k, radices, indices, Ls, Bs, gammas, hs))

    def generate():
        for tower, k, radices, indices, Ls, Bs, gammas, hs in blocks:
            for index in indices:
                digits = _unrank(index, radices)
                b, terms = digits[0], [digits[1 + 3 * i : 4 + 3 * i] for i in range(k)]
                inst = Thm21Instance(
                    tower,
                    [Ls[li] for li, _, _ in terms],
                    [gammas[gi] for _, gi, _ in terms],
                    [hs[hi] for _, _, hi in terms],
                    Bs[b],
                )
                label = ";".join(
                    f"({THM21_L_LABELS[li]}+{gammas[gi].code})*h({hs[hi]})" for li, gi, hi in terms
                )
                yield f"F_{tower.order}/F_{tower.q} B={THM21_B_LABELS[b]} {label}", inst

    fields = ", ".join(f"F_{t.order}/F_{t.q}" for t in towers)
    description = f"thm21 k in {list(ks)} over {fields}"
    return Family(description, generate(), seed if sampled else None)


def example21_family(tower: FieldTower) -> Family:
    """a^2 x + x^2 (Tr(x)^3 - a Tr(x)) for every a in F_q^*."""

    def generate():
        for a in tower.elements("subfield"):
            if a.code:
                yield f"a={a.code}", example21_instance(tower, a)

    return Family(f"example21 over F_{tower.order}/F_{tower.q}", generate())


def thm41_family(
    tower: FieldTower,
    f=SymmetricKind("trace"),
    c_code: Optional[int] = None,
    max_instances: int = AUDIT_LIMIT,
    seed: int = DEFAULT_SEED,
) -> Family:
    """
    L1 in {x, x^q}, L2 in {x, cx}, every gamma and every table h: F_q -> F_q.

    c defaults to y (code q).
    """
    fn = as_function(tower, f)
    c = tower.element(tower.q if c_code is None else c_code)
    L1s = (("x", LinearizedPoly.identity(tower)), ("x^q", LinearizedPoly.frobenius(tower)))
    L2s = (("x", LinearizedPoly.identity(tower)), ("cx", LinearizedPoly.scalar(tower, c)))
    radices = [len(L1s), len(L2s), tower.order] + [tower.q] * tower.q
    indices, used_seed = _select(prod(radices), max_instances, seed)

    def generate():
        for index in indices:
            digits = _unrank(index, radices)
            (l1_name, L1), (l2_name, L2) = L1s[digits[0]], L2s[digits[1]]
            gamma = tower.element(digits[2])
            h = digits[3:]
            inst = Thm41Instance(tower, L1, L2, gamma, h, fn)
            yield f"L1={l1_name} L2={l2_name} gamma={gamma.code} h={format_codes(h)}", inst

    description = f"thm41 f={fn.name} over F_{tower.order}/F_{tower.q}"
    return Family(description, generate(), used_seed)


@dataclass(frozen=True)
class Cor23Case:
    tower: FieldTower
    L: LinearizedPoly
    gamma: FieldElement
    h: SubfieldPoly

    def describe(self) -> dict:
        return {"L": str(self.L), "gamma": self.gamma.code, "h": str(self.h)}


def cor23_family(tower: FieldTower, max_deg: int = 1, c_code: int = 2) -> Family:
    """L(x) + gamma h(Tr(x)) for q-polynomials L over F_q, every gamma and h of degree at most max_deg."""
    c = tower.element(c_code)
    Ls = (
        ("x", LinearizedPoly.identity(tower)),
        ("x^q", LinearizedPoly.frobenius(tower)),
        ("cx", LinearizedPoly.scalar(tower, c)),
        ("x^q+x", LinearizedPoly.frobenius(tower) + LinearizedPoly.identity(tower)),
        ("x^q-x", LinearizedPoly.frobenius_minus_identity(tower)),
    )
    hs = _subfield_polys(tower, max_deg)

    def generate():
        for name, L in Ls:
            for gamma in tower.elements():
                for h in hs:
                    yield f"L={name} gamma={gamma.code} h={h}", Cor23Case(tower, L, gamma, h)

    return Family(f"cor23 over F_{tower.order}/F_{tower.q}", generate())


def cor23_admissible(case: Cor23Case) -> bool:
    return is_linearized_permutation(case.L)


def cor23_predicate(case: Cor23Case) -> bool:
    return predicate_cor23(case.L, case.gamma, case.h)


def cor23_builder(case: Cor23Case) -> FieldMap:
    return build_thm21(cor23_instance(case.L, case.gamma, case.h))


# Audits


@dataclass
class AuditReport:
    family: str
    instances_checked: int = 0
    agreements: int = 0
    disagreements: List[dict] = field(default_factory=list)
    skipped: int = 0
    seed: Optional[int] = None

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self):
        return {
            "family": self.family,
            "instances_checked": self.instances_checked,
            "agreements": self.agreements,
            "disagreements": list(self.disagreements),
            "skipped": self.skipped,
            "seed": self.seed,
        }

    def __str__(self):
        lines = [
            f"Family              {self.family}",
            f"Instances Checked   {self.instances_checked}",
            f"Agreements          {self.agreements}",
            f"Disagreements       {len(self.disagreements)}",
            f"Skipped             {self.skipped}",
            f"Seed                {self.seed}",
        ]
        for item in self.disagreements:
            lines.append(f"  {item['instance']}: predicate {item['predicate']}, oracle {item['oracle']}")
        return "\n".join(lines) + "\n"


def audit_equivalence(
    family: Iterable[Tuple[str, object]],
    predicate: Callable[[object], bool],
    builder: Callable[[object], FieldMap],
    admissible: Optional[Callable[[object], bool]] = None,
    workers: int = 1,
) -> AuditReport:
    """
    Compares predicate(inst) with the oracle on builder(inst) for every instance.

    Instances failing admissible are counted as skipped, not checked.
    """
    report = AuditReport(
        family=getattr(family, "description", ""),
        seed=getattr(family, "seed", None),
    )

    for instance_id, inst in family:
        if admissible is not None and not admissible(inst):
            report.skipped += 1
            continue

        expected = bool(predicate(inst))
        actual = is_permutation(builder(inst), inst.tower, workers=workers).is_permutation
        report.instances_checked += 1
        if expected == actual:
            report.agreements += 1
        else:
            logger.warning("Disagreement on %s: predicate %s, oracle %s", instance_id, expected, actual)
            report.disagreements.append({"instance": instance_id, "predicate": expected, "oracle": actual})

    logger.info(
        "Audit %s: %d checked, %d disagreements, %d skipped",
        report.family,
        report.instances_checked,
        len(report.disagreements),
        report.skipped,
    )
    return report


def search_h(construction: str, tower: FieldTower, j: int, max_deg: int, workers: int = 1) -> List[SubfieldPoly]:
    """
    Every h over F_q of degree at most max_deg, in lexicographic coefficient
    order, whose thm31/thm32 criterion holds and whose map the oracle confirms.
    """
    variant = THM3_VARIANTS.get(construction, construction)
    Thm3Instance(tower, variant, j, SubfieldPoly.from_codes(tower, [1])).check()

    found = []
    for h in _subfield_polys(tower, max_deg):
        inst = Thm3Instance(tower, variant, j, h)
        if not predicate_thm3(inst):
            continue
        if is_permutation(build_thm3(inst), tower, workers=workers).is_permutation:
            found.append(h)
        else:
            logger.warning("Oracle rejects h = %s although the criterion holds", h)

    logger.info("search %s j=%d max_deg=%d: %d polynomials", construction, j, max_deg, len(found))
    return found
