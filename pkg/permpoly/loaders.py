import csv
import io
import json
import logging

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

from permpoly.construct import (
    Thm3Instance,
    Thm21Instance,
    Thm41Instance,
    cor21_instance,
    cor22_instance,
    cor41_instance,
    example21_instance,
)
from permpoly.exceptions import ParseError
from permpoly.field import FieldTower, make_tower
from permpoly.namespace import CONSTRUCTIONS, CSV_HEADER, DEFAULT_SIZE_LIMIT, LINEARIZED_SHORTHANDS, PRESETS, THM3_VARIANTS
from permpoly.oracle import Cor23Case
from permpoly.poly import LinearizedPoly, SubfieldPoly
from permpoly.symm import SymmetricKind
from permpoly.utils import parse_codes, parse_terms

logger = logging.getLogger(__name__)


def read_json(path: Path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise ParseError(f"File does not exist: {path}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}")


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_csv(rows: Iterable[Sequence[int]], header: Sequence[str] = CSV_HEADER) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _require(data: Mapping, key: str, where: str):
    if key not in data:
        raise ParseError(f"Missing key {key!r} in {where}.")
    return data[key]


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{key} must be an integer. (got: {value!r})")
    return value


def _as_codes(value, key: str) -> list:
    if isinstance(value, str):
        return parse_codes(value)
    if isinstance(value, list) and all(isinstance(c, int) and not isinstance(c, bool) and c >= 0 for c in value):
        return list(value)
    raise ParseError(f"{key} must be a code list like \"2,1,1\" or [2, 1, 1]. (got: {value!r})")


def field_from_dict(data: Mapping, size_limit: int = DEFAULT_SIZE_LIMIT) -> FieldTower:
    """Keys p, n, m and optional base_poly, ext_poly."""
    if not isinstance(data, Mapping):
        raise ParseError(f"Field specification must be an object. (got: {data!r})")

    p = _as_int(_require(data, "p", "field specification"), "p")
    n = _as_int(data.get("n", 1), "n")
    m = _as_int(_require(data, "m", "field specification"), "m")
    base_poly = _as_codes(data["base_poly"], "base_poly") if data.get("base_poly") is not None else None
    ext_poly = _as_codes(data["ext_poly"], "ext_poly") if data.get("ext_poly") is not None else None
    return make_tower(p, n, m, base_poly, ext_poly, size_limit)


def load_field(path: Path, size_limit: int = DEFAULT_SIZE_LIMIT) -> FieldTower:
    return field_from_dict(read_json(path), size_limit)


def linearized_from(tower: FieldTower, value, key: str = "L") -> LinearizedPoly:
    """
    A linearized polynomial from "i:code,..." text, a list of [i, code] pairs,
    or one of the shorthands zero, id, tr, frob, frob-id.
    """
    if isinstance(value, str):
        shorthand = value.strip().lower()
        if shorthand == "zero":
            return LinearizedPoly.zero(tower)
        if shorthand == "id":
            return LinearizedPoly.identity(tower)
        if shorthand == "tr":
            return LinearizedPoly.trace(tower)
        if shorthand == "frob":
            return LinearizedPoly.frobenius(tower)
        if shorthand == "frob-id":
            return LinearizedPoly.frobenius_minus_identity(tower)
        return LinearizedPoly.from_pairs(tower, parse_terms(value))

    if isinstance(value, list):
        pairs = []
        for pair in value:
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(v, int) and v >= 0 for v in pair)):
                raise ParseError(f"{key} terms must be [index, code] pairs. (got: {pair!r})")
            pairs.append((pair[0], pair[1]))
        return LinearizedPoly.from_pairs(tower, pairs)

    raise ParseError(
        f"{key} must be a term string, a list of pairs or one of {', '.join(LINEARIZED_SHORTHANDS)}. (got: {value!r})"
    )


def poly_from(tower: FieldTower, value, key: str = "h", over: str = "base") -> SubfieldPoly:
    return SubfieldPoly.from_codes(tower, _as_codes(value, key), over)


def element_from(tower: FieldTower, value, key: str = "gamma"):
    return tower.element(_as_int(value, key))


def function_from(tower: FieldTower, data: Mapping):
    """f as a symmetric function name, or f_table as Q codes."""
    if "f_table" in data:
        return _as_codes(data["f_table"], "f_table")

    f = data.get("f", "tr")
    if not isinstance(f, str):
        raise ParseError(f"f must be tr, lambda:<j> or mu:<j>. (got: {f!r})")
    return SymmetricKind.parse(f)


def _h_from(tower: FieldTower, data: Mapping):
    if "h_table" in data:
        return _as_codes(data["h_table"], "h_table")
    return poly_from(tower, _require(data, "h", "instance"))


@dataclass
class LoadedInstance:
    construction: str
    tower: FieldTower
    instance: Union[Thm21Instance, Thm3Instance, Thm41Instance, Cor23Case]

    def describe(self) -> dict:
        return {"construction": self.construction, **self.instance.describe()}


def instance_from_dict(
    data: Mapping,
    base_dir: Path = Path("."),
    size_limit: int = DEFAULT_SIZE_LIMIT,
    tower: Optional[FieldTower] = None,
) -> LoadedInstance:
    """
    Reads an instance description. The "field" key (an object, or a path
    relative to base_dir) wins over a tower given by the caller.
    """
    if not isinstance(data, Mapping):
        raise ParseError("Instance description must be a JSON object.")

    construction = _require(data, "construction", "instance")
    if construction not in CONSTRUCTIONS:
        raise ParseError(f"Unknown construction {construction!r}; expected one of {', '.join(CONSTRUCTIONS)}.")

    field = data.get("field")
    if isinstance(field, str):
        tower = load_field(base_dir / field, size_limit)
    elif field is not None:
        tower = field_from_dict(field, size_limit)
    elif tower is None:
        raise ParseError("Instance names no field and none was given on the command line.")

    instance = _BUILDERS[construction](tower, data)
    logger.debug("Loaded %s instance over F_%d", construction, tower.order)
    return LoadedInstance(construction, tower, instance)


def load_instance(path: Path, size_limit: int = DEFAULT_SIZE_LIMIT, tower: Optional[FieldTower] = None) -> LoadedInstance:
    path = Path(path)
    return instance_from_dict(read_json(path), path.parent, size_limit, tower)


def _thm21(tower: FieldTower, data: Mapping) -> Thm21Instance:
    terms = _require(data, "terms", "thm21 instance")
    if not isinstance(terms, list):
        raise ParseError("terms must be a list of {L, gamma, h} objects.")

    Ls, gammas, hs = [], [], []
    for term in terms:
        if not isinstance(term, Mapping):
            raise ParseError(f"Each term must be an object. (got: {term!r})")
        Ls.append(linearized_from(tower, _require(term, "L", "term")))
        gammas.append(element_from(tower, term.get("gamma", 0)))
        hs.append(poly_from(tower, _require(term, "h", "term"), over="ext"))

    B = linearized_from(tower, _require(data, "B", "thm21 instance"), "B")
    return Thm21Instance(tower, Ls, gammas, hs, B)


def _thm3(construction: str):
    def build(tower: FieldTower, data: Mapping) -> Thm3Instance:
        j = _as_int(_require(data, "j", f"{construction} instance"), "j")
        h = poly_from(tower, _require(data, "h", f"{construction} instance"))
        return Thm3Instance(tower, THM3_VARIANTS[construction], j, h)

    return build


def _thm41(tower: FieldTower, data: Mapping) -> Thm41Instance:
    return Thm41Instance(
        tower,
        linearized_from(tower, _require(data, "L1", "thm41 instance"), "L1"),
        linearized_from(tower, _require(data, "L2", "thm41 instance"), "L2"),
        element_from(tower, data.get("gamma", 0)),
        _h_from(tower, data),
        function_from(tower, data),
    )


def _cor41(tower: FieldTower, data: Mapping) -> Thm41Instance:
    return cor41_instance(
        linearized_from(tower, _require(data, "L", "cor41 instance")),
        element_from(tower, data.get("gamma", 0)),
        _h_from(tower, data),
        function_from(tower, data),
    )


def _cor21(tower: FieldTower, data: Mapping) -> Thm21Instance:
    preset = data.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ParseError(f"Unknown preset {preset!r}; expected one of {', '.join(PRESETS)}.")
        return example21_instance(tower, element_from(tower, _require(data, "a", "example21 preset"), "a"))

    return cor21_instance(
        linearized_from(tower, _require(data, "L1", "cor21 instance"), "L1"),
        linearized_from(tower, _require(data, "L2", "cor21 instance"), "L2"),
        element_from(tower, data.get("gamma", 0)),
        poly_from(tower, _require(data, "h", "cor21 instance")),
    )


def _cor22(tower: FieldTower, data: Mapping) -> Thm21Instance:
    return cor22_instance(
        linearized_from(tower, _require(data, "L", "cor22 instance")),
        poly_from(tower, _require(data, "h", "cor22 instance")),
    )


def _cor23(tower: FieldTower, data: Mapping) -> Cor23Case:
    return Cor23Case(
        tower,
        linearized_from(tower, _require(data, "L", "cor23 instance")),
        element_from(tower, data.get("gamma", 0)),
        poly_from(tower, _require(data, "h", "cor23 instance")),
    )


_BUILDERS = {
    "thm21": _thm21,
    "thm31": _thm3("thm31"),
    "thm32": _thm3("thm32"),
    "thm41": _thm41,
    "cor41": _cor41,
    "cor21": _cor21,
    "cor22": _cor22,
    "cor23": _cor23,
}
