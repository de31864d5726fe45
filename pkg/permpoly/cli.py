import argparse
import logging
import os
import sys

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from permpoly.construct import (
    build_thm3,
    build_thm21,
    build_thm41,
    certify_thm41,
    find_linear_translators,
    predicate_thm3,
    predicate_thm41,
    thm21_admissible,
    thm21_predicate,
    verify_thm21,
    THM21_CLAUSES,
)
from permpoly.exceptions import (
    HypothesisError,
    HypothesisViolation,
    ImageEscape,
    InternalError,
    ParseError,
    PermPolyError,
)
from permpoly.field import FieldTower, make_tower
from permpoly.loaders import LoadedInstance, dump_json, load_field, load_instance, write_csv
from permpoly.namespace import (
    AUDIT_LIMIT,
    DEFAULT_SEED,
    DEFAULT_SIZE_LIMIT,
    EXIT_CODES,
    OUTPUT_FORMATS,
    THM3_VARIANTS,
    THM21_AUDIT_LIMIT,
)
from permpoly.oracle import (
    AuditReport,
    audit_equivalence,
    cor23_admissible,
    cor23_builder,
    cor23_family,
    cor23_predicate,
    example21_family,
    is_permutation,
    permutation_table,
    search_h,
    thm3_family,
    thm21_family,
    thm41_family,
)
from permpoly.symm import SymmetricKind
from permpoly.utils import format_codes, parse_codes, setup_logging, split_prime_power

logger = logging.getLogger(__name__)

AUDITS = ("thm21", "thm31", "thm32", "thm41", "cor23")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


@dataclass
class RunConfig:
    """Everything one invocation needs, resolved from the command line."""

    command: str
    construction: Optional[str] = None
    field_path: Optional[Path] = None
    p: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None
    q: Optional[int] = None
    base_poly: Optional[str] = None
    ext_poly: Optional[str] = None
    instance: Optional[Path] = None
    out: Optional[Path] = None
    format: str = "table"
    workers: int = 1
    size_limit: int = DEFAULT_SIZE_LIMIT
    seed: int = DEFAULT_SEED
    timing: bool = False
    j: Optional[int] = None
    max_deg: int = 2
    preset: Optional[str] = None
    ks: List[int] = field(default_factory=lambda: [1, 2])
    max_instances: Optional[int] = None
    f: str = "tr"
    verbosity: int = 0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        values = {name: getattr(args, name) for name in cls.__dataclass_fields__ if hasattr(args, name)}
        values = {name: value for name, value in values.items() if value is not None}
        return cls(**values)

    def instance_cap(self, default: int = AUDIT_LIMIT) -> int:
        return default if self.max_instances is None else self.max_instances

    def has_field(self) -> bool:
        return self.field_path is not None or self.q is not None or self.p is not None

    def tower(self, p: Optional[int] = None, n: Optional[int] = None, m: Optional[int] = None) -> FieldTower:
        """The tower named by --field or the inline flags; p, n, m fill in what the flags omit."""
        if self.field_path is not None:
            return load_field(self.field_path, self.size_limit)

        if self.q is not None:
            p, n = split_prime_power(self.q)
        elif self.p is not None:
            p, n = self.p, self.n or 1

        m = self.m or m
        if p is None or m is None:
            raise ParseError("No field given; use --field, --q/--m or --p/--n/--m.")

        base_poly = parse_codes(self.base_poly) if self.base_poly else None
        ext_poly = parse_codes(self.ext_poly) if self.ext_poly else None
        return make_tower(p, n or 1, m, base_poly, ext_poly, self.size_limit)


def _emit(config: RunConfig, text: str):
    if config.out is None:
        sys.stdout.write(text)
        return

    with open(config.out, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info("Wrote %s", config.out)


def _no_csv(config: RunConfig):
    if config.format == "csv":
        raise ParseError(f"csv output is only available for export. (command: {config.command})")


# verify


def _predicate(loaded: LoadedInstance):
    """The construction's own verdict and the details behind it."""
    construction, inst = loaded.construction, loaded.instance

    if construction in ("thm21", "cor21", "cor22"):
        report = verify_thm21(inst)
        if not report.hypotheses.holds:
            clauses = ", ".join(f"({c}) {THM21_CLAUSES[c]}" for c in report.hypotheses.failed)
            raise HypothesisViolation(f"thm21 hypotheses fail: {clauses}. {report.hypotheses.counterexamples}")
        return report.predicate, report.to_dict()

    if construction in THM3_VARIANTS:
        return predicate_thm3(inst), {}

    if construction in ("thm41", "cor41"):
        return predicate_thm41(inst), certify_thm41(inst).to_dict()

    return cor23_predicate(inst), {}


def _builder(loaded: LoadedInstance):
    construction, inst = loaded.construction, loaded.instance
    if construction in ("thm21", "cor21", "cor22"):
        return build_thm21(inst)
    if construction in THM3_VARIANTS:
        return build_thm3(inst)
    if construction in ("thm41", "cor41"):
        return build_thm41(inst)
    return cor23_builder(inst)


def _load(config: RunConfig) -> LoadedInstance:
    if config.instance is None:
        raise ParseError(f"{config.command} needs --instance.")
    tower = config.tower() if config.has_field() else None
    return load_instance(config.instance, config.size_limit, tower)


def cmd_verify(config: RunConfig) -> int:
    _no_csv(config)
    loaded = _load(config)
    predicate, details = _predicate(loaded)
    report = is_permutation(_builder(loaded), loaded.tower, workers=config.workers)
    agreement = predicate == report.is_permutation

    if config.format == "json":
        text = dump_json(
            {
                "instance": loaded.describe(),
                "field": loaded.tower.to_dict(),
                "predicate": predicate,
                "details": details,
                "oracle": report.to_dict(timing=config.timing),
                "agreement": agreement,
            }
        )
    else:
        text = (
            f"Construction        {loaded.construction}\n"
            f"Field               F_{loaded.tower.order}/F_{loaded.tower.q}\n"
            f"Predicate           {predicate}\n"
            f"Oracle              {report.is_permutation}\n"
            f"{report}"
            + (f"Elapsed             {report.elapsed:.6f} s\n" if config.timing else "")
            + ("AGREEMENT\n" if agreement else "DISAGREEMENT\n")
        )
    _emit(config, text)

    if not agreement:
        return EXIT_CODES["disagreement"]
    return EXIT_CODES["ok"] if report.is_permutation else EXIT_CODES["not_permutation"]


# audit


def _audit(config: RunConfig) -> AuditReport:
    construction = config.construction
    workers = config.workers

    if construction in ("thm21", "cor21") and config.preset == "example21":
        tower = config.tower(2, 3, 3)
        return audit_equivalence(
            example21_family(tower), thm21_predicate, build_thm21, thm21_admissible, workers
        )

    if config.preset is not None:
        raise ParseError(f"Preset {config.preset!r} does not apply to {construction}.")

    if construction == "thm21":
        towers = [config.tower()] if config.has_field() else [make_tower(2, 2, 2), make_tower(2, 3, 2)]
        family = thm21_family(towers, config.ks, config.instance_cap(THM21_AUDIT_LIMIT), config.seed)
        return audit_equivalence(family, thm21_predicate, build_thm21, thm21_admissible, workers)

    if construction in THM3_VARIANTS:
        if config.j is None:
            raise ParseError(f"audit {construction} needs --j.")
        family = thm3_family(
            config.tower(), THM3_VARIANTS[construction], config.j, config.max_deg, config.instance_cap(), config.seed
        )
        return audit_equivalence(family, predicate_thm3, build_thm3, workers=workers)

    if construction == "thm41":
        tower = config.tower(2, 2, 2)
        family = thm41_family(tower, SymmetricKind.parse(config.f), max_instances=config.instance_cap(), seed=config.seed)
        return audit_equivalence(family, predicate_thm41, build_thm41, workers=workers)

    family = cor23_family(config.tower(2, 2, 2), config.max_deg)
    return audit_equivalence(family, cor23_predicate, cor23_builder, cor23_admissible, workers)


def cmd_audit(config: RunConfig) -> int:
    _no_csv(config)
    report = _audit(config)
    _emit(config, dump_json(report.to_dict()) if config.format == "json" else str(report))
    return EXIT_CODES["ok"] if report.ok else EXIT_CODES["disagreement"]


# search, export, translators, field-info


def cmd_search(config: RunConfig) -> int:
    _no_csv(config)
    if config.j is None:
        raise ParseError("search needs --j.")

    found = search_h(config.construction, config.tower(), config.j, config.max_deg, config.workers)
    if config.format == "json":
        text = dump_json([h.codes for h in found])
    else:
        text = "".join(f"{format_codes(h.codes)}\n" for h in found)
    _emit(config, text)
    return EXIT_CODES["ok"]


def cmd_export(config: RunConfig) -> int:
    loaded = _load(config)
    rows = permutation_table(_builder(loaded), loaded.tower, config.workers)

    if config.format == "json":
        text = dump_json([list(row) for row in rows])
    elif config.format == "table":
        text = "".join(f"{x:>8} {y:>8}\n" for x, y in rows)
    else:
        text = write_csv(rows)
    _emit(config, text)
    return EXIT_CODES["ok"]


def cmd_translators(config: RunConfig) -> int:
    _no_csv(config)
    tower = config.tower()
    certs = find_linear_translators(SymmetricKind.parse(config.f), tower)

    if config.format == "json":
        text = dump_json([cert.to_dict() for cert in certs])
    else:
        text = f"{'alpha':>8} {'a':>8}\n" + "".join(f"{c.alpha.code:>8} {c.a.code:>8}\n" for c in certs)
    _emit(config, text)
    return EXIT_CODES["ok"]


def cmd_field_info(config: RunConfig) -> int:
    _no_csv(config)
    tower = config.tower()
    _emit(config, dump_json(tower.to_dict()) if config.format == "json" else str(tower))
    return EXIT_CODES["ok"]


COMMANDS = {
    "verify": cmd_verify,
    "audit": cmd_audit,
    "search": cmd_search,
    "export": cmd_export,
    "translators": cmd_translators,
    "field-info": cmd_field_info,
}


def _add_common(parser: argparse.ArgumentParser, default_format: str = "table"):
    group = parser.add_argument_group("field")
    group.add_argument("--field", dest="field_path", type=Path, help="JSON field specification.")
    group.add_argument("--p", type=int, help="Characteristic.")
    group.add_argument("--n", type=int, help="Degree of F_q over F_p.")
    group.add_argument("--q", type=int, help="Subfield size, a prime power (instead of --p/--n).")
    group.add_argument("--m", type=int, help="Degree of F_{q^m} over F_q.")
    group.add_argument("--base-poly", dest="base_poly", help="Monic irreducible over F_p, low-to-high, e.g. 1,1,1.")
    group.add_argument("--ext-poly", dest="ext_poly", help="Monic irreducible over F_q as F_q codes, low-to-high.")

    parser.add_argument("--out", type=Path, help="Write output here instead of stdout.")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=default_format)
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--size-limit", dest="size_limit", type=int, default=DEFAULT_SIZE_LIMIT)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--timing", action="store_const", const=True, help="Include elapsed time in reports.")
    parser.add_argument("-v", "--verbose", dest="verbosity", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="permpoly", description="Construct and verify permutation polynomials over F_{q^m}.")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="Compare a construction's criterion with the exhaustive oracle.")
    verify.add_argument("--instance", type=Path, help="JSON instance description.")
    _add_common(verify)

    audit = commands.add_parser("audit", help="Audit a criterion against the oracle over a generated family.")
    audit.add_argument("construction", choices=AUDITS)
    audit.add_argument("--j", type=int)
    audit.add_argument("--max-deg", dest="max_deg", type=int)
    audit.add_argument("--preset", choices=("example21",))
    audit.add_argument("--k", dest="ks", type=int, action="append", help="Summand counts for thm21 (repeatable).")
    audit.add_argument("--max-instances", dest="max_instances", type=int)
    audit.add_argument("--f", help="tr, lambda:<j> or mu:<j> for thm41.")
    _add_common(audit)

    search = commands.add_parser("search", help="List every h of bounded degree giving a permutation.")
    search.add_argument("construction", choices=tuple(THM3_VARIANTS))
    search.add_argument("--j", type=int)
    search.add_argument("--max-deg", dest="max_deg", type=int)
    _add_common(search)

    export = commands.add_parser("export", help="Write the permutation table of an instance.")
    export.add_argument("--instance", type=Path, help="JSON instance description.")
    _add_common(export, default_format="csv")

    translators = commands.add_parser("translators", help="List the linear translators of tr, lambda_j or mu_j.")
    translators.add_argument("--f", default="tr", help="tr, lambda:<j> or mu:<j>.")
    _add_common(translators)

    info = commands.add_parser("field-info", help="Print the field tower.")
    _add_common(info)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ParseError as exc:
        print(f"permpoly: {exc}", file=sys.stderr)
        return EXIT_CODES["parse_error"]

    config = RunConfig.from_args(args)
    setup_logging(config.verbosity)

    try:
        return COMMANDS[config.command](config)
    except HypothesisError as exc:
        print(f"Hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_CODES["hypothesis"]
    except (ImageEscape, InternalError) as exc:
        print(f"permpoly: internal error: {exc}", file=sys.stderr)
        return EXIT_CODES["internal"]
    except PermPolyError as exc:
        print(f"permpoly: {exc}", file=sys.stderr)
        return EXIT_CODES["parse_error"]


if __name__ == "__main__":
    sys.exit(main())
