"""
Command-line interface.

    flopverify verify C2
    flopverify verify Mukai --n 5
    flopverify verify AG4 --only-lemmas --json
    flopverify verify --all --markdown
    flopverify hom C2 "O(h)" "O(-h+H)"
    flopverify bbw C2:F -- -2 1
    flopverify history

Exit codes: 0 PASS, 1 FAIL, 2 usage error.
"""

import argparse
import json
import sys
from datetime import datetime

from flopverify.application.services import VerificationService
from flopverify.domain.bbw_engine import (
    Bundle,
    HomogeneousSpace,
    cohomology,
    cohomology_irreducible,
)
from flopverify.domain.character_ring import CharacterError, rep_name
from flopverify.domain.flop_catalog import (
    CASE_FILES,
    PARAMETRIC_CASES,
    FlopCase,
    load_case,
    parse_case_name,
)
from flopverify.domain.report import Report, Verdict
from flopverify.domain.weight_lattice import RootSystem, Weight
from flopverify.domain.zero_section_hom import hom_V
from flopverify.infrastructure.database import SqliteReportRepository
from flopverify.settings import Settings
from flopverify.utils import LogUtils

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

logger = LogUtils.get_logger(__name__)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flopverify",
        description="Verify derived-equivalence proofs for simple flops.",
    )
    parser.add_argument("--config", help="TOML configuration file (else $FLOPVERIFY_CONFIG)")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser("verify", help="Run lemma suites and mutation replays")
    verify.add_argument("case", nargs="?", help="C2, AG4, Mukai, Std or e.g. Mukai(3)")
    verify.add_argument("--n", type=int, help="Parameter of Mukai(n) and Std(n)")
    verify.add_argument("--all", action="store_true", help="Verify every case")
    verify.add_argument("--only-lemmas", action="store_true", help="Skip the mutation replay")
    verify.add_argument("--no-history", action="store_true", help="Do not store the report")
    _add_format_flags(verify)
    verify.add_argument(
        "--timings",
        action="store_true",
        help="Include stage timings in JSON and markdown output; stored history always has them",
    )

    hom = subparsers.add_parser("hom", help="Graded Hom between two objects on V")
    hom.add_argument("case")
    hom.add_argument("source", help='Descriptor, e.g. "O(h)" or "Qt_dual"')
    hom.add_argument("target")
    hom.add_argument("--json", action="store_true", help="Print JSON")

    bbw = subparsers.add_parser("bbw", help="Cohomology of an irreducible homogeneous bundle")
    bbw.add_argument("space", help='"C2:F", "A3:P1", "A4:P2,3" or a case side like "AG4:Q"')
    bbw.add_argument("weight", nargs="+", type=int, help="Highest weight (after --)")
    bbw.add_argument("--oracle", action="store_true", help="Cross-check by Weyl summation")
    bbw.add_argument("--json", action="store_true", help="Print JSON")

    history = subparsers.add_parser("history", help="List stored reports")
    history.add_argument("--json", action="store_true", help="Print JSON")
    return parser


def _add_format_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--json", action="store_true", help="Print the report as JSON (timings only with --timings)"
    )
    group.add_argument("--markdown", action="store_true", help="Print the report as markdown")


# verify


def _case_list(args: argparse.Namespace, settings: Settings) -> list[tuple[str, int | None]]:
    if args.all:
        if args.case:
            raise UsageError("verify --all takes no case name")
        cases: list[tuple[str, int | None]] = [(name, None) for name in CASE_FILES]
        for family, low in PARAMETRIC_CASES.items():
            values = [args.n] if args.n is not None else range(low, settings.max_n + 1)
            cases.extend((family, n) for n in values)
        return cases
    if not args.case:
        raise UsageError("verify needs a case name or --all")
    try:
        family, n = parse_case_name(args.case, args.n)
    except ValueError as e:
        raise UsageError(str(e)) from e
    return [(family, n)]


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    cases = _case_list(args, settings)
    repo = None if args.no_history else SqliteReportRepository(settings.db_path)
    service = VerificationService(repo, settings)

    try:
        if len(cases) == 1:
            reports = [service.verify_case(*cases[0], only_lemmas=args.only_lemmas)]
        else:
            reports = service.verify_all(cases, only_lemmas=args.only_lemmas)
    except ValueError as e:
        raise UsageError(str(e)) from e

    for report in reports:
        service.save_report(report)

    if args.json:
        payload = [r.to_dict(include_timings=args.timings) for r in reports]
        print(json.dumps(payload if len(payload) > 1 else payload[0], indent=2, sort_keys=True))
    elif args.markdown:
        print("\n\n".join(service.render_markdown(r, args.timings) for r in reports))
    else:
        for report in reports:
            print(_format_report(report))

    failed = [r.case for r in reports if r.verdict is Verdict.FAIL]
    return EXIT_FAIL if failed else EXIT_PASS


def _format_report(report: Report) -> str:
    lines = [f"{report.case}: {report.verdict.value}"]
    if report.error:
        lines.append(f"  error: {report.error}")
    for group in report.group_summary():
        mark = "ok" if group["ok"] else "FAILED"
        lines.append(f"  lemma group {group['group']}: {group['passed']}/{group['total']} {mark}")
    for result in report.assertions:
        if not result.passed:
            lines.append(f"    {result.label}: computed {result.computed} ({result.certificate})")
    if report.replay is not None:
        replay = report.replay
        passed = sum(1 for c in replay.certificates if c.passed)
        lines.append(f"  replay: {passed}/{len(replay.certificates)} steps certified")
        if replay.error:
            lines.append(f"    stopped: {replay.error}")
        for mismatch in replay.mismatches:
            lines.append(f"    mismatch: {mismatch}")
        lines.append("  final: " + ", ".join(replay.final_scene))
    return "\n".join(lines)


# hom


def cmd_hom(args: argparse.Namespace, settings: Settings) -> int:
    try:
        family, n = parse_case_name(args.case)
        case = load_case(family, n, lemma_window=settings.lemma_window, max_n=settings.max_n)
        source = case.build(args.source)
        target = case.build(args.target)
    except ValueError as e:
        raise UsageError(str(e)) from e

    hom = hom_V(case.total, source, target)
    degrees = [
        {"degree": degree, "dim": dim, "rep": _rep_text(case.rs, hom.graded.in_degree(degree))}
        for degree, dim in sorted(hom.dims().items())
    ]
    if args.json:
        payload = {
            "case": case.name,
            "source": str(source),
            "target": str(target),
            "degrees": degrees,
            "certificate": hom.certificate.label,
            "euler": hom.euler,
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"hom({source}, {target}) on {case.total.name}: {_graded_text(degrees)}, "
              f"{hom.certificate.label}")
    return EXIT_PASS


def _rep_text(rs: RootSystem, rep) -> str:
    return " + ".join((f"{m}*" if m != 1 else "") + rep_name(rs, w) for w, m in rep)


def _graded_text(degrees: list[dict]) -> str:
    if not degrees:
        return "zero"
    return "; ".join(f"{d['rep']} (dim {d['dim']}) in degree {d['degree']}" for d in degrees)


# bbw


def parse_space(text: str, settings: Settings) -> HomogeneousSpace:
    """
    "G:F" is the full flag variety G/B, "G:P1,3" the partial flag variety with
    crossed nodes 1 and 3 (1-based); for a case name "C2:P", "AG4:Q" and
    "Mukai(3):F" refer to the case's own spaces.

    Raises:
        UsageError: on malformed input
    """
    if ":" not in text:
        raise UsageError(f"Space must look like 'C2:F' or 'A3:P1', got {text!r}")
    group, _, part = text.partition(":")
    case: FlopCase | None = None
    try:
        family, n = parse_case_name(group)
        case = load_case(family, n, lemma_window=settings.lemma_window, max_n=settings.max_n)
    except ValueError:
        case = None

    if case is not None and part in ("P", "Q", "F"):
        return case.side_space(part)
    try:
        rs = case.rs if case is not None else RootSystem.parse(group)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if part == "F":
        return HomogeneousSpace(rs, tuple(range(rs.rank)), text)
    if part.startswith("P") and part[1:]:
        try:
            nodes = tuple(sorted(int(i) - 1 for i in part[1:].split(",")))
        except ValueError as e:
            raise UsageError(f"Invalid crossed nodes in {text!r}") from e
        if any(not 0 <= i < rs.rank for i in nodes):
            raise UsageError(f"Crossed nodes out of range for {rs}")
        return HomogeneousSpace(rs, nodes, text)
    raise UsageError(f"Unknown space part {part!r}")


def cmd_bbw(args: argparse.Namespace, settings: Settings) -> int:
    space = parse_space(args.space, settings)
    if len(args.weight) != space.rs.rank:
        raise UsageError(f"{space.rs} needs {space.rs.rank} weight coordinates")
    weight = Weight(tuple(args.weight))
    if not space.is_levi_dominant(weight):
        raise UsageError(f"{weight} is not a highest weight of an irreducible bundle on {space}")

    value = cohomology_irreducible(space, weight)
    degrees = [
        {"degree": degree, "dim": dim, "rep": _rep_text(space.rs, value.in_degree(degree))}
        for degree, dim in sorted(value.dims().items())
    ]
    oracle_ok = None
    if args.oracle:
        if space.is_character(weight):
            bundle = Bundle.line(weight)
            exact = cohomology(space, bundle).euler
            try:
                oracle = VerificationService(None, settings).euler_oracle(space, bundle)
            except (ValueError, CharacterError) as e:
                raise UsageError(str(e)) from e
            oracle_ok = oracle.same_as(exact)
        else:
            raise UsageError("--oracle supports line bundles only")

    if args.json:
        payload = {"space": str(space), "weight": list(weight.coords), "degrees": degrees}
        if oracle_ok is not None:
            payload["oracle_agrees"] = oracle_ok
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"H^*({space}, E{weight}) = {_graded_text(degrees)}")
        if oracle_ok is not None:
            print(f"Weyl-summation oracle: {'agrees' if oracle_ok else 'DISAGREES'}")
    if oracle_ok is False:
        return EXIT_FAIL
    return EXIT_PASS


# history


def cmd_history(args: argparse.Namespace, settings: Settings) -> int:
    service = VerificationService(SqliteReportRepository(settings.db_path), settings)
    rows = service.history()
    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
        return EXIT_PASS
    if not rows:
        print("No stored reports.")
    for row in rows:
        print(f"{row['id']:>5}  {row['created_at']}  {row['case']:<10}  {row['verdict']}")
    return EXIT_PASS


COMMANDS = {
    "verify": cmd_verify,
    "hom": cmd_hom,
    "bbw": cmd_bbw,
    "history": cmd_history,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = Settings.load(args.config)
    except (OSError, ValueError) as e:
        print(f"flopverify: configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE

    LogUtils.setup_logging(level="DEBUG" if args.verbose else settings.log_level)
    start_time = datetime.now()
    logger.info("=" * 60)
    logger.info(f"flopverify {args.command}")
    logger.info("=" * 60)

    errors: list[str] = []
    try:
        code = COMMANDS[args.command](args, settings)
    except UsageError as e:
        print(f"flopverify: {e}", file=sys.stderr)
        code = EXIT_USAGE
        errors.append(str(e))
    except Exception as e:
        errors.append(LogUtils.handle_error(e, f"flopverify {args.command}", logger))
        code = EXIT_FAIL

    LogUtils.log_execution_summary(start_time, datetime.now(), code == EXIT_PASS, errors, logger)
    return code


if __name__ == "__main__":
    sys.exit(main())
