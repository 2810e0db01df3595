"""
Command line driver.

    python -m perfect_delaunay.main verify [--id ID] [--checks a,b] [--jobs N] [--report PATH]
    python -m perfect_delaunay.main show ID
    python -m perfect_delaunay.main series N
    python -m perfect_delaunay.main expand "[1^2,0^3;-1] × 10"
    python -m perfect_delaunay.main cells [--max-n N]

Exit codes: 0 all PASS/SKIPPED, 1 any FAIL, 2 usage or IO error, 3 any BUDGET without FAIL.
"""

import argparse
import logging
import sys
from pathlib import Path

from perfect_delaunay import __version__
from perfect_delaunay.checks import CHECKS, VerifyOptions
from perfect_delaunay.config import settings
from perfect_delaunay.core.enumeration import verify_delaunay
from perfect_delaunay.core.geometry import (
    D_CELL_VARIANTS,
    layer_sizes,
    lamina_witness_search,
    upsilon_vertices,
    verify_an_dn_cell,
)
from perfect_delaunay.core.perfection import perfection_check
from perfect_delaunay.exceptions import CatalogError, DelaunayError, UnknownCheckError
from perfect_delaunay.services.catalog_service import expand_orbit, expand_record, load_catalog, parse_orbit
from perfect_delaunay.services.verification_service import run_verification

log = logging.getLogger(__name__)

EXIT_USAGE = 2


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _split(values: list[str] | None) -> list[str] | None:
    if not values:
        return None
    return [part.strip() for value in values for part in value.split(",") if part.strip()]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    budget = args.budget if args.budget is not None else settings.BUDGET_SECONDS
    options = VerifyOptions(
        budget_seconds=budget,
        section_budget_seconds=settings.SECTION_BUDGET_SECONDS * budget / settings.BUDGET_SECONDS,
        candidate_limit=settings.CANDIDATE_LIMIT,
        export_generators=args.export_generators,
    )
    progress = sys.stderr.isatty() and logging.getLogger().getEffectiveLevel() > logging.INFO
    report = run_verification(
        catalog_path=args.catalog,
        record_ids=_split(args.id),
        check_names=_split(args.checks),
        jobs=args.jobs,
        options=options,
        progress=progress,
    )
    if args.report:
        try:
            Path(args.report).write_text(report.to_jsonl(args.timings), encoding="utf-8")
        except OSError as e:
            print(f"error: cannot write report {args.report}: {e}", file=sys.stderr)
            return EXIT_USAGE
    color = not settings.NO_COLOR and sys.stdout.isatty()
    sys.stdout.write(report.to_text(color=color, include_timings=args.timings))
    return report.exit_code()


def cmd_show(args: argparse.Namespace) -> int:
    record = load_catalog(args.catalog).get(args.record_id)
    print(f"record {record.id} (dim {record.dim})")
    if record.is_placeholder:
        for note in record.notes:
            print(f"  {note}")
        return 0
    print("gram:")
    for row in record.gram:
        print("  " + " ".join(f"{x:>3}" for x in row))
    print(f"center: {record.center_scale} * {_vec(record.center_coordinates)}")
    print(f"radius2: {record.radius2}")
    vertices = expand_record(record)
    print(f"vertices ({len(vertices)}):")
    for v in vertices:
        print(f"  {_vec(v)}")
    print("expected:")
    for name, value in record.expected.model_dump().items():
        if value is not None:
            shown = ", ".join(str(x) for x in value) if isinstance(value, tuple) else value
            print(f"  {name}: {shown}")

    functional = record.lamina_functional
    source = "stored"
    if functional is None:
        witness = lamina_witness_search(vertices, window=1) or lamina_witness_search(vertices, window=2)
        functional = witness.functional if witness else None
        source = "searched"
    if functional is not None:
        layers = " ".join(f"{value}:{count}" for value, count in layer_sizes(vertices, functional))
        print(f"laminae along {_vec(functional)} ({source}): {layers}")
    if record.notes:
        print("notes:")
        for note in record.notes:
            print(f"  {note}")
    return 0


def cmd_series(args: argparse.Namespace) -> int:
    n = args.n
    vertices = upsilon_vertices(n)
    verdict = perfection_check(vertices)
    print(f"Upsilon^{n}: {len(vertices)} vertices")
    if not verdict.is_perfect:
        print(f"perfect: no (nullity {verdict.nullspace_dimension})")
        return 1
    function = verdict.generator
    print("gram:")
    for row in function.form.gram.entries:
        print("  " + " ".join(f"{str(x):>3}" for x in row))
    print(f"center: {_vec(function.center)}")
    print(f"radius2: {function.radius2}")
    print("perfect: yes (nullity 1)")
    delaunay = verify_delaunay(function, vertices)
    print(f"delaunay: {'yes' if delaunay.passed else 'no'} ({delaunay.describe()})")
    ok = delaunay.passed
    if n == 7:
        record = load_catalog(args.catalog).get("tope35")
        same = (
            record.affine_function() == function
            and expand_record(record) == tuple(sorted(vertices))
        )
        print(f"matches tope35: {'yes' if same else 'no'}")
        ok = ok and same
    return 0 if ok else 1


def cmd_expand(args: argparse.Namespace) -> int:
    orbit = parse_orbit(args.notation)
    for v in sorted(expand_orbit(orbit)):
        print(_vec(v))
    return 0


def cmd_cells(args: argparse.Namespace) -> int:
    verdicts = []
    for n in range(2, args.max_n + 1):
        for q in range(1, n + 1):
            verdicts.append(verify_an_dn_cell("A_slab", n, q))
    for n in range(3, args.max_n + 1):
        for variant in D_CELL_VARIANTS:
            verdicts.append(verify_an_dn_cell("D_cell", n, variant))
    for v in verdicts:
        status = "PASS" if v.passed else "FAIL"
        print(f"{v.name:<28} {v.vertex_count:>4} vertices  {status}  {v.detail}")
    return 0 if all(v.passed for v in verdicts) else 1


# ---------------------------------------------------------------------------
# CLI entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perfect_delaunay",
        description="Exact verification of perfect Delaunay polytopes",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        default=settings.LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help=f"Logging verbosity (default: {settings.LOG_LEVEL})",
    )
    common.add_argument("--catalog", default=None, help="Catalog file (default: the packaged catalog)")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="Run checks over catalog records")
    verify.add_argument("--id", action="append", help="Record id; repeat or separate with commas")
    verify.add_argument("--checks", action="append", help=f"Checks to run: {', '.join(CHECKS)}")
    verify.add_argument("--jobs", type=int, default=settings.JOBS, help="Worker processes")
    verify.add_argument("--report", help="Write the JSONL report to this path")
    verify.add_argument("--budget", type=float, default=None,
                        help=f"Nominal seconds per budgeted search (default: {settings.BUDGET_SECONDS:g})")
    verify.add_argument("--export-generators", action="store_true",
                        help="Include group generators in the report payload")
    verify.add_argument("--timings", action="store_true", help="Include wall times in the reports")
    verify.set_defaults(handler=cmd_verify)

    show = sub.add_parser("show", parents=[common], help="Print a record with its expanded vertices")
    show.add_argument("record_id")
    show.set_defaults(handler=cmd_show)

    series = sub.add_parser("series", parents=[common], help="Generate and check Upsilon^n")
    series.add_argument("n", type=int)
    series.set_defaults(handler=cmd_series)

    expand = sub.add_parser("expand", parents=[common], help="Expand an orbit notation")
    expand.add_argument("notation")
    expand.set_defaults(handler=cmd_expand)

    cells = sub.add_parser("cells", parents=[common], help="Check the A_n slabs and D_n cells")
    cells.add_argument("--max-n", type=int, default=5)
    cells.set_defaults(handler=cmd_cells)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )

    if args.command == "series" and not 7 <= args.n <= settings.SERIES_MAX_N:
        parser.error(f"series needs 7 <= n <= {settings.SERIES_MAX_N}, got {args.n}")
    if args.command == "cells" and not 2 <= args.max_n <= settings.CELL_MAX_N:
        parser.error(f"cells needs 2 <= --max-n <= {settings.CELL_MAX_N}, got {args.max_n}")
    if args.command == "verify" and args.jobs < 1:
        parser.error("--jobs must be at least 1")

    try:
        return args.handler(args)
    except (CatalogError, UnknownCheckError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DelaunayError as e:
        log.error("%s", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
