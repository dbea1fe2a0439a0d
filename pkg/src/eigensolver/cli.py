"""Command-line entry point: ``eigensolver solve | bench | serve``."""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .config import get_settings
from .core.errors import EigensolverError, RankConditionError
from .core.macaulay import build_macaulay, dump_matrix_market
from .schemas import ReportModel, SystemModel, TupleModel, read_model, write_model
from .services.admissible import TupleFamily
from .services.bench import ALIASES, SCENARIOS, run_scenario, write_csv
from .services.solver_service import SolverService, parse_family
from .utils.logger import get_logger, setup_logger

logger = get_logger()

EXIT_OK = 0
EXIT_RANK = 2
EXIT_INPUT = 3

FAMILY_CHOICES = [f.value.replace("_", "-") for f in TupleFamily if f != TupleFamily.CUSTOM]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eigensolver", description="Eigenvalue solver for polynomial systems")
    parser.add_argument("--log-level", default=None, help="Override the configured log level")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Solve a system given as JSON")
    solve.add_argument("--input", required=True, type=Path, help="System JSON")
    solve.add_argument("--family", choices=FAMILY_CHOICES, help="Tuple family to construct (default: the system file's family)")
    solve.add_argument("--tuple", type=Path, help="Reuse a serialized admissible tuple")
    solve.add_argument("--save-tuple", type=Path, help="Write the tuple used to this file")
    solve.add_argument("--rtol", type=float)
    solve.add_argument("--cluster-tol", type=float)
    solve.add_argument("--bwe-threshold", type=float)
    solve.add_argument("--seed", type=int)
    solve.add_argument("--check-eigenvector", action="store_true", default=None)
    solve.add_argument("--dump-macaulay", type=Path, help="Write the Macaulay matrix in MatrixMarket format")
    solve.add_argument("--output", type=Path, help="Report JSON (stdout when omitted)")

    bench = sub.add_parser("bench", help="Run a benchmark scenario and print CSV")
    bench.add_argument("scenario", nargs="?", help="Scenario name; lists the registry when omitted")
    bench.add_argument("--full", action="store_true", help="Include rows with #D above the desk-scale cap")
    bench.add_argument("--seed", type=int)
    bench.add_argument("--output", type=Path, help="CSV file (stdout when omitted)")

    serve = sub.add_parser("serve", help="Run the HTTP API")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    return parser


def cmd_solve(args: argparse.Namespace) -> int:
    service = SolverService(get_settings())
    system_model = read_model(args.input, SystemModel)
    F = system_model.to_system()

    tup = read_model(args.tuple, TupleModel).to_tuple() if args.tuple else None
    family_name = args.family or system_model.family
    if tup is None and family_name is None:
        logger.error("❌ solve needs --family or --tuple")
        print(f"usage: eigensolver solve --input FILE --family {{{','.join(FAMILY_CHOICES)}}}", file=sys.stderr)
        return EXIT_INPUT
    family = parse_family(family_name) if family_name else None

    report, tup = service.solve(
        F,
        family=family,
        tup=tup,
        params=system_model.params,
        rtol=args.rtol,
        cluster_tol=args.cluster_tol,
        bwe_threshold=args.bwe_threshold,
        seed=args.seed,
        check_eigenvector=args.check_eigenvector,
    )
    if args.save_tuple:
        write_model(args.save_tuple, TupleModel.from_tuple(tup))
        logger.info(f"💾 Saved tuple to {args.save_tuple}")
    if args.dump_macaulay:
        dump_matrix_market(build_macaulay(F, tup.shifts, tup.D), args.dump_macaulay)

    model = ReportModel.from_report(report)
    if args.output:
        write_model(args.output, model)
        logger.success(f"✅ Report written to {args.output}")
    else:
        print(model.model_dump_json(indent=2))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    if not args.scenario:
        for name, fn in SCENARIOS.items():
            print(f"{name}\t{(fn.__doc__ or '').strip()}")
        for alias, name in ALIASES.items():
            print(f"{alias}\talias of {name}")
        return EXIT_OK
    settings = get_settings()
    service = SolverService(settings)
    options = service.options(seed=args.seed)
    rows = run_scenario(args.scenario, options, full=args.full or settings.bench_full)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_csv(rows, fh)
        logger.success(f"✅ {len(rows)} rows written to {args.output}")
    else:
        write_csv(rows, sys.stdout)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    settings = get_settings()
    uvicorn.run(
        "eigensolver.api.app:app",
        host=args.host or settings.api_host,
        port=args.port or settings.api_port,
    )
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "serve": cmd_serve}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT

    setup_logger(args.log_level or get_settings().log_level)
    try:
        return COMMANDS[args.command](args)
    except RankConditionError as e:
        logger.error(f"❌ {e}")
        return EXIT_RANK
    except (ValidationError, ValueError, KeyError, OSError) as e:
        logger.error(f"❌ Invalid input: {e}")
        return EXIT_INPUT
    except EigensolverError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
