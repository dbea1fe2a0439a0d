"""Benchmark scenarios reproducing the overdetermined and square experiments at desk scale."""
import csv
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, TextIO

import numpy as np
from pydantic import BaseModel, Field

from ..core.lattice import LatticePolytope, dilate_lattice_points, simplex
from ..core.linalg import random_complex
from ..core.poly import PolySystem, Support
from ..utils.logger import get_logger
from .admissible import incremental_unmixed, tuple_dense, tuple_mixed
from .examples import molecular_example
from .generators import gen_dense, gen_vandermonde_system
from .solver import Precomputed, SolveOptions, SolveReport, solve

logger = get_logger()

DESK_SCALE_MAX_D = 3876

# (n, s, d, δ, γ, #D)
DENSE_ROWS = [
    (3, 6, 2, 4, 4, 10),
    (3, 6, 4, 29, 29, 84),
    (3, 6, 6, 78, 100, 220),
    (3, 6, 8, 159, 224, 560),
    (3, 6, 10, 280, 465, 969),
    (3, 6, 12, 449, 820, 1540),
    (3, 6, 14, 674, 1280, 2600),
    (3, 6, 16, 963, 1938, 3654),
    (3, 6, 18, 1324, 2776, 4960),
    (3, 6, 20, 1765, 3780, 7140),
    (6, 18, 2, 10, 10, 84),
    (6, 18, 3, 66, 66, 462),
    (6, 18, 4, 192, 204, 1716),
    (6, 18, 5, 444, 1225, 5005),
    (6, 18, 6, 906, 4060, 12376),
    (2, 4, 3, 6, 6, 10),
    (3, 6, 3, 14, 14, 35),
    (4, 8, 3, 27, 27, 126),
    (5, 10, 3, 46, 46, 252),
    (6, 12, 3, 72, 126, 462),
    (7, 14, 3, 106, 127, 1716),
    (8, 16, 3, 149, 483, 3003),
    (15, 616, 3, 200, 200, 3876),
    (15, 516, 3, 300, 300, 3876),
    (15, 416, 3, 400, 400, 3876),
    (15, 316, 3, 500, 500, 3876),
    (15, 216, 3, 600, 600, 3876),
]

SPARSE_GENERATORS = [(2, 1, 0), (2, 1, 2), (0, 0, 1), (1, 0, 0), (1, 1, 2), (0, 0, 1), (0, 1, 2), (0, 0, 0)]

# (d, δ, γ, #D) with s = 6
SPARSE_ROWS = [
    (1, 3, 3, 33),
    (2, 27, 27, 165),
    (3, 76, 93, 291),
    (4, 159, 216, 708),
    (5, 285, 415, 1405),
    (6, 463, 891, 1881),
    (7, 702, 1387, 3133),
    (8, 1011, 2031, 4845),
]

CSV_COLUMNS = [
    "scenario", "label", "n", "s", "d", "delta_expected", "gamma", "d_size",
    "bwe_max", "bwe_geomean", "t_offline_s", "t_online_s", "recovered_count", "solution_count", "max_norm",
]


class BenchRow(BaseModel):
    """One line of bench output."""

    scenario: str
    label: str
    n: int
    s: int
    d: str = Field(..., description="Degree, degree list or degree matrix")
    delta_expected: int
    gamma: int
    d_size: int
    bwe_max: float
    bwe_geomean: float
    t_offline_s: float
    t_online_s: float
    recovered_count: int
    solution_count: int = Field(..., description="Candidates that survived the backward-error filter")
    max_norm: float

    def csv_row(self) -> Dict[str, object]:
        return {column: getattr(self, column) for column in CSV_COLUMNS}


@dataclass
class BenchContext:
    options: SolveOptions
    full: bool = False

    def rng(self, *key: int) -> np.random.Generator:
        return np.random.default_rng([self.options.seed or 0, *key])


def _recovered(report: SolveReport, roots: np.ndarray, tol: float = 1e-6) -> int:
    count = 0
    for z in roots:
        scale = max(np.linalg.norm(z), 1.0)
        if any(np.linalg.norm(sol - z) <= tol * scale for sol in report.solutions):
            count += 1
    return count


def _row(
    scenario: str,
    label: str,
    F: PolySystem,
    d: str,
    delta: int,
    report: SolveReport,
    t_offline: float,
    t_online: float,
    recovered: int,
) -> BenchRow:
    bwe = np.asarray(report.bwe, dtype=float)
    geomean = float(np.exp(np.mean(np.log(np.maximum(bwe, 1e-300))))) if len(bwe) else 0.0
    norms = [float(np.linalg.norm(z)) for z in report.solutions]
    row = BenchRow(
        scenario=scenario,
        label=label,
        n=F.dim,
        s=len(F),
        d=d,
        delta_expected=delta,
        gamma=report.gamma,
        d_size=report.d_size,
        bwe_max=report.max_bwe,
        bwe_geomean=geomean,
        t_offline_s=t_offline,
        t_online_s=t_online,
        recovered_count=recovered,
        solution_count=len(report.solutions),
        max_norm=max(norms) if norms else 0.0,
    )
    logger.info(
        f"📊 {scenario}/{label}: γ={row.gamma}, #D={row.d_size}, recovered {row.recovered_count}/{delta} of {row.solution_count} solutions, "
        f"BWE max {row.bwe_max:.2e}, offline {t_offline:.2f}s, online {t_online:.2f}s"
    )
    return row


def run_planted_unmixed(
    ctx: BenchContext,
    scenario: str,
    label: str,
    A: Support,
    support: Support,
    degree: int,
    delta: int,
    rng: np.random.Generator,
    points: Optional[np.ndarray] = None,
) -> BenchRow:
    """Planted-root system on ``support`` solved through the incremental tuple over Conv(A)."""
    planted = gen_vandermonde_system(support, delta, rng, points=points)
    F = planted.system
    start = time.perf_counter()
    result = incremental_unmixed(
        F, A, [degree] * len(F), rng, ctx.options.rtol, compression_factor=ctx.options.compression_factor
    )
    t_offline = time.perf_counter() - start
    start = time.perf_counter()
    report = solve(F, result.tuple, ctx.options, Precomputed(result.cokernel, result.f0))
    t_online = time.perf_counter() - start
    return _row(scenario, label, F, str(degree), delta, report, t_offline, t_online, _recovered(report, planted.roots))


def _dense_rows(ctx: BenchContext, rows: Sequence[tuple], scenario: str) -> Iterator[BenchRow]:
    for k, (n, s, d, delta, _gamma, d_size) in enumerate(rows):
        if d_size > DESK_SCALE_MAX_D and not ctx.full:
            logger.info(f"⏭️  Skipping n={n}, d={d} (#D={d_size}); use --full")
            continue
        P = simplex(n)
        yield run_planted_unmixed(
            ctx, scenario, f"n={n},s={s},d={d}", P.generators, dilate_lattice_points(P, d), d, delta, ctx.rng(3, k)
        )


def _sparse_rows(ctx: BenchContext, rows: Sequence[tuple], scenario: str) -> Iterator[BenchRow]:
    P = LatticePolytope.of(SPARSE_GENERATORS)
    for k, (d, delta, _gamma, d_size) in enumerate(rows):
        if d_size > DESK_SCALE_MAX_D and not ctx.full:
            logger.info(f"⏭️  Skipping d={d} (#D={d_size}); use --full")
            continue
        yield run_planted_unmixed(
            ctx, scenario, f"d={d}", P.generators, dilate_lattice_points(P, d), d, delta, ctx.rng(4, k)
        )


def dense_small(ctx: BenchContext) -> Iterator[BenchRow]:
    """Dense overdetermined rows n=3, s=6, d in {2, 4, 6}."""
    yield from _dense_rows(ctx, DENSE_ROWS[:3], "table3_small")


def dense_full(ctx: BenchContext) -> Iterator[BenchRow]:
    """All dense overdetermined rows; large #D only with --full."""
    yield from _dense_rows(ctx, DENSE_ROWS, "table3")


def sparse_small(ctx: BenchContext) -> Iterator[BenchRow]:
    """Unmixed overdetermined rows d in {1, 2, 3}."""
    yield from _sparse_rows(ctx, SPARSE_ROWS[:3], "table4_small")


def square_dense(ctx: BenchContext) -> Iterator[BenchRow]:
    """Square dense systems n=2, d=(20,20) and n=3, d=(4,8,12)."""
    for k, (n, degrees) in enumerate([(2, (20, 20)), (3, (4, 8, 12))]):
        F = gen_dense(n, degrees, ctx.rng(5, k))
        start = time.perf_counter()
        tup = tuple_dense(n, degrees)
        report = solve(F, tup, ctx.options)
        online = sum(v for key, v in report.timings.items() if key != "cokernel")
        offline = time.perf_counter() - start - online
        delta = int(np.prod(degrees))
        yield _row("square_dense", f"n={n}", F, ",".join(map(str, degrees)), delta, report, offline, online,
                   len(report.solutions))


def infinity_stress(ctx: BenchContext, exponents: Sequence[int] = range(9)) -> Iterator[BenchRow]:
    """One planted root pushed towards infinity by a factor 10^e."""
    n, d, delta = 3, 3, 14
    P = simplex(n)
    support = dilate_lattice_points(P, d)
    base = np.random.default_rng([ctx.options.seed or 0, 6])
    points = random_complex((delta, n), base)
    for e in exponents:
        scaled = points.copy()
        scaled[0] *= 10.0 ** e
        yield run_planted_unmixed(ctx, "infinity_stress", f"e={e}", P.generators, support, d, delta, ctx.rng(6, e),
                                  points=scaled)


def molecular(ctx: BenchContext) -> Iterator[BenchRow]:
    """Mixed molecular-biology system with 16 real roots."""
    case = molecular_example()
    start = time.perf_counter()
    tup = tuple_mixed(case.system.supports)
    report = solve(case.system, tup, ctx.options)
    online = sum(v for key, v in report.timings.items() if key != "cokernel")
    offline = time.perf_counter() - start - online
    yield _row("molecular", "mixed", case.system, "2,2,2", case.extras["root_count"], report, offline, online,
               len(report.solutions))


SCENARIOS: Dict[str, Callable[[BenchContext], Iterator[BenchRow]]] = {
    "table3_small": dense_small,
    "table4_small": sparse_small,
    "square_dense": square_dense,
    "infinity_stress": infinity_stress,
    "table3": dense_full,
    "molecular": molecular,
}

ALIASES = {
    "dense_small": "table3_small",
    "sparse_small": "table4_small",
    "dense_full": "table3",
}


def run_scenario(name: str, options: SolveOptions, full: bool = False) -> List[BenchRow]:
    """
    Run a registered scenario sequentially.

    Raises:
        KeyError: unknown scenario
    """
    name = ALIASES.get(name, name)
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; available: {', '.join(SCENARIOS)}")
    logger.info(f"🚀 Running bench scenario {name}")
    return list(SCENARIOS[name](BenchContext(options, full)))


def write_csv(rows: Sequence[BenchRow], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row.csv_row())
