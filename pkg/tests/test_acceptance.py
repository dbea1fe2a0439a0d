"""End-to-end runs at benchmark sizes; slow."""
import numpy as np
import pytest

from eigensolver.core.lattice import LatticePolytope
from eigensolver.core.poly import Support
from eigensolver.services.admissible import tuple_dense, tuple_multi_dense, tuple_multi_unmixed, tuple_unmixed
from eigensolver.services.bench import DENSE_ROWS, SPARSE_ROWS, run_scenario
from eigensolver.services.generators import gen_dense, gen_multi_dense, gen_multi_unmixed, gen_unmixed
from eigensolver.services.solver import SolveOptions, solve

pytestmark = pytest.mark.slow

UNMIXED_A = [(0, 0), (1, 0), (1, 1), (0, 1), (2, 2)]


@pytest.mark.parametrize("n, degrees, d_size", [
    (2, (20, 20), 820),
    (3, (4, 8, 12), 2300),
])
def test_square_dense(n, degrees, d_size):
    F = gen_dense(n, degrees, np.random.default_rng(n))
    report = solve(F, tuple_dense(n, degrees), SolveOptions(seed=n))
    assert report.d_size == d_size
    assert len(report.solutions) == int(np.prod(degrees))
    assert report.max_bwe <= 1e-8


def test_square_unmixed():
    A = Support.of(UNMIXED_A)
    F = gen_unmixed(A, [5, 12], np.random.default_rng(8))
    report = solve(F, tuple_unmixed(A, [5, 12]), SolveOptions(seed=8))
    assert report.d_size == 685
    assert len(report.solutions) == 240
    assert report.max_bwe <= 1e-8


def test_multi_dense():
    degrees = [[1, 6], [2, 1], [3, 2], [4, 1]]
    F = gen_multi_dense([2, 2], degrees, np.random.default_rng(9))
    report = solve(F, tuple_multi_dense([2, 2], degrees), SolveOptions(seed=9))
    assert report.d_size == 3025
    assert len(report.solutions) == 219
    assert report.max_bwe <= 1e-8


def test_multi_unmixed():
    polytopes = [LatticePolytope.of(UNMIXED_A), LatticePolytope.of([(0, 0), (2, 0), (0, 2)])]
    degrees = [[1, 1]] * 4
    F = gen_multi_unmixed(polytopes, degrees, np.random.default_rng(10))
    report = solve(F, tuple_multi_unmixed(polytopes, degrees), SolveOptions(seed=10))
    assert report.d_size == 2745
    assert len(report.solutions) == 96
    assert report.max_bwe <= 1e-8


def test_dense_small_rows():
    rows = run_scenario("table3_small", SolveOptions(seed=12))
    assert len(rows) == 3
    for row, (n, s, d, delta, gamma, d_size) in zip(rows, DENSE_ROWS):
        assert (row.n, row.s) == (n, s)
        assert row.d_size == d_size
        assert row.gamma == gamma
        assert row.recovered_count == delta
        assert row.solution_count == delta
        assert row.bwe_max <= 1e-8


def test_sparse_small_rows():
    rows = run_scenario("table4_small", SolveOptions(seed=13))
    for row, (d, delta, gamma, d_size) in zip(rows, SPARSE_ROWS):
        assert row.d_size == d_size
        assert row.recovered_count == delta
        assert row.solution_count == delta


def test_infinity_stress_recovers_every_root():
    rows = run_scenario("infinity_stress", SolveOptions(seed=14))
    assert [row.label for row in rows] == [f"e={e}" for e in range(9)]
    for row in rows:
        assert row.recovered_count == row.solution_count == row.delta_expected == 14
        assert row.bwe_max <= 1e-8
