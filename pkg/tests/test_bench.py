import io

import pytest

from eigensolver.services.bench import ALIASES, CSV_COLUMNS, SCENARIOS, BenchRow, run_scenario, write_csv
from eigensolver.services.solver import SolveOptions

HEADER = (
    "scenario,label,n,s,d,delta_expected,gamma,d_size,bwe_max,bwe_geomean,"
    "t_offline_s,t_online_s,recovered_count,solution_count,max_norm"
)


def _row(**overrides):
    values = dict(
        scenario="table3_small", label="n=3,s=6,d=2", n=3, s=6, d="2", delta_expected=4, gamma=4,
        d_size=10, bwe_max=1e-14, bwe_geomean=5e-15, t_offline_s=0.01, t_online_s=0.02,
        recovered_count=4, solution_count=4, max_norm=2.5,
    )
    values.update(overrides)
    return BenchRow(**values)


def test_csv_header_is_stable():
    assert ",".join(CSV_COLUMNS) == HEADER
    assert list(BenchRow.model_fields) == CSV_COLUMNS


def test_write_csv_golden():
    stream = io.StringIO()
    write_csv([_row(), _row(label="n=3,s=6,d=4", d="4", delta_expected=29, gamma=29, d_size=84,
                            recovered_count=29, solution_count=29)], stream)
    assert stream.getvalue().splitlines() == [
        HEADER,
        'table3_small,"n=3,s=6,d=2",3,6,2,4,4,10,1e-14,5e-15,0.01,0.02,4,4,2.5',
        'table3_small,"n=3,s=6,d=4",3,6,4,29,29,84,1e-14,5e-15,0.01,0.02,29,29,2.5',
    ]


def test_aliases_point_at_registered_scenarios():
    assert set(ALIASES.values()) <= set(SCENARIOS)
    assert {"table3_small", "table4_small", "square_dense", "infinity_stress"} <= set(SCENARIOS)


def test_unknown_scenario_raises():
    with pytest.raises(KeyError, match="unknown scenario"):
        run_scenario("nope", SolveOptions(seed=0))
