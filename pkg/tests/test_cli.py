import csv
import json

import numpy as np
import pytest

from eigensolver.cli import EXIT_INPUT, EXIT_OK, EXIT_RANK, main
from eigensolver.core.errors import DegeneratePencilError
from eigensolver.core.lattice import dilate_lattice_points, simplex
from eigensolver.core.poly import Support
from eigensolver.schemas import SystemModel, TupleModel, write_model
from eigensolver.services.admissible import AdmissibleTuple
from eigensolver.services.generators import gen_dense
from eigensolver.services.solver_service import SolverService


@pytest.fixture
def running_files(running, tmp_path):
    system = write_model(tmp_path / "system.json", SystemModel.from_system(running.system))
    tup = write_model(tmp_path / "tuple.json", TupleModel.from_tuple(running.tuple))
    return system, tup


def _solutions(path):
    data = json.loads(path.read_text())
    return [complex(re, im) for s in data["solutions"] for re, im in zip(s["re"], s["im"])]


def test_solve_with_saved_tuple_is_deterministic(running_files, tmp_path):
    system, tup = running_files
    outputs = []
    for k in range(2):
        out = tmp_path / f"report{k}.json"
        code = main(["solve", "--input", str(system), "--tuple", str(tup), "--seed", "5", "--output", str(out)])
        assert code == EXIT_OK
        outputs.append(_solutions(out))
    assert outputs[0] == outputs[1]
    assert np.allclose(outputs[0], [-1, 1], atol=1e-10)


def test_solve_prints_report_to_stdout(running_files, capsys):
    system, tup = running_files
    assert main(["solve", "--input", str(system), "--tuple", str(tup), "--seed", "5"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["gamma"] == 2
    assert report["seed"] == 5


def test_solve_with_family_saves_tuple_and_matrix(tmp_path):
    F = gen_dense(2, [2, 2], np.random.default_rng(1))
    system = write_model(tmp_path / "dense.json", SystemModel.from_system(F))
    saved = tmp_path / "dense_tuple.json"
    mtx = tmp_path / "macaulay.mtx"
    out = tmp_path / "report.json"
    code = main([
        "solve", "--input", str(system), "--family", "dense", "--seed", "2",
        "--save-tuple", str(saved), "--dump-macaulay", str(mtx), "--output", str(out),
    ])
    assert code == EXIT_OK
    assert TupleModel.model_validate_json(saved.read_text()).family == "dense"
    assert mtx.exists()
    assert len(_solutions(out)) == 4 * 2


def test_solve_needs_family_or_tuple(running_files, capsys):
    system, _ = running_files
    assert main(["solve", "--input", str(system)]) == EXIT_INPUT
    assert "usage" in capsys.readouterr().err


def test_malformed_input_exits_with_input_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"polynomials": [{"dim": 2, "terms": [{"exp": [1], "re": 1.0}]}]}))
    assert main(["solve", "--input", str(bad), "--family", "dense"]) == EXIT_INPUT
    assert main(["solve", "--input", str(tmp_path / "missing.json"), "--family", "dense"]) == EXIT_INPUT


def test_unknown_family_is_an_input_error(running_files):
    system, _ = running_files
    assert main(["solve", "--input", str(system), "--family", "sparse"]) == EXIT_INPUT


def test_rank_failure_exit_code(tmp_path):
    F = gen_dense(2, [2, 2], np.random.default_rng(4))
    origin = Support.origin(2)
    tup = AdmissibleTuple(dilate_lattice_points(simplex(2), 1), (origin, origin, origin), dilate_lattice_points(simplex(2), 2))
    system = write_model(tmp_path / "system.json", SystemModel.from_system(F))
    tuple_path = write_model(tmp_path / "tuple.json", TupleModel.from_tuple(tup))
    assert main(["solve", "--input", str(system), "--tuple", str(tuple_path), "--seed", "1"]) == EXIT_RANK


def test_bench_lists_scenarios(capsys):
    assert main(["bench"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("table3_small", "table4_small", "square_dense", "infinity_stress", "molecular"):
        assert name in out
    assert "dense_small\talias of table3_small" in out


def test_bench_unknown_scenario():
    assert main(["bench", "nope"]) == EXIT_INPUT


def test_help_exits_cleanly():
    assert main(["--help"]) == EXIT_OK


def test_bench_small_dense_rows_to_csv(tmp_path):
    out = tmp_path / "rows.csv"
    assert main(["bench", "table3_small", "--seed", "1", "--output", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 3
    assert all(line.startswith("table3_small,") for line in lines[1:])


def test_bench_alias_runs_the_same_scenario(tmp_path):
    out = tmp_path / "rows.csv"
    assert main(["bench", "dense_small", "--seed", "1", "--output", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert [row["scenario"] for row in rows] == ["table3_small"] * 3
    assert rows[0]["label"] == "n=3,s=6,d=2"
    assert [int(row["solution_count"]) for row in rows] == [4, 29, 78]


def test_family_defaults_to_system_file(running, tmp_path, capsys):
    system = write_model(tmp_path / "system.json", SystemModel.from_system(running.system, family="mixed"))
    assert main(["solve", "--input", str(system), "--seed", "3"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert len(report["solutions"]) == 1
    solution = report["solutions"][0]
    assert np.allclose(np.array(solution["re"]) + 1j * np.array(solution["im"]), [-1, 1], atol=1e-8)


def test_command_line_family_overrides_system_file(running, tmp_path):
    system = write_model(tmp_path / "system.json", SystemModel.from_system(running.system, family="sparse"))
    assert main(["solve", "--input", str(system), "--family", "mixed", "--seed", "3"]) == EXIT_OK


def test_solver_errors_map_to_input_code(running_files, monkeypatch):
    system, tup = running_files

    def degenerate(self, *args, **kwargs):
        raise DegeneratePencilError("both pencil matrices vanish")

    monkeypatch.setattr(SolverService, "solve", degenerate)
    assert main(["solve", "--input", str(system), "--tuple", str(tup)]) == EXIT_INPUT
