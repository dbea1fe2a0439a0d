import numpy as np
import pytest
from fastapi.testclient import TestClient

from eigensolver.api.app import app
from eigensolver.api.dependencies import get_solver_service
from eigensolver.schemas import PolynomialModel, TupleModel
from eigensolver.services.generators import gen_dense
from eigensolver.services.solver_service import SolverService


@pytest.fixture
def client(settings):
    app.dependency_overrides[get_solver_service] = lambda: SolverService(settings)
    yield TestClient(app)
    app.dependency_overrides.clear()


def _polys(F):
    return [PolynomialModel.from_polynomial(f).model_dump() for f in F]


def test_health(client):
    for path in ("/", "/health"):
        response = client.get(path)
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "healthy"
        assert "multi-unmixed" in body["families"]
        assert "custom" not in body["families"]
        assert set(body["backend"]) == {"numpy", "scipy"}
        assert body["tolerances"]["rank_rtol"] > 0


def test_build_dense_tuple(client):
    F = gen_dense(2, [20, 20], np.random.default_rng(0))
    response = client.post("/tuples", json={"polynomials": _polys(F), "family": "dense"})
    assert response.status_code == 200
    body = response.json()
    assert body["summary"]["D"] == 820
    assert len(body["tuple"]["D"]) == 820


def test_solve_running_example_with_tuple(client, running):
    payload = {
        "polynomials": _polys(running.system),
        "tuple": TupleModel.from_tuple(running.tuple).model_dump(),
        "options": {"seed": 3},
    }
    response = client.post("/solve", json=payload)
    assert response.status_code == 200
    report = response.json()["report"]
    assert report["seed"] == 3
    assert len(report["solutions"]) == 1
    assert report["solutions"][0]["re"] == pytest.approx([-1, 1], abs=1e-10)


def test_solve_with_family_name(client):
    F = gen_dense(2, [2, 3], np.random.default_rng(5))
    response = client.post("/solve", json={"polynomials": _polys(F), "family": "dense", "options": {"seed": 1}})
    assert response.status_code == 200
    body = response.json()
    assert len(body["report"]["solutions"]) == 6
    assert body["tuple"]["family"] == "dense"


def test_unknown_family_is_unprocessable(client, running):
    response = client.post("/solve", json={"polynomials": _polys(running.system), "family": "sparse"})
    assert response.status_code == 422


def test_missing_family_and_tuple_is_unprocessable(client, running):
    response = client.post("/solve", json={"polynomials": _polys(running.system)})
    assert response.status_code == 422


def test_mismatched_dimensions_are_unprocessable(client):
    polys = [
        {"dim": 1, "terms": [{"exp": [1], "re": 1.0}]},
        {"dim": 2, "terms": [{"exp": [1, 0], "re": 1.0}]},
    ]
    assert client.post("/tuples", json={"polynomials": polys, "family": "dense"}).status_code == 422


def test_rank_failure_is_conflict(client):
    # a curve: the cokernel never shrinks to the rank of N_f0
    line = {"dim": 2, "terms": [{"exp": [0, 0], "re": 1.0}, {"exp": [1, 0], "re": 1.0}, {"exp": [0, 1], "re": 1.0}]}
    response = client.post("/tuples", json={"polynomials": [line], "family": "incremental"})
    assert response.status_code == 409
