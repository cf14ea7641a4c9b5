import pytest
from fastapi.testclient import TestClient

from courantcalc import presets
from courantcalc.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_healthz(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_preset_listing_and_detail(client):
    listing = client.get("/v1/presets").json()["presets"]
    assert "standard2" in listing and "so3_killing" in listing
    detail = client.get("/v1/presets/standard2").json()
    assert detail["format"] == 1 and detail["r"] == 4
    assert client.get("/v1/presets/nope").status_code == 404


def test_check_axioms_pass_and_fail(client):
    ok = client.post("/v1/check-axioms", json={"structure": "standard2"})
    assert ok.status_code == 200 and ok.json()["passed"]
    bad_structure = presets.structure_to_json(presets.negative_control())
    bad = client.post("/v1/check-axioms", json={"structure": bad_structure})
    assert bad.status_code == 200
    body = bad.json()
    assert not body["passed"]
    c3 = next(c for c in body["checks"] if c["axiom"] == "C3")
    assert c3["witness"] is not None


def test_bracket_endpoint(client):
    response = client.post("/v1/bracket", json={
        "structure": "standard1", "a": ["1", "0"], "b": ["0", "x1"]})
    assert response.json() == {"section": ["0", "1"]}


def test_differential_and_cup(client):
    d = client.post("/v1/d", json={"structure": "standard1", "cochain": "x1"})
    assert d.json()["cochain"] == "xi{2}"
    cup = client.post("/v1/cup", json={
        "structure": "so3_killing", "omega": "xi{1}", "tau": "xi{2}"})
    assert cup.json() == {"cochain": "xi{1,2}", "degree": 2}


def test_evaluate_and_symbol(client):
    value = client.post("/v1/evaluate", json={
        "structure": "so3_killing", "cochain": "xi{1,2,3}",
        "sections": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    assert value.json()["value"] == "-8"
    symbol = client.post("/v1/symbol", json={
        "structure": "standard2", "cochain": "p1"})
    assert symbol.json()["vector_field"] == ["-1", "0"]


def test_curvature_and_bianchi(client):
    connection = {"m": 1, "gamma": [[["x2"]], [["0"]], [["0"]], [["0"]]]}
    response = client.post("/v1/curvature", json={
        "structure": "standard2", "connection": connection})
    assert response.status_code == 200
    bianchi = client.post("/v1/bianchi", json={
        "structure": "standard2", "connection": connection})
    assert bianchi.json() == {"ok": True}


def test_modular_and_unimodular(client):
    modular = client.post("/v1/modular", json={"structure": "double_aff1"})
    assert modular.json() == {"xi": "0", "closed": True}
    unimodular = client.post("/v1/unimodular", json={
        "structure": "standard2", "bound": 2})
    body = unimodular.json()
    assert body["ok"] and body["status"] == "exact"


def test_chern_endpoints(client):
    connection = {"m": 2, "gamma": [
        [["0", "x1"], ["0", "0"]], [["0", "0"], ["0", "0"]],
        [["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]]}
    chern = client.post("/v1/chern", json={
        "structure": "standard2", "connection": connection, "k": 1})
    assert chern.json()["closed"]
    cs = client.post("/v1/chern-simons", json={
        "structure": "standard2", "k": 1,
        "conn0": {"m": 1, "gamma": [[["0"]]] * 4},
        "conn1": {"m": 1, "gamma": [[["1"]], [["0"]], [["0"]], [["0"]]]}})
    body = cs.json()
    assert body["transgression_ok"] and body["degree"] == 1
    missing = client.post("/v1/chern-simons", json={"structure": "standard2", "k": 1})
    assert missing.status_code == 400


def test_secondary_endpoint(client):
    flat = [[[ "0" ] * 6 for _ in range(6)] for _ in range(3)]
    metric = [["1" if i == j else "0" for j in range(6)] for i in range(6)]
    response = client.post("/v1/secondary", json={
        "structure": "standard_twisted3", "linear": flat, "metric": metric, "k": 1})
    assert response.json()["cochain"] == "0"
    bad_metric = [["0" if i == j else "1" for j in range(6)] for i in range(6)]
    bad = client.post("/v1/secondary", json={
        "structure": "standard_twisted3", "linear": flat, "metric": bad_metric, "k": 1})
    assert bad.status_code == 400


def test_cohomology_endpoint(client):
    dims = client.post("/v1/cohomology", json={"structure": "so3_killing", "k": 3})
    body = dims.json()
    assert body["dim"] == 1 and body["representatives"] == ["xi{1,2,3}"]
    positive_dim = client.post("/v1/cohomology", json={"structure": "standard2", "k": 1})
    assert positive_dim.status_code == 400  # directed to certification
    certified = client.post("/v1/cohomology", json={
        "structure": "standard2", "k": 1, "cochain": "xi{3}", "bound": 2})
    body = certified.json()
    assert body["closed"] and body["exact_status"] == "exact"
    undecided = client.post("/v1/cohomology", json={
        "structure": "silent_1_2", "k": 1, "cochain": "xi{1}", "bound": 3})
    body = undecided.json()
    assert body["closed"] and body["exact_status"] == "undecided"


def test_dirac_and_restrict(client):
    frame = {"sections": [["1", "0", "0", "0"], ["0", "1", "0", "0"]]}
    check = client.post("/v1/dirac-check", json={
        "structure": "standard2", "frame": frame})
    assert check.json()["ok"]
    restrict = client.post("/v1/restrict", json={
        "structure": "standard2", "cochain": "x1*x2", "frame": frame})
    assert restrict.json() == {"degree": 0, "components": {"": "x1*x2"}}
    bad = client.post("/v1/dirac-check", json={
        "structure": "so3_killing", "frame": {"sections": [["1", "0", "0"]]}})
    assert bad.status_code == 400


def test_validation_errors_are_422(client):
    response = client.post("/v1/bracket", json={"structure": "standard1"})
    assert response.status_code == 422


def test_unknown_preset_is_400(client):
    response = client.post("/v1/modular", json={"structure": "nope"})
    assert response.status_code == 400
