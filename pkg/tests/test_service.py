import pytest
from fastapi.testclient import TestClient

from kgbb.backends import export_rdf
from kgbb.engine import (
    CreateRequest,
    Provenance,
    Store,
    create_statement_unit,
    store_equal,
)
from kgbb.model import Resource
from kgbb.service import create_app

USER = {"X-KGBB-User": "urn:test:user:api"}


@pytest.fixture
def client(travel_spec):
    app = create_app(travel_spec)
    return TestClient(app)


def _travel_payload():
    return {
        "kgbb_instance": "travel-1",
        "subject": {
            "upri": "r:anna", "kind": "named-individual",
            "class_affiliation": "PERSON", "label": "Anna",
        },
        "inputs": {
            "pos-destination": {"new_resource": {
                "upri": "r:rome", "kind": "named-individual",
                "class_affiliation": "CITY", "label": "Rome"}},
            "pos-departure": {"new_resource": {
                "upri": "r:berlin", "kind": "named-individual",
                "class_affiliation": "CITY", "label": "Berlin"}},
            "pos-transportation": {"new_resource": {
                "upri": "r:train", "kind": "named-individual",
                "class_affiliation": "TRANSPORTATION", "label": "train"}},
            "pos-datetime": {"literal": "5th of August 2019", "datatype": "DATETIME"},
        },
    }


def test_get_spec(client):
    body = client.get("/spec").json()
    assert body["application"] == "urn:demo:travel-app"
    assert any(c["id"] == "travel-statement" for c in body["classes"])
    assert body["starting_points"][0]["id"] == "travel-1"


def test_form_descriptor_for_travel(client):
    body = client.get("/kgbbs/travel-1/form").json()
    assert body["subject"]["label"] == "PERSON"
    assert [f["label"] for f in body["fields"]] == [
        "DESTINATION_LOCATION", "DEPARTURE_LOCATION", "TRANSPORTATION", "DATETIME",
    ]
    required = [f["label"] for f in body["fields"] if f["required"]]
    assert required == ["DESTINATION_LOCATION"]
    tooltips = {f["label"]: f["tooltip"] for f in body["fields"]}
    assert tooltips["DESTINATION_LOCATION"] == "Where the trip ends."


def test_form_descriptor_nested_cascades(weight_spec):
    client = TestClient(create_app(weight_spec))
    body = client.get("/kgbbs/measurement-1/form").json()
    assert body["kind"] == "compound"
    (cascade,) = body["cascades"]
    assert cascade["target"] == "quality-1"
    assert cascade["required"] is True
    assert cascade["min_count"] == 1
    assert cascade["form"]["fields"][0]["label"] == "QUALITY"


def test_unknown_form_is_404(client):
    assert client.get("/kgbbs/ghost/form").status_code == 404


def test_mutations_require_identity(client):
    assert client.post("/units", json=_travel_payload()).status_code == 401


def test_create_read_label_roundtrip(client):
    created = client.post("/units", json=_travel_payload(), headers=USER)
    assert created.status_code == 201, created.text
    upri = created.json()["upri"]
    label = client.get(f"/units/{upri}", params={"view": "label"}).json()
    assert label["label"] == "Anna travels by train from Berlin to Rome on the 5th of August 2019"
    body = client.get(f"/units/{upri}").json()
    assert body["record"]["category"] == "assertional"
    assert body["record"]["meta"]["creator"] == "urn:test:user:api"


def test_constraint_violations_are_422(client):
    payload = _travel_payload()
    payload["inputs"]["pos-destination"] = {"new_resource": {
        "upri": "r:bob", "kind": "named-individual",
        "class_affiliation": "PERSON", "label": "Bob"}}
    response = client.post("/units", json=payload, headers=USER)
    assert response.status_code == 422
    assert response.json()["error"] == "ConstraintViolation"


def test_versioned_read_over_http(client):
    upri = client.post("/units", json=_travel_payload(), headers=USER).json()["upri"]
    v1 = client.post(f"/units/{upri}/versions", headers=USER).json()["version"]
    patched = client.patch(
        f"/units/{upri}/positions/pos-datetime",
        json={"input": {"literal": "6th of August 2019", "datatype": "DATETIME"}},
        headers=USER,
    )
    assert patched.status_code == 200
    now = client.get(f"/units/{upri}", params={"view": "label"}).json()["label"]
    assert "6th of August" in now
    then = client.get(f"/units/{upri}", params={"view": "label", "version": v1}).json()["label"]
    assert then == "Anna travels by train from Berlin to Rome on the 5th of August 2019"


def test_history_endpoint(client):
    upri = client.post("/units", json=_travel_payload(), headers=USER).json()["upri"]
    client.patch(
        f"/units/{upri}/positions/pos-datetime",
        json={"input": {"literal": "7th of August 2019"}},
        headers=USER,
    )
    history = client.get(f"/units/{upri}/history").json()["history"]
    assert len(history["pos-datetime"]) == 2
    assert [h["current"] for h in history["pos-datetime"]] == [False, True]


def test_delete_then_default_read_is_404(client):
    upri = client.post("/units", json=_travel_payload(), headers=USER).json()["upri"]
    assert client.delete(f"/units/{upri}", headers=USER).status_code == 204
    assert client.get(f"/units/{upri}").status_code == 404
    kept = client.get(f"/units/{upri}", params={"include_deleted": "true"}).json()
    assert kept["record"]["meta"]["deleted_by"] == "urn:test:user:api"
    assert client.delete(f"/units/{upri}", headers=USER).status_code == 409


def test_access_restricted_read_needs_role(client):
    payload = _travel_payload()
    payload["access_restricted_to"] = "role:curator"
    upri = client.post("/units", json=payload, headers=USER).json()["upri"]
    assert client.get(f"/units/{upri}").status_code == 403
    ok = client.get(f"/units/{upri}", headers={"X-KGBB-Roles": "role:curator,role:editor"})
    assert ok.status_code == 200


def test_question_flow_over_http(client):
    client.post("/units", json=_travel_payload(), headers=USER)
    question = client.post(
        "/questions",
        json={
            "kgbb_instance": "travel-1",
            "subject": {"some_instance_of": "PERSON"},
            "bindings": {"pos-destination": {"resource": "r:rome"}},
        },
        headers=USER,
    ).json()
    assert question["mode"] == "list"
    result = client.post(f"/questions/{question['upri']}/execute").json()
    assert len(result["units"]) == 1
    assert "Rome" in list(result["labels"].values())[0]


def test_compound_question_over_http(client):
    client.post("/units", json=_travel_payload(), headers=USER)
    q1 = client.post(
        "/questions",
        json={"kgbb_instance": "travel-1",
              "bindings": {"pos-destination": {"resource": "r:rome"}}},
        headers=USER,
    ).json()["upri"]
    q2 = client.post(
        "/questions",
        json={"kgbb_instance": "travel-1",
              "bindings": {"pos-transportation": {"resource": "r:train"}}},
        headers=USER,
    ).json()["upri"]
    compound = client.post(
        "/questions/compound", json={"op": "AND", "children": [q1, q2]}, headers=USER
    ).json()["upri"]
    result = client.post(f"/questions/{compound}/execute").json()
    assert len(result["units"]) == 1


def test_mindmap_view(client):
    upri = client.post("/units", json=_travel_payload(), headers=USER).json()["upri"]
    mm = client.get(f"/units/{upri}", params={"view": "mindmap"}).json()
    assert len(mm["nodes"]) == 6


def test_export_endpoints(client):
    client.post("/units", json=_travel_payload(), headers=USER)
    trig = client.get("/export", params={"format": "trig"})
    assert trig.status_code == 200
    assert trig.text.startswith("@prefix kgbb:")
    pg = client.get("/export", params={"format": "pg-json"}).json()
    assert pg["format"] == "kgbb-property-graph"
    tables = client.get("/export", params={"format": "tables"}).json()
    assert "manifest.json" in tables["files"]


def test_api_engine_parity(travel_spec):
    app = create_app(travel_spec)
    client = TestClient(app)
    client.post("/units", json=_travel_payload(), headers=USER)

    direct = Store(travel_spec)
    create_statement_unit(
        direct,
        CreateRequest(
            kgbb_instance="travel-1",
            provenance=Provenance(creator="urn:test:user:api",
                                  application="urn:demo:travel-app"),
            subject=Resource(upri="r:anna", kind="named-individual",
                             class_affiliation="PERSON", label="Anna"),
            inputs={
                "pos-destination": Resource(upri="r:rome", kind="named-individual",
                                            class_affiliation="CITY", label="Rome"),
                "pos-departure": Resource(upri="r:berlin", kind="named-individual",
                                          class_affiliation="CITY", label="Berlin"),
                "pos-transportation": Resource(upri="r:train", kind="named-individual",
                                               class_affiliation="TRANSPORTATION", label="train"),
                "pos-datetime": "5th of August 2019",
            },
        ),
    )
    via_http = app.state.store
    assert len(via_http.units) == len(direct.units)
    http_subjects = sorted(u.meta.has_semantic_unit_subject or "" for u in via_http.units.values())
    direct_subjects = sorted(u.meta.has_semantic_unit_subject or "" for u in direct.units.values())
    assert http_subjects == direct_subjects
    assert via_http.resources == direct.resources


def test_persistence_across_restart(tmp_path, travel_spec):
    store_dir = tmp_path / "store"
    app = create_app(travel_spec, store_path=store_dir)
    client = TestClient(app)
    upri = client.post("/units", json=_travel_payload(), headers=USER).json()["upri"]
    first = export_rdf(app.state.store)

    reborn = create_app(travel_spec, store_path=store_dir)
    assert store_equal(reborn.state.store, app.state.store)
    assert export_rdf(reborn.state.store) == first
    client2 = TestClient(reborn)
    label = client2.get(f"/units/{upri}", params={"view": "label"}).json()["label"]
    assert label.startswith("Anna travels")


def test_invalid_payload_is_422(client):
    response = client.post("/units", json={"inputs": {}}, headers=USER)
    assert response.status_code == 422
