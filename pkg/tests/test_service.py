from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from momentgraph.service import app, handle_bruhat

client = TestClient(app)


def bundle_payload(type_="A", rank=1, parabolic=(1,)):
    return handle_bruhat(
        {"type": type_, "rank": rank, "parabolic": list(parabolic), "emit": "bundle"}
    )


ONE_A1 = {
    "flavor": "mult",
    "values": {"e": [{"coeff": "1", "exp": [0]}], "1": [{"coeff": "1", "exp": [0]}]},
}


def test_health():
    resp = client.get("/v1/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_bruhat_graph_endpoint():
    resp = client.post("/v1/bruhat", json={"type": "A", "rank": 2})
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["vertices"]) == 6
    assert len(body["edges"]) == 9


def test_bruhat_bundle_endpoint_roundtrips_through_validate():
    bundle = bundle_payload("A", 2, (1,))
    resp = client.post("/v1/validate", json={"kind": "bundle", "bundle": bundle})
    assert resp.status_code == 200
    assert resp.json() == {"ok": True, "violations": []}


def test_validate_graph_reports_violations():
    bad = {
        "rank": 1,
        "vertices": ["v"],
        "covers": [],
        "edges": [{"from": "v", "to": "v", "label": [1]}],
    }
    resp = client.post("/v1/validate", json={"kind": "graph", "graph": bad})
    assert resp.status_code == 200
    body = resp.json()
    assert not body["ok"]
    assert any(v["axiom"] == "MG3" for v in body["violations"])


def test_quotient_endpoint():
    graph = client.post("/v1/bruhat", json={"type": "A", "rank": 2}).json()
    relation = {"classes": [["e", "1"], ["2", "21"], ["12", "121"]]}
    resp = client.post("/v1/quotient", json={"graph": graph, "relation": relation})
    assert resp.status_code == 200
    assert len(resp.json()["graph"]["vertices"]) == 3


def test_pushforward_endpoint():
    bundle = bundle_payload()
    resp = client.post(
        "/v1/pushforward", json={"bundle": bundle, "element": ONE_A1, "flavor": "mult"}
    )
    assert resp.status_code == 200
    assert resp.json()["values"]["e"] == [{"coeff": "1", "exp": [0]}]


def test_pushforward_rejects_non_member():
    bundle = bundle_payload()
    bad = {"flavor": "mult", "values": {"e": [{"coeff": "1", "exp": [0]}], "1": []}}
    resp = client.post(
        "/v1/pushforward", json={"bundle": bundle, "element": bad, "flavor": "mult"}
    )
    assert resp.status_code == 422
    assert resp.json()["detail"]["error_kind"] == "validation"


def test_rr_endpoint_exact():
    bundle = bundle_payload()
    resp = client.post(
        "/v1/rr",
        json={"bundle": bundle, "element": ONE_A1, "degree": 4, "convention": "exact"},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["per_class"]["e"]["agree_through_degree"] == 4
    assert body["per_class"]["e"]["first_mismatch"] is None


def test_rr_endpoint_paper_convention():
    bundle = bundle_payload()
    resp = client.post(
        "/v1/rr",
        json={"bundle": bundle, "element": ONE_A1, "degree": 1, "convention": "paper"},
    )
    body = resp.json()
    assert body["per_class"]["e"]["agree_through_degree"] == -1


def test_todd_endpoint():
    bundle = bundle_payload()
    resp = client.post("/v1/todd", json={"bundle": bundle, "degree": 2, "convention": "exact"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["flavor"] == "trunc" and body["bound"] == 2
    assert body["values"]["e"] == [
        {"coeff": "1", "exp": [0]},
        {"coeff": "1/2", "exp": [1]},
        {"coeff": "1/12", "exp": [2]},
    ]


def test_demazure_endpoint():
    bundle = bundle_payload()
    z = {
        "flavor": "mult",
        "values": {
            "e": [{"coeff": "1", "exp": [1]}],
            "1": [{"coeff": "1", "exp": [-1]}],
        },
    }
    resp = client.post("/v1/demazure", json={"bundle": bundle, "element": z})
    assert resp.status_code == 200
    expected = [{"coeff": "1", "exp": [-1]}, {"coeff": "1", "exp": [0]}, {"coeff": "1", "exp": [1]}]
    body = resp.json()
    assert body["values"]["e"] == expected
    assert body["values"]["1"] == expected


def test_report_endpoint_generated():
    bundle = bundle_payload()
    resp = client.post(
        "/v1/report", json={"bundle": bundle, "generate": 2, "seed": 5, "degree": 2}
    )
    assert resp.status_code == 200
    rows = resp.json()["rows"]
    assert len(rows) == 6  # 2 elements x 3 conventions
    exact_rows = [r for r in rows if r["convention"] == "exact"]
    assert all(r["agree_through_degree"] == 2 for r in exact_rows)


def test_report_endpoint_deterministic():
    bundle = bundle_payload()
    payload = {"bundle": bundle, "generate": 2, "seed": 5, "degree": 2}
    first = client.post("/v1/report", json=payload).json()
    second = client.post("/v1/report", json=payload).json()
    assert first == second


def test_pullback_endpoint():
    graph = client.post("/v1/bruhat", json={"type": "A", "rank": 2}).json()
    quotient = client.post(
        "/v1/quotient",
        json={"graph": graph, "relation": {"classes": [["e", "1"], ["2", "21"], ["12", "121"]]}},
    ).json()
    zq = {
        "flavor": "mult",
        "values": {name: [{"coeff": "1", "exp": [0, 0]}] for name in quotient["graph"]["vertices"]},
    }
    resp = client.post(
        "/v1/pullback",
        json={
            "element": zq,
            "morphism": quotient["morphism"],
            "source": graph,
            "target": quotient["graph"],
        },
    )
    assert resp.status_code == 200
    assert all(v == [{"coeff": "1", "exp": [0, 0]}] for v in resp.json()["values"].values())


def test_schema_error_is_400():
    resp = client.post("/v1/bruhat", json={"type": "Z", "rank": 9})
    assert resp.status_code == 409  # unsupported type: a math-domain error
    resp = client.post("/v1/bruhat", json={"bogus": True})
    assert resp.status_code == 400


def test_chern_endpoint():
    graph = client.post("/v1/bruhat", json={"type": "A", "rank": 1}).json()
    z = {
        "flavor": "mult",
        "values": {"e": [{"coeff": "1", "exp": [1]}], "1": [{"coeff": "1", "exp": [-1]}]},
    }
    resp = client.post("/v1/chern", json={"graph": graph, "element": z, "degree": 2})
    assert resp.status_code == 200
    body = resp.json()
    assert body["values"]["e"] == [
        {"coeff": "1", "exp": [0]},
        {"coeff": "1", "exp": [1]},
        {"coeff": "1/2", "exp": [2]},
    ]
