"""The browser client's golden request fixtures must be accepted by the
service exactly as frozen (skipped when the frontend is not checked out)."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from kisengine.service import create_app
from kisengine.session import SessionManager, SimulatedClock
from kisengine.synth import plant_task, target_shot

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

pytestmark = pytest.mark.skipif(
    not FIXTURES.is_dir(), reason="frontend fixtures not present"
)


@pytest.fixture()
def client(synth_engine, synth_corpus):
    task = plant_task(synth_corpus, "t0", video_index=0, target_start_s=10.0)
    manager = SessionManager(synth_engine, {"t0": task}, clock=SimulatedClock())
    return TestClient(create_app(manager))


def open_session(client):
    return client.post("/session", json={"task_id": "t0"}).json()["session_id"]


def fixture_bytes(name: str) -> bytes:
    return (FIXTURES / name).read_bytes()


@pytest.mark.parametrize(
    "name",
    [
        "query_sketch_red_cell.json",
        "query_sketch_three_cells.json",
        "query_concept_chips.json",
        "query_full.json",
    ],
)
def test_query_fixtures_accepted(client, synth_corpus, name):
    body = fixture_bytes(name)
    sid = open_session(client)
    # concept fixtures reference demo labels; remap onto this corpus's bank
    doc = json.loads(body)
    if "concept" in doc:
        labels = synth_corpus.banks["concept"].labels
        doc["concept"] = (
            doc["concept"]
            .replace("person", labels[0])
            .replace("obj/dog", labels[1])
            .replace("indoor", labels[2])
        )
        body = json.dumps(doc).encode()
    resp = client.post(
        f"/session/{sid}/query", content=body,
        headers={"Content-Type": "application/json"},
    )
    assert resp.status_code == 200, resp.text
    entries = resp.json()["entries"]
    scores = [e["score"] for e in entries]
    assert scores == sorted(scores, reverse=True)


def test_sketch_fixture_point_is_cell_center():
    doc = json.loads(fixture_bytes("query_sketch_red_cell.json"))
    point = doc["sketch"]["points"][0]
    assert point["x"] == 0.0625 and point["y"] == 0.0625
    # red in Lab, to the client's 4-decimal canonical rounding
    assert abs(point["color"]["L"] - 53.2408) < 5e-5
    assert abs(point["color"]["a"] - 80.0925) < 5e-5
    assert abs(point["color"]["b"] - 67.2032) < 5e-5


def test_action_fixtures_accepted(client, synth_engine, synth_corpus):
    sid = open_session(client)
    client.post(
        f"/session/{sid}/query",
        content=fixture_bytes("query_sketch_three_cells.json"),
        headers={"Content-Type": "application/json"},
    )
    task = plant_task(synth_corpus, "t0", video_index=0, target_start_s=10.0)
    shot = target_shot(synth_corpus, task)

    body = json.loads(fixture_bytes("positive.json"))
    body["shot_id"] = shot
    resp = client.post(f"/session/{sid}/positive", json=body)
    assert resp.status_code == 200

    resp = client.post(
        f"/session/{sid}/feedback", content=fixture_bytes("feedback.json"),
        headers={"Content-Type": "application/json"},
    )
    assert resp.status_code == 200

    body = json.loads(fixture_bytes("submit.json"))
    body["shot_id"] = shot
    resp = client.post(f"/session/{sid}/submit", json=body)
    assert resp.json()["verdict"] == "correct"
