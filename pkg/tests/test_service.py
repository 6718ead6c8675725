import json

import pytest
from fastapi.testclient import TestClient

from theraloop.engine import config_from_dict, create_session, trace_lines
from theraloop.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


def config_body(gate="interactive", severity="moderate", seed=5, max_steps=4):
    return {
        "seed": seed,
        "profile": {
            "age_band": "school_age",
            "language_ability": "phrases",
            "severity": severity,
        },
        "scenario": [{"activity": "block_sorting", "max_steps": max_steps}],
        "gate": gate,
    }


def create(client, **kwargs):
    res = client.post("/api/sessions", json=config_body(**kwargs))
    assert res.status_code == 201, res.text
    return res.json()["id"]


class TestLifecycle:
    def test_create_returns_initial_snapshot(self, client):
        res = client.post("/api/sessions", json=config_body())
        assert res.status_code == 201
        snap = res.json()["snapshot"]
        assert snap["dyad"] == "DEMONSTRATE"
        assert snap["need"] == 0.0
        assert snap["pending"] is None

    def test_step_and_approve(self, client):
        sid = create(client)
        res = client.post(f"/api/sessions/{sid}/step")
        assert res.status_code == 200
        body = res.json()
        assert body["status"] == "pending"
        assert body["proposal"]["proposed_action"]["level"] >= 0

        res = client.post(f"/api/sessions/{sid}/decide", json={"decision": "approve"})
        assert res.status_code == 200
        step = res.json()["step"]
        assert step["gate"]["decision"] == "approved"

        snap = client.get(f"/api/sessions/{sid}").json()["snapshot"]
        assert snap["last_step"]["step_index"] == 0
        assert snap["pending"] is None

    def test_override_executes_requested_level(self, client):
        sid = create(client, severity="none")
        client.post(f"/api/sessions/{sid}/step")
        res = client.post(
            f"/api/sessions/{sid}/decide", json={"decision": "override", "level": 5}
        )
        step = res.json()["step"]
        assert step["executed_action"]["level"] == 5
        assert step["gate"]["decision"] == "overridden"
        # need 0 vs level 5 under c = 9
        assert step["autonomy"] == pytest.approx(4 / 9)

    def test_halt_marks_task_halted(self, client):
        sid = create(client)
        client.post(f"/api/sessions/{sid}/step")
        res = client.post(f"/api/sessions/{sid}/decide", json={"decision": "halt"})
        assert res.json()["step"]["gate"]["decision"] == "halted"
        snap = client.get(f"/api/sessions/{sid}").json()["snapshot"]
        assert snap["finished"]  # single-task scenario ends with the halt

    def test_auto_mode_commits_in_one_call(self, client):
        sid = create(client, gate="auto_approve")
        res = client.post(f"/api/sessions/{sid}/step")
        body = res.json()
        assert body["status"] == "committed"
        assert body["step"]["gate"]["decision"] == "approved"


class TestErrors:
    def test_unknown_session(self, client):
        res = client.get("/api/sessions/doesnotexist")
        assert res.status_code == 404
        assert res.json()["error"]["code"] == "not_found"

    def test_decide_without_pending(self, client):
        sid = create(client)
        res = client.post(f"/api/sessions/{sid}/decide", json={"decision": "approve"})
        assert res.status_code == 409
        assert res.json()["error"]["code"] == "conflict"

    def test_step_after_finish(self, client):
        sid = create(client, gate="auto_approve", max_steps=1)
        assert client.post(f"/api/sessions/{sid}/step").status_code == 200
        res = client.post(f"/api/sessions/{sid}/step")
        assert res.status_code == 409

    def test_malformed_config(self, client):
        res = client.post("/api/sessions", json={"scenario": []})
        assert res.status_code == 400
        assert "profile" in res.json()["error"]["message"]

    def test_bad_decision_value(self, client):
        sid = create(client)
        client.post(f"/api/sessions/{sid}/step")
        res = client.post(f"/api/sessions/{sid}/decide", json={"decision": "maybe"})
        assert res.status_code == 400
        # leave the session tidy for other assertions
        client.post(f"/api/sessions/{sid}/decide", json={"decision": "approve"})

    def test_override_level_not_in_ladder(self, client):
        ladder = [
            {"id": "watch", "level": 0, "kind": "none"},
            {"id": "show", "level": 6, "kind": "demonstrate"},
        ]
        body = config_body()
        body["scenario"][0]["ladder"] = ladder
        sid = client.post("/api/sessions", json=body).json()["id"]
        client.post(f"/api/sessions/{sid}/step")
        res = client.post(
            f"/api/sessions/{sid}/decide", json={"decision": "override", "level": 4}
        )
        assert res.status_code == 400
        assert "level 4" in res.json()["error"]["message"]


class TestTraceDownload:
    def test_interactive_all_approve_matches_batch(self, client):
        sid = create(client, severity="severe", seed=31)
        while True:
            step = client.post(f"/api/sessions/{sid}/step")
            if step.status_code == 409:
                break
            client.post(f"/api/sessions/{sid}/decide", json={"decision": "approve"})
            if client.get(f"/api/sessions/{sid}").json()["snapshot"]["finished"]:
                break
        served = client.get(f"/api/sessions/{sid}/trace")
        assert served.status_code == 200
        served_lines = served.text.strip().split("\n")

        batch = create_session(
            config_from_dict(config_body(gate="auto_approve", severity="severe", seed=31))
        )
        batch_lines = list(trace_lines(batch.run_to_completion()))
        # identical apart from the gate field in the config echo
        assert served_lines[1:] == batch_lines[1:]
        assert json.loads(served_lines[0])["config"]["gate"] == "interactive"


class TestCatalogEndpoints:
    def test_lists_activities(self, client):
        res = client.get("/api/activities")
        ids = {a["id"] for a in res.json()}
        assert "response_to_name" in ids

    def test_catalog_includes_behaviors_and_categories(self, client):
        body = client.get("/api/catalog").json()
        assert any(b["id"] == "a2_v1" for b in body["behaviors"])
        assert "severity" in body["profile_categories"]
