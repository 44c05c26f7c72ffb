import json
import math

import pytest
from fastapi.testclient import TestClient

from modloco.server import create_app
from modloco.sim import SimConfig


@pytest.fixture()
def client():
    app = create_app(SimConfig(), robot="gecko", realtime=False)
    with TestClient(app) as tc:
        yield tc


def recv_state(ws):
    for _ in range(50):
        frame = json.loads(ws.receive_text())
        if frame["type"] == "state":
            return frame
    raise AssertionError("no state frame received")


def test_health_reports_version(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.text.startswith("modloco ")


def test_state_frames_shape(client):
    with client.websocket_connect("/ws") as ws:
        frame = recv_state(ws)
        assert frame["type"] == "state"
        assert len(frame["robots"]) == 1
        robot = frame["robots"][0]
        assert set(robot) == {"x", "y", "theta", "alpha", "signals"}
        assert len(robot["signals"]) == 6  # gecko joints
        assert set(frame["target"]) == {"x", "y"}


def test_set_target_left_flips_alpha_within_two_steps(client):
    with client.websocket_connect("/ws") as ws:
        recv_state(ws)
        # target left of the heading: +y side for a robot heading +x
        ws.send_text(json.dumps({"type": "set_target", "x": 0.5, "y": 0.2}))
        seen = []
        for _ in range(3):
            seen.append(recv_state(ws)["robots"][0]["alpha"])
        assert any(a < 0 for a in seen[:2])


def test_reset_to_spider_changes_signal_count(client):
    with client.websocket_connect("/ws") as ws:
        recv_state(ws)
        ws.send_text(json.dumps({"type": "reset", "robot": "spider"}))
        for _ in range(5):
            frame = recv_state(ws)
            if len(frame["robots"][0]["signals"]) == 8:
                break
        assert len(frame["robots"][0]["signals"]) == 8


def test_pause_stops_time_and_resume_continues(client):
    with client.websocket_connect("/ws") as ws:
        first = recv_state(ws)
        ws.send_text(json.dumps({"type": "pause"}))
        # drain whatever was already in flight, then expect silence
        ws.send_text(json.dumps({"type": "resume"}))
        after = recv_state(ws)
        assert after["t"] >= first["t"]
        # time advances in dt steps without discontinuity
        nxt = recv_state(ws)
        assert nxt["t"] == pytest.approx(after["t"] + 0.1, abs=1e-6)


def test_load_genome_validates_length(client):
    with client.websocket_connect("/ws") as ws:
        recv_state(ws)
        ws.send_text(json.dumps({"type": "load_genome", "weights": [0.1] * 12}))
        frames = []
        for _ in range(20):
            frame = json.loads(ws.receive_text())
            frames.append(frame)
            if frame["type"] == "error":
                break
        assert frames[-1]["type"] == "error"
        assert "rejected" in frames[-1]["msg"]
        # a 13-weight genome is accepted (no error frame follows)
        ws.send_text(json.dumps({"type": "load_genome", "weights": [0.1] * 13}))
        for _ in range(3):
            frame = json.loads(ws.receive_text())
            assert frame["type"] == "state"


def test_unknown_message_type(client):
    with client.websocket_connect("/ws") as ws:
        recv_state(ws)
        ws.send_text(json.dumps({"type": "warp_drive"}))
        for _ in range(20):
            frame = json.loads(ws.receive_text())
            if frame["type"] == "error":
                assert "unknown message type" in frame["msg"]
                return
        raise AssertionError("expected an error frame")


def test_malformed_json_keeps_session_alive(client):
    with client.websocket_connect("/ws") as ws:
        recv_state(ws)
        ws.send_text("{not json")
        got_error = False
        for _ in range(20):
            frame = json.loads(ws.receive_text())
            if frame["type"] == "error":
                got_error = True
                break
        assert got_error
        assert recv_state(ws)["type"] == "state"  # session survives
