"""End-to-end check of the service over a real localhost socket."""

import json
import socket
import threading
import time

import pytest
import uvicorn

from encircle.service import create_app


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture()
def live_server(table1):
    port = free_port()
    app = create_app(table1, pacing=50.0, frame_rate=30.0)
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if time.monotonic() > deadline:
            pytest.fail("server did not start")
        time.sleep(0.01)
    yield port
    server.should_exit = True
    thread.join(timeout=5)


def test_session_over_real_socket(live_server):
    from websockets.sync.client import connect

    with connect(f"ws://127.0.0.1:{live_server}/ws", open_timeout=10) as ws:
        ws.send(json.dumps({"v": 1, "type": "start"}))
        end = None
        for _ in range(2000):
            data = json.loads(ws.recv(timeout=10))
            if data["type"] == "end":
                end = data
                break
        assert end is not None
        assert end["result"]["captured"] is True
        assert end["result"]["t_capture"] == pytest.approx(0.70, abs=0.02)
        assert end["result"]["encirclement_ok"] is True
        assert isinstance(end["control_log"], list)
