"""Live steering service: one episode per WebSocket session, state frames
streamed to the client, client controls applied to the evader.

The session logic is synchronous and socket-free (``SteeringSession``); the
WebSocket endpoint only pumps messages and wall-clock ticks through it, which
keeps the episode step-for-step identical to an offline run fed the same
timestamped control sequence.

Wire protocol (JSON text messages, "v": 1):

* client -> server: ``start`` | ``control {psi, mu}`` | ``pause`` |
  ``resume`` | ``reset``
* server -> client: ``state {...}`` frames, one ``end {result, control_log}``
  when the episode finishes, and ``error {detail}`` replies for malformed or
  out-of-order messages (the session survives those).
"""

from __future__ import annotations

import asyncio
import json
import logging
import math
import time
import uuid
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .errors import ProtocolError
from .scenario import Scenario
from .simulation import EpisodeRunner, TraceRecord

log = logging.getLogger("encircle.service")

__all__ = ["SteeringSession", "create_app", "PROTOCOL_VERSION"]

PROTOCOL_VERSION = 1

_CLIENT_TYPES = ("start", "control", "pause", "resume", "reset")
_MAX_STEPS_PER_TICK = 20_000


def _parse_client_message(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"not valid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ProtocolError("message must be a JSON object")
    if obj.get("v") != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {obj.get('v')!r}")
    mtype = obj.get("type")
    if mtype not in _CLIENT_TYPES:
        raise ProtocolError(f"unknown message type {mtype!r}")
    if mtype == "control":
        for field in ("psi", "mu"):
            val = obj.get(field)
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise ProtocolError(f"control.{field} must be a number")
            if not math.isfinite(val):
                raise ProtocolError(f"control.{field} must be finite")
    return obj


class SteeringSession:
    """State machine for one steering session.

    Status moves Ready -> Running <-> Paused -> Ended; ``reset`` returns to
    Ready with the original scenario from any status.  Controls are held
    zero-order and take effect at the next integrator step; every effective
    change is logged with its simulation time so the episode can be replayed
    offline.
    """

    def __init__(self, scenario: Scenario, pacing: float = 1.0, frame_rate: float = 30.0):
        if pacing <= 0:
            raise ValueError("pacing must be > 0")
        if frame_rate <= 0:
            raise ValueError("frame_rate must be > 0")
        self.id = uuid.uuid4().hex[:8]
        self.scenario = scenario
        self.pacing = pacing
        self.frame_period = 1.0 / frame_rate
        self.status = "ready"
        self.runner = EpisodeRunner(scenario)
        self.control_log: list[tuple[float, float, float]] = []
        self._pending: tuple[float, float] = (0.0, 0.0)
        self._applied: Optional[tuple[float, float]] = None
        self._wall_anchor: Optional[float] = None
        self._sim_anchor = 0.0
        self._last_frame_wall = -math.inf

    # -- message handling ------------------------------------------------

    def handle_message(self, obj: dict) -> None:
        mtype = obj["type"]
        if mtype == "start":
            if self.status != "ready":
                raise ProtocolError(f"start not allowed while {self.status}")
            self.status = "running"
            self._wall_anchor = None  # anchored on the next tick
        elif mtype == "control":
            if self.status == "ended":
                raise ProtocolError("session ended; reset to steer again")
            mu = min(max(float(obj["mu"]), 0.0), self.scenario.params.mu_max)
            self._pending = (mu, float(obj["psi"]))
        elif mtype == "pause":
            if self.status != "running":
                raise ProtocolError(f"pause not allowed while {self.status}")
            self.status = "paused"
            self._wall_anchor = None
        elif mtype == "resume":
            if self.status != "paused":
                raise ProtocolError(f"resume not allowed while {self.status}")
            self.status = "running"
            self._wall_anchor = None
        elif mtype == "reset":
            self.runner = EpisodeRunner(self.scenario)
            self.control_log = []
            self._pending = (0.0, 0.0)
            self._applied = None
            self._wall_anchor = None
            self.status = "ready"

    def handle_text(self, text: str) -> list[str]:
        """Apply one raw client message; returns reply frames (errors only)."""
        try:
            self.handle_message(_parse_client_message(text))
        except ProtocolError as exc:
            return [json.dumps({"v": PROTOCOL_VERSION, "type": "error", "detail": str(exc)})]
        return []

    # -- time-driven advancement ------------------------------------------

    def tick(self, now: float) -> list[str]:
        """Advance the episode per wall clock and emit due frames."""
        out: list[str] = []
        if self.status == "running":
            if self._wall_anchor is None:
                self._wall_anchor = now
                self._sim_anchor = self.runner.world.t
            target = self._sim_anchor + (now - self._wall_anchor) * self.pacing
            steps = 0
            while (
                self.runner.result is None
                and self.runner.world.t + self.scenario.dt <= target + 1e-12
                and steps < _MAX_STEPS_PER_TICK
            ):
                self._step_once()
                steps += 1
            if self.runner.result is not None:
                self.status = "ended"
                out.append(self._state_frame(self.runner.trace[-1]))
                out.append(self._end_frame())
                return out
        if (
            self.status in ("ready", "running", "paused")
            and now - self._last_frame_wall >= self.frame_period
        ):
            self._last_frame_wall = now
            out.append(self._state_frame(self.runner.trace[-1]))
        return out

    def _step_once(self) -> None:
        mu, psi = self._pending
        if self._applied != (mu, psi):
            self.control_log.append((self.runner.world.t, mu, psi))
            self._applied = (mu, psi)
        self.runner.advance(mu, psi)

    def next_wait(self, now: float) -> float:
        """Seconds until the session next needs a tick."""
        frame_due = self._last_frame_wall + self.frame_period - now
        if self.status == "running":
            if self._wall_anchor is None:
                return 0.0
            target = self._sim_anchor + (now - self._wall_anchor) * self.pacing
            step_due = (self.runner.world.t + self.scenario.dt - target) / self.pacing
            return max(0.0, min(step_due, frame_due))
        if self.status == "ended":
            return 1.0
        return max(0.0, frame_due)

    # -- outbound frames ---------------------------------------------------

    def _state_frame(self, rec: TraceRecord) -> str:
        captured = self.runner.result is not None and self.runner.result.captured
        return json.dumps(
            {
                "v": PROTOCOL_VERSION,
                "type": "state",
                "t": rec.t,
                "pursuers": [[p.x, p.y] for p in rec.pursuers],
                "evader": [rec.evader.x, rec.evader.y],
                "areas": list(rec.areas),
                "V": rec.V,
                "d_min": rec.d_min,
                "phase": rec.mode,
                "active_edge": list(rec.active) if rec.active else None,
                "encircled": rec.encircled,
                "captured": captured,
                "t_bound": self.runner.t_bound,
                "r_c": self.scenario.params.r_c,
                "mu_max": self.scenario.params.mu_max,
                "status": self.status,
            }
        )

    def _end_frame(self) -> str:
        assert self.runner.result is not None
        return json.dumps(
            {
                "v": PROTOCOL_VERSION,
                "type": "end",
                "result": self.runner.result.to_dict(),
                "control_log": [
                    {"t": t, "mu": mu, "psi": psi} for t, mu, psi in self.control_log
                ],
            }
        )

    def shutdown_frame(self) -> str:
        return json.dumps(
            {
                "v": PROTOCOL_VERSION,
                "type": "end",
                "result": self.runner.result.to_dict() if self.runner.result else None,
                "control_log": [
                    {"t": t, "mu": mu, "psi": psi} for t, mu, psi in self.control_log
                ],
                "reason": "shutdown",
            }
        )


def create_app(
    scenario: Scenario,
    pacing: float = 1.0,
    frame_rate: float = 30.0,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    """FastAPI app hosting /ws steering sessions for one scenario."""
    app = FastAPI(title="encircle steering service")

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        session = SteeringSession(scenario, pacing=pacing, frame_rate=frame_rate)
        log.info("session %s connected", session.id)
        recv_task = asyncio.create_task(ws.receive_text())
        try:
            while True:
                timeout = min(session.next_wait(time.monotonic()), 0.05)
                done, _pending = await asyncio.wait({recv_task}, timeout=timeout)
                if recv_task in done:
                    try:
                        text = recv_task.result()
                    except WebSocketDisconnect:
                        break
                    for reply in session.handle_text(text):
                        await ws.send_text(reply)
                    recv_task = asyncio.create_task(ws.receive_text())
                for frame in session.tick(time.monotonic()):
                    await ws.send_text(frame)
        except WebSocketDisconnect:
            pass
        except asyncio.CancelledError:
            try:
                await ws.send_text(session.shutdown_frame())
            except Exception:
                pass
            raise
        finally:
            recv_task.cancel()
            log.info("session %s closed", session.id)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        async def index() -> dict:
            return {
                "service": "encircle steering",
                "protocol": PROTOCOL_VERSION,
                "endpoint": "/ws",
                "pursuers": len(scenario.pursuer_starts),
            }

    return app
