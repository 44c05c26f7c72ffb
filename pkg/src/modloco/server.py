"""Live session server for interactive target chasing.

Each websocket connection owns one simulation stepped at wall-clock rate;
the client drags the target around and watches the robot chase it. Inbound
messages are queued and applied between control steps, so a step never sees
a half-applied command. State frames go out once per control step while the
session is running.
"""

from __future__ import annotations

import asyncio
import json
import time
from importlib import resources
from pathlib import Path

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import __version__, morphology
from .cpg import CpgGenome, load_genome_file
from .sim import LiveSim, SimConfig, external_scenario, scenario_preset

FRONTEND_DIST = Path(__file__).resolve().parents[2] / "frontend" / "dist"


def default_genome(robot: str, topology) -> CpgGenome:
    """Bundled demo genome for a preset; seeded fallback otherwise."""
    try:
        text = resources.files("modloco.presets").joinpath(
            f"genomes/{robot}.json").read_text()
        weights = json.loads(text)["weights"]
        return CpgGenome.from_vector(topology, weights)
    except (FileNotFoundError, ValueError, KeyError):
        rng = np.random.default_rng(0)
        return CpgGenome.from_vector(
            topology, rng.uniform(-1, 1, topology.genome_dimension))


class Session:
    """One connection's simulation plus its control state."""

    def __init__(self, cfg: SimConfig, robot: str, scenario: str = "external",
                 genome_file: str | None = None):
        self.cfg = cfg
        self.paused = False
        self._build(robot, scenario, genome_file)

    def _build(self, robot: str, scenario: str, genome_file: str | None = None):
        body = (morphology.preset(robot) if robot in morphology.PRESET_NAMES
                else morphology.load_body(robot))
        topology = morphology.cpg_topology(body)
        if genome_file:
            data = load_genome_file(genome_file)
            genome = CpgGenome.from_vector(topology, data["weights"])
        else:
            genome = default_genome(body.name, topology)
        self.robot = robot
        self.topology = topology
        if scenario == "external":
            self.scenario = external_scenario()
        else:
            self.scenario = scenario_preset(scenario)
        pairs = [(body, genome)] * len(self.scenario.slots)
        self.sim = LiveSim(pairs, self.scenario, self.cfg)
        self.last = None

    def apply(self, message: dict) -> dict | None:
        """Apply one client message; returns an error frame or None."""
        kind = message.get("type")
        if kind == "set_target":
            script = self.scenario.slots[0].script
            if not hasattr(script, "set_position"):
                return {"type": "error", "msg": "scenario target is scripted"}
            try:
                script.set_position(float(message["x"]), float(message["y"]))
            except (KeyError, TypeError, ValueError):
                return {"type": "error", "msg": "set_target needs numeric x, y"}
            return None
        if kind == "pause":
            self.paused = True
            return None
        if kind == "resume":
            self.paused = False
            return None
        if kind == "reset":
            robot = message.get("robot", self.robot)
            scenario = message.get("scenario", "external")
            try:
                self._build(robot, scenario)
            except (KeyError, FileNotFoundError) as exc:
                return {"type": "error", "msg": f"reset failed: {exc}"}
            return None
        if kind == "load_genome":
            weights = message.get("weights")
            try:
                genome = CpgGenome.from_vector(self.topology, weights)
            except (ValueError, TypeError) as exc:
                return {"type": "error", "msg": f"genome rejected: {exc}"}
            body = (morphology.preset(self.robot)
                    if self.robot in morphology.PRESET_NAMES
                    else morphology.load_body(self.robot))
            pairs = [(body, genome)] * len(self.scenario.slots)
            poses = [r.pose for r in self.sim.robots]
            self.sim = LiveSim(pairs, self.scenario, self.cfg)
            for runtime, pose in zip(self.sim.robots, poses):
                runtime.pose = pose
            return None
        return {"type": "error", "msg": f"unknown message type {kind!r}"}

    def step(self) -> dict:
        telemetry = self.sim.tick()
        target = telemetry[0][5]
        self.last = {
            "type": "state",
            "t": round(self.sim.t, 6),
            "robots": [
                {
                    "x": pose.x,
                    "y": pose.y,
                    "theta": pose.theta,
                    "alpha": alpha,
                    "signals": [float(s) for s in signals],
                }
                for pose, alpha, v, omega, signals, _ in telemetry
            ],
            "target": {"x": target[0], "y": target[1]},
        }
        return self.last


def create_app(sim_cfg: SimConfig | None = None, robot: str = "spider",
               genome_file: str | None = None, realtime: bool = True) -> FastAPI:
    cfg = sim_cfg or SimConfig()
    app = FastAPI(title="modloco session server")

    @app.get("/health", response_class=PlainTextResponse)
    def health() -> str:
        return f"modloco {__version__}"

    @app.websocket("/ws")
    async def session_socket(ws: WebSocket):
        await ws.accept()
        session = Session(cfg, robot, genome_file=genome_file)
        inbox: asyncio.Queue = asyncio.Queue()

        async def reader():
            try:
                while True:
                    raw = await ws.receive_text()
                    await inbox.put(raw)
            except WebSocketDisconnect:
                await inbox.put(None)
            except RuntimeError:
                await inbox.put(None)

        reader_task = asyncio.create_task(reader())
        next_deadline = time.monotonic() + cfg.dt_ctrl
        try:
            while True:
                # apply everything that arrived since the last step
                while not inbox.empty():
                    raw = inbox.get_nowait()
                    if raw is None:
                        return
                    try:
                        message = json.loads(raw)
                        if not isinstance(message, dict):
                            raise ValueError("frame must be an object")
                    except ValueError:
                        await ws.send_text(json.dumps(
                            {"type": "error", "msg": "malformed JSON frame"}))
                        continue
                    error = session.apply(message)
                    if error is not None:
                        await ws.send_text(json.dumps(error))
                if not session.paused:
                    await ws.send_text(json.dumps(session.step()))
                if realtime:
                    now = time.monotonic()
                    delay = next_deadline - now
                    next_deadline += cfg.dt_ctrl
                    if delay > 0:
                        await asyncio.sleep(delay)
                    elif delay < -1.0:
                        next_deadline = now + cfg.dt_ctrl  # resync after stall
                else:
                    await asyncio.sleep(0)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            reader_task.cancel()

    if FRONTEND_DIST.is_dir():
        app.mount("/", StaticFiles(directory=FRONTEND_DIST, html=True),
                  name="ui")
    return app


def serve(experiment_cfg, host: str = "127.0.0.1", port: int = 8000,
          genome_file: str | None = None) -> None:
    import uvicorn

    app = create_app(experiment_cfg.sim, robot=experiment_cfg.robot,
                     genome_file=genome_file)
    uvicorn.run(app, host=host, port=port, log_level="warning")
