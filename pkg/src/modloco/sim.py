"""Deterministic planar locomotion surrogate.

Joint signals turn into motion through a power-stroke model: a joint
produces thrust only while its signal rises, proportional to the rise rate
times the signal magnitude. Summed thrusts drive a unicycle body; the
left/right thrust imbalance sets the turn rate (weakening the left side
turns the robot left), the total sets the forward speed. Episodes run at a
fixed control step and are bit-reproducible for a given seed; the seed only
feeds the optional bearing-noise model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .cpg import CpgGenome, SteeringParams, controller_tick, init_controller
from .morphology import BodyGraph, Side, cpg_topology
from .vision import (
    CameraModel,
    bearing_policy,
    initial_bearing_state,
    simulated_bearing,
)

TWO_PI = 2.0 * math.pi
THRUST_EPS = 1e-9  # turn-rate denominator floor


def wrap_angle(theta: float) -> float:
    """Normalize to (-pi, pi]."""
    return -((-theta + math.pi) % TWO_PI - math.pi)


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0  # heading, radians, counterclockwise from +x

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class SimConfig:
    dt_ctrl: float = 0.1
    episode_duration: float = 60.0
    c_v: float = 0.18  # forward speed per unit mean thrust
    c_w: float = 0.75  # turn rate per unit relative side imbalance
    alpha_noise_std: float = 0.0  # degrees
    capture_radius: float = 0.05
    camera: CameraModel = field(default_factory=CameraModel)
    steering: SteeringParams = field(default_factory=SteeringParams)
    search_side: str = "right"
    hold_alpha_zero: bool = False  # straight-gait learning: bearing pinned to 0
    steering_enabled: bool = True
    # Episodes run the oscillators in bounded (renormalized) mode so signal
    # amplitude keeps tracking the learned weights instead of saturating to
    # square waves; the raw growing recurrence stays available for study.
    renormalize_oscillators: bool = True

    def __post_init__(self):
        if self.dt_ctrl <= 0:
            raise ValueError("dt_ctrl must be positive")
        if self.episode_duration < self.dt_ctrl:
            raise ValueError("episode_duration must cover at least one step")
        if self.c_v < 0 or self.c_w < 0 or self.alpha_noise_std < 0:
            raise ValueError("gains and noise must be non-negative")


# --- target scripts ---------------------------------------------------------


@dataclass
class FixedTarget:
    point: tuple[float, float]

    def position(self, t, poses, self_index):
        return self.point


@dataclass
class WaypointTarget:
    waypoints: list[tuple[float, tuple[float, float]]]  # (time, point)

    def __post_init__(self):
        times = [t for t, _ in self.waypoints]
        if not times or any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("waypoint times must be strictly increasing")

    def position(self, t, poses, self_index):
        pts = self.waypoints
        if t <= pts[0][0]:
            return pts[0][1]
        for (t0, p0), (t1, p1) in zip(pts, pts[1:]):
            if t <= t1:
                f = (t - t0) / (t1 - t0)
                return (p0[0] + f * (p1[0] - p0[0]), p0[1] + f * (p1[1] - p0[1]))
        return pts[-1][1]


@dataclass
class FollowRobot:
    robot_index: int
    standoff: float = 0.0

    def position(self, t, poses, self_index):
        lx, ly, _ = poses[self.robot_index]
        if self.standoff > 0.0:
            sx, sy, _ = poses[self_index]
            d = math.hypot(lx - sx, ly - sy)
            if d > self.standoff:
                f = self.standoff / d
                return (lx - f * (lx - sx), ly - f * (ly - sy))
        return (lx, ly)


@dataclass
class ExternalTarget:
    point: tuple[float, float] = (0.5, 0.0)

    def set_position(self, x: float, y: float):
        self.point = (float(x), float(y))

    def position(self, t, poses, self_index):
        return self.point


@dataclass
class RobotSlot:
    pose: Pose
    script: object


@dataclass
class Scenario:
    name: str
    slots: list[RobotSlot]


SCENARIO_NAMES = ("fixed_left", "fixed_center", "fixed_right", "moving", "double_moving")

# Target placement for the fixed scenarios: 1 m away, inside the initial FOV.
FIXED_BEARINGS_DEG = {"fixed_left": -20.0, "fixed_center": 0.0, "fixed_right": 20.0}
FIXED_TARGET_DISTANCE = 1.0


def _moving_waypoints(ahead=0.30):
    # start ahead of the robot, drive to its right, then back across to its left
    return [
        (0.0, (ahead, 0.0)),
        (20.0, (ahead, -0.6)),
        (50.0, (ahead, 0.6)),
    ]


def scenario_preset(name: str) -> Scenario:
    if name in FIXED_BEARINGS_DEG:
        bearing = math.radians(FIXED_BEARINGS_DEG[name])
        # negative bearing = target left of heading = counterclockwise side
        direction = -bearing
        point = (
            FIXED_TARGET_DISTANCE * math.cos(direction),
            FIXED_TARGET_DISTANCE * math.sin(direction),
        )
        return Scenario(name, [RobotSlot(Pose(), FixedTarget(point))])
    if name == "moving":
        return Scenario(name, [RobotSlot(Pose(), WaypointTarget(_moving_waypoints()))])
    if name == "double_moving":
        leader = RobotSlot(Pose(), WaypointTarget(_moving_waypoints()))
        chaser = RobotSlot(Pose(x=-0.4), FollowRobot(0))
        return Scenario(name, [leader, chaser])
    raise KeyError(f"unknown scenario {name!r}")


def external_scenario(start=(0.5, 0.0)) -> Scenario:
    """Single robot chasing an externally driven target (interactive sessions)."""
    return Scenario("external", [RobotSlot(Pose(), ExternalTarget(start))])


# --- locomotion model -------------------------------------------------------


def joint_thrust(sig_now: float, sig_prev: float, dt: float) -> float:
    """Power-stroke thrust: rise rate times displacement, never negative."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return max(0.0, (sig_now - sig_prev) / dt) * abs(sig_now)


def body_twist(thrusts, sides, cfg: SimConfig) -> tuple[float, float]:
    """Map per-joint thrusts to forward speed and turn rate."""
    s_left = s_right = s_mid = 0.0
    for t, side in zip(thrusts, sides):
        if side is Side.LEFT:
            s_left += t
        elif side is Side.RIGHT:
            s_right += t
        else:
            s_mid += t
    n = len(thrusts)
    v = cfg.c_v * (s_left + s_right + s_mid) / n if n else 0.0
    omega = cfg.c_w * (s_right - s_left) / max(s_left + s_right, THRUST_EPS)
    return v, omega


def step(pose: Pose, v: float, omega: float, dt: float) -> Pose:
    """Unicycle step: turn first, then advance along the new heading."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    theta = pose.theta + omega * dt
    return Pose(
        x=pose.x + v * math.cos(theta) * dt,
        y=pose.y + v * math.sin(theta) * dt,
        theta=theta,
    )


# --- episodes ----------------------------------------------------------------


@dataclass
class SimTrace:
    robot: str
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    alpha: np.ndarray
    v: np.ndarray
    omega: np.ndarray
    target_x: np.ndarray
    target_y: np.ndarray
    signals: np.ndarray  # rows x joints
    first_capture_t: float | None = None

    def __len__(self):
        return len(self.t)


TRAJECTORY_HEADER = "t,x,y,theta,alpha,v,omega,target_x,target_y"


def write_trajectory_csv(trace: SimTrace, path) -> None:
    cols = (trace.t, trace.x, trace.y, trace.theta, trace.alpha,
            trace.v, trace.omega, trace.target_x, trace.target_y)
    with open(path, "w") as fh:
        fh.write(TRAJECTORY_HEADER + "\n")
        for row in zip(*cols):
            fh.write(",".join(f"{value:.9g}" for value in row) + "\n")


def cpg_tick_controller(topology, genome, cfg):
    """Default controller: the coupled-oscillator network with steering."""
    state = init_controller(topology, genome, renormalize=cfg.renormalize_oscillators)
    return lambda alpha_deg: controller_tick(state, alpha_deg, cfg.steering)


class _RobotRuntime:
    """Mutable per-robot state while an episode runs."""

    def __init__(self, body, genome, slot, cfg, controller_factory):
        self.body = body
        self.topology = cpg_topology(body)
        self.tick_signals = controller_factory(self.topology, genome, cfg)
        self.sides = tuple(j.side for j in self.topology.joints)
        self.prev_signals = np.zeros(len(self.topology.joints))
        self.pose = slot.pose
        self.script = slot.script
        self.bearing = initial_bearing_state(cfg.camera, cfg.search_side)
        self.target = (0.0, 0.0)


class LiveSim:
    """Steps one scenario tick by tick; shared by episodes and live sessions.

    Target positions and bearings are resolved from the previous step's
    poses for every robot before any robot moves, so multi-robot scenarios
    are order-independent.
    """

    def __init__(self, bodies_genomes, scenario: Scenario, cfg: SimConfig,
                 seed: int = 0, controller_factory=cpg_tick_controller):
        if len(bodies_genomes) != len(scenario.slots):
            raise ValueError(
                f"scenario {scenario.name!r} has {len(scenario.slots)} robot slots, "
                f"got {len(bodies_genomes)} robots"
            )
        self.cfg = cfg
        self.scenario = scenario
        self.robots = [
            _RobotRuntime(body, genome, slot, cfg, controller_factory)
            for (body, genome), slot in zip(bodies_genomes, scenario.slots)
        ]
        self.t = 0.0
        self._rng = np.random.default_rng(seed)
        self._sense_all()

    def _sense_all(self):
        poses = [(r.pose.x, r.pose.y, r.pose.theta) for r in self.robots]
        for i, robot in enumerate(self.robots):
            robot.target = robot.script.position(self.t, poses, i)
            if self.cfg.hold_alpha_zero:
                robot.bearing = replace(robot.bearing, alpha_deg=0.0)
                continue
            tx, ty = robot.target
            dx, dy = tx - robot.pose.x, ty - robot.pose.y
            if dx * dx + dy * dy < 1e-18:
                detection = None  # sitting on the target: keep current behaviour
            else:
                detection = simulated_bearing(
                    robot.pose.x, robot.pose.y, robot.pose.theta, tx, ty, self.cfg.camera
                )
            if detection is not None and self.cfg.alpha_noise_std > 0.0:
                detection += self._rng.normal(0.0, self.cfg.alpha_noise_std)
                beta = self.cfg.camera.beta_deg
                detection = min(max(detection, -beta), beta)
            robot.bearing = bearing_policy(robot.bearing, detection, self.cfg.camera)

    def tick(self):
        """Advance every robot one control step; returns per-robot telemetry."""
        dt = self.cfg.dt_ctrl
        self.t += dt
        self._sense_all()
        out = []
        for robot in self.robots:
            alpha = robot.bearing.alpha_deg
            effective = alpha if self.cfg.steering_enabled else 0.0
            signals = robot.tick_signals(effective)
            rates = (signals - robot.prev_signals) / dt
            np.maximum(rates, 0.0, out=rates)
            thrusts = rates * np.abs(signals)
            robot.prev_signals = signals
            v, omega = body_twist(thrusts, robot.sides, self.cfg)
            robot.pose = step(robot.pose, v, omega, dt)
            out.append((robot.pose, alpha, v, omega, signals, robot.target))
        return out


def run_scenario_episode(bodies_genomes, scenario, cfg: SimConfig, seed: int = 0,
                         controller_factory=cpg_tick_controller):
    """Run a full episode and record one trace per robot."""
    sim = LiveSim(bodies_genomes, scenario, cfg, seed, controller_factory)
    n_steps = round(cfg.episode_duration / cfg.dt_ctrl)
    rows = n_steps + 1
    traces = []
    for robot in sim.robots:
        traces.append(
            SimTrace(
                robot=robot.body.name,
                t=np.empty(rows), x=np.empty(rows), y=np.empty(rows),
                theta=np.empty(rows), alpha=np.empty(rows),
                v=np.empty(rows), omega=np.empty(rows),
                target_x=np.empty(rows), target_y=np.empty(rows),
                signals=np.zeros((rows, len(robot.topology.joints))),
            )
        )
    for trace, robot in zip(traces, sim.robots):
        _record(trace, 0, 0.0, robot.pose, robot.bearing.alpha_deg, 0.0, 0.0,
                None, robot.target)
    for k in range(1, rows):
        t = k * cfg.dt_ctrl
        for trace, (pose, alpha, v, omega, signals, target) in zip(traces, sim.tick()):
            _record(trace, k, t, pose, alpha, v, omega, signals, target)
    for trace in traces:
        d = np.hypot(trace.x - trace.target_x, trace.y - trace.target_y)
        hits = np.flatnonzero(d <= cfg.capture_radius)
        trace.first_capture_t = float(trace.t[hits[0]]) if hits.size else None
    return traces


def _record(trace, k, t, pose, alpha, v, omega, signals, target):
    trace.t[k] = t
    trace.x[k] = pose.x
    trace.y[k] = pose.y
    trace.theta[k] = pose.theta
    trace.alpha[k] = alpha
    trace.v[k] = v
    trace.omega[k] = omega
    trace.target_x[k], trace.target_y[k] = target
    if signals is not None:
        trace.signals[k] = signals


def run_episode(body: BodyGraph, genome: CpgGenome, scenario: Scenario,
                cfg: SimConfig, seed: int = 0,
                controller_factory=cpg_tick_controller) -> SimTrace:
    """Single-robot episode; multi-slot scenarios reuse the same robot."""
    pairs = [(body, genome)] * len(scenario.slots)
    return run_scenario_episode(pairs, scenario, cfg, seed, controller_factory)[0]
