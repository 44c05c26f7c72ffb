"""Coupled sensory oscillators and the bearing-based steering law.

Each joint is driven by a two-neuron oscillator whose activations follow the
linear recurrence x += w_yx*y, y += w_xy*x (previous-step values on the right
hand side), with a fixed antisymmetric weight pair (0.5, -0.5). Coupled
joints additionally feed their x activations to each other through one
learned weight per coupling. The joint signal is tanh(w_out * x), scaled on
the turn side by the steering factor ((beta - |alpha|)/beta)**p.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .morphology import CpgTopology, Side

W_XY = 0.5
W_YX = -0.5
X0 = -math.sqrt(2.0) / 2.0
Y0 = math.sqrt(2.0) / 2.0
DEFAULT_STEERING_EXPONENT = 7.0


class GenomeShapeError(ValueError):
    """Weight vector length does not match the controller topology."""


@dataclass(frozen=True)
class SteeringParams:
    beta_deg: float = 31.1  # half field of view
    exponent: float = DEFAULT_STEERING_EXPONENT

    def __post_init__(self):
        if self.beta_deg <= 0 or self.exponent <= 0:
            raise ValueError("beta_deg and exponent must be positive")


@dataclass(frozen=True)
class CpgGenome:
    """Learnable weights: one output weight per joint, one per coupling."""

    w_out: np.ndarray
    w_conn: np.ndarray

    @staticmethod
    def from_vector(topology: CpgTopology, vector) -> "CpgGenome":
        vec = np.asarray(vector, dtype=float)
        n_joints = len(topology.joints)
        if vec.ndim != 1 or vec.size != topology.genome_dimension:
            raise GenomeShapeError(
                f"expected {topology.genome_dimension} weights, got {vec.size}"
            )
        if np.any(np.abs(vec) > 1.0):
            raise ValueError("weights must lie in [-1, 1]")
        return CpgGenome(w_out=vec[:n_joints].copy(), w_conn=vec[n_joints:].copy())

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.w_out, self.w_conn])


@dataclass
class ControllerState:
    topology: CpgTopology
    genome: CpgGenome
    x: np.ndarray
    y: np.ndarray
    coupling: np.ndarray  # symmetric joint-to-joint weight matrix
    renormalize: bool = False
    left_idx: np.ndarray = field(init=False, repr=False)
    right_idx: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        sides = [j.side for j in self.topology.joints]
        self.left_idx = np.flatnonzero([s is Side.LEFT for s in sides])
        self.right_idx = np.flatnonzero([s is Side.RIGHT for s in sides])


def init_controller(
    topology: CpgTopology, genome: CpgGenome, renormalize: bool = False
) -> ControllerState:
    """All oscillators start at the fixed point-symmetric activations."""
    n = len(topology.joints)
    if genome.w_out.size != n or genome.w_conn.size != len(topology.edges):
        raise GenomeShapeError(
            f"genome ({genome.w_out.size}+{genome.w_conn.size}) does not match "
            f"topology ({n}+{len(topology.edges)})"
        )
    coupling = np.zeros((n, n))
    for w, (i, j) in zip(genome.w_conn, topology.edge_index_pairs()):
        coupling[i, j] = w
        coupling[j, i] = w
    return ControllerState(
        topology=topology,
        genome=genome,
        x=np.full(n, X0),
        y=np.full(n, Y0),
        coupling=coupling,
        renormalize=renormalize,
    )


# The literal recurrence grows without bound; activations are saturated far
# beyond where tanh is already exactly +-1.0 so they stay finite forever.
ACTIVATION_LIMIT = 1e150


def step_network(state: ControllerState) -> ControllerState:
    """One simultaneous update of every oscillator (in place).

    With ``renormalize`` each oscillator's (x, y) pair is divided by the
    factor its own norm grew by during the step, so every pair keeps its
    initial norm: couplings shift phases but amplitudes stay faithful to the
    weights instead of squaring off. For an isolated oscillator the factor
    is exactly the sqrt(1.25) of the fixed weight pair. Without the flag the
    raw recurrence runs unbounded and only tanh bounds the outputs.
    """
    x_prev = state.x
    if state.renormalize:
        norm2_prev = x_prev * x_prev + state.y * state.y
    state.x = x_prev + W_YX * state.y + state.coupling @ x_prev
    state.y = state.y + W_XY * x_prev
    if state.renormalize:
        norm2_now = state.x * state.x + state.y * state.y
        safe = (norm2_now > 0.0) & (norm2_prev > 0.0)
        growth = np.where(safe, np.sqrt(norm2_now / np.where(safe, norm2_prev, 1.0)), 1.0)
        state.x /= growth
        state.y /= growth
    else:
        np.clip(state.x, -ACTIVATION_LIMIT, ACTIVATION_LIMIT, out=state.x)
        np.clip(state.y, -ACTIVATION_LIMIT, ACTIVATION_LIMIT, out=state.y)
    return state


def output(x: float, w_out: float) -> float:
    """Joint drive before steering; bounded to (-1, 1)."""
    return math.tanh(w_out * x)


def steering_factor(alpha_deg: float, params: SteeringParams) -> float:
    """Down-scaling applied to the turn side; 1 straight ahead, 0 at the FOV edge."""
    a = abs(alpha_deg)
    if a > params.beta_deg:
        raise ValueError(f"bearing {alpha_deg} outside half FOV {params.beta_deg}")
    return ((params.beta_deg - a) / params.beta_deg) ** params.exponent


def apply_steering(out: float, side: Side, alpha_deg: float, params: SteeringParams) -> float:
    """Scale one joint's drive by its side and the target bearing."""
    if side is Side.MIDDLE:
        return out
    if side is Side.LEFT:
        return steering_factor(alpha_deg, params) * out if alpha_deg < 0 else out
    return out if alpha_deg < 0 else steering_factor(alpha_deg, params) * out


def controller_tick(
    state: ControllerState, alpha_deg: float, params: SteeringParams
) -> np.ndarray:
    """Advance the network one step and emit the steered per-joint signals."""
    step_network(state)
    signals = np.tanh(state.genome.w_out * state.x)
    if alpha_deg != 0.0:
        d = steering_factor(alpha_deg, params)
        idx = state.left_idx if alpha_deg < 0 else state.right_idx
        signals[idx] *= d
    return signals


def save_genome(
    path: str | Path,
    robot: str,
    weights,
    fitness: float | None = None,
    seed: int = 0,
    optimizer: str = "",
    evaluations: int = 0,
) -> None:
    data = {
        "robot": robot,
        "weights": [float(w) for w in weights],
        "fitness": None if fitness is None else float(fitness),
        "meta": {"seed": seed, "optimizer": optimizer, "evaluations": evaluations},
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def load_genome_file(path: str | Path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    for key in ("robot", "weights"):
        if key not in data:
            raise ValueError(f"genome file missing {key!r}")
    return data
