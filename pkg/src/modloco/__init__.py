"""Targeted locomotion toolkit for modular robots.

Steerable oscillator controllers for arbitrary tree-shaped modular bodies,
a deterministic planar surrogate simulator, a directed-locomotion fitness,
and a hybrid Bayesian/evolutionary weight learner, wired together by a CLI
and a live session server for interactive target chasing.
"""

__version__ = "0.1.0"

from .morphology import (  # noqa: F401
    BodyGraph,
    CpgTopology,
    JointInfo,
    ModuleKind,
    Side,
    assign_coordinates,
    cpg_topology,
    load_body,
    preset,
    validate,
)
