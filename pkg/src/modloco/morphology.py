"""Modular robot bodies on a planar grid.

A body is a tree of modules rooted at the single core. The core sits at grid
coordinate (0, 0) and the camera direction defines north; attaching a module
to a face displaces it one grid unit along that face. A joint west of the
core's north-south axis is a left joint, east is right, on the axis is
middle. Joints whose tree path contains no other joint are coupled in the
oscillator network, so the controller weight vector has one entry per joint
plus one per coupling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path


class ModuleKind(str, Enum):
    CORE = "core"
    BRICK = "brick"
    JOINT = "joint"


class Side(str, Enum):
    LEFT = "left"
    MIDDLE = "middle"
    RIGHT = "right"


# Face -> (east-west, north-south) grid displacement. North is the camera axis.
FACE_STEPS = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}

PRESET_NAMES = ("spider", "gecko", "baby")


class MalformedBodyError(ValueError):
    """The body violates a structural invariant (see ``validate``)."""


class UnknownPresetError(KeyError):
    """No preset body with the requested name."""


@dataclass(frozen=True)
class Module:
    id: str
    kind: ModuleKind


@dataclass(frozen=True)
class Attachment:
    parent: str
    child: str
    face: str  # one of N/E/S/W


@dataclass(frozen=True)
class BodyGraph:
    name: str
    modules: tuple[Module, ...]
    attachments: tuple[Attachment, ...]

    def module_by_id(self) -> dict[str, Module]:
        return {m.id: m for m in self.modules}

    def joint_ids(self) -> list[str]:
        return [m.id for m in self.modules if m.kind is ModuleKind.JOINT]


@dataclass(frozen=True)
class JointInfo:
    joint_id: str
    coord: tuple[int, int]  # (east-west, north-south)
    side: Side


@dataclass(frozen=True)
class CpgTopology:
    joints: tuple[JointInfo, ...]
    edges: tuple[tuple[str, str], ...]  # unordered couplings, stored as id pairs

    @property
    def genome_dimension(self) -> int:
        return len(self.joints) + len(self.edges)

    def joint_index(self) -> dict[str, int]:
        return {j.joint_id: i for i, j in enumerate(self.joints)}

    def edge_index_pairs(self) -> list[tuple[int, int]]:
        idx = self.joint_index()
        return [(idx[a], idx[b]) for a, b in self.edges]


def side_of(coord: tuple[int, int]) -> Side:
    if coord[0] < 0:
        return Side.LEFT
    if coord[0] > 0:
        return Side.RIGHT
    return Side.MIDDLE


def validate(body: BodyGraph) -> list[str]:
    """Return all structural violations; an empty list means the body is usable."""
    violations = []
    ids = [m.id for m in body.modules]
    if len(set(ids)) != len(ids):
        violations.append("duplicate-module-id")
    cores = [m for m in body.modules if m.kind is ModuleKind.CORE]
    if len(cores) == 0:
        violations.append("missing-core")
    elif len(cores) > 1:
        violations.append("duplicate-core")

    known = set(ids)
    used_faces: set[tuple[str, str]] = set()
    parent_of: dict[str, str] = {}
    for att in body.attachments:
        if att.parent not in known or att.child not in known:
            violations.append("dangling-attachment")
            continue
        if att.face not in FACE_STEPS:
            violations.append("unknown-face")
            continue
        if (att.parent, att.face) in used_faces:
            violations.append("face-reuse")
        used_faces.add((att.parent, att.face))
        if att.child in parent_of:
            violations.append("multiple-parents")
        parent_of[att.child] = att.parent

    if violations:
        return violations

    # Tree rooted at the core: every non-core module reachable, no cycles.
    root = cores[0].id
    if root in parent_of:
        violations.append("core-has-parent")
    children: dict[str, list[str]] = {m.id: [] for m in body.modules}
    for child, parent in parent_of.items():
        children[parent].append(child)
    seen = set()
    stack = [root]
    while stack:
        node = stack.pop()
        if node in seen:
            violations.append("cycle")
            return violations
        seen.add(node)
        stack.extend(children[node])
    if seen != known:
        violations.append("disconnected")
        return violations

    try:
        assign_coordinates(body)
    except MalformedBodyError:
        violations.append("coordinate-collision")
    return violations


def _all_coordinates(body: BodyGraph) -> dict[str, tuple[int, int]]:
    root = next(m.id for m in body.modules if m.kind is ModuleKind.CORE)
    children: dict[str, list[Attachment]] = {m.id: [] for m in body.modules}
    for att in body.attachments:
        children[att.parent].append(att)
    coords = {root: (0, 0)}
    occupied = {(0, 0): root}
    stack = [root]
    while stack:
        node = stack.pop()
        cx, cy = coords[node]
        for att in children[node]:
            dx, dy = FACE_STEPS[att.face]
            pos = (cx + dx, cy + dy)
            if pos in occupied:
                raise MalformedBodyError(
                    f"modules {occupied[pos]!r} and {att.child!r} collide at {pos}"
                )
            coords[att.child] = pos
            occupied[pos] = att.child
            stack.append(att.child)
    return coords


def assign_coordinates(body: BodyGraph) -> dict[str, tuple[int, int]]:
    """Grid coordinates of every joint, core at the origin, camera axis = north."""
    coords = _all_coordinates(body)
    kinds = body.module_by_id()
    return {mid: c for mid, c in coords.items() if kinds[mid].kind is ModuleKind.JOINT}


def cpg_topology(body: BodyGraph) -> CpgTopology:
    """Joints in canonical order plus the couplings between nearest joints.

    Two joints are coupled when the tree path between them passes through no
    other joint. Joints are ordered by coordinate then id so weight vectors
    are portable across runs.
    """
    coords = assign_coordinates(body)
    kinds = body.module_by_id()

    adjacency: dict[str, list[str]] = {m.id: [] for m in body.modules}
    for att in body.attachments:
        adjacency[att.parent].append(att.child)
        adjacency[att.child].append(att.parent)

    order = sorted(coords, key=lambda mid: (coords[mid], mid))
    joints = tuple(JointInfo(mid, coords[mid], side_of(coords[mid])) for mid in order)
    rank = {mid: i for i, mid in enumerate(order)}

    edges = set()
    for start in order:
        # Flood out from each joint, stopping at the first joint reached.
        stack = list(adjacency[start])
        seen = {start}
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            if kinds[node].kind is ModuleKind.JOINT:
                pair = (start, node) if rank[start] < rank[node] else (node, start)
                edges.add(pair)
                continue
            stack.extend(adjacency[node])
    ordered_edges = tuple(sorted(edges, key=lambda e: (rank[e[0]], rank[e[1]])))
    return CpgTopology(joints=joints, edges=ordered_edges)


def body_to_dict(body: BodyGraph) -> dict:
    return {
        "name": body.name,
        "modules": [{"id": m.id, "kind": m.kind.value} for m in body.modules],
        "attachments": [
            {"parent": a.parent, "child": a.child, "face": a.face}
            for a in body.attachments
        ],
    }


def body_from_dict(data: dict) -> BodyGraph:
    modules = tuple(Module(m["id"], ModuleKind(m["kind"])) for m in data["modules"])
    attachments = tuple(
        Attachment(a["parent"], a["child"], a["face"]) for a in data["attachments"]
    )
    return BodyGraph(name=data["name"], modules=modules, attachments=attachments)


def load_body(path: str | Path) -> BodyGraph:
    with open(path) as fh:
        return body_from_dict(json.load(fh))


def save_body(body: BodyGraph, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(body_to_dict(body), fh, indent=2)
        fh.write("\n")


def preset(name: str) -> BodyGraph:
    """One of the three built-in robots: spider, gecko, or baby."""
    if name not in PRESET_NAMES:
        raise UnknownPresetError(name)
    text = resources.files("modloco.presets").joinpath(f"{name}.json").read_text()
    return body_from_dict(json.loads(text))


def mirror_east_west(body: BodyGraph) -> BodyGraph:
    """Reflect the body across the north-south axis (left and right swap)."""
    flipped = {"E": "W", "W": "E"}
    attachments = tuple(
        Attachment(a.parent, a.child, flipped.get(a.face, a.face))
        for a in body.attachments
    )
    return BodyGraph(name=body.name + "-mirrored", modules=body.modules,
                     attachments=attachments)
