"""Command-line entry point.

Subcommands: learn, run-scenario, compare, serve, inspect-robot. A JSON
config file supplies defaults; flags override individual fields.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, morphology
from .experiments import cmd_compare, cmd_learn, cmd_run_scenario, load_config


def _add_common(parser):
    parser.add_argument("--config", help="experiment config JSON file")
    parser.add_argument("--seed", type=int, help="base random seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--robot", help="preset name or body JSON file")


def _overrides(args) -> dict:
    over = {
        "seed": getattr(args, "seed", None),
        "out_dir": getattr(args, "out", None),
        "robot": getattr(args, "robot", None),
        "scenario": getattr(args, "scenario", None),
        "repeat": getattr(args, "repeat", None),
    }
    optimizer = {}
    for key in ("budget", "switch_at", "n_init"):
        value = getattr(args, key, None)
        if value is not None:
            optimizer[key] = value
    if optimizer:
        over["optimizer"] = optimizer
    return over


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modloco",
        description="Targeted locomotion for modular robots: learn gaits, "
        "replay steering scenarios, compare optimizers, serve live sessions.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a straight gait for one robot")
    _add_common(p)
    p.add_argument("--budget", type=int, help="total evaluations")
    p.add_argument("--switch-at", dest="switch_at", type=int)
    p.add_argument("--n-init", dest="n_init", type=int)
    p.add_argument("--repeat", type=int, help="independent runs (seeds seed..seed+n-1)")

    p = sub.add_parser("run-scenario", help="replay a learned gait with steering")
    _add_common(p)
    p.add_argument("genome", help="genome JSON file")
    p.add_argument("--scenario", choices=("fixed_left", "fixed_center",
                                          "fixed_right", "moving",
                                          "double_moving"))
    p.add_argument("--genome2", help="second robot's genome for double_moving")
    p.add_argument("--repeat", type=int)

    p = sub.add_parser("compare", help="run BO, EA and the hybrid side by side")
    _add_common(p)
    p.add_argument("--budget", type=int)
    p.add_argument("--switch-at", dest="switch_at", type=int)

    p = sub.add_parser("serve", help="serve the interactive target-chasing UI")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--genome", help="genome JSON to load into new sessions")

    p = sub.add_parser("inspect-robot", help="print a robot's joints and topology")
    _add_common(p)
    p.add_argument("--json", action="store_true", dest="as_json")
    return parser


def cmd_inspect_robot(robot: str, as_json: bool) -> str:
    from .experiments import load_body_for

    body = load_body_for(robot)
    topo = morphology.cpg_topology(body)
    if as_json:
        payload = {
            "name": body.name,
            "joints": [
                {"id": j.joint_id, "coord": list(j.coord), "side": j.side.value}
                for j in topo.joints
            ],
            "couplings": [list(e) for e in topo.edges],
            "genome_dimension": topo.genome_dimension,
        }
        return json.dumps(payload, indent=2)
    lines = [
        f"robot: {body.name}",
        f"modules: {len(body.modules)}  joints: {len(topo.joints)}  "
        f"couplings: {len(topo.edges)}  genome dimension: {topo.genome_dimension}",
        "joints (east-west, north-south):",
    ]
    for j in topo.joints:
        lines.append(f"  {j.joint_id:<10} at {j.coord!s:<9} {j.side.value}")
    lines.append("couplings:")
    for a, b in topo.edges:
        lines.append(f"  {a} -- {b}")
    return "\n".join(lines)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "inspect-robot":
        print(cmd_inspect_robot(args.robot or "spider", args.as_json))
        return 0

    cfg = load_config(args.config, _overrides(args))
    if args.command == "learn":
        results = cmd_learn(cfg)
        for genome_path, trace_path, best, digest in results:
            print(f"best fitness {best:.6g} (objective {digest})")
            print(f"  genome: {genome_path}")
            print(f"  trace:  {trace_path}")
        return 0
    if args.command == "run-scenario":
        written = cmd_run_scenario(cfg, args.genome, args.genome2,
                                   robot_override=args.robot)
        for path in written:
            print(path)
        return 0
    if args.command == "compare":
        for path in cmd_compare(cfg):
            print(path)
        return 0
    if args.command == "serve":
        from .server import serve

        serve(cfg, host=args.host, port=args.port, genome_file=args.genome)
        return 0
    return 1


if __name__ == "__main__":
    sys.exit(main())
