"""Experiment configuration and the learn / replay / compare workflows.

One JSON config file describes an experiment; command-line flags override
individual fields. Every workflow is reproducible: given the same config and
seed the emitted CSV and JSON files are byte-identical (timing measurements
are reported separately in the human-readable report, never in CSVs).
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import morphology
from .cpg import CpgGenome, SteeringParams, load_genome_file, save_genome
from .fitness import FitnessParams, directed_fitness, path_metrics
from .optim import BeaConfig, OptimizerTrace, benchmark, run_bea, run_bo, run_ea
from .sim import (
    Scenario,
    SimConfig,
    external_scenario,
    run_scenario_episode,
    scenario_preset,
    write_trajectory_csv,
)
from .vision import CameraModel


@dataclass
class ExperimentConfig:
    robot: str = "spider"  # preset name or path to a body JSON file
    scenario: str = "fixed_center"
    out_dir: str = "out"
    repeat: int = 1
    seed: int = 0
    sim: SimConfig = field(default_factory=SimConfig)
    fitness: FitnessParams = field(default_factory=FitnessParams)
    optimizer: BeaConfig = field(default_factory=BeaConfig)
    compare_robots: tuple[str, ...] = ("spider", "gecko", "baby")
    compare_rastrigin_dim: int = 10
    compare_seeds: int = 5
    workers: int = 2


def load_body_for(name_or_path: str) -> morphology.BodyGraph:
    if name_or_path in morphology.PRESET_NAMES:
        return morphology.preset(name_or_path)
    return morphology.load_body(name_or_path)


def _sim_config_from_dict(data: dict) -> SimConfig:
    camera = CameraModel(
        n_cols=data.pop("n_cols", CameraModel().n_cols),
        beta_deg=data.pop("beta_deg", CameraModel().beta_deg),
    )
    steering = SteeringParams(
        beta_deg=camera.beta_deg,
        exponent=data.pop("steering_exponent", SteeringParams().exponent),
    )
    return SimConfig(camera=camera, steering=steering, **data)


def _fitness_from_dict(data: dict) -> FitnessParams:
    kwargs = {}
    if "gamma_deg" in data:
        kwargs["gamma"] = math.radians(data.pop("gamma_deg"))
    if "delta_min_rad" in data:
        kwargs["delta_min"] = data.pop("delta_min_rad")
    kwargs.update(data)
    return FitnessParams(**kwargs)


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Config file plus overrides; flags win over file fields."""
    raw: dict = {}
    if path is not None:
        with open(path) as fh:
            raw = json.load(fh)
    if overrides:
        for key, value in overrides.items():
            if value is None:
                continue
            if key in ("sim", "fitness", "optimizer"):
                raw.setdefault(key, {}).update(value)
            else:
                raw[key] = value
    sim = _sim_config_from_dict(dict(raw.get("sim", {})))
    fitness = _fitness_from_dict(dict(raw.get("fitness", {})))
    optimizer = BeaConfig(**raw.get("optimizer", {}))
    keys = ("robot", "scenario", "out_dir", "repeat", "seed", "compare_robots",
            "compare_rastrigin_dim", "compare_seeds", "workers")
    top = {k: raw[k] for k in keys if k in raw}
    if "compare_robots" in top:
        top["compare_robots"] = tuple(top["compare_robots"])
    cfg = ExperimentConfig(sim=sim, fitness=fitness, optimizer=optimizer, **top)
    if "seed" in raw or (overrides or {}).get("seed") is not None:
        cfg.optimizer = replace(cfg.optimizer, seed=cfg.seed)
    return cfg


# --- objectives ---------------------------------------------------------------


def make_gait_objective(robot: str, sim: SimConfig, fitness: FitnessParams,
                        episode_seed: int = 0):
    """Straight-gait learning objective: bearing held at zero, score the path.

    Returns a closure mapping a weight vector to the directed-locomotion
    fitness of one episode, plus a stable hash identifying the objective.
    """
    body = load_body_for(robot)
    topology = morphology.cpg_topology(body)
    scenario = scenario_preset("fixed_center")
    learn_sim = replace(sim, hold_alpha_zero=True)

    def objective(weights) -> float:
        genome = CpgGenome.from_vector(topology, np.clip(weights, -1.0, 1.0))
        traces = run_scenario_episode([(body, genome)], scenario, learn_sim,
                                      seed=episode_seed)
        return directed_fitness(path_metrics(traces[0], fitness.gamma), fitness)

    spec = {
        "kind": "gait",
        "robot": body.name,
        "dimension": topology.genome_dimension,
        "dt_ctrl": learn_sim.dt_ctrl,
        "episode_duration": learn_sim.episode_duration,
        "c_v": learn_sim.c_v,
        "c_w": learn_sim.c_w,
        "gamma": fitness.gamma,
        "w": fitness.w,
        "delta_min": fitness.delta_min,
    }
    digest = hashlib.sha256(json.dumps(spec, sort_keys=True).encode()).hexdigest()[:16]
    return objective, topology.genome_dimension, digest


def make_benchmark_objective(name: str, dim: int):
    f = benchmark(name, dim)
    digest = hashlib.sha256(f"benchmark:{name}:{dim}".encode()).hexdigest()[:16]
    return (lambda x: -f(x)), dim, digest


# --- learn --------------------------------------------------------------------


def _learn_one(args):
    robot, sim, fitness, optimizer, seed, out_dir = args
    objective, dim, digest = make_gait_objective(robot, sim, fitness)
    cfg = replace(optimizer, seed=seed,
                  eval_time_s=sim.episode_duration)
    trace = run_bea(objective, dim, cfg)
    best = trace.best()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    robot_tag = Path(robot).stem
    genome_path = out / f"genome_{robot_tag}_seed{seed}.json"
    trace_path = out / f"learn_trace_{robot_tag}_seed{seed}.csv"
    save_genome(genome_path, robot_tag, best.params, fitness=best.value,
                seed=seed, optimizer="bea", evaluations=len(trace))
    trace.write_csv(trace_path)
    return str(genome_path), str(trace_path), best.value, digest


def cmd_learn(cfg: ExperimentConfig):
    """Learn straight gaits with the hybrid optimizer; one run per seed."""
    jobs = [
        (cfg.robot, cfg.sim, cfg.fitness, cfg.optimizer, cfg.seed + i, cfg.out_dir)
        for i in range(cfg.repeat)
    ]
    if len(jobs) > 1 and cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_learn_one, jobs))
    else:
        results = [_learn_one(job) for job in jobs]
    return results


# --- replay -------------------------------------------------------------------


def _target_path_csv(scenario: Scenario, sim: SimConfig, path: Path) -> None:
    script = scenario.slots[0].script
    n_steps = round(sim.episode_duration / sim.dt_ctrl)
    with open(path, "w") as fh:
        fh.write("t,x,y\n")
        for k in range(n_steps + 1):
            t = k * sim.dt_ctrl
            x, y = script.position(t, [], 0)
            fh.write(f"{t:.9g},{x:.9g},{y:.9g}\n")


def cmd_run_scenario(cfg: ExperimentConfig, genome_file: str,
                     genome_file_2: str | None = None,
                     robot_override: str | None = None):
    """Replay a learned gait with steering in the chosen scenario."""
    data = load_genome_file(genome_file)
    body = load_body_for(robot_override if robot_override else data["robot"])
    topology = morphology.cpg_topology(body)
    if len(data["weights"]) != topology.genome_dimension:
        raise ValueError(
            f"genome has {len(data['weights'])} weights, robot "
            f"{body.name!r} needs {topology.genome_dimension}"
        )
    genome = CpgGenome.from_vector(topology, data["weights"])
    if cfg.scenario == "external":
        scenario = external_scenario()
    else:
        scenario = scenario_preset(cfg.scenario)
    pairs = [(body, genome)]
    if len(scenario.slots) == 2:
        if genome_file_2 is not None:
            data2 = load_genome_file(genome_file_2)
            body2 = load_body_for(data2["robot"])
            topo2 = morphology.cpg_topology(body2)
            genome2 = CpgGenome.from_vector(topo2, data2["weights"])
            pairs = [(body, genome), (body2, genome2)]
        else:
            pairs = [(body, genome), (body, genome)]

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for rep in range(cfg.repeat):
        seed = cfg.seed + rep
        traces = run_scenario_episode(pairs, scenario, cfg.sim, seed=seed)
        for i, trace in enumerate(traces):
            suffix = f"_robot{i}" if len(traces) > 1 else ""
            path = out / f"traj_{cfg.scenario}{suffix}_seed{seed}.csv"
            write_trajectory_csv(trace, path)
            written.append(str(path))
        if cfg.scenario in ("moving", "double_moving"):
            tpath = out / f"target_{cfg.scenario}_seed{seed}.csv"
            _target_path_csv(scenario, cfg.sim, tpath)
            written.append(str(tpath))
    return written


# --- compare ------------------------------------------------------------------

_RUNNERS = {"bo": run_bo, "ea": run_ea, "bea": run_bea}


def _compare_one(args):
    objective_kind, objective_arg, method, seed, opt_cfg, sim, fitness = args
    if objective_kind == "robot":
        objective, dim, digest = make_gait_objective(objective_arg, sim, fitness)
        cfg = replace(opt_cfg, seed=seed, eval_time_s=sim.episode_duration)
    else:
        objective, dim, digest = make_benchmark_objective(objective_arg[0],
                                                          objective_arg[1])
        cfg = replace(opt_cfg, seed=seed)
    trace = _RUNNERS[method](objective, dim, cfg)
    best = trace.best_so_far()
    return {
        "objective": objective_arg if objective_kind == "robot" else objective_arg[0],
        "digest": digest,
        "method": method,
        "seed": seed,
        "best_curve": best,
        "final_best": float(best[-1]),
        "overhead": trace.overheads(),
        "t_wall_total": float(trace.records[-1].t_wall),
        "switch_at": cfg.switch_at if method == "bea" else None,
    }


def run_comparison(cfg: ExperimentConfig):
    """BO vs EA vs the hybrid on the robot objectives plus rastrigin."""
    objectives = [("robot", name) for name in cfg.compare_robots]
    objectives.append(("benchmark", ("rastrigin", cfg.compare_rastrigin_dim)))
    jobs = []
    for kind, arg in objectives:
        for method in ("bo", "ea", "bea"):
            for s in range(cfg.compare_seeds):
                jobs.append((kind, arg, method, cfg.seed + s, cfg.optimizer,
                             cfg.sim, cfg.fitness))
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_compare_one, jobs))
    else:
        results = [_compare_one(job) for job in jobs]
    return results, objectives


def _objective_label(arg) -> str:
    return arg if isinstance(arg, str) else arg[0]


def write_comparison_outputs(cfg: ExperimentConfig, results, objectives):
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digests = {}
    for r in results:
        digests[_label_of(r)] = r["digest"]

    curves_path = out / "compare_curves.csv"
    with open(curves_path, "w") as fh:
        for label in dict.fromkeys(_label_of(r) for r in results):
            fh.write(f"# objective_hash {label}={digests[label]}\n")
        fh.write("objective,method,eval,mean_best,std_best,switch\n")
        for kind, arg in objectives:
            label = _objective_label(arg)
            for method in ("bo", "ea", "bea"):
                sel = [r for r in results
                       if _label_of(r) == label and r["method"] == method]
                curves = np.vstack([r["best_curve"] for r in sel])
                mean = curves.mean(axis=0)
                std = curves.std(axis=0)
                switch = sel[0]["switch_at"]
                for i in range(curves.shape[1]):
                    flag = 1 if (switch is not None and i + 1 == switch) else 0
                    fh.write(f"{label},{method},{i + 1},{mean[i]:.9g},"
                             f"{std[i]:.9g},{flag}\n")

    report_path = out / "compare_report.csv"
    medians = {}
    with open(report_path, "w") as fh:
        for label, digest in digests.items():
            fh.write(f"# objective_hash {label}={digest}\n")
        fh.write("objective,method,final_best_median,ratio_bea_pct\n")
        for kind, arg in objectives:
            label = _objective_label(arg)
            for method in ("bo", "ea", "bea"):
                sel = [r["final_best"] for r in results
                       if _label_of(r) == label and r["method"] == method]
                medians[(label, method)] = float(np.median(sel))
            bea = medians[(label, "bea")]
            for method in ("bo", "ea", "bea"):
                m = medians[(label, method)]
                ratio = 100.0 * bea / m if m != 0 else math.nan
                fh.write(f"{label},{method},{medians[(label, method)]:.9g},"
                         f"{ratio:.9g}\n")

    text_path = out / "compare_report.txt"
    with open(text_path, "w") as fh:
        fh.write("optimizer comparison (median over "
                 f"{cfg.compare_seeds} seeds, budget {cfg.optimizer.budget}, "
                 f"switch at {cfg.optimizer.switch_at})\n")
        for label, digest in digests.items():
            fh.write(f"objective_hash {label}={digest}\n")
        fh.write("\n")
        header = (f"{'objective':<12} {'method':<6} {'best(median)':>14} "
                  f"{'BEA/x %':>9} {'overhead s':>11} {'wall s':>9}\n")
        fh.write(header)
        for kind, arg in objectives:
            label = _objective_label(arg)
            bea = medians[(label, "bea")]
            for method in ("bo", "ea", "bea"):
                sel = [r for r in results
                       if _label_of(r) == label and r["method"] == method]
                med = medians[(label, method)]
                ratio = 100.0 * bea / med if med != 0 else math.nan
                overhead = float(np.median([r["overhead"].sum() for r in sel]))
                wall = float(np.median([r["t_wall_total"] for r in sel]))
                fh.write(f"{label:<12} {method:<6} {med:>14.6g} {ratio:>9.1f} "
                         f"{overhead:>11.3f} {wall:>9.1f}\n")
    return str(curves_path), str(report_path), str(text_path)


def _label_of(result) -> str:
    return result["objective"] if isinstance(result["objective"], str) else result["objective"][0]


def cmd_compare(cfg: ExperimentConfig):
    results, objectives = run_comparison(cfg)
    return write_comparison_outputs(cfg, results, objectives)
