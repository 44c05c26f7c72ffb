import json
import math
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from modloco.cli import main
from modloco.cpg import load_genome_file
from modloco.experiments import (
    ExperimentConfig,
    cmd_learn,
    cmd_run_scenario,
    load_config,
    make_gait_objective,
)
from modloco.fitness import FitnessParams, directed_fitness, path_metrics
from modloco.optim import BeaConfig
from modloco.sim import SimConfig

TINY_OPT = dict(budget=30, switch_at=20, n_init=10, acq_candidates=64)


def tiny_config(tmp_path, **kw):
    cfg = ExperimentConfig(
        robot="gecko",
        out_dir=str(tmp_path / "out"),
        optimizer=BeaConfig(**TINY_OPT),
        sim=SimConfig(episode_duration=5.0),
        workers=1,
    )
    for key, value in kw.items():
        setattr(cfg, key, value)
    return cfg


def test_load_config_overrides(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({
        "robot": "baby",
        "seed": 3,
        "sim": {"episode_duration": 10.0, "c_v": 0.2, "beta_deg": 30.0},
        "fitness": {"gamma_deg": 90.0, "w": 0.02},
        "optimizer": {"budget": 100, "switch_at": 50, "n_init": 10},
    }))
    cfg = load_config(path, {"seed": 7, "optimizer": {"budget": 80}})
    assert cfg.robot == "baby"
    assert cfg.seed == 7  # flag beats file
    assert cfg.optimizer.seed == 7
    assert cfg.optimizer.budget == 80
    assert cfg.optimizer.switch_at == 50
    assert cfg.sim.episode_duration == 10.0
    assert cfg.sim.camera.beta_deg == 30.0
    assert cfg.fitness.gamma == pytest.approx(math.pi / 2)
    assert cfg.fitness.w == 0.02


def test_learn_smoke_run_writes_files(tmp_path):
    cfg = tiny_config(tmp_path)
    results = cmd_learn(cfg)
    (genome_path, trace_path, best, digest) = results[0]
    assert Path(genome_path).exists()
    assert Path(trace_path).exists()
    data = load_genome_file(genome_path)
    assert data["robot"] == "gecko"
    assert len(data["weights"]) == 13
    assert data["meta"]["optimizer"] == "bea"
    lines = Path(trace_path).read_text().splitlines()
    assert len(lines) == cfg.optimizer.budget + 1


def test_learn_reported_fitness_matches_replay(tmp_path):
    cfg = tiny_config(tmp_path)
    (genome_path, _, best, _digest) = cmd_learn(cfg)[0]
    data = load_genome_file(genome_path)
    objective, dim, _ = make_gait_objective("gecko", cfg.sim, cfg.fitness)
    replayed = objective(np.array(data["weights"]))
    assert replayed == pytest.approx(best, abs=1e-9)
    assert data["fitness"] == pytest.approx(best, rel=1e-12)


def test_learn_repeat_seeds_deterministic(tmp_path):
    cfg = tiny_config(tmp_path, repeat=2)
    results = cmd_learn(cfg)
    assert len(results) == 2
    again = cmd_learn(tiny_config(tmp_path, repeat=2, out_dir=str(tmp_path / "b")))
    assert results[0][2] == again[0][2]
    assert results[1][2] == again[1][2]


def test_run_scenario_outputs(tmp_path):
    cfg = tiny_config(tmp_path)
    (genome_path, *_rest) = cmd_learn(cfg)[0]
    replay = tiny_config(tmp_path, scenario="moving")
    written = cmd_run_scenario(replay, genome_path)
    names = [Path(p).name for p in written]
    assert any(n.startswith("traj_moving") for n in names)
    assert any(n.startswith("target_moving") for n in names)
    header = Path(written[0]).read_text().splitlines()[0]
    assert header == "t,x,y,theta,alpha,v,omega,target_x,target_y"


def test_run_scenario_double_moving_three_outputs(tmp_path):
    cfg = tiny_config(tmp_path)
    (genome_path, *_rest) = cmd_learn(cfg)[0]
    replay = tiny_config(tmp_path, scenario="double_moving")
    written = cmd_run_scenario(replay, genome_path)
    names = sorted(Path(p).name for p in written)
    assert len(written) == 3  # leader target + two robot paths
    assert any("robot0" in n for n in names)
    assert any("robot1" in n for n in names)
    assert any(n.startswith("target_") for n in names)


def test_run_scenario_rejects_mismatched_genome(tmp_path):
    cfg = tiny_config(tmp_path)
    (genome_path, *_rest) = cmd_learn(cfg)[0]
    replay = tiny_config(tmp_path, scenario="fixed_center")
    with pytest.raises(ValueError):
        cmd_run_scenario(replay, genome_path, robot_override="spider")


def test_cli_round_trip(tmp_path, capsys):
    out = tmp_path / "cli_out"
    rc = main([
        "learn", "--robot", "gecko", "--out", str(out), "--seed", "4",
        "--budget", "30", "--switch-at", "20", "--n-init", "10",
    ])
    assert rc == 0
    genomes = list(out.glob("genome_*.json"))
    assert len(genomes) == 1
    rc = main([
        "run-scenario", str(genomes[0]), "--scenario", "fixed_left",
        "--out", str(out), "--seed", "4",
    ])
    assert rc == 0
    assert list(out.glob("traj_fixed_left*.csv"))


def test_cli_rerun_is_byte_identical(tmp_path):
    args = [
        "learn", "--robot", "gecko", "--seed", "9",
        "--budget", "30", "--switch-at", "20", "--n-init", "10",
    ]
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    for name in ("genome_gecko_seed9.json", "learn_trace_gecko_seed9.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
