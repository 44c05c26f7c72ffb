"""Hybrid Bayesian/evolutionary optimizer over [-1, 1]^d, plus baselines.

The hybrid runs Gaussian-process optimization while its bookkeeping is cheap,
then hands the search to an evolution strategy seeded with cluster
representatives of the best points found so far. The switch point is fixed
by configuration; a gain monitor (best objective improvement per unit time)
controls the strategy's global mutation step.

Maximization is the native convention; benchmark functions are minimized by
negating them. All randomness flows through named, non-overlapping seed
streams so runs are reproducible and the three runners never share draws.
Recorded wall-clock (`t_wall`) is a virtual clock that charges a fixed
modeled duration per evaluation, which keeps traces byte-reproducible; the
separately measured `overhead_s` field holds real time spent choosing each
point.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import solve_triangular
from scipy.spatial.distance import cdist

_SQRT5 = math.sqrt(5.0)

# runner ids keep the random streams of the three optimizers disjoint
_STREAM_BO = 1
_STREAM_EA = 2
_STREAM_BEA = 3


class GpFitError(RuntimeError):
    """Covariance stayed non positive definite after jitter escalation."""


class UndefinedGainError(ValueError):
    """Gain requested over an empty or zero-length time window."""


@dataclass
class ObjectiveRecord:
    params: np.ndarray
    value: float
    t_wall: float  # cumulative virtual seconds at completion
    stage: str  # "BO" or "EA"
    overhead_s: float = 0.0  # measured seconds spent choosing this point


@dataclass
class OptimizerTrace:
    records: list[ObjectiveRecord] = field(default_factory=list)
    transfer_overhead_s: float = 0.0

    def __len__(self):
        return len(self.records)

    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.records])

    def best_so_far(self) -> np.ndarray:
        return np.maximum.accumulate(self.values())

    def best(self) -> ObjectiveRecord:
        return max(self.records, key=lambda r: r.value)

    def stage_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for r in self.records:
            counts[r.stage] = counts.get(r.stage, 0) + 1
        return counts

    def overheads(self) -> np.ndarray:
        return np.array([r.overhead_s for r in self.records])

    def write_csv(self, path: str | Path) -> None:
        best = self.best_so_far()
        with open(path, "w") as fh:
            fh.write("eval,stage,value,best_so_far,t_wall\n")
            for i, rec in enumerate(self.records):
                fh.write(
                    f"{i + 1},{rec.stage},{rec.value:.9g},{best[i]:.9g},{rec.t_wall:.9g}\n"
                )


@dataclass(frozen=True)
class BeaConfig:
    budget: int = 1500
    switch_at: int = 300
    n_init: int = 50
    kappa: float = 2.0
    acq_candidates: int = 2000
    seed: int = 0
    theta: float = 0.2
    jitter: float = 1e-6
    signal_variance: float = 1.0
    pop_size: int = 10
    tournament: int = 2
    mutation_rate: float = 0.8
    sigma_init: float = 0.1
    sigma_min: float = 1e-3
    sigma_max: float = 0.5
    sigma_up: float = 1.5
    sigma_down: float = 0.8
    gain_window: int = 10
    gain_low_frac: float = 0.1
    gain_high_frac: float = 0.5
    eval_time_s: float = 1.0  # virtual duration charged per evaluation
    adaptive_switch: bool = False
    crossover_rate: float = 0.0

    def __post_init__(self):
        if not 0 < self.n_init <= self.switch_at <= self.budget:
            raise ValueError("need 0 < n_init <= switch_at <= budget")
        if self.pop_size < 2 or self.tournament < 1:
            raise ValueError("population needs >= 2, tournament >= 1")
        if not 0.0 < self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in (0, 1]")
        if not 0 < self.sigma_min <= self.sigma_init <= self.sigma_max:
            raise ValueError("need sigma_min <= sigma_init <= sigma_max")


# --- Gaussian process ---------------------------------------------------------


def matern52(r, theta: float, signal_variance: float = 1.0):
    """Matern 5/2 covariance of points at distance r."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    s = np.asarray(r, dtype=float) * (_SQRT5 / theta)
    return signal_variance * (1.0 + s + s * s / 3.0) * np.exp(-s)


class GpModel:
    """Fixed-hyperparameter GP regressor with a Matern 5/2 kernel.

    Targets are standardized internally (empirical mean and scale), which
    keeps the acquisition's exploit/explore balance independent of the
    objective's offset and units. `fit` factors the full covariance;
    `update` appends one observation by extending the Cholesky factor in
    place (identical posterior, quadratic instead of cubic cost), falling
    back to a full refit if the appended row breaks positive definiteness.
    """

    def __init__(self, theta: float = 0.2, jitter: float = 1e-6,
                 signal_variance: float = 1.0):
        self.theta = theta
        self.jitter = jitter
        self.signal_variance = signal_variance
        self._n = 0
        self._x = None  # growing row buffer
        self._lower = None  # growing Cholesky buffer
        self._lower32 = None  # single-precision mirror for candidate scoring
        self._x32 = None
        self._y = None
        self._y_mean = 0.0
        self._y_scale = 1.0
        self._alpha = None  # exact solve against standardized targets (lazy)
        self._alpha_dirty = True
        self._alpha32 = None
        self._scratch: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    @property
    def n_train(self) -> int:
        return self._n

    @property
    def x_train(self) -> np.ndarray | None:
        return None if self._n == 0 else self._x[: self._n]

    @property
    def y_train(self) -> np.ndarray | None:
        return None if self._n == 0 else self._y[: self._n]

    def _ensure_capacity(self, n: int, d: int) -> None:
        cap = 0 if self._x is None else len(self._x)
        if n <= cap:
            return
        new_cap = max(2 * cap, n, 64)
        x = np.zeros((new_cap, d))
        x32 = np.zeros((new_cap, d), dtype=np.float32)
        lower = np.zeros((new_cap, new_cap))
        lower32 = np.zeros((new_cap, new_cap), dtype=np.float32)
        y = np.zeros(new_cap)
        if self._n:
            x[: self._n] = self._x[: self._n]
            x32[: self._n] = self._x32[: self._n]
            lower[: self._n, : self._n] = self._lower[: self._n, : self._n]
            lower32[: self._n, : self._n] = self._lower32[: self._n, : self._n]
            y[: self._n] = self._y[: self._n]
        self._x, self._x32, self._lower, self._lower32, self._y = (
            x, x32, lower, lower32, y,
        )
        self._scratch.clear()

    def _refresh_target_stats(self):
        y = self._y[: self._n]
        self._y_mean = float(y.mean())
        scale = float(y.std())
        self._y_scale = scale if scale > 1e-12 else 1.0
        z = ((y - self._y_mean) / self._y_scale).astype(np.float32)
        n = self._n
        z = solve_triangular(self._lower32[:n, :n], z, lower=True,
                             check_finite=False)
        self._alpha32 = solve_triangular(self._lower32[:n, :n].T, z, lower=False,
                                         check_finite=False)
        self._alpha_dirty = True

    def fit(self, x: np.ndarray, y: np.ndarray) -> "GpModel":
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.asarray(y, dtype=float)
        if len(x) == 0:
            self._n = 0
            self._alpha = None
            self._alpha_dirty = True
            return self
        base = matern52(cdist(x, x), self.theta, self.signal_variance)
        jitter = self.jitter
        for _ in range(6):
            kern = base.copy()
            kern[np.diag_indices_from(kern)] += jitter
            try:
                lower = np.linalg.cholesky(kern)
                break
            except np.linalg.LinAlgError:
                jitter *= 10.0
        else:
            raise GpFitError(f"covariance not PD up to jitter {jitter:g}")
        n, d = x.shape
        self._ensure_capacity(n, d)
        self._n = n
        self._x[:n] = x
        self._x32[:n] = x
        self._y[:n] = y
        self._lower[:n, :n] = lower
        self._lower32[:n, :n] = lower
        self._refresh_target_stats()
        return self

    def update(self, x_new: np.ndarray, y_new: float) -> "GpModel":
        """Append one observation, extending the Cholesky factor."""
        x_new = np.asarray(x_new, dtype=float).reshape(-1)
        if self._n == 0:
            return self.fit(x_new.reshape(1, -1), np.array([float(y_new)]))
        n = self._n
        self._ensure_capacity(n + 1, x_new.size)
        lower = self._lower
        k_vec = matern52(
            cdist(x_new.reshape(1, -1), self._x[:n])[0], self.theta,
            self.signal_variance,
        )
        w = solve_triangular(lower[:n, :n], k_vec, lower=True,
                             check_finite=False)
        pivot2 = self.signal_variance + self.jitter - float(w @ w)
        if pivot2 <= 1e-12:
            # near-duplicate point: rebuild from scratch with jitter escalation
            x_all = np.vstack([self._x[:n], x_new])
            y_all = np.append(self._y[:n], float(y_new))
            return self.fit(x_all, y_all)
        lower[n, :n] = w
        lower[n, n] = math.sqrt(pivot2)
        self._lower32[n, : n + 1] = lower[n, : n + 1]
        self._x[n] = x_new
        self._x32[n] = x_new
        self._y[n] = float(y_new)
        self._n = n + 1
        self._refresh_target_stats()
        return self

    def _exact_alpha(self) -> np.ndarray:
        if self._alpha_dirty:
            n = self._n
            lower = self._lower[:n, :n]
            resid = (self._y[:n] - self._y_mean) / self._y_scale
            z = solve_triangular(lower, resid, lower=True, check_finite=False)
            self._alpha = solve_triangular(lower.T, z, lower=False,
                                           check_finite=False)
            self._alpha_dirty = False
        return self._alpha

    def posterior(self, xq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean and variance at query rows; prior when unfitted.

        Returned in the raw target units (standardization undone).
        """
        xq = np.atleast_2d(np.asarray(xq, dtype=float))
        if self._n == 0:
            return np.zeros(len(xq)), np.full(len(xq), self.signal_variance)
        ks = matern52(cdist(xq, self._x[: self._n]), self.theta, self.signal_variance)
        mu = self._y_mean + self._y_scale * (ks @ self._exact_alpha())
        v = solve_triangular(self._lower[: self._n, : self._n], ks.T, lower=True)
        var = self.signal_variance - np.einsum("ij,ij->j", v, v)
        return mu, self._y_scale**2 * np.maximum(var, 0.0)

    def _scratch_for(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        if m not in self._scratch:
            cap = len(self._x)
            self._scratch[m] = (
                np.empty((cap, m), dtype=np.float32),
                np.empty((cap, m), dtype=np.float32),
            )
        return self._scratch[m]

    def _candidate_kernel_and_mean(self, cands: np.ndarray):
        """Standardized-space candidate kernel and posterior mean, f32."""
        n, m = self._n, len(cands)
        ks_buf, poly_buf = self._scratch_for(m)
        ks, poly = ks_buf[:n], poly_buf[:n]
        c32 = cands.astype(np.float32)
        x32 = self._x32[:n]
        np.dot(x32, c32.T, out=ks)
        ks *= np.float32(-2.0)
        ks += np.einsum("ij,ij->i", x32, x32)[:, None]
        ks += np.einsum("ij,ij->i", c32, c32)[None, :]
        np.maximum(ks, 0.0, out=ks)
        np.sqrt(ks, out=ks)
        ks *= np.float32(_SQRT5 / self.theta)
        np.multiply(ks, ks, out=poly)
        poly *= np.float32(1.0 / 3.0)
        poly += ks
        poly += np.float32(1.0)
        np.negative(ks, out=ks)
        np.exp(ks, out=ks)
        ks *= poly
        ks *= np.float32(self.signal_variance)
        return ks, self._alpha32 @ ks

    def ucb_argmax(self, cands: np.ndarray, kappa: float) -> int:
        """Index of the candidate maximizing mean + kappa * std.

        Scoring runs in single precision on preallocated buffers. The
        variance solve only runs for candidates close enough to the data to
        matter: the smallest covariance eigenvalue is at least the jitter,
        so a candidate whose kernel-vector norm is tiny has a posterior std
        that rounds to the prior std in single precision; those score as
        mean + kappa * prior std, which is what the solve would return.
        Ties resolve to the lowest candidate index.
        """
        from scipy.linalg.blas import strsm

        n = self._n
        if n == 0:
            return 0
        ks, mu = self._candidate_kernel_and_mean(cands)
        prior_std = np.float32(math.sqrt(self.signal_variance))
        kappa32 = np.float32(kappa)
        scores = mu + kappa32 * prior_std
        knorm2 = np.einsum("ij,ij->j", ks, ks)
        # ||v||^2 <= ||k||^2 / lambda_min <= ||k||^2 / jitter; below half an
        # ulp of the prior variance the std is exactly the prior in float32.
        threshold = 0.25 * np.finfo(np.float32).eps * self.signal_variance * self.jitter
        solve_idx = np.flatnonzero(knorm2 >= threshold)
        if solve_idx.size > len(cands) // 2:
            # dense case: solve every column in place; ks.T is F-contiguous
            # so BLAS runs X op(L)^-1 = ks.T without copying.
            vt = strsm(1.0, self._lower32[:n, :n], ks.T, side=1, lower=1,
                       trans_a=1, overwrite_b=1)
            var = self.signal_variance - np.einsum("ij,ij->i", vt, vt)
            np.maximum(var, 0.0, out=var)
            scores = mu + kappa32 * np.sqrt(var.astype(np.float32))
        elif solve_idx.size:
            rhs = np.asfortranarray(ks[:, solve_idx])
            vt = strsm(1.0, self._lower32[:n, :n], rhs.T, side=1, lower=1,
                       trans_a=1, overwrite_b=1)
            var = self.signal_variance - np.einsum("ij,ij->i", vt, vt)
            np.maximum(var, 0.0, out=var)
            scores[solve_idx] = mu[solve_idx] + kappa32 * np.sqrt(
                var.astype(np.float32))
        return int(np.argmax(scores))


def gp_posterior(model: GpModel, x) -> tuple[float, float]:
    """Posterior mean and variance at a single point."""
    mu, var = model.posterior(np.asarray(x, dtype=float).reshape(1, -1))
    return float(mu[0]), float(var[0])


def latin_hypercube(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """n stratified points in [-1, 1]^d."""
    strata = np.tile(np.arange(n, dtype=float), (d, 1))
    strata = rng.permuted(strata, axis=1).T
    return 2.0 * (strata + rng.uniform(0.0, 1.0, (n, d))) / n - 1.0


def propose_next(model: GpModel, d: int, cfg: BeaConfig,
                 rng: np.random.Generator) -> np.ndarray:
    """Argmax of mean + kappa * std over seeded uniform candidates.

    Ties resolve to the lowest candidate index; with no training data that
    makes the first candidate the pick.
    """
    cands = rng.uniform(-1.0, 1.0, (cfg.acq_candidates, d))
    if model.n_train == 0:
        return cands[0]
    return cands[model.ucb_argmax(cands, cfg.kappa)]


# --- gain monitor -------------------------------------------------------------


def gain(window) -> float:
    """Best-objective improvement per unit time over (best_so_far, t) pairs."""
    pairs = list(window)
    if len(pairs) < 2:
        raise UndefinedGainError("need at least two records")
    f0, t0 = pairs[0]
    f1, t1 = pairs[-1]
    if t1 <= t0:
        raise UndefinedGainError("zero time span")
    return (f1 - f0) / (t1 - t0)


# --- population transfer ------------------------------------------------------


def _kmeans(points: np.ndarray, k: int, rng: np.random.Generator,
            iters: int = 50) -> np.ndarray:
    """Lloyd's algorithm with k-means++ seeding; returns labels."""
    n = len(points)
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            centers[c:] = centers[0]
            break
        centers[c] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((points - centers[c]) ** 2, axis=1))
    labels = np.argmin(cdist(points, centers), axis=1)
    for _ in range(iters):
        for c in range(k):
            members = points[labels == c]
            if len(members):
                centers[c] = members.mean(axis=0)
        new_labels = np.argmin(cdist(points, centers), axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels


def transfer_population(records, k: int, rng: np.random.Generator):
    """Cluster the top half by value and take each cluster's best record.

    Empty clusters are backfilled with the next-best records not already
    selected, so exactly k seeds come back.
    """
    if len(records) < 2 * k:
        raise ValueError(f"need at least {2 * k} records, got {len(records)}")
    ranked = sorted(range(len(records)), key=lambda i: (-records[i].value, i))
    top = ranked[: max(k, len(records) // 2)]
    points = np.vstack([records[i].params for i in top])
    labels = _kmeans(points, k, rng)
    chosen: list[int] = []
    for c in range(k):
        members = [i for i, lab in zip(top, labels) if lab == c]
        if members:
            chosen.append(min(members, key=lambda i: (-records[i].value, i)))
    taken = set(chosen)
    for i in ranked:
        if len(chosen) >= k:
            break
        if i not in taken:
            chosen.append(i)
            taken.add(i)
    return [records[i] for i in chosen[:k]]


# --- evolution strategy -------------------------------------------------------


@dataclass
class EsState:
    population: list[tuple[np.ndarray, float]]
    sigma: float
    gain_window: deque = field(default_factory=deque)
    gain_history: list[float] = field(default_factory=list)
    generation: int = 0


def _tournament(state: EsState, cfg: BeaConfig, rng: np.random.Generator):
    idx = rng.choice(len(state.population), size=cfg.tournament, replace=False)
    best = max(idx, key=lambda i: state.population[i][1])
    return state.population[best][0]


def _mutate(parent: np.ndarray, sigma: float, cfg: BeaConfig,
            rng: np.random.Generator) -> tuple[np.ndarray, float]:
    d = parent.size
    tau = 1.0 / math.sqrt(2.0 * d)
    sigma_eff = sigma * math.exp(tau * rng.standard_normal())
    mask = rng.random(d) < cfg.mutation_rate
    noise = rng.standard_normal(d) * sigma_eff
    return np.clip(parent + mask * noise, -1.0, 1.0), sigma_eff


def ea_step(state: EsState, evaluate, cfg: BeaConfig, rng: np.random.Generator,
            now, max_offspring: int | None = None) -> EsState:
    """One (mu+lambda) generation with a self-adaptive, gain-controlled step.

    Each offspring mutates with its own log-normal perturbation of the
    global step; the step then follows the survivors (geometric mean of the
    successful perturbations). Once per full gain window the monitor
    overrides: relatively large gains shrink the step to exploit, relatively
    small ones grow it to explore. `now()` supplies the monitor's clock.
    """
    n_off = cfg.pop_size if max_offspring is None else min(cfg.pop_size, max_offspring)
    offspring = []
    for _ in range(n_off):
        parent = _tournament(state, cfg, rng)
        if cfg.crossover_rate > 0.0 and rng.random() < cfg.crossover_rate:
            other = _tournament(state, cfg, rng)
            take = rng.random(parent.size) < 0.5
            parent = np.where(take, parent, other)
        child, sigma_eff = _mutate(parent, state.sigma, cfg, rng)
        offspring.append((child, evaluate(child), sigma_eff))
    merged = [(p, v, None) for p, v in state.population] + offspring
    merged.sort(key=lambda entry: -entry[1])
    survivors = merged[: cfg.pop_size]
    state.population = [(p, v) for p, v, _ in survivors]
    state.generation += 1

    adopted = [s for _, _, s in survivors if s is not None]
    if adopted:
        log_mean = sum(math.log(s) for s in adopted) / len(adopted)
        state.sigma = min(max(math.exp(log_mean), cfg.sigma_min), cfg.sigma_max)

    state.gain_window.append((state.population[0][1], now()))
    while len(state.gain_window) > cfg.gain_window:
        state.gain_window.popleft()
    if state.generation % cfg.gain_window == 0 and len(state.gain_window) >= 2:
        try:
            g = gain(state.gain_window)
        except UndefinedGainError:
            return state
        state.gain_history.append(g)
        mean_gain = sum(state.gain_history) / len(state.gain_history)
        if g < cfg.gain_low_frac * mean_gain:
            state.sigma = min(state.sigma * cfg.sigma_up, cfg.sigma_max)
        elif g > cfg.gain_high_frac * mean_gain:
            state.sigma = max(state.sigma * cfg.sigma_down, cfg.sigma_min)
    return state


# --- runners ------------------------------------------------------------------


class _Recorder:
    """Evaluates the objective and appends trace records."""

    def __init__(self, objective, cfg: BeaConfig):
        self.objective = objective
        self.cfg = cfg
        self.trace = OptimizerTrace()
        self.t_virtual = 0.0

    def __call__(self, params: np.ndarray, stage: str, overhead_s: float = 0.0) -> float:
        value = float(self.objective(np.asarray(params, dtype=float)))
        self.t_virtual += self.cfg.eval_time_s
        self.trace.records.append(
            ObjectiveRecord(np.array(params, dtype=float), value, self.t_virtual,
                            stage, overhead_s)
        )
        return value


def _stage_evaluator(recorder: _Recorder, stage: str):
    def evaluate(params, overhead_s: float = 0.0):
        return recorder(params, stage, overhead_s)

    return evaluate


def _rng(cfg: BeaConfig, runner: int, purpose: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=cfg.seed, spawn_key=(runner, purpose))
    )


def _bo_stage(recorder: _Recorder, d: int, cfg: BeaConfig, runner: int,
              stop_at: int) -> None:
    lhs_rng = _rng(cfg, runner, 0)
    acq_rng = _rng(cfg, runner, 1)
    for point in latin_hypercube(min(cfg.n_init, stop_at), d, lhs_rng):
        recorder(point, "BO")
    gp = GpModel(cfg.theta, cfg.jitter, cfg.signal_variance)
    records = recorder.trace.records
    t0 = time.perf_counter()
    gp.fit(np.vstack([r.params for r in records]),
           np.array([r.value for r in records]))
    pending_overhead = time.perf_counter() - t0
    bo_gains: list[float] = []
    while len(recorder.trace) < stop_at:
        t0 = time.perf_counter()
        candidate = propose_next(gp, d, cfg, acq_rng)
        overhead = pending_overhead + (time.perf_counter() - t0)
        value = recorder(candidate, "BO", overhead_s=overhead)
        t0 = time.perf_counter()
        gp.update(candidate, value)
        pending_overhead = time.perf_counter() - t0
        if cfg.adaptive_switch and len(recorder.trace) > cfg.n_init + cfg.gain_window:
            best = recorder.trace.best_so_far()
            window = [
                (best[i], records[i].t_wall)
                for i in range(len(records) - cfg.gain_window, len(records))
            ]
            g = gain(window)
            bo_gains.append(g)
            mean_gain = sum(bo_gains) / len(bo_gains)
            if len(bo_gains) >= cfg.gain_window and g < cfg.gain_low_frac * mean_gain:
                break  # time efficiency collapsed: hand over early


def _ea_stage(recorder: _Recorder, cfg: BeaConfig, runner: int,
              population: list[tuple[np.ndarray, float]]) -> None:
    rng = _rng(cfg, runner, 2)
    evaluate_raw = _stage_evaluator(recorder, "EA")
    state = EsState(population=list(population), sigma=cfg.sigma_init)
    while len(recorder.trace) < cfg.budget:
        remaining = cfg.budget - len(recorder.trace)
        gen_t0 = time.perf_counter()
        obj_time = [0.0]

        def timed_evaluate(params):
            t0 = time.perf_counter()
            value = evaluate_raw(params)
            obj_time[0] += time.perf_counter() - t0
            return value

        before = len(recorder.trace)
        ea_step(state, timed_evaluate, cfg, rng,
                now=lambda: recorder.t_virtual, max_offspring=remaining)
        produced = len(recorder.trace) - before
        overhead = max(time.perf_counter() - gen_t0 - obj_time[0], 0.0)
        for rec in recorder.trace.records[before:]:
            rec.overhead_s = overhead / max(produced, 1)


def run_bo(objective, d: int, cfg: BeaConfig) -> OptimizerTrace:
    """Pure GP optimization for the full budget."""
    recorder = _Recorder(objective, cfg)
    _bo_stage(recorder, d, cfg, _STREAM_BO, stop_at=cfg.budget)
    return recorder.trace


def run_ea(objective, d: int, cfg: BeaConfig) -> OptimizerTrace:
    """Pure evolution strategy from a seeded random population."""
    recorder = _Recorder(objective, cfg)
    rng = _rng(cfg, _STREAM_EA, 3)
    evaluate = _stage_evaluator(recorder, "EA")
    population = []
    for point in rng.uniform(-1.0, 1.0, (min(cfg.pop_size, cfg.budget), d)):
        population.append((point, evaluate(point)))
    _ea_stage(recorder, cfg, _STREAM_EA, population)
    return recorder.trace


def run_bea(objective, d: int, cfg: BeaConfig) -> OptimizerTrace:
    """GP stage, cluster transfer, then the evolution strategy."""
    recorder = _Recorder(objective, cfg)
    _bo_stage(recorder, d, cfg, _STREAM_BEA, stop_at=cfg.switch_at)
    if len(recorder.trace) >= cfg.budget:
        return recorder.trace
    t0 = time.perf_counter()
    seeds = transfer_population(
        recorder.trace.records, cfg.pop_size, _rng(cfg, _STREAM_BEA, 4)
    )
    recorder.trace.transfer_overhead_s = time.perf_counter() - t0
    population = [(r.params, r.value) for r in seeds]
    _ea_stage(recorder, cfg, _STREAM_BEA, population)
    return recorder.trace


# --- benchmark objectives -----------------------------------------------------


def benchmark(name: str, d: int):
    """Standard minimization test function mapped onto [-1, 1]^d."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if name == "sphere":
        def f(x):
            z = 5.12 * np.asarray(x)
            return float(np.sum(z * z))
    elif name == "rastrigin":
        def f(x):
            z = 5.12 * np.asarray(x)
            return float(10.0 * d + np.sum(z * z - 10.0 * np.cos(2.0 * np.pi * z)))
    elif name == "ackley":
        def f(x):
            z = 32.768 * np.asarray(x)
            a = -20.0 * math.exp(-0.2 * math.sqrt(float(np.mean(z * z))))
            b = -math.exp(float(np.mean(np.cos(2.0 * np.pi * z))))
            return a + b + 20.0 + math.e
    else:
        raise KeyError(f"unknown benchmark {name!r}")
    return f
