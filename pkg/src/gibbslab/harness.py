"""Seeded experiment drivers for the probabilistic claims, plus persistence.

Every experiment is a deterministic function of (params, seed): per-sample
seeds are derived from the master seed by index, so results are bit-identical
for any worker count and any record can be replayed from its stored
parameters.  Statistical pass thresholds (3 standard errors for
monotonicity, slope <= -0.3 for the concentration proxy) are configuration;
verdicts always carry the raw numbers.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .convexity import certify_model
from .graphs import Hypergraph, InterpolationPoint, edge_count, sample_er, \
    sample_interpolated
from .models import Discrete, ModelSpec, build_model
from .partition import Instance, instance_from_json, instance_to_json, \
    log_z_exact, make_instance
from .seeds import EXPERIMENT, GRAPH, SAMPLE, derive_seed, substream

__all__ = [
    "MeanEstimate",
    "ExperimentRecord",
    "resolve_workers",
    "estimate_mean_logz",
    "interpolation_monotonicity",
    "moment_inequality_check",
    "random_base_instance",
    "concentration_experiment",
    "convergence_experiment",
    "record_to_json",
    "record_from_json",
    "append_record",
    "read_records",
    "records_to_csv",
    "replay_record",
    "verify_replay",
]

WORKERS_ENV = "GIBBSLAB_WORKERS"

# Model parameter keys recognized when rebuilding a model from record params.
_MODEL_KEYS = ("lambda", "beta", "q", "k", "h", "i_values", "i_probs")


def resolve_workers(n_workers: Optional[int] = None) -> int:
    if n_workers is not None:
        return max(1, int(n_workers))
    env = os.environ.get(WORKERS_ENV)
    return max(1, int(env)) if env else 1


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _sample_std(values: np.ndarray) -> float:
    # Constant samples have zero spread; np.std would report ~1e-16 noise
    # from the pairwise-sum mean.
    if values.size < 2 or np.all(values == values[0]):
        return 0.0
    return float(values.std(ddof=1))


@dataclass(frozen=True)
class MeanEstimate:
    """Sample mean of log Z over i.i.d. (graph, potentials) draws."""

    mean: float
    std_error: float
    n_samples: int
    seed: int


@dataclass(frozen=True)
class ExperimentRecord:
    """A seeded, replayable result row."""

    experiment: str
    params: dict
    results: dict
    verdict: str  # "pass" | "fail" | "report"
    timestamp: str = field(default_factory=_utc_now)


# ---------------------------------------------------------------------------
# Sampling E[log Z]
# ---------------------------------------------------------------------------

def _sample_task(payload) -> np.ndarray:
    model, n_nodes, c, point, seed, lo, hi = payload
    out = np.empty(hi - lo)
    for i in range(lo, hi):
        s = derive_seed(seed, SAMPLE, i)
        if point is None:
            graph = sample_er(n_nodes, c, model.arity, s)
        else:
            graph = sample_interpolated(n_nodes, c, model.arity, point, s)
        out[i - lo] = log_z_exact(make_instance(model, graph, s)).value
    return out


def _logz_samples(model: ModelSpec, n_nodes: int, c, samples: int, seed: int,
                  point: Optional[InterpolationPoint] = None,
                  n_workers: Optional[int] = None) -> np.ndarray:
    """Per-sample exact log Z values; index i uses the derived seed (seed, i).

    The same (seed, i) pair yields the same edge-placement uniforms and
    potential draws at every interpolation point, so estimates at different
    points under one seed are coupled by common random numbers.
    """
    workers = resolve_workers(n_workers)
    if workers <= 1 or samples < 4:
        return _sample_task((model, n_nodes, c, point, seed, 0, samples))
    step = max(1, math.ceil(samples / (4 * workers)))
    bounds = [(lo, min(lo + step, samples)) for lo in range(0, samples, step)]
    payloads = [(model, n_nodes, c, point, seed, lo, hi) for lo, hi in bounds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_sample_task, payloads))
    return np.concatenate(parts)


def estimate_mean_logz(model: ModelSpec, n_nodes: int, c, samples: int,
                       seed: int, point: Optional[InterpolationPoint] = None,
                       n_workers: Optional[int] = None) -> MeanEstimate:
    """Mean and standard error of log Z over fresh (graph, potentials) draws."""
    if samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    values = _logz_samples(model, n_nodes, c, samples, seed, point, n_workers)
    return MeanEstimate(float(values.mean()),
                        _sample_std(values) / math.sqrt(samples),
                        samples, seed)


# ---------------------------------------------------------------------------
# Interpolation monotonicity
# ---------------------------------------------------------------------------

def _model_record_params(model: ModelSpec) -> dict:
    return {"model": model.name, **{k: v for k, v in model.params.items()}}


def interpolation_monotonicity(model: ModelSpec, n_nodes: int, n1: int, c,
                               samples_per_t: int, seed: int,
                               couple: bool = True,
                               se_factor: float = 3.0,
                               allow_uncertified: bool = False,
                               n_workers: Optional[int] = None) -> ExperimentRecord:
    """Estimate E log Z along the interpolation chain t = 0..floor(c*N).

    t = 0 is the plain ensemble, t = floor(c*N) the disjoint union.  The
    verdict passes when every consecutive difference is >= -se_factor times
    its (paired, when coupled) standard error.  Uncertified models require
    ``allow_uncertified`` and get a report-only verdict.
    """
    certified = certify_model(model).certified
    if not certified and not allow_uncertified:
        raise ValueError(f"model {model.name!r} is not certified; "
                         "pass allow_uncertified=True for a report-only run")
    m = edge_count(n_nodes, c)
    n2 = n_nodes - n1
    values = []
    for t in range(m + 1):
        point = InterpolationPoint(t, n1, n2)
        seed_t = seed if couple else derive_seed(seed, EXPERIMENT, t)
        values.append(_logz_samples(model, n_nodes, c, samples_per_t, seed_t,
                                    point, n_workers))

    results: dict = {}
    means = [float(v.mean()) for v in values]
    for t, v in enumerate(values):
        results[f"mean_{t}"] = means[t]
        results[f"se_{t}"] = _sample_std(v) / math.sqrt(len(v))

    ok = True
    for t in range(m):
        if couple:
            d = values[t] - values[t + 1]
            se = _sample_std(d) / math.sqrt(len(d))
            diff = float(d.mean())
        else:
            diff = means[t] - means[t + 1]
            se = math.hypot(results[f"se_{t}"], results[f"se_{t + 1}"])
        results[f"diff_{t}"] = diff
        results[f"diff_se_{t}"] = se
        if se > 0:
            ratio = diff / se
        else:
            ratio = 0.0 if diff == 0 else math.copysign(math.inf, diff)
        results[f"gap_over_se_{t}"] = ratio
        if diff < -se_factor * se:
            ok = False

    if couple:
        d_end = values[0] - values[-1]
        end_se = _sample_std(d_end) / math.sqrt(len(d_end))
        end_diff = float(d_end.mean())
    else:
        end_diff = means[0] - means[-1]
        end_se = math.hypot(results["se_0"], results[f"se_{m}"])
    results["endpoint_diff"] = end_diff
    results["endpoint_se"] = end_se
    if end_diff < -se_factor * end_se:
        ok = False

    verdict = ("pass" if ok else "fail") if certified else "report"
    params = {**_model_record_params(model), "n": n_nodes, "n1": n1, "c": str(c),
              "samples_per_t": samples_per_t, "seed": seed, "couple": couple,
              "se_factor": se_factor}
    return ExperimentRecord("interpolation_monotonicity", params, results, verdict)


# ---------------------------------------------------------------------------
# Exact moment inequality
# ---------------------------------------------------------------------------

def random_base_instance(model: ModelSpec, n_nodes: int, n_edges: int,
                         seed: int) -> Instance:
    """A small random instance to serve as the base graph G0."""
    rng = substream(seed, GRAPH, 1)
    edges = rng.integers(0, n_nodes, size=(n_edges, model.arity))
    graph = Hypergraph(n_nodes, model.arity, edges)
    return make_instance(model, graph, derive_seed(seed, GRAPH, 2))


def _fraction_weights(instance: Instance) -> tuple[list, list[Fraction]]:
    """All assignments with exact rational base weights H0(sigma)."""
    q = instance.model.n_states
    n = instance.graph.n_nodes
    node_tables = instance.potentials.node_tables
    edge_tables = instance.potentials.edge_tables
    assignments = list(product(range(q), repeat=n))
    weights = []
    for sigma in assignments:
        w = Fraction(1)
        for u in range(n):
            w *= Fraction(float(node_tables[u][sigma[u]]))
        for e_idx, edge in enumerate(instance.graph.edges):
            w *= Fraction(float(edge_tables[e_idx][tuple(sigma[v] for v in edge)]))
        weights.append(w)
    return assignments, weights


def moment_inequality_check(model: ModelSpec, n_nodes: int, n1: int, r: int,
                            g0: Instance,
                            alpha: Optional[float] = None) -> ExperimentRecord:
    """Exact check of E[(alpha Z0 - Z(G0+e))^r] under global vs block placement.

    The left side places the extra edge uniformly over all N^K tuples; the
    right side picks block j with probability N_j/N and places uniformly
    inside it.  Both sides sum the finite edge-law support and all placements
    in exact rational arithmetic (floats are dyadic), so the verdict
    compares exactly.  Also checks alpha*Z0 >= Z(G0+e) for every placement
    and draw.
    """
    if n_nodes > 4 or r > 3 or r < 1:
        raise ValueError("exact moment check is limited to N <= 4, 1 <= r <= 3")
    if not isinstance(model.domain, Discrete):
        raise ValueError("exact moment check needs a discrete model")
    if not model.edge_pot.finite_support:
        raise ValueError("exact moment check needs a finite-support edge law")
    if g0.graph.n_nodes != n_nodes:
        raise ValueError("base instance does not match n_nodes")
    if g0.model is not model and g0.model.name != model.name:
        raise ValueError("base instance was drawn under a different model")
    if not 1 <= n1 <= n_nodes:
        raise ValueError("need 1 <= n1 <= n_nodes")
    alpha_f = Fraction(float(model.soft.alpha if alpha is None else alpha))
    k = model.arity

    assignments, weights = _fraction_weights(g0)
    z0 = sum(weights)
    support = [(table, Fraction(p)) for table, p in model.edge_pot.support]

    def z_plus(placement, table) -> Fraction:
        total = Fraction(0)
        for sigma, w in zip(assignments, weights):
            total += w * Fraction(float(table[tuple(sigma[v] for v in placement)]))
        return total

    min_headroom = None
    term: dict = {}
    for placement in product(range(n_nodes), repeat=k):
        for t_idx, (table, _) in enumerate(support):
            head = alpha_f * z0 - z_plus(placement, table)
            term[placement, t_idx] = head
            if min_headroom is None or head < min_headroom:
                min_headroom = head

    left = Fraction(0)
    inv_total = Fraction(1, n_nodes ** k)
    for placement in product(range(n_nodes), repeat=k):
        for t_idx, (_, prob) in enumerate(support):
            left += inv_total * prob * term[placement, t_idx] ** r

    right = Fraction(0)
    blocks = [(0, n1)] + ([(n1, n_nodes)] if n1 < n_nodes else [])
    for lo, hi in blocks:
        size = hi - lo
        w_block = Fraction(size, n_nodes) * Fraction(1, size ** k)
        for placement in product(range(lo, hi), repeat=k):
            for t_idx, (_, prob) in enumerate(support):
                right += w_block * prob * term[placement, t_idx] ** r

    passed = left <= right and min_headroom >= 0
    results = {"left": float(left), "right": float(right),
               "margin": float(right - left), "min_headroom": float(min_headroom),
               "exact_equal": 1.0 if left == right else 0.0}
    params = {**_model_record_params(model), "n": n_nodes, "n1": n1, "r": r,
              "alpha": float(alpha_f), "g0": instance_to_json(g0)}
    return ExperimentRecord("moment_inequality", params, results,
                            "pass" if passed else "fail")


# ---------------------------------------------------------------------------
# Concentration proxy
# ---------------------------------------------------------------------------

def concentration_experiment(model: ModelSpec, n_list: Sequence[int], c,
                             samples: int, seed: int,
                             slope_threshold: float = -0.3,
                             n_workers: Optional[int] = None) -> ExperimentRecord:
    """Fit the decay rate of std(log Z / N) against N.

    Passes when the fitted log-log slope is at or below ``slope_threshold``
    (a loose desk-scale proxy for the -1/2 rate).  Degenerate models with
    zero variance yield a report-only verdict.  Also reports the empirical
    tail fraction P(|logZ/N - mean| > log(N)^3 / sqrt(N)) per size.
    """
    results: dict = {}
    stds = []
    for idx, n_nodes in enumerate(n_list):
        values = _logz_samples(model, int(n_nodes), c, samples,
                               derive_seed(seed, EXPERIMENT, idx),
                               n_workers=n_workers) / float(n_nodes)
        std = _sample_std(values)
        stds.append(std)
        radius = math.log(n_nodes) ** 3 / math.sqrt(n_nodes)
        tail = float(np.mean(np.abs(values - values.mean()) > radius))
        results[f"std_{n_nodes}"] = std
        results[f"tail_{n_nodes}"] = tail
    usable = [(n, s) for n, s in zip(n_list, stds) if s > 0.0]
    if len(usable) >= 2:
        xs = np.log([n for n, _ in usable])
        ys = np.log([s for _, s in usable])
        slope = float(np.polyfit(xs, ys, 1)[0])
        results["slope"] = slope
        verdict = "pass" if slope <= slope_threshold else "fail"
    else:
        verdict = "report"
    params = {**_model_record_params(model), "n_list": list(map(int, n_list)),
              "c": str(c), "samples": samples, "seed": seed,
              "slope_threshold": slope_threshold}
    return ExperimentRecord("concentration", params, results, verdict)


# ---------------------------------------------------------------------------
# Convergence / near-superadditivity
# ---------------------------------------------------------------------------

def convergence_experiment(model: ModelSpec, n_list: Sequence[int], c,
                           samples: int, seed: int,
                           n_workers: Optional[int] = None) -> ExperimentRecord:
    """Tabulate a_N = E log Z(G(N,c)) and its near-superadditivity residuals.

    Reports a_N / N, residuals a_N - a_{N1} - a_{N2} over splits available in
    the size list, the fitted constant C in the -C sqrt(N) correction, and
    the running-sup Fekete extrapolate.  Report-only: the true limit is
    unknown.
    """
    sizes = sorted(set(int(n) for n in n_list))
    a: dict[int, float] = {}
    results: dict = {}
    for idx, n_nodes in enumerate(sizes):
        values = _logz_samples(model, n_nodes, c, samples,
                               derive_seed(seed, EXPERIMENT, idx),
                               n_workers=n_workers)
        a[n_nodes] = float(values.mean())
        results[f"a_{n_nodes}"] = a[n_nodes]
        results[f"a_se_{n_nodes}"] = _sample_std(values) / math.sqrt(samples)
        results[f"a_over_n_{n_nodes}"] = a[n_nodes] / n_nodes
    c_fit = 0.0
    for n_nodes in sizes:
        for n1 in sizes:
            n2 = n_nodes - n1
            if n2 < n1 or n2 not in a:
                continue
            resid = a[n_nodes] - a[n1] - a[n2]
            results[f"resid_{n_nodes}_{n1}"] = resid
            c_fit = max(c_fit, -resid / math.sqrt(n_nodes))
    results["superadd_c"] = c_fit
    running = -math.inf
    for n_nodes in sizes:
        running = max(running, a[n_nodes] / n_nodes)
        results[f"fekete_sup_{n_nodes}"] = running
    params = {**_model_record_params(model), "n_list": sizes, "c": str(c),
              "samples": samples, "seed": seed}
    return ExperimentRecord("convergence", params, results, "report")


# ---------------------------------------------------------------------------
# Record persistence and replay
# ---------------------------------------------------------------------------

def record_to_json(record: ExperimentRecord) -> str:
    return json.dumps({"experiment": record.experiment, "params": record.params,
                       "results": record.results, "verdict": record.verdict,
                       "timestamp": record.timestamp}, separators=(",", ":"))


def record_from_json(text: str) -> ExperimentRecord:
    obj = json.loads(text)
    return ExperimentRecord(obj["experiment"], obj["params"], obj["results"],
                            obj["verdict"], obj["timestamp"])


def append_record(path: str, record: ExperimentRecord) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(record_to_json(record) + "\n")


def read_records(path: str) -> list[ExperimentRecord]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(record_from_json(line))
    return out


def records_to_csv(records: Sequence[ExperimentRecord], path: str) -> None:
    """CSV export; the header names every params/results key seen."""
    param_keys: list[str] = []
    result_keys: list[str] = []
    for rec in records:
        for key in rec.params:
            if key not in param_keys:
                param_keys.append(key)
        for key in rec.results:
            if key not in result_keys:
                result_keys.append(key)
    header = ["experiment", "verdict", "timestamp"] + \
        [f"param.{k}" for k in param_keys] + [f"result.{k}" for k in result_keys]

    def cell(value):
        if isinstance(value, (list, dict)):
            return json.dumps(value, separators=(",", ":"))
        return value

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rec in records:
            row = [rec.experiment, rec.verdict, rec.timestamp]
            row += [cell(rec.params.get(k, "")) for k in param_keys]
            row += [cell(rec.results.get(k, "")) for k in result_keys]
            writer.writerow(row)


def _model_from_params(params: dict) -> ModelSpec:
    kwargs = {k: params[k] for k in _MODEL_KEYS if k in params}
    return build_model(params["model"], **kwargs)


def replay_record(record: ExperimentRecord,
                  n_workers: Optional[int] = None) -> ExperimentRecord:
    """Re-run an experiment from its stored params; results must reproduce."""
    p = record.params
    model = _model_from_params(p)
    name = record.experiment
    if name == "interpolation_monotonicity":
        return interpolation_monotonicity(
            model, p["n"], p["n1"], p["c"], p["samples_per_t"], p["seed"],
            couple=p["couple"], se_factor=p["se_factor"],
            allow_uncertified=True, n_workers=n_workers)
    if name == "moment_inequality":
        g0 = instance_from_json(p["g0"])
        return moment_inequality_check(model, p["n"], p["n1"], p["r"], g0,
                                       alpha=p["alpha"])
    if name == "concentration":
        return concentration_experiment(model, p["n_list"], p["c"], p["samples"],
                                        p["seed"], slope_threshold=p["slope_threshold"],
                                        n_workers=n_workers)
    if name == "convergence":
        return convergence_experiment(model, p["n_list"], p["c"], p["samples"],
                                      p["seed"], n_workers=n_workers)
    raise ValueError(f"unknown experiment {name!r}")


def verify_replay(record: ExperimentRecord,
                  n_workers: Optional[int] = None) -> bool:
    """True when a re-run reproduces every result real bit-identically."""
    fresh = replay_record(record, n_workers=n_workers)
    return fresh.results == record.results and fresh.verdict == record.verdict
