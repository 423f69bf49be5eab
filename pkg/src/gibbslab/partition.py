"""Homomorphism weights, log-partition functions, and deterministic bounds.

All products live in log space; a zero potential factor propagates as the
-inf sentinel (Z = 0 is a legal outcome for hard-core models, and log Z is
defined to be -inf there).  Enumeration is row-major over assignments with a
streaming log-sum-exp: per-chunk (max, rescaled sum) pairs are folded in
chunk-index order, so results are bit-identical for any worker count.

Continuous (piecewise-constant) domains contribute cell value * cell length
per node factor, which makes the discrete embedding exact.
"""

from __future__ import annotations

import functools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .graphs import Hypergraph, graph_from_json, graph_to_json
from .models import (
    ModelSpec,
    PotentialDraws,
    build_model,
    draw_potentials,
    embed_discrete,
)
from .seeds import MC_SHARD, substream

__all__ = [
    "LogZ",
    "Instance",
    "McLogZ",
    "StateSpaceCapError",
    "make_instance",
    "weight",
    "log_z_exact",
    "log_z_mc",
    "logz_bounds",
    "node_change_bound",
    "edge_change_bound",
    "add_edge",
    "replace_node_table",
    "logz_row",
    "instance_to_json",
    "instance_from_json",
]

DEFAULT_STATE_CAP = 2 ** 24
DEFAULT_CHUNK = 2 ** 16
MC_SHARD_SIZE = 2 ** 14


class StateSpaceCapError(RuntimeError):
    """Assignment space exceeds the exact-enumeration cap; use Monte Carlo."""


@dataclass(frozen=True, order=True)
class LogZ:
    """Extended-real log-partition value; -inf if and only if Z = 0."""

    value: float

    @property
    def is_zero(self) -> bool:
        return self.value == -math.inf

    def to_json(self) -> Union[float, str]:
        return "-inf" if self.is_zero else self.value


@dataclass(frozen=True)
class McLogZ:
    """Importance-sampling estimate of log Z with a delta-method standard error.

    When every sampled weight is zero the point estimate degenerates to -inf
    (a trivial lower bound) and ``log_upper_bound`` carries a rule-of-three
    95% upper confidence bound instead.
    """

    value: float
    std_error: Optional[float]
    n_samples: int
    seed: int
    zero_fraction: float
    log_upper_bound: Optional[float] = None


@dataclass(frozen=True)
class Instance:
    """A graph with attached potential draws under a model."""

    graph: Hypergraph
    potentials: PotentialDraws
    model: ModelSpec

    def __post_init__(self):
        n_states = self.model.n_states
        if self.potentials.node_tables.shape != (self.graph.n_nodes, n_states):
            raise ValueError("node tables do not match graph/model shape")
        expect = (self.graph.n_edges,) + (n_states,) * self.model.arity
        if self.potentials.edge_tables.shape != expect:
            raise ValueError("edge tables do not match graph/model shape")


def make_instance(model: ModelSpec, graph: Hypergraph, seed: int) -> Instance:
    """Attach freshly drawn potentials to ``graph``."""
    return Instance(graph, draw_potentials(model, graph, seed), model)


# ---------------------------------------------------------------------------
# Log-domain helpers
# ---------------------------------------------------------------------------

def _safe_log(table: np.ndarray) -> np.ndarray:
    out = np.full(table.shape, -np.inf)
    mask = table > 0
    out[mask] = np.log(table[mask])
    return out


def _log_node_tables(instance: Instance, with_lengths: bool) -> np.ndarray:
    tables = instance.potentials.node_tables
    if with_lengths:
        tables = tables * instance.model.domain.lengths
    return _safe_log(tables)


@functools.lru_cache(maxsize=8)
def _assignment_block(n_states: int, n_nodes: int) -> np.ndarray:
    """All n_states^n_nodes assignments, row-major, as a read-only matrix."""
    total = n_states ** n_nodes
    powers = n_states ** np.arange(n_nodes - 1, -1, -1, dtype=np.int64)
    states = (np.arange(total, dtype=np.int64)[:, None] // powers) % n_states
    states.setflags(write=False)
    return states


def _decode_assignments(idx: np.ndarray, n_states: int, n_nodes: int) -> np.ndarray:
    powers = n_states ** np.arange(n_nodes - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers) % n_states


def _block_log_weights(states: np.ndarray, log_nodes: np.ndarray,
                       log_edges: np.ndarray, edges: np.ndarray) -> np.ndarray:
    n_nodes = log_nodes.shape[0]
    w = log_nodes[np.arange(n_nodes)[None, :], states].sum(axis=1)
    for e_idx in range(edges.shape[0]):
        cols = tuple(states[:, v] for v in edges[e_idx])
        w = w + log_edges[e_idx][cols]
    return w


def _chunk_stats(w: np.ndarray) -> tuple[float, float]:
    m = float(w.max())
    if m == -math.inf:
        return -math.inf, 0.0
    return m, float(np.exp(w - m).sum())


def _fold_chunks(stats: Sequence[tuple[float, float]]) -> float:
    run_max, run_sum = -math.inf, 0.0
    for m, s in stats:
        if m == -math.inf:
            continue
        if m <= run_max:
            run_sum += s * math.exp(m - run_max)
        else:
            run_sum = run_sum * math.exp(run_max - m) + s
            run_max = m
    if run_max == -math.inf:
        return -math.inf
    return run_max + math.log(run_sum)


def _exact_chunk_task(payload) -> tuple[float, float]:
    log_nodes, log_edges, edges, n_states, lo, hi = payload
    idx = np.arange(lo, hi, dtype=np.int64)
    states = _decode_assignments(idx, n_states, log_nodes.shape[0])
    return _chunk_stats(_block_log_weights(states, log_nodes, log_edges, edges))


# ---------------------------------------------------------------------------
# Exact evaluation
# ---------------------------------------------------------------------------

def weight(instance: Instance, assignment: Sequence[int]) -> float:
    """log H(sigma): sum of log node factors plus log edge factors.

    Returns -inf when any factor is zero.  Cell lengths are not included
    here; they belong to the quadrature in log_z_exact.
    """
    states = np.asarray(assignment, dtype=np.int64)
    if states.shape != (instance.graph.n_nodes,):
        raise ValueError(f"assignment must have length {instance.graph.n_nodes}")
    if states.size and (states.min() < 0 or states.max() >= instance.model.n_states):
        raise ValueError("assignment entries outside the spin domain")
    log_nodes = _safe_log(instance.potentials.node_tables)
    log_edges = _safe_log(instance.potentials.edge_tables)
    total = float(log_nodes[np.arange(states.size), states].sum())
    for e_idx, edge in enumerate(instance.graph.edges):
        total += float(log_edges[e_idx][tuple(states[edge])])
    return total


def log_z_exact(instance: Instance, *, cap: int = DEFAULT_STATE_CAP,
                chunk_size: int = DEFAULT_CHUNK,
                n_workers: Optional[int] = None) -> LogZ:
    """Exact log Z by streaming log-sum-exp over all assignments.

    Raises StateSpaceCapError when n_states^N exceeds ``cap``.  The result is
    independent of chunk scheduling: per-chunk stats are folded in chunk
    order regardless of which worker produced them.
    """
    n_states = instance.model.n_states
    n_nodes = instance.graph.n_nodes
    total = n_states ** n_nodes
    if total > cap:
        raise StateSpaceCapError(
            f"{n_states}^{n_nodes} = {total} assignments exceed cap {cap}")
    log_nodes = _log_node_tables(instance, with_lengths=True)
    log_edges = _safe_log(instance.potentials.edge_tables)
    edges = instance.graph.edges

    if total <= chunk_size:
        states = _assignment_block(n_states, n_nodes)
        w = _block_log_weights(states, log_nodes, log_edges, edges)
        return LogZ(_fold_chunks([_chunk_stats(w)]))

    bounds = [(lo, min(lo + chunk_size, total)) for lo in range(0, total, chunk_size)]
    payloads = [(log_nodes, log_edges, edges, n_states, lo, hi) for lo, hi in bounds]
    if n_workers and n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            stats = list(pool.map(_exact_chunk_task, payloads, chunksize=4))
    else:
        stats = [_exact_chunk_task(p) for p in payloads]
    return LogZ(_fold_chunks(stats))


# ---------------------------------------------------------------------------
# Monte Carlo estimate
# ---------------------------------------------------------------------------

def _mc_shard_task(payload) -> np.ndarray:
    node_probs, log_edges, edges, seed, shard_idx, size = payload
    rng = substream(seed, MC_SHARD, shard_idx)
    n_nodes, n_states = node_probs.shape
    states = np.empty((size, n_nodes), dtype=np.int64)
    for u in range(n_nodes):
        states[:, u] = rng.choice(n_states, size=size, p=node_probs[u])
    lw = np.zeros(size)
    for e_idx in range(edges.shape[0]):
        cols = tuple(states[:, v] for v in edges[e_idx])
        lw = lw + log_edges[e_idx][cols]
    return lw


def log_z_mc(instance: Instance, samples: int, seed: int, *,
             n_workers: Optional[int] = None,
             shard_size: int = MC_SHARD_SIZE) -> McLogZ:
    """Importance sampling from the product node measure.

    Each spin is drawn independently proportional to h_u * cell length; the
    estimator averages the edge-factor product, so
    Z_hat = (prod_u integral h_u) * mean(prod_e J_e).  The standard error is
    delta-method on the log scale.  Shard structure depends only on
    ``samples``, so any worker count reproduces the same estimate bit for bit.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    lengths = instance.model.domain.lengths
    node_mass = (instance.potentials.node_tables * lengths).sum(axis=1)
    if not np.all(np.isfinite(node_mass)) or np.any(node_mass <= 0):
        raise ValueError("every node must have finite positive total mass")
    base = float(np.log(node_mass).sum())
    node_probs = instance.potentials.node_tables * lengths / node_mass[:, None]
    log_edges = _safe_log(instance.potentials.edge_tables)
    edges = instance.graph.edges

    sizes = [min(shard_size, samples - lo) for lo in range(0, samples, shard_size)]
    payloads = [(node_probs, log_edges, edges, seed, i, sz)
                for i, sz in enumerate(sizes)]
    if n_workers and n_workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            shards = list(pool.map(_mc_shard_task, payloads, chunksize=1))
    else:
        shards = [_mc_shard_task(p) for p in payloads]
    lw = np.concatenate(shards)

    mu = float(lw.max())
    zero_fraction = float(np.mean(lw == -math.inf))
    if mu == -math.inf:
        # Every sampled weight vanished: report the rule-of-three upper bound.
        upper = base + instance.graph.n_edges * math.log(instance.model.soft.j_max) \
            + math.log(3.0 / samples)
        return McLogZ(-math.inf, None, samples, seed, 1.0, upper)
    w = np.exp(lw - mu)
    mean_w = float(w.mean())
    value = base + mu + math.log(mean_w)
    if samples < 2:
        se = None
    else:
        se = float(w.std(ddof=1) / (mean_w * math.sqrt(samples)))
    return McLogZ(value, se, samples, seed, zero_fraction)


# ---------------------------------------------------------------------------
# Deterministic bounds
# ---------------------------------------------------------------------------

def logz_bounds(instance: Instance) -> tuple[float, float]:
    """(M+N) log rho_min <= log Z <= (M+N) log rho_max."""
    soft = instance.model.soft
    mn = instance.graph.n_edges + instance.graph.n_nodes
    return mn * math.log(soft.rho_min), mn * math.log(soft.rho_max)


def _incidence_count(graph: Hypergraph, node: int) -> int:
    return sum(1 for edge in graph.edges if node in edge)


def node_change_bound(instance: Instance, node: int) -> float:
    """Bound on |delta log Z| when node's potential is swapped admissibly."""
    if not 0 <= node < instance.graph.n_nodes:
        raise ValueError(f"node {node} out of range")
    inc = _incidence_count(instance.graph, node)
    return 2.0 * (1 + inc) * instance.model.soft.log_ratio


def edge_change_bound(instance: Instance, edge) -> float:
    """Bound on |delta log Z| when an edge is added or removed.

    ``edge`` is either an index of an existing edge, or a K-tuple treated as
    an addition, in which case the neighborhood count refers to the
    post-addition graph.  Neighborhoods include the edge itself.
    """
    k = instance.model.arity
    graph = instance.graph
    if isinstance(edge, (int, np.integer)):
        if not 0 <= edge < graph.n_edges:
            raise ValueError(f"edge index {edge} out of range")
        nodes = set(int(x) for x in graph.edges[edge])
        nb = sum(1 for e in graph.edges if nodes & set(int(x) for x in e))
    else:
        nodes = set(int(x) for x in edge)
        if len(edge) != k:
            raise ValueError(f"edge tuple must have arity {k}")
        if nodes and (min(nodes) < 0 or max(nodes) >= graph.n_nodes):
            raise ValueError("edge tuple entries out of range")
        nb = 1 + sum(1 for e in graph.edges if nodes & set(int(x) for x in e))
    return (2 * k + 2 * nb + 1) * instance.model.soft.log_ratio


# ---------------------------------------------------------------------------
# Instance modification (perturbation experiments)
# ---------------------------------------------------------------------------

def add_edge(instance: Instance, edge: Sequence[int], table: np.ndarray) -> Instance:
    """New instance with ``edge`` (and its potential table) appended."""
    new_edges = np.vstack([instance.graph.edges,
                           np.asarray(edge, dtype=np.int64)[None, :]])
    graph = Hypergraph(instance.graph.n_nodes, instance.graph.arity, new_edges)
    tables = np.concatenate([instance.potentials.edge_tables,
                             np.asarray(table, dtype=float)[None, ...]])
    pots = PotentialDraws(instance.potentials.node_tables, tables)
    return Instance(graph, pots, instance.model)


def replace_node_table(instance: Instance, node: int, table: np.ndarray) -> Instance:
    new_nodes = instance.potentials.node_tables.copy()
    new_nodes[node] = np.asarray(table, dtype=float)
    pots = PotentialDraws(new_nodes, instance.potentials.edge_tables)
    return Instance(instance.graph, pots, instance.model)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def logz_row(value: Union[LogZ, McLogZ], method: str, seed: int) -> dict:
    """Result row {"logz": float | "-inf", "se": float?, "method", "seed"}."""
    if method not in ("exact", "mc"):
        raise ValueError(f"method must be 'exact' or 'mc', got {method!r}")
    if isinstance(value, LogZ):
        logz, se = value.to_json(), None
    else:
        logz = "-inf" if value.value == -math.inf else value.value
        se = value.std_error
    row = {"logz": logz, "method": method, "seed": int(seed)}
    if se is not None:
        row["se"] = se
    return row


def instance_to_json(instance: Instance) -> str:
    """Bundle graph + potential tables; zoo-backed models only."""
    model = instance.model
    embedded = model.name.endswith("_embedded")
    name = model.name[:-len("_embedded")] if embedded else model.name
    payload = {
        "model": {"name": name, "params": dict(model.params), "embedded": embedded},
        "graph": json.loads(graph_to_json(instance.graph)),
        "node_tables": instance.potentials.node_tables.tolist(),
        "edge_tables": instance.potentials.edge_tables.tolist(),
    }
    return json.dumps(payload, separators=(",", ":"))


def instance_from_json(text: str) -> Instance:
    obj = json.loads(text)
    model = build_model(obj["model"]["name"], **obj["model"]["params"])
    if obj["model"]["embedded"]:
        model = embed_discrete(model)
    graph = graph_from_json(json.dumps(obj["graph"]))
    shape = (model.n_states,) * model.arity
    node_tables = np.array(obj["node_tables"], dtype=float).reshape(
        graph.n_nodes, model.n_states)
    edge_tables = np.array(obj["edge_tables"], dtype=float).reshape(
        (graph.n_edges,) + shape)
    return Instance(graph, PotentialDraws(node_tables, edge_tables), model)
