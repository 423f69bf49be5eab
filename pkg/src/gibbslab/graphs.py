"""Sparse random K-uniform directed hypergraphs and the interpolated ensemble.

Edges are ordered K-tuples of node indices with repetition allowed.  The
plain ensemble draws floor(c*N) i.i.d. uniform tuples.  The interpolated
ensemble at step t keeps floor(c*N) - t global edges and restricts the last
t edges to one of two node blocks (block 1 with probability N1/N, block 2
otherwise), so t = 0 is the plain ensemble and t = floor(c*N) is a disjoint
union of two independent block graphs.  Expected log-partition functions are
non-increasing along t for certified models.

All draws are functions of (arguments, seed) only.  Edge placements are built
from one (M, K) block of uniforms plus one length-M block for the block
choice, consumed identically at every t, so graphs at different interpolation
steps under the same seed are coupled sample-by-sample (common random
numbers) and sample_interpolated(t=0) is bit-identical to sample_er.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Union

import numpy as np

from .seeds import GRAPH, substream

__all__ = [
    "Hypergraph",
    "InterpolationPoint",
    "DegreeStats",
    "edge_count",
    "sample_er",
    "sample_interpolated",
    "degree_stats",
    "degree_tail_probability",
    "graph_to_json",
    "graph_from_json",
]

EdgeDensity = Union[str, int, float, Fraction, Decimal]


@dataclass(frozen=True)
class Hypergraph:
    """N nodes and an ordered list of M directed K-tuples over [0, N)."""

    n_nodes: int
    arity: int
    edges: np.ndarray  # (M, K) int64, list order = draw order

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, self.arity)
        if self.n_nodes < 1:
            raise ValueError(f"need at least one node, got {self.n_nodes}")
        if e.size and (e.min() < 0 or e.max() >= self.n_nodes):
            raise ValueError("edge entries must lie in [0, n_nodes)")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]


@dataclass(frozen=True)
class InterpolationPoint:
    """Chain coordinate t plus the block split N1 + N2 = N.

    t counts block-restricted edges: t = 0 reproduces the plain ensemble and
    t = floor(c*N) the disjoint union.  n2 = 0 is allowed as the degenerate
    split where block 1 is the whole node set.
    """

    t: int
    n1: int
    n2: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if self.n1 < 1 or self.n2 < 0:
            raise ValueError(f"need n1 >= 1 and n2 >= 0, got ({self.n1}, {self.n2})")

    @property
    def n(self) -> int:
        return self.n1 + self.n2


@dataclass(frozen=True)
class DegreeStats:
    """Degree and neighborhood counts of a hypergraph.

    node_degrees counts multiplicity (a node appearing j times in one tuple
    contributes j), so the degrees sum to K*M.  node_incidences counts
    distinct containing edges, which is the quantity the binomial degree-tail
    model and the perturbation bounds refer to.  edge_neighborhoods counts
    edges sharing at least one node, including the edge itself.
    """

    node_degrees: np.ndarray
    node_incidences: np.ndarray
    edge_neighborhoods: np.ndarray
    max_degree: int


def edge_count(n_nodes: int, c: EdgeDensity) -> int:
    """Exact floor(c * N) with c parsed as an exact decimal.

    Strings and floats go through Decimal so that e.g. c = 0.3, N = 10 gives
    3 rather than a float-floor off-by-one.
    """
    if isinstance(c, (int, Fraction)):
        frac = Fraction(c)
    elif isinstance(c, Decimal):
        frac = Fraction(c)
    elif isinstance(c, str):
        try:
            frac = Fraction(Decimal(c))
        except InvalidOperation as exc:
            raise ValueError(f"cannot parse edge density {c!r}") from exc
    elif isinstance(c, float):
        frac = Fraction(Decimal(str(c)))
    else:
        raise TypeError(f"unsupported edge density type {type(c)!r}")
    if frac <= 0:
        raise ValueError(f"edge density must be positive, got {c}")
    return math.floor(frac * n_nodes)


def _nodes_from_uniforms(u: np.ndarray, size: int) -> np.ndarray:
    # floor(u * size) maps Uniform[0,1) to Uniform{0..size-1}; the coupling
    # across block sizes reuses the same uniforms.
    return np.minimum((u * size).astype(np.int64), size - 1)


def sample_er(n_nodes: int, c: EdgeDensity, arity: int, seed: int) -> Hypergraph:
    """Plain ensemble: floor(c*N) i.i.d. edges uniform over the N^K tuples."""
    if arity < 2:
        raise ValueError(f"arity must be >= 2, got {arity}")
    m = edge_count(n_nodes, c)
    rng = substream(seed, GRAPH)
    u = rng.random((m, arity))
    return Hypergraph(n_nodes, arity, _nodes_from_uniforms(u, n_nodes))


def sample_interpolated(n_nodes: int, c: EdgeDensity, arity: int,
                        point: InterpolationPoint, seed: int) -> Hypergraph:
    """Interpolated ensemble at chain step ``point.t``.

    The first floor(c*N) - t edge slots are uniform over all N^K tuples; each
    of the last t slots independently picks block 1 (nodes [0, n1)) with
    probability n1/N and is uniform over that block's tuples, otherwise
    block 2 (nodes [n1, N)).
    """
    if arity < 2:
        raise ValueError(f"arity must be >= 2, got {arity}")
    if point.n != n_nodes:
        raise ValueError(f"block sizes {point.n1}+{point.n2} != n_nodes {n_nodes}")
    m = edge_count(n_nodes, c)
    if point.t > m:
        raise ValueError(f"t = {point.t} exceeds edge count {m}")
    rng = substream(seed, GRAPH)
    u = rng.random((m, arity))
    v = rng.random(m)

    edges = _nodes_from_uniforms(u, n_nodes)
    g = m - point.t
    if point.t and point.n2 > 0:
        in_block1 = v[g:] < point.n1 / n_nodes
        block1 = _nodes_from_uniforms(u[g:], point.n1)
        block2 = point.n1 + _nodes_from_uniforms(u[g:], point.n2)
        edges[g:] = np.where(in_block1[:, None], block1, block2)
    elif point.t:
        edges[g:] = _nodes_from_uniforms(u[g:], point.n1)
    return Hypergraph(n_nodes, arity, edges)


def degree_stats(graph: Hypergraph) -> DegreeStats:
    """Exact degree, incidence and edge-neighborhood counts."""
    n, m = graph.n_nodes, graph.n_edges
    if m == 0:
        return DegreeStats(np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64),
                           np.zeros(0, dtype=np.int64), 0)
    degrees = np.bincount(graph.edges.ravel(), minlength=n)
    incidences = np.zeros(n, dtype=np.int64)
    incident_edges: list[set[int]] = [set() for _ in range(n)]
    edge_node_sets = []
    for idx, edge in enumerate(graph.edges):
        nodes = set(int(x) for x in edge)
        edge_node_sets.append(nodes)
        for node in nodes:
            incidences[node] += 1
            incident_edges[node].add(idx)
    neighborhoods = np.zeros(m, dtype=np.int64)
    for idx, nodes in enumerate(edge_node_sets):
        nb: set[int] = set()
        for node in nodes:
            nb |= incident_edges[node]
        neighborhoods[idx] = len(nb)  # includes idx itself
    return DegreeStats(degrees.astype(np.int64), incidences, neighborhoods,
                       int(degrees.max()))


def degree_tail_probability(n_nodes: int, c: EdgeDensity, arity: int, m: int) -> float:
    """P(node incidence = m): Binomial(floor(c*N), 1 - (1 - 1/N)^K) point mass.

    Each of the floor(c*N) edges contains a fixed node independently with
    probability 1 - (1 - 1/N)^K.
    """
    trials = edge_count(n_nodes, c)
    if m < 0 or m > trials:
        return 0.0
    p = -math.expm1(arity * math.log1p(-1.0 / n_nodes))
    return float(math.comb(trials, m) * p ** m * (1.0 - p) ** (trials - m))


def graph_to_json(graph: Hypergraph) -> str:
    """Byte-stable serialization {"n": N, "k": K, "edges": [[...], ...]}."""
    payload = {"n": graph.n_nodes, "k": graph.arity,
               "edges": [[int(x) for x in edge] for edge in graph.edges]}
    return json.dumps(payload, separators=(",", ":"))


def graph_from_json(text: str) -> Hypergraph:
    obj = json.loads(text)
    edges = np.array(obj["edges"], dtype=np.int64).reshape(-1, obj["k"])
    return Hypergraph(obj["n"], obj["k"], edges)
