"""Spin domains, potential specifications, and the example model zoo.

A model bundles a spin domain (discrete colors or a finite partition of the
real line), a node-potential law, an edge-potential law of arity K, and the
soft-state constants (kappa, rho_min, rho_max, J_max, alpha) under which the
log-partition bounds and perturbation lemmas hold.

Discrete colors are 0..q-1 internally; the +/-1 spin encodings used by the
Ising, Viana-Bray and XOR models are presentation-level maps c -> 2c-1.
Continuous spins are restricted to piecewise-constant potentials over a
declared cell partition (which makes the discrete embedding exact), plus the
Gaussian kernel node potential evaluated by composite midpoint quadrature.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .seeds import EDGE_POTENTIALS, NODE_POTENTIALS, substream

__all__ = [
    "Discrete",
    "PiecewiseContinuous",
    "SpinDomain",
    "NodePotentialSpec",
    "EdgePotentialSpec",
    "SoftStateParams",
    "ModelSpec",
    "PotentialDraws",
    "ModelConfigError",
    "SoftStateError",
    "ZOO_MODELS",
    "build_model",
    "soft_params_discrete",
    "find_soft_color",
    "embed_discrete",
    "draw_potentials",
    "verify_soft_state",
    "gaussian_kernel_potential",
    "model_from_config",
    "model_to_config",
    "vb_f1",
    "vb_f2",
]


class ModelConfigError(ValueError):
    """Unknown model name or out-of-range parameter."""


class SoftStateError(ValueError):
    """The soft-state assumption fails for the given tables."""


# ---------------------------------------------------------------------------
# Spin domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Discrete:
    """Color set {0, ..., q-1}."""

    q: int

    def __post_init__(self):
        if self.q < 2:
            raise ModelConfigError(f"discrete domain needs q >= 2, got {self.q}")

    @property
    def n_states(self) -> int:
        return self.q

    @property
    def lengths(self) -> np.ndarray:
        return np.ones(self.q)


@dataclass(frozen=True)
class PiecewiseContinuous:
    """Finite list of disjoint real cells [lo, hi); quadrature weight = length."""

    cells: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.cells:
            raise ModelConfigError("continuous domain needs at least one cell")
        for lo, hi in self.cells:
            if not hi > lo:
                raise ModelConfigError(f"cell [{lo}, {hi}) has non-positive length")
        spans = sorted(self.cells)
        for (al, ah), (bl, bh) in zip(spans, spans[1:]):
            if bl < ah:
                raise ModelConfigError(f"cells [{al},{ah}) and [{bl},{bh}) overlap")

    @property
    def n_states(self) -> int:
        return len(self.cells)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([hi - lo for lo, hi in self.cells])

    def midpoints(self) -> np.ndarray:
        return np.array([0.5 * (lo + hi) for lo, hi in self.cells])


SpinDomain = Union[Discrete, PiecewiseContinuous]


# ---------------------------------------------------------------------------
# Potential specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NodePotentialSpec:
    """Law of the node potential h, as a table over domain states.

    ``table`` is the deterministic case (a singleton law).  A random law
    supplies ``sampler``, which maps a Generator to a fresh table.  Every
    drawn table must be non-negative and vanish outside the support states.
    """

    table: Optional[np.ndarray] = None
    sampler: Optional[Callable[[np.random.Generator], np.ndarray]] = None

    def __post_init__(self):
        if (self.table is None) == (self.sampler is None):
            raise ModelConfigError("exactly one of table/sampler must be given")
        if self.table is not None:
            t = np.asarray(self.table, dtype=float)
            if np.any(t < 0) or not np.all(np.isfinite(t)):
                raise ModelConfigError("node potential table must be finite and >= 0")
            object.__setattr__(self, "table", t)

    @property
    def deterministic(self) -> bool:
        return self.table is not None

    def draw(self, rng: np.random.Generator) -> np.ndarray:
        if self.table is not None:
            return self.table
        return np.asarray(self.sampler(rng), dtype=float)


@dataclass(frozen=True)
class EdgePotentialSpec:
    """Law of the edge potential J over K-tuples of domain states.

    ``support`` lists (table, probability) pairs for a finite law, which is
    what the exact expectation operators consume.  All six zoo models have
    finite support: deterministic kernels are singletons, K-SAT has 2^K
    equally likely sign tuples, Viana-Bray one table per value of I.
    """

    arity: int
    support: Optional[tuple[tuple[np.ndarray, float], ...]] = None
    sampler: Optional[Callable[[np.random.Generator], np.ndarray]] = None

    def __post_init__(self):
        if self.arity < 2:
            raise ModelConfigError(f"edge arity must be >= 2, got {self.arity}")
        if (self.support is None) == (self.sampler is None):
            raise ModelConfigError("exactly one of support/sampler must be given")
        if self.support is not None:
            norm = []
            total = 0.0
            for table, prob in self.support:
                t = np.asarray(table, dtype=float)
                if t.ndim != self.arity:
                    raise ModelConfigError(
                        f"support table has order {t.ndim}, expected {self.arity}")
                if np.any(t < 0) or not np.all(np.isfinite(t)):
                    raise ModelConfigError("edge potential tables must be finite and >= 0")
                if prob <= 0:
                    raise ModelConfigError("support probabilities must be positive")
                norm.append((t, float(prob)))
                total += prob
            if abs(total - 1.0) > 1e-12:
                raise ModelConfigError(f"support probabilities sum to {total}, not 1")
            object.__setattr__(self, "support", tuple(norm))

    @property
    def deterministic(self) -> bool:
        return self.support is not None and len(self.support) == 1

    @property
    def finite_support(self) -> bool:
        return self.support is not None

    def draw(self, rng: np.random.Generator) -> np.ndarray:
        if self.support is not None:
            if len(self.support) == 1:
                return self.support[0][0]
            probs = [p for _, p in self.support]
            idx = rng.choice(len(self.support), p=probs)
            return self.support[idx][0]
        return np.asarray(self.sampler(rng), dtype=float)


@dataclass(frozen=True)
class SoftStateParams:
    """Constants of the soft-state assumption plus the convexity shift alpha.

    The soft region is the state set embedded in [0, kappa); every edge
    potential is at least rho_min there, node masses sit between rho_min and
    rho_max, and sup J <= j_max <= rho_max.  alpha >= j_max is the shift that
    makes the expected tensor products convex on the positive orthant.
    """

    kappa: float
    rho_min: float
    rho_max: float
    j_max: float
    alpha: float
    omega_h: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if not (0 < self.rho_min <= self.rho_max):
            raise ModelConfigError(
                f"need 0 < rho_min <= rho_max, got ({self.rho_min}, {self.rho_max})")
        if not (0 < self.j_max <= self.rho_max):
            raise ModelConfigError(
                f"need 0 < j_max <= rho_max, got ({self.j_max}, {self.rho_max})")
        if self.alpha < self.j_max:
            raise ModelConfigError(f"alpha {self.alpha} < j_max {self.j_max}")
        if self.kappa <= 0:
            raise ModelConfigError("kappa must be positive")

    @property
    def log_ratio(self) -> float:
        """log(rho_max) - log(rho_min), the unit of the perturbation bounds."""
        return math.log(self.rho_max) - math.log(self.rho_min)


@dataclass(frozen=True)
class ModelSpec:
    """A named model: domain + potential laws + soft-state constants."""

    name: str
    domain: SpinDomain
    node_pot: NodePotentialSpec
    edge_pot: EdgePotentialSpec
    soft: SoftStateParams
    params: dict = field(default_factory=dict)

    @property
    def arity(self) -> int:
        return self.edge_pot.arity

    @property
    def n_states(self) -> int:
        return self.domain.n_states

    def soft_states(self) -> np.ndarray:
        """Indices of the states whose cells lie inside [0, kappa)."""
        if isinstance(self.domain, Discrete):
            # color i occupies [i, i+1) in the embedded picture
            return np.arange(min(self.domain.q, int(math.floor(self.soft.kappa))))
        idx = [i for i, (lo, hi) in enumerate(self.domain.cells)
               if lo >= 0.0 and hi <= self.soft.kappa]
        return np.array(idx, dtype=int)


@dataclass(frozen=True)
class PotentialDraws:
    """Dense potential tables attached to a graph: one h per node, one J per edge."""

    node_tables: np.ndarray   # (N, n_states)
    edge_tables: np.ndarray   # (M, n_states, ..., n_states), order = arity

    @property
    def n_nodes(self) -> int:
        return self.node_tables.shape[0]

    @property
    def n_edges(self) -> int:
        return self.edge_tables.shape[0]


# ---------------------------------------------------------------------------
# The model zoo
# ---------------------------------------------------------------------------

ZOO_MODELS = ("independent_set", "potts", "ising", "viana_bray", "xor", "ksat")


def _sign_product_table(k: int) -> np.ndarray:
    """Table of prod_l (2*c_l - 1) over color tuples c in {0,1}^k."""
    grids = np.meshgrid(*([np.array([-1.0, 1.0])] * k), indexing="ij")
    out = np.ones((2,) * k)
    for g in grids:
        out = out * g
    return out


def _vb_tables(k: int, beta: float, i_values: Sequence[float],
               i_probs: Sequence[float]) -> tuple[tuple[np.ndarray, float], ...]:
    signs = _sign_product_table(k)
    return tuple((np.exp(beta * v * signs), float(p))
                 for v, p in zip(i_values, i_probs))


def _ksat_tables(k: int, beta: float) -> tuple[tuple[np.ndarray, float], ...]:
    prob = 0.5 ** k
    out = []
    for flat in range(2 ** k):
        z = tuple((flat >> (k - 1 - j)) & 1 for j in range(k))
        table = np.ones((2,) * k)
        table[z] = math.exp(-beta)
        out.append((table, prob))
    return tuple(out)


def _check_symmetric_law(values: Sequence[float], probs: Sequence[float]) -> None:
    if len(values) != len(probs):
        raise ModelConfigError("i_values and i_probs must have equal length")
    if abs(sum(probs) - 1.0) > 1e-12 or any(p <= 0 for p in probs):
        raise ModelConfigError("i_probs must be positive and sum to 1")
    law = {}
    for v, p in zip(values, probs):
        law[float(v)] = law.get(float(v), 0.0) + p
    for v, p in law.items():
        if abs(law.get(-v, 0.0) - p) > 1e-12:
            raise ModelConfigError("distribution of I must be symmetric around zero")


def build_model(name: str, **params) -> ModelSpec:
    """Construct one of the six zoo models with validated parameters.

    Accepted parameters by model:

    - ``independent_set``: lambda > 0.  Hard-core pair kernel, J(1,1) = 0.
    - ``potts``: q >= 2, beta >= 0.  J = exp(-beta) on equal colors, else 1.
    - ``ising``: beta >= 0, h > 0.  Anti-ferromagnetic pair kernel
      J = exp(-beta * x1 * x2) in the +/-1 spin encoding, so equal spins get
      exp(-beta) and unequal spins exp(+beta); h is the external field on
      spin +1.
    - ``viana_bray``: k >= 2, beta > 0, h > 0, i_values/i_probs a finite
      symmetric law for I with bounded support.  J = exp(beta*I*prod x_l).
    - ``xor``: k >= 2, beta > 0.  Viana-Bray with h = 1 and I = +/-1 uniform.
    - ``ksat``: k >= 2, beta >= 0.  A uniformly random sign tuple z* gets
      J(z*) = exp(-beta), all other tuples 1.

    The stored soft-state constants are valid witnesses of the soft-state
    assumption for all admitted parameters (checkable via
    ``verify_soft_state``), and alpha equals j_max for every zoo model.
    """
    known = dict(params)

    def take(key, default=None, required=False):
        if key in known:
            return known.pop(key)
        if required:
            raise ModelConfigError(f"model {name!r} requires parameter {key!r}")
        return default

    if name == "independent_set":
        lam = float(take("lambda", required=True))
        if lam <= 0:
            raise ModelConfigError(f"lambda must be positive, got {lam}")
        h = np.array([1.0, lam])
        j = np.ones((2, 2))
        j[1, 1] = 0.0
        soft = SoftStateParams(kappa=1.0, rho_min=min(lam, 1.0), rho_max=1.0 + lam,
                               j_max=1.0, alpha=1.0, omega_h=((0.0, 2.0),))
        spec = ModelSpec(name, Discrete(2),
                         NodePotentialSpec(table=h),
                         EdgePotentialSpec(2, support=((j, 1.0),)),
                         soft, {"lambda": lam})

    elif name == "potts":
        q = int(take("q", required=True))
        beta = float(take("beta", required=True))
        if q < 2:
            raise ModelConfigError(f"potts needs q >= 2, got {q}")
        if beta < 0:
            raise ModelConfigError("ferromagnetic potts (beta < 0) is out of scope")
        h = np.ones(q)
        j = np.ones((q, q)) - (1.0 - math.exp(-beta)) * np.eye(q)
        # sup J = 1 for beta >= 0; rho_max = max(q*max h, j_max) keeps the
        # soft-state witness valid for every beta.
        soft = SoftStateParams(kappa=float(q - 1), rho_min=min(1.0, math.exp(-beta)),
                               rho_max=float(q), j_max=1.0, alpha=1.0,
                               omega_h=((0.0, float(q)),))
        spec = ModelSpec(name, Discrete(q),
                         NodePotentialSpec(table=h),
                         EdgePotentialSpec(2, support=((j, 1.0),)),
                         soft, {"q": q, "beta": beta})

    elif name == "ising":
        beta = float(take("beta", required=True))
        hval = float(take("h", 1.0))
        if beta < 0:
            raise ModelConfigError("ferromagnetic ising (beta < 0) is out of scope")
        if hval <= 0:
            raise ModelConfigError(f"external field h must be positive, got {hval}")
        h = np.array([1.0, hval])
        eb = math.exp(beta)
        j = np.array([[1.0 / eb, eb], [eb, 1.0 / eb]])
        jmax = eb
        rho_max = max(2.0 * max(1.0, hval), jmax)
        soft = SoftStateParams(kappa=1.0, rho_min=min(1.0, hval, 1.0 / eb),
                               rho_max=rho_max, j_max=jmax, alpha=jmax,
                               omega_h=((0.0, 2.0),))
        spec = ModelSpec(name, Discrete(2),
                         NodePotentialSpec(table=h),
                         EdgePotentialSpec(2, support=((j, 1.0),)),
                         soft, {"beta": beta, "h": hval})

    elif name in ("viana_bray", "xor"):
        k = int(take("k", required=True))
        beta = float(take("beta", required=True))
        if k < 2:
            raise ModelConfigError(f"arity k must be >= 2, got {k}")
        if beta <= 0:
            raise ModelConfigError(f"viana-bray needs beta > 0, got {beta}")
        if name == "xor":
            hval = 1.0
            i_values, i_probs = (1.0, -1.0), (0.5, 0.5)
            extra = {}
        else:
            hval = float(take("h", 1.0))
            if hval <= 0:
                raise ModelConfigError(f"h must be positive, got {hval}")
            i_values = tuple(float(v) for v in take("i_values", (1.0, -1.0)))
            i_probs = tuple(float(p) for p in take("i_probs", (0.5, 0.5)))
            _check_symmetric_law(i_values, i_probs)
            extra = {"h": hval, "i_values": list(i_values), "i_probs": list(i_probs)}
        c_i = max(abs(v) for v in i_values)
        h = np.array([1.0, hval])
        jmax = max(hval, math.exp(beta * c_i))
        rho_max = max(2.0 * max(1.0, hval), jmax)
        # All colors are soft (J >= exp(-beta*c_I) > 0 everywhere): kappa = q.
        soft = SoftStateParams(kappa=2.0,
                               rho_min=min(1.0, hval, math.exp(-beta * c_i)),
                               rho_max=rho_max, j_max=jmax, alpha=jmax,
                               omega_h=((0.0, 2.0),))
        spec = ModelSpec(name, Discrete(2),
                         NodePotentialSpec(table=h),
                         EdgePotentialSpec(k, support=_vb_tables(k, beta, i_values, i_probs)),
                         soft, {"k": k, "beta": beta, **extra})

    elif name == "ksat":
        k = int(take("k", required=True))
        beta = float(take("beta", required=True))
        if k < 2:
            raise ModelConfigError(f"arity k must be >= 2, got {k}")
        if beta < 0:
            raise ModelConfigError(f"ksat needs beta >= 0, got {beta}")
        h = np.ones(2)
        soft = SoftStateParams(kappa=2.0, rho_min=math.exp(-beta), rho_max=2.0,
                               j_max=1.0, alpha=1.0, omega_h=((0.0, 2.0),))
        spec = ModelSpec(name, Discrete(2),
                         NodePotentialSpec(table=h),
                         EdgePotentialSpec(k, support=_ksat_tables(k, beta)),
                         soft, {"k": k, "beta": beta})

    else:
        raise ModelConfigError(f"unknown model {name!r}; known: {ZOO_MODELS}")

    if known:
        raise ModelConfigError(f"unexpected parameters for {name!r}: {sorted(known)}")
    return spec


def vb_f1(beta: float, i: float, j_max: float) -> float:
    """Even part of the Viana-Bray shift: f1(I) = J_max - cosh(beta*I)."""
    return j_max - math.cosh(beta * i)


def vb_f2(beta: float, i: float) -> float:
    """Odd part of the Viana-Bray shift: f2(I) = sinh(beta*I)."""
    return math.sinh(beta * i)


# ---------------------------------------------------------------------------
# Soft-state parameters of deterministic discrete kernels
# ---------------------------------------------------------------------------

def find_soft_color(j: np.ndarray) -> Optional[int]:
    """Smallest color q0 whose every slice of J is strictly positive, or None."""
    j = np.asarray(j, dtype=float)
    k = j.ndim
    q = j.shape[0]
    for q0 in range(q):
        ok = True
        for axis in range(k):
            if np.take(j, q0, axis=axis).min() <= 0:
                ok = False
                break
        if ok:
            return q0
    return None


def soft_params_discrete(j: np.ndarray, h: np.ndarray,
                         q0: Optional[int] = None) -> SoftStateParams:
    """Soft-state witness of a deterministic discrete kernel.

    J_max is the largest kernel entry, rho_max = max(J_max, q * max h), and
    rho_min is the smallest entry over tuples with some coordinate equal to
    the soft color q0.  When q0 is omitted the smallest valid color is found;
    if none exists the soft-state assumption fails and SoftStateError is
    raised rather than silently patched.

    The returned parameters use kappa = 1, i.e. they describe the model with
    colors relabeled so that q0 becomes color 0.
    """
    j = np.asarray(j, dtype=float)
    h = np.asarray(h, dtype=float)
    q = j.shape[0]
    if j.shape != (q,) * j.ndim:
        raise ModelConfigError(f"kernel must be q^K cubic, got shape {j.shape}")
    if h.shape != (q,):
        raise ModelConfigError(f"node table length {h.shape} != q = {q}")
    if q0 is None:
        q0 = find_soft_color(j)
        if q0 is None:
            raise SoftStateError("no color has strictly positive interaction "
                                 "with every other color")
    slices = [np.take(j, q0, axis=axis) for axis in range(j.ndim)]
    rho_min = min(float(s.min()) for s in slices)
    if rho_min <= 0:
        raise SoftStateError(f"color {q0} is not soft: some interaction is 0")
    j_max = float(j.max())
    rho_max = max(j_max, q * float(h.max()))
    return SoftStateParams(kappa=1.0, rho_min=rho_min, rho_max=rho_max,
                           j_max=j_max, alpha=j_max, omega_h=((0.0, float(q)),))


# ---------------------------------------------------------------------------
# Discrete -> continuous embedding
# ---------------------------------------------------------------------------

def embed_discrete(model: ModelSpec) -> ModelSpec:
    """Embed a discrete model into unit cells [i, i+1), i = 0..q-1.

    Potentials are constant per cell, so the continuous partition function of
    the image equals the discrete partition function of the preimage on every
    graph.
    """
    if not isinstance(model.domain, Discrete):
        raise ModelConfigError("embed_discrete takes a model with a Discrete domain")
    q = model.domain.q
    domain = PiecewiseContinuous(tuple((float(i), float(i + 1)) for i in range(q)))
    return ModelSpec(model.name + "_embedded", domain, model.node_pot,
                     model.edge_pot, model.soft, dict(model.params))


def gaussian_kernel_potential(half_width: float = 6.0,
                              n_cells: int = 512) -> tuple[PiecewiseContinuous, np.ndarray]:
    """Gaussian node potential h(x) = exp(-x^2) on a truncated uniform grid.

    Returns the cell partition of [-half_width, half_width] and the per-cell
    midpoint values; the quadrature is composite midpoint on that grid.
    """
    if half_width <= 0 or n_cells < 1:
        raise ModelConfigError("need half_width > 0 and n_cells >= 1")
    edges = np.linspace(-half_width, half_width, n_cells + 1)
    domain = PiecewiseContinuous(tuple((float(a), float(b))
                                       for a, b in zip(edges[:-1], edges[1:])))
    table = np.exp(-domain.midpoints() ** 2)
    return domain, table


# ---------------------------------------------------------------------------
# Potential draws
# ---------------------------------------------------------------------------

def draw_potentials(model: ModelSpec, graph, seed: int) -> PotentialDraws:
    """Draw i.i.d. node and edge potentials for every node/edge of ``graph``.

    Node and edge draws come from independent substreams of ``seed`` and are
    deterministic given (model, graph shape, seed).
    """
    if graph.arity != model.arity:
        raise ModelConfigError(
            f"graph arity {graph.arity} != model arity {model.arity}")
    n, m = graph.n_nodes, graph.n_edges
    rng_nodes = substream(seed, NODE_POTENTIALS)
    rng_edges = substream(seed, EDGE_POTENTIALS)
    node_tables = np.stack([model.node_pot.draw(rng_nodes) for _ in range(n)]) \
        if n else np.zeros((0, model.n_states))
    shape = (model.n_states,) * model.arity
    edge_tables = np.stack([model.edge_pot.draw(rng_edges) for _ in range(m)]) \
        if m else np.zeros((0,) + shape)
    return PotentialDraws(node_tables=node_tables, edge_tables=edge_tables)


# ---------------------------------------------------------------------------
# Soft-state verification
# ---------------------------------------------------------------------------

def _iter_node_tables(model: ModelSpec, n_random: int, seed: int):
    if model.node_pot.deterministic:
        yield model.node_pot.table
    else:
        rng = substream(seed, NODE_POTENTIALS)
        for _ in range(n_random):
            yield model.node_pot.draw(rng)


def _iter_edge_tables(model: ModelSpec, n_random: int, seed: int):
    if model.edge_pot.finite_support:
        for table, _ in model.edge_pot.support:
            yield table
    else:
        rng = substream(seed, EDGE_POTENTIALS)
        for _ in range(n_random):
            yield model.edge_pot.draw(rng)


def verify_soft_state(model: ModelSpec, rel_tol: float = 1e-12,
                      n_random: int = 64, seed: int = 0) -> list[str]:
    """Exhaustively check the soft-state assumption against the stored constants.

    Returns a list of human-readable violations (empty means the assumption
    holds).  Finite-support laws are checked over their whole support;
    sampler-based laws over ``n_random`` draws.
    """
    soft = model.soft
    lengths = model.domain.lengths
    soft_idx = model.soft_states()
    slack = rel_tol * (1.0 + soft.rho_max)
    problems = []

    if soft_idx.size == 0:
        problems.append("no state lies inside the soft region [0, kappa)")
        return problems

    for h in _iter_node_tables(model, n_random, seed):
        mass = float(np.dot(h, lengths))
        soft_mass = float(np.dot(h[soft_idx], lengths[soft_idx]))
        if soft_mass < soft.rho_min - slack:
            problems.append(
                f"soft node mass {soft_mass} < rho_min {soft.rho_min}")
        if mass > soft.rho_max + slack:
            problems.append(f"node mass {mass} > rho_max {soft.rho_max}")

    soft_set = set(int(i) for i in soft_idx)
    for table in _iter_edge_tables(model, n_random, seed):
        if float(table.max()) > soft.j_max + slack:
            problems.append(f"sup J {table.max()} > j_max {soft.j_max}")
        # Soft interaction: tuples with any soft coordinate stay >= rho_min.
        for idx in np.ndindex(table.shape):
            if any(i in soft_set for i in idx):
                if table[idx] < soft.rho_min - slack:
                    problems.append(
                        f"J{idx} = {table[idx]} < rho_min {soft.rho_min}")
                    break
    return problems


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------

def model_from_config(obj: dict) -> tuple[ModelSpec, int]:
    """Build (model, seed) from a config object {"model", "params", "seed"}."""
    try:
        name = obj["model"]
        params = obj["params"]
        seed = int(obj["seed"])
    except KeyError as exc:
        raise ModelConfigError(f"config is missing field {exc}") from exc
    return build_model(name, **params), seed


def model_to_config(model: ModelSpec, seed: int) -> dict:
    return {"model": model.name, "params": dict(model.params), "seed": int(seed)}


def load_model_config(path: str) -> tuple[ModelSpec, int]:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_config(json.load(fh))
