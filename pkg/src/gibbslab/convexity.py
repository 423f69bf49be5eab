"""Convexity certification for shifted edge kernels and their tensor products.

The main objects are order-K arrays with entries alpha - J evaluated on rows
of spin values, their expected tensor products over a shared draw of J, and
the multilinear forms they induce.  For K = 2 deterministic kernels the
existence of a shift alpha >= J_max making alpha - J positive semi-definite
is decidable through the restricted definiteness of -J on the zero-sum
subspace R0; for higher order the package offers exact closed-form checks
where they exist (K-SAT rank-1 identity, Viana-Bray odd-moment cancellation)
plus a randomized convexity falsifier.  The falsifier samples points and
directions and evaluates exact second directional derivatives; it can refute
convexity but never proves it.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Literal, Optional, Sequence

import numpy as np
from scipy.linalg import eigh, null_space

from .models import ModelSpec, build_model, vb_f1, vb_f2
from .seeds import FALSIFY, substream

__all__ = [
    "KArray",
    "PsdCertificate",
    "InterpolationVector",
    "FalsifyResult",
    "KsatRank1Report",
    "PartitionClassification",
    "PartitionKernel",
    "ModelCertificate",
    "tensor_product",
    "multilinear_form",
    "restricted_definite_on_r0",
    "min_alpha_psd",
    "expected_alpha_minus_j_tensor",
    "convexity_falsify",
    "ksat_rank1_verify",
    "vb_f2_moment",
    "vb_decomposition_max_error",
    "partition_kernel_classify",
    "interpolation_vector",
    "diagonal_decomposition_exact",
    "certify_model",
]

KARRAY_CAP = 2 ** 20
ALPHA_SEARCH_CAP = 2.0 ** 60


# ---------------------------------------------------------------------------
# Order-K arrays and multilinear forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KArray:
    """Dense n-dimensional array of order k (shape (n,)*k, finite entries)."""

    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=float)
        if d.ndim < 1 or d.shape != (d.shape[0],) * d.ndim:
            raise ValueError(f"array must be cubic, got shape {d.shape}")
        if d.size > KARRAY_CAP:
            raise ValueError(f"array with {d.size} entries exceeds cap {KARRAY_CAP}")
        if not np.all(np.isfinite(d)):
            raise ValueError("array entries must be finite")
        object.__setattr__(self, "data", d)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def order(self) -> int:
        return self.data.ndim


def _pair_tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Composite index (i, j) -> i * dim(b) + j on every axis.
    k = a.ndim
    out = np.multiply.outer(a, b)
    perm = [axis for d in range(k) for axis in (d, k + d)]
    return out.transpose(perm).reshape((a.shape[0] * b.shape[0],) * k)


def tensor_product(arrays: Sequence[KArray]) -> KArray:
    """Tensor product over replicas: entry = prod_l A_l[i^l_1, ..., i^l_K].

    The result is an n^r-dimensional array of the same order; the composite
    index packs per-replica indices row-major (replica 1 most significant).
    """
    if not arrays:
        raise ValueError("need at least one array")
    n, k = arrays[0].n, arrays[0].order
    for arr in arrays:
        if arr.n != n or arr.order != k:
            raise ValueError("all arrays must share dimension and order")
    if (n ** len(arrays)) ** k > KARRAY_CAP:
        raise ValueError("tensor product would exceed the dense storage cap")
    return KArray(reduce(_pair_tensor, [arr.data for arr in arrays]))


def multilinear_form(array: KArray, y: Sequence[float]) -> float:
    """sum over index tuples of y_{i_1} ... y_{i_K} a_{i_1...i_K}."""
    vec = np.asarray(y, dtype=float)
    if vec.shape != (array.n,):
        raise ValueError(f"vector length {vec.shape} != array dimension {array.n}")
    t = array.data
    for _ in range(array.order):
        t = np.tensordot(t, vec, axes=([0], [0]))
    return float(t)


# ---------------------------------------------------------------------------
# PSD certification for K = 2 deterministic kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PsdCertificate:
    """Outcome of the minimal-shift search for alpha - J.

    verdict is one of "psd_for_alpha" (with the smallest alpha found),
    "no_alpha" (with a zero-sum witness y whose limiting form y'(-J)y <= 0),
    or "inconclusive".
    """

    verdict: Literal["psd_for_alpha", "no_alpha", "inconclusive"]
    alpha: Optional[float]
    witness: Optional[np.ndarray]
    tol: float
    reason: str = ""

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "tol": self.tol}
        out["alpha"] = self.alpha
        out["witness"] = None if self.witness is None else list(map(float, self.witness))
        return out


def _check_symmetric(j: np.ndarray) -> np.ndarray:
    j = np.asarray(j, dtype=float)
    if j.ndim != 2 or j.shape[0] != j.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {j.shape}")
    scale = 1.0 + float(np.abs(j).max(initial=0.0))
    if float(np.abs(j - j.T).max(initial=0.0)) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric within 1e-12")
    return 0.5 * (j + j.T)


def _default_tol(j: np.ndarray) -> float:
    return 1e-9 * (1.0 + float(np.abs(j).max(initial=0.0)))


def restricted_definite_on_r0(j: np.ndarray,
                              tol: Optional[float] = None) -> Literal["yes", "no", "boundary"]:
    """Is -J positive definite on R0 = {y : sum y_i = 0}?

    "yes" when the smallest eigenvalue of -J restricted to R0 exceeds the
    tolerance, "no" when it is below -tolerance, "boundary" otherwise.  By
    the restricted-convexity lemma, "yes" is equivalent to alpha - J being
    positive definite for all large alpha.
    """
    j = _check_symmetric(j)
    if tol is None:
        tol = _default_tol(j)
    n = j.shape[0]
    if n == 1:
        return "yes"  # R0 is trivial
    basis = null_space(np.ones((1, n)))
    eigs = np.linalg.eigvalsh(basis.T @ (-j) @ basis)
    low = float(eigs.min())
    if low > tol:
        return "yes"
    if low < -tol:
        return "no"
    return "boundary"


def _min_eig_shift(j: np.ndarray, alpha: float) -> float:
    n = j.shape[0]
    return float(np.linalg.eigvalsh(alpha * np.ones((n, n)) - j).min())


def _search_min_alpha(j: np.ndarray, j_max: float, tol: float) -> Optional[float]:
    scale = 1.0 + float(np.abs(j).max(initial=0.0)) + abs(j_max)
    lo = j_max
    if _min_eig_shift(j, lo) >= -tol:
        return lo
    hi = max(lo, scale)
    while _min_eig_shift(j, hi) < -tol:
        hi *= 2.0
        if hi > ALPHA_SEARCH_CAP * scale:
            return None
    width = 1e-9 * (1.0 + abs(j_max))
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if _min_eig_shift(j, mid) >= -tol:
            hi = mid
        else:
            lo = mid
    return hi


def min_alpha_psd(j: np.ndarray, j_max: float,
                  tol: Optional[float] = None) -> PsdCertificate:
    """Smallest alpha >= j_max with the entrywise shift alpha - J PSD.

    When -J is definite on R0 the shift exists and a binary search finds the
    smallest one.  When -J is strictly indefinite on R0 no shift exists and a
    zero-sum witness is returned.  Boundary cases (a kernel direction of -J
    on R0) are resolved by inspecting J on that kernel: if J maps a kernel
    direction y* outside the span of the all-ones vector component, small
    perturbations y* + delta*1 make the form negative for every alpha, which
    certifies no_alpha (this is what rules out e.g. diag(-1, 1)); otherwise
    the direction is harmless and the search proceeds.
    """
    j = _check_symmetric(j)
    if tol is None:
        tol = _default_tol(j)
    n = j.shape[0]
    if n == 1:
        alpha = max(j_max, float(j[0, 0]))
        return PsdCertificate("psd_for_alpha", alpha, None, tol)

    basis = null_space(np.ones((1, n)))
    eigs, vecs = eigh(basis.T @ (-j) @ basis)
    low = float(eigs[0])
    if low < -tol:
        witness = basis @ vecs[:, 0]
        return PsdCertificate("no_alpha", None, witness, tol,
                              reason="-J strictly indefinite on R0")
    if low <= tol:
        ones = np.ones(n)
        for idx in range(eigs.size):
            if abs(float(eigs[idx])) > tol:
                continue
            y_star = basis @ vecs[:, idx]
            coupling = float(ones @ (j @ y_star))
            if abs(coupling) > tol * n:
                return PsdCertificate(
                    "no_alpha", None, y_star, tol,
                    reason="boundary kernel direction couples to the ones vector")
        alpha = _search_min_alpha(j, j_max, tol)
        if alpha is None:
            return PsdCertificate("inconclusive", None, None, tol,
                                  reason="semidefinite boundary; search hit cap")
        return PsdCertificate("psd_for_alpha", max(alpha, j_max), None, tol)

    alpha = _search_min_alpha(j, j_max, tol)
    if alpha is None:
        return PsdCertificate("inconclusive", None, None, tol,
                              reason="alpha search exceeded cap")
    return PsdCertificate("psd_for_alpha", max(alpha, j_max), None, tol)


# ---------------------------------------------------------------------------
# Expected tensor products over a shared draw of J
# ---------------------------------------------------------------------------

def expected_alpha_minus_j_tensor(model: ModelSpec, alpha: float,
                                  x_rows: Sequence[Sequence[int]],
                                  mode: str = "exact", trials: int = 1000,
                                  seed: int = 0) -> KArray:
    """E tensor_{l<=r} (alpha - J(x^l_{i_1}, ..., x^l_{i_K})), shared J draw.

    The same copy of J enters every replica factor; the expectation sums the
    finite support of the edge law exactly (mode "exact") or averages
    ``trials`` draws (mode "mc").
    """
    x = np.asarray(x_rows, dtype=np.int64)
    if x.ndim != 2:
        raise ValueError("x_rows must be an (r, n) array of spin states")
    r, n = x.shape
    if x.size and (x.min() < 0 or x.max() >= model.n_states):
        raise ValueError("x_rows entries outside the spin domain")
    k = model.arity

    def factors(table: np.ndarray) -> list[KArray]:
        return [KArray(alpha - table[np.ix_(*([x[l]] * k))]) for l in range(r)]

    if mode == "exact":
        if not model.edge_pot.finite_support:
            raise ValueError("exact mode needs a finite-support edge law")
        acc = np.zeros((n ** r,) * k)
        for table, prob in model.edge_pot.support:
            acc += prob * tensor_product(factors(table)).data
        return KArray(acc)
    if mode == "mc":
        rng = substream(seed, FALSIFY, 1)
        acc = np.zeros((n ** r,) * k)
        for _ in range(trials):
            acc += tensor_product(factors(model.edge_pot.draw(rng))).data
        return KArray(acc / trials)
    raise ValueError(f"mode must be 'exact' or 'mc', got {mode!r}")


# ---------------------------------------------------------------------------
# Convexity falsification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FalsifyResult:
    """Outcome of sampling second directional derivatives of the form."""

    violation_found: bool
    trials: int
    y: Optional[np.ndarray] = None
    direction: Optional[np.ndarray] = None
    second_derivative: Optional[float] = None


def _pair_second_derivative(data: np.ndarray, y: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Batched sum over slot pairs a != b of the form with d at slots a, b."""
    k = data.ndim
    batch = y.shape[0]
    letters = string.ascii_lowercase
    idx = letters[:k]
    out = np.zeros(batch)
    for a in range(k):
        for b in range(a + 1, k):
            operands = [d if s in (a, b) else y for s in range(k)]
            spec = idx + "," + ",".join("z" + idx[s] for s in range(k)) + "->z"
            out += 2.0 * np.einsum(spec, data, *operands, optimize=True)
    return out


def convexity_falsify(array: KArray, orthant_only: bool = True,
                      trials: int = 10000, seed: int = 0,
                      low: float = 1e-3, high: float = 1e3,
                      tol_scale: float = 1e-9) -> FalsifyResult:
    """Sample points and directions hunting for a negative second derivative.

    Points have log-uniform coordinates in [low, high] (strictly positive
    when ``orthant_only``, random signs otherwise); directions are uniform on
    the sphere.  The second directional derivative of the multilinear form is
    a polynomial contraction evaluated in closed form.  This is a
    falsification test (a necessary-condition sampler), not a proof of
    convexity.
    """
    if array.order < 2:
        raise ValueError("convexity needs order >= 2")
    rng = substream(seed, FALSIFY)
    dim, k = array.n, array.order
    abs_sum = float(np.abs(array.data).sum())
    batch = max(1, min(trials, (2 ** 22) // max(dim ** max(k - 1, 1), 1)))
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        y = np.exp(rng.uniform(math.log(low), math.log(high), size=(b, dim)))
        if not orthant_only:
            y = y * rng.choice([-1.0, 1.0], size=(b, dim))
        d = rng.standard_normal((b, dim))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        sd = _pair_second_derivative(array.data, y, d)
        row_scale = np.maximum(1.0, np.abs(y).max(axis=1)) ** max(k - 2, 0)
        tol = tol_scale * (1.0 + abs_sum * row_scale * k * k)
        bad = np.nonzero(sd < -tol)[0]
        if bad.size:
            i = int(bad[0])
            return FalsifyResult(True, done + i + 1, y[i], d[i], float(sd[i]))
        done += b
    return FalsifyResult(False, trials)


# ---------------------------------------------------------------------------
# K-SAT rank-1 identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KsatRank1Report:
    """Exact comparison of the expected K-SAT tensor against its closed form."""

    passed: bool
    max_entry_error: float
    max_form_error: float
    coefficient: float
    agreement_size: int


def ksat_agreement_indicator(x_rows: np.ndarray) -> np.ndarray:
    """Indicator over composite indices [n^r] of the agreement set.

    A composite index (j_1, ..., j_r) belongs to the agreement set when
    x^1_{j_1} = x^2_{j_2} = ... = x^r_{j_r}: every replica reads the same
    spin value at its own position.  Restricted to diagonal indices this is
    the usual set of positions where all replicas agree.
    """
    x = np.asarray(x_rows, dtype=np.int64)
    r, n = x.shape
    grids = np.indices((n,) * r)
    vals = np.stack([x[l][grids[l]] for l in range(r)])
    agree = np.all(vals == vals[0], axis=0)
    return agree.reshape(n ** r).astype(float)


def ksat_rank1_verify(beta: float, k: int, r: int,
                      x_rows: Sequence[Sequence[int]], n_form_checks: int = 16,
                      seed: int = 0, tol: float = 1e-12) -> KsatRank1Report:
    """Verify E tensor(1 - J) = 2^-K (1-e^-beta)^r * u^{tensor K} entrywise.

    u is the agreement-set indicator; the induced multilinear form then
    equals the closed form 2^-K (1-e^-beta)^r (sum_{agreement} y)^K, checked
    on random vectors.
    """
    model = build_model("ksat", k=k, beta=beta)
    exact = expected_alpha_minus_j_tensor(model, 1.0, x_rows)
    u = ksat_agreement_indicator(np.asarray(x_rows, dtype=np.int64))
    coef = 0.5 ** k * (1.0 - math.exp(-beta)) ** r
    closed = coef * reduce(np.multiply.outer, [u] * k)
    entry_err = float(np.abs(exact.data - closed).max())

    rng = substream(seed, FALSIFY, 2)
    form_err = 0.0
    for _ in range(n_form_checks):
        y = rng.uniform(0.0, 2.0, size=exact.n)
        lhs = multilinear_form(exact, y)
        rhs = coef * float(u @ y) ** k
        form_err = max(form_err, abs(lhs - rhs) / (1.0 + abs(rhs)))
    passed = entry_err <= tol and form_err <= tol * 100
    return KsatRank1Report(passed, entry_err, form_err, coef, int(u.sum()))


# ---------------------------------------------------------------------------
# Viana-Bray symmetrization
# ---------------------------------------------------------------------------

def vb_f2_moment(beta: float, i_values: Sequence[float], i_probs: Sequence[float],
                 r: int) -> float:
    """E f2(I)^r with f2(I) = sinh(beta I); zero for odd r by symmetry."""
    return float(sum(p * vb_f2(beta, v) ** r for v, p in zip(i_values, i_probs)))


def vb_decomposition_max_error(model: ModelSpec) -> float:
    """Max error of alpha - J = f1(I) - f2(I) prod x over all I and sign tuples.

    Uses alpha = J_max, f1(I) = J_max - cosh(beta I), f2(I) = sinh(beta I).
    """
    if model.name not in ("viana_bray", "xor"):
        raise ValueError("decomposition applies to Viana-Bray type models")
    beta = model.params["beta"]
    j_max = model.soft.j_max
    i_values = model.params.get("i_values", [1.0, -1.0])
    k = model.arity
    worst = 0.0
    for i_val, (table, _) in zip(i_values, model.edge_pot.support):
        f1 = vb_f1(beta, i_val, j_max)
        f2 = vb_f2(beta, i_val)
        for idx in np.ndindex(table.shape):
            prod_x = 1.0
            for c in idx:
                prod_x *= (2.0 * c - 1.0)
            lhs = j_max - table[idx]
            rhs = f1 - f2 * prod_x
            worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# Zero-one kernels of partition form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionClassification:
    """Does J(x,y) = 0 define an equivalence relation on the sampled points?

    ``classes`` lists the equivalence classes when it does.  Otherwise
    ``witness`` pins the violation: a (x, x') pair for reflexivity
    (J(x,x) = 1 despite J(x,x') = 0) or a (x1, x2, x3) triple for
    transitivity (x1 ~ x2 ~ x3 but J(x1,x3) = 1), either of which certifies
    that no shift makes alpha - J positive semi-definite.
    """

    is_partition_form: bool
    classes: Optional[list[list[int]]] = None
    witness: Optional[tuple[int, ...]] = None
    witness_kind: Optional[Literal["reflexivity", "transitivity"]] = None


def partition_kernel_classify(j01: np.ndarray) -> PartitionClassification:
    """Classify a sampled zero-one symmetric kernel."""
    j = np.asarray(j01)
    if not np.isin(j, (0, 1)).all():
        raise ValueError("kernel entries must be 0 or 1")
    j = _check_symmetric(j.astype(float)).astype(np.int64)
    n = j.shape[0]
    a0 = [i for i in range(n) if j[i].min() == 0]
    for i in a0:
        if j[i, i] == 1:
            partner = int(np.nonzero(j[i] == 0)[0][0])
            return PartitionClassification(False, witness=(i, partner),
                                           witness_kind="reflexivity")
    a0_set = set(a0)
    for i in a0:
        for jj in a0:
            if j[i, jj] != 0:
                continue
            for kk in a0:
                if j[jj, kk] == 0 and j[i, kk] == 1:
                    return PartitionClassification(False, witness=(i, jj, kk),
                                                   witness_kind="transitivity")
    classes = []
    unseen = set(a0_set)
    while unseen:
        start = min(unseen)
        cls = sorted(i for i in a0 if j[start, i] == 0)
        classes.append(cls)
        unseen -= set(cls)
    return PartitionClassification(True, classes=classes)


@dataclass(frozen=True)
class PartitionKernel:
    """Zero-one pair kernel of partition form over real spins.

    J(x, y) = 0 exactly when x and y fall in the same zero-class interval;
    outside all classes J = 1.  This is the only zero-one K = 2 form whose
    shifted kernel can be positive semi-definite.
    """

    zero_classes: tuple[tuple[float, float], ...]

    def __post_init__(self):
        spans = sorted(self.zero_classes)
        for (al, ah), (bl, bh) in zip(spans, spans[1:]):
            if bl < ah:
                raise ValueError("zero classes must be disjoint")

    def class_of(self, x: float) -> Optional[int]:
        for r, (lo, hi) in enumerate(self.zero_classes):
            if lo <= x < hi:
                return r
        return None

    def evaluate(self, x: float, y: float) -> float:
        cx, cy = self.class_of(x), self.class_of(y)
        return 0.0 if (cx is not None and cx == cy) else 1.0

    def sample_matrix(self, points: Sequence[float]) -> np.ndarray:
        pts = list(points)
        out = np.ones((len(pts), len(pts)))
        for i, x in enumerate(pts):
            for jj, y in enumerate(pts):
                out[i, jj] = self.evaluate(x, y)
        return out


# ---------------------------------------------------------------------------
# Interpolation vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InterpolationVector:
    """Diagonal probability vector over composite indices [n^r].

    Mass 1/n on every diagonal index (i, ..., i) for the global vector, or
    1/(hi-lo) on diagonal indices with i in [lo, hi) for a block vector.
    """

    n: int
    r: int
    block: Optional[tuple[int, int]]
    vector: np.ndarray = field(repr=False)


def _diagonal_index(i: int, n: int, r: int) -> int:
    return sum(i * n ** p for p in range(r))


def interpolation_vector(n: int, r: int,
                         block: Optional[tuple[int, int]] = None) -> InterpolationVector:
    """The diagonal vector e^{N,r} (block=None) or e^{N,r,j} (block=(lo, hi))."""
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    vec = np.zeros(n ** r)
    if block is None:
        lo, hi, mass = 0, n, 1.0 / n
    else:
        lo, hi = block
        if not (0 <= lo < hi <= n):
            raise ValueError(f"block [{lo}, {hi}) invalid for n = {n}")
        mass = 1.0 / (hi - lo)
    for i in range(lo, hi):
        vec[_diagonal_index(i, n, r)] = mass
    return InterpolationVector(n, r, block, vec)


def diagonal_decomposition_exact(n: int, r: int, n1: int) -> bool:
    """Entrywise exact check of e^{N,r} = sum_j (N_j/N) e^{N,r,j} in rationals."""
    if not 1 <= n1 <= n:
        raise ValueError("need 1 <= n1 <= n")
    total = {}
    blocks = [(0, n1)] + ([(n1, n)] if n1 < n else [])
    for lo, hi in blocks:
        weight = Fraction(hi - lo, n)
        for i in range(lo, hi):
            idx = _diagonal_index(i, n, r)
            total[idx] = total.get(idx, Fraction(0)) + weight * Fraction(1, hi - lo)
    expect = {_diagonal_index(i, n, r): Fraction(1, n) for i in range(n)}
    return total == expect


# ---------------------------------------------------------------------------
# Whole-model certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelCertificate:
    """Certification status of a zoo model for the interpolation experiments."""

    model: str
    certified: bool
    method: str
    psd: Optional[PsdCertificate] = None
    detail: dict = field(default_factory=dict)


def certify_model(model: ModelSpec, seed: int = 0) -> ModelCertificate:
    """Certify the convexity hypothesis for a zoo model.

    K = 2 deterministic kernels go through the PSD shift search.  K-SAT is
    certified by the exact rank-1 identity.  Viana-Bray (and XOR) with even
    K is certified through the odd-moment cancellation plus a falsifier
    probe; odd K is not certified.
    """
    if model.edge_pot.deterministic and model.arity == 2:
        kernel = model.edge_pot.support[0][0]
        cert = min_alpha_psd(kernel, model.soft.j_max)
        return ModelCertificate(model.name, cert.verdict == "psd_for_alpha",
                                "psd_k2", psd=cert)

    if model.name == "ksat":
        beta, k = model.params["beta"], model.params["k"]
        probes = [np.array([[0, 1], [1, 0]]), np.array([[0, 1], [0, 1]])]
        reports = [ksat_rank1_verify(beta, k, probe.shape[0], probe, seed=seed)
                   for probe in probes]
        ok = all(rep.passed for rep in reports)
        return ModelCertificate(model.name, ok, "ksat_rank1",
                                detail={"max_entry_error":
                                        max(rep.max_entry_error for rep in reports)})

    if model.name in ("viana_bray", "xor"):
        beta = model.params["beta"]
        i_values = model.params.get("i_values", [1.0, -1.0])
        i_probs = model.params.get("i_probs", [0.5, 0.5])
        odd = max(abs(vb_f2_moment(beta, i_values, i_probs, rr)) for rr in (1, 3))
        even_ok = all(vb_f2_moment(beta, i_values, i_probs, rr) >= 0 for rr in (2, 4))
        decomposition = vb_decomposition_max_error(model)
        if model.arity % 2 != 0:
            return ModelCertificate(model.name, False, "vb_even_k",
                                    detail={"reason": "odd arity not certified",
                                            "odd_moment": odd})
        arr = expected_alpha_minus_j_tensor(
            model, model.soft.alpha, np.array([[0, 1], [1, 0]]))
        probe = convexity_falsify(arr, orthant_only=True, trials=2000, seed=seed)
        ok = (odd <= 1e-12 and even_ok and decomposition <= 1e-9
              and not probe.violation_found)
        return ModelCertificate(model.name, ok, "vb_even_k",
                                detail={"odd_moment": odd,
                                        "decomposition_error": decomposition})

    return ModelCertificate(model.name, False, "none",
                            detail={"reason": "no certification route"})
