"""Incidence matrices as operators from edge space to vertex space.

Covers matrix-vector products with the adjoint identity, the 2->2 operator
norm by power iteration, the l1 -> l-infinity contraction check and the
truncated-star family whose image norm grows without bound with the degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, SparseIncidence, build_graph, incidence

# Positive samples are drawn on this dyadic grid so that l1 sums are exact.
_DYADIC_BITS = 20


def apply(m: SparseIncidence, x) -> np.ndarray:
    """``(M x)_v = sum_e M_ve x_e``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (m.shape[1],):
        raise ValueError(f"dimension mismatch: matrix has {m.shape[1]} edges, vector has shape {x.shape}")
    return m.matrix @ x


def apply_transpose(m: SparseIncidence, d) -> np.ndarray:
    """``(M^T d)_e = sum_v M_ve d_v``; for ``plus`` this reads ``d`` at each edge's head."""
    d = np.asarray(d, dtype=float)
    if d.shape != (m.shape[0],):
        raise ValueError(f"dimension mismatch: matrix has {m.shape[0]} vertices, vector has shape {d.shape}")
    return m.matrix.T @ d


def _power_iteration(m: SparseIncidence, start: np.ndarray, tol: float, max_iter: int) -> float:
    a = m.matrix
    v = start / np.linalg.norm(start)
    sigma2 = 0.0
    for _ in range(max_iter):
        w = a.T @ (a @ v)
        new = float(v @ w)  # Rayleigh quotient of M^T M
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(new - sigma2) <= tol * max(abs(new), 1e-300):
            sigma2 = new
            break
        sigma2 = new
    return math.sqrt(max(sigma2, 0.0))


def operator_norm(m: SparseIncidence, tol: float = 1e-10, max_iter: int = 100_000) -> float:
    """Spectral norm of ``m`` via power iteration on ``M^T M``.

    Two deterministic starts are used, normalised all-ones and an
    alternating-sign vector, and the larger estimate is returned; either
    start alone can be orthogonal to the top singular vector.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = m.shape[1]
    if n == 0 or m.matrix.nnz == 0:
        return 0.0
    ones = np.ones(n)
    alternating = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return max(
        _power_iteration(m, ones, tol, max_iter),
        _power_iteration(m, alternating, tol, max_iter),
    )


@dataclass
class ContractionReport:
    kind: str
    samples: int
    max_ratio: float
    l1_exact: bool
    passed: bool
    counterexample: np.ndarray | None = field(default=None, repr=False)

    def rows(self) -> list[tuple]:
        rows = [("contraction_l1_linf", self.kind, self.max_ratio, 1.0, self.max_ratio <= 1.0)]
        if self.kind != "signed":
            rows.append(("l1_preserved_positive", self.kind, float(self.l1_exact), 1.0, self.l1_exact))
        return rows


def verify_contraction_l1_linf(m: SparseIncidence, samples: int = 1000, seed: int = 0) -> ContractionReport:
    """Check ``||M x||_inf <= ||x||_1`` on seeded random vectors.

    For the unsigned matrices every column sums to one, so nonnegative
    inputs must also satisfy ``||M x||_1 == ||x||_1``. Those inputs are
    drawn on a dyadic grid where the equality is exact in floating point.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    n = m.shape[1]
    max_ratio = 0.0
    l1_exact = True
    counterexample = None
    if n == 0:
        return ContractionReport(m.kind, samples, 0.0, True, True)
    for _ in range(samples):
        x = rng.standard_normal(n)
        l1 = float(np.abs(x).sum())
        ratio = float(np.abs(apply(m, x)).max()) / l1 if l1 > 0 else 0.0
        if ratio > max_ratio:
            max_ratio = ratio
        if ratio > 1.0 and counterexample is None:
            counterexample = x
        if m.kind != "signed":
            xp = rng.integers(1, 2**_DYADIC_BITS, size=n) / 2.0**_DYADIC_BITS
            if apply(m, xp).sum() != xp.sum():
                l1_exact = False
                if counterexample is None:
                    counterexample = xp
    return ContractionReport(m.kind, samples, max_ratio, l1_exact, max_ratio <= 1.0 and l1_exact, counterexample)


@dataclass(frozen=True)
class WitnessRow:
    k: int
    x_norm: float
    image_norm: float


def unbounded_witness(g: Graph, flagged_vertex: str, k_list) -> list[WitnessRow]:
    """Image norms of normalised indicators on truncated inbound stars.

    For each ``k`` an inbound star with ``k`` edges is built at
    ``flagged_vertex`` and ``x = 1/sqrt(k)`` on every edge is pushed
    through the ``plus`` incidence. The image norm equals ``sqrt(k)``.
    """
    if not g.is_infinite(flagged_vertex):
        raise GraphError(f"vertex {flagged_vertex!r} is not flagged infinite")
    rows = []
    for k in k_list:
        k = int(k)
        if k < 1:
            raise ValueError("each k must be >= 1")
        leaves = [f"{flagged_vertex}_t{i}" for i in range(k)]
        trunc = build_graph(
            [(flagged_vertex, True)] + leaves,
            [(f"{flagged_vertex}_in{i}", leaf, flagged_vertex) for i, leaf in enumerate(leaves)],
        )
        x = np.full(k, 1.0 / math.sqrt(k))
        image = apply(incidence(trunc, "plus"), x)
        rows.append(WitnessRow(k, float(np.linalg.norm(x)), float(np.linalg.norm(image))))
    return rows


def adjoint_gap(m: SparseIncidence, x, d) -> float:
    """Relative gap between ``<M x, d>`` and ``<x, M^T d>``."""
    lhs = float(apply(m, x) @ np.asarray(d, dtype=float))
    rhs = float(np.asarray(x, dtype=float) @ apply_transpose(m, d))
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


def max_in_degree(g: Graph, kind: str = "plus") -> int:
    """Largest row count of the chosen unsigned incidence matrix."""
    if kind == "plus":
        return max((len(g.inbound_edges(v)) for v in g.vertex_ids), default=0)
    return max((len(g.outbound_edges(v)) for v in g.vertex_ids), default=0)


def incidence_suite(g: Graph, samples: int = 1000, seed: int = 0, tol: float = 1e-10) -> list[tuple]:
    """Rows ``(test, parameter, observed, bound, pass)`` for the operator checks on ``g``."""
    rows: list[tuple] = []
    for kind in ("plus", "minus"):
        m = incidence(g, kind)
        bound = math.sqrt(max_in_degree(g, kind))
        norm = operator_norm(m, tol)
        rows.append(("operator_norm", kind, norm, bound, norm <= bound + 1e-6))
        rows.extend(verify_contraction_l1_linf(m, samples, seed).rows())
    rows.extend(verify_contraction_l1_linf(incidence(g, "signed"), samples, seed).rows())
    for v in g.flagged:
        for row in unbounded_witness(g, v, (4, 16, 64)):
            expected = math.sqrt(row.k)
            rows.append((f"unbounded_witness[{v}]", row.k, row.image_norm, expected,
                         abs(row.image_norm - expected) <= 1e-12 * expected))
    return rows
