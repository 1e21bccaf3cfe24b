"""Finite-element heat flow on the network.

Every edge is the unit interval cut into ``n`` segments of P1 hat
functions. Unflagged vertices carry one degree of freedom shared by all
incident edges, which builds continuity into the numbering; flagged vertices
carry none, which imposes the homogeneous Dirichlet condition there. The
Galerkin assembly of the energy form yields Kirchhoff conditions at the
remaining vertices for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .connectivity import finite_span
from .graph import Graph, id_key


class SolverError(RuntimeError):
    """Linear solve broke down during time stepping."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


@dataclass(frozen=True)
class Mesh:
    graph: Graph = field(repr=False)
    n: int
    vertex_dof: dict[str, int] = field(repr=False)
    # per edge, the DOF index of each of the n + 1 grid points; -1 at flagged endpoints
    edge_dofs: dict[str, np.ndarray] = field(repr=False)
    n_dof: int

    @property
    def h(self) -> float:
        return 1.0 / self.n

    def dof_owner(self, dof: int) -> tuple[str, str, int]:
        """``("vertex", id, 0)`` or ``("edge", id, grid index)`` for a DOF."""
        for v, d in self.vertex_dof.items():
            if d == dof:
                return ("vertex", v, 0)
        for eid, dofs in self.edge_dofs.items():
            hits = np.flatnonzero(dofs[1:-1] == dof)
            if hits.size:
                return ("edge", eid, int(hits[0]) + 1)
        raise IndexError(dof)


def build_mesh(g: Graph, n: int = 32) -> Mesh:
    """Number DOFs: unflagged vertices by id, then edge interiors by edge id.

    Vertices without incident edges carry no function value and get no DOF.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    vertex_dof: dict[str, int] = {}
    for v in g.vertices:
        if not v.infinite and g.incident_edges(v.id):
            vertex_dof[v.id] = len(vertex_dof)
    nxt = len(vertex_dof)
    edge_dofs = {}
    for e in g.edges:
        dofs = np.empty(n + 1, dtype=np.int64)
        dofs[0] = vertex_dof.get(e.tail, -1)
        dofs[-1] = vertex_dof.get(e.head, -1)
        dofs[1:-1] = np.arange(nxt, nxt + n - 1)
        nxt += n - 1
        dofs.setflags(write=False)
        edge_dofs[e.id] = dofs
    return Mesh(g, n, vertex_dof, edge_dofs, nxt)


@dataclass(frozen=True)
class OperatorPair:
    stiffness: sp.csr_matrix = field(repr=False)
    mass: sp.csr_matrix = field(repr=False)
    mesh: Mesh = field(repr=False)
    mass_kind: str = "lumped"


def assemble(mesh: Mesh, mass: str = "lumped") -> OperatorPair:
    """Stiffness ``K`` and mass ``M`` by summation over segments.

    Segment stencils with ``h = 1/n``: stiffness ``(1/h)[[1,-1],[-1,1]]``,
    consistent mass ``(h/6)[[2,1],[1,2]]``, lumped mass its row sums.
    Entries touching a flagged vertex are dropped.
    """
    if mass not in ("lumped", "consistent"):
        raise ValueError(f"mass must be 'lumped' or 'consistent', got {mass!r}")
    h = mesh.h
    k_loc = np.array([[1.0, -1.0], [-1.0, 1.0]]) / h
    if mass == "lumped":
        m_loc = np.diag([h / 2.0, h / 2.0])
    else:
        m_loc = np.array([[2.0, 1.0], [1.0, 2.0]]) * h / 6.0

    rows, cols, kv, mv = [], [], [], []
    for eid in mesh.graph.edge_ids:
        dofs = mesh.edge_dofs[eid]
        for s in range(mesh.n):
            pair = (int(dofs[s]), int(dofs[s + 1]))
            for a in range(2):
                if pair[a] < 0:
                    continue
                for b in range(2):
                    if pair[b] < 0:
                        continue
                    rows.append(pair[a])
                    cols.append(pair[b])
                    kv.append(k_loc[a, b])
                    mv.append(m_loc[a, b])
    shape = (mesh.n_dof, mesh.n_dof)
    K = sp.coo_matrix((kv, (rows, cols)), shape=shape).tocsr()
    M = sp.coo_matrix((mv, (rows, cols)), shape=shape).tocsr()
    K.eliminate_zeros()
    M.eliminate_zeros()
    K.sort_indices()
    M.sort_indices()
    return OperatorPair(K, M, mesh, mass)


@dataclass(frozen=True)
class HeatState:
    t: float
    u: np.ndarray = field(repr=False)
    mesh: Mesh = field(repr=False)

    def edge_values(self) -> dict[str, np.ndarray]:
        return edge_values(self.mesh, self.u)


def edge_values(mesh: Mesh, u: np.ndarray) -> dict[str, np.ndarray]:
    """Grid values on every edge, with zeros at flagged endpoints."""
    padded = np.append(np.asarray(u, dtype=float), 0.0)  # index -1 reads the appended zero
    return {eid: padded[dofs] for eid, dofs in mesh.edge_dofs.items()}


def dofs_from_edge_values(mesh: Mesh, values: dict[str, np.ndarray]) -> np.ndarray:
    """Inverse of :func:`edge_values` for continuous data; later edges overwrite shared vertices."""
    u = np.zeros(mesh.n_dof)
    for eid, dofs in mesh.edge_dofs.items():
        arr = np.asarray(values[eid], dtype=float)
        keep = dofs >= 0
        u[dofs[keep]] = arr[keep]
    return u


def _factorize(A: sp.spmatrix):
    # Symmetric ordering with diagonal pivots keeps the elimination inside the
    # M-matrix class, so nonnegative data stays nonnegative with no cancellation.
    return spla.splu(
        sp.csc_matrix(A),
        permc_spec="MMD_AT_PLUS_A",
        diag_pivot_thresh=0.0,
        options={"SymmetricMode": True},
    )


def evolve(pair: OperatorPair, u0, dt: float, T: float) -> list[HeatState]:
    """Implicit Euler: solve ``(M + dt K) u_{k+1} = M u_k`` until ``t >= T``.

    Returns the states at ``t = 0, dt, 2 dt, ...``. The system matrix is
    factorized once.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if T < dt:
        raise ValueError("T must be >= dt")
    u = np.array(u0, dtype=float)
    mesh = pair.mesh
    if u.shape != (mesh.n_dof,):
        raise ValueError(f"u0 has shape {u.shape}, mesh has {mesh.n_dof} DOFs")
    if not np.all(np.isfinite(u)):
        raise ValueError("u0 has non-finite entries")
    steps = math.ceil(T / dt - 1e-9)
    states = [HeatState(0.0, u.copy(), mesh)]
    if mesh.n_dof == 0:
        return states + [HeatState(k * dt, u.copy(), mesh) for k in range(1, steps + 1)]
    try:
        lu = _factorize(pair.mass + dt * pair.stiffness)
    except RuntimeError as exc:
        raise SolverError(f"factorization failed: {exc}", 0) from exc
    for k in range(1, steps + 1):
        u = lu.solve(pair.mass @ u)
        if not np.all(np.isfinite(u)):
            raise SolverError("non-finite solution", k)
        states.append(HeatState(k * dt, u, mesh))
    return states


def hat_on_edge(mesh: Mesh, eid: str) -> np.ndarray:
    """Height-1 hat centred at the edge midpoint, zero at both endpoints."""
    x = np.linspace(0.0, 1.0, mesh.n + 1)
    values = {e: np.zeros(mesh.n + 1) for e in mesh.edge_dofs}
    values[eid] = 1.0 - np.abs(2.0 * x - 1.0)
    return dofs_from_edge_values(mesh, values)


@dataclass(frozen=True)
class SupportProfile:
    extrema: dict[str, tuple[float, float]]
    support: frozenset[str]


def support_profile(state: HeatState, theta: float = 0.0) -> SupportProfile:
    """Per-edge (min, max) over grid values and the edges whose max exceeds ``theta``."""
    if theta < 0:
        raise ValueError("theta must be >= 0")
    extrema = {}
    support = set()
    for eid, arr in state.edge_values().items():
        lo, hi = float(arr.min()), float(arr.max())
        extrema[eid] = (lo, hi)
        if hi > theta:
            support.add(eid)
    return SupportProfile(extrema, frozenset(support))


@dataclass
class MaxPrincipleReport:
    edge: str
    n: int
    dt: float
    T: float
    span: tuple[str, ...]
    positive_edges: tuple[str, ...]
    min_interior_in_span: float
    max_abs_outside: float
    block_threshold: float
    min_value: float
    theta: float
    support: tuple[str, ...]
    passed: bool
    trajectory: list[HeatState] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "verdict": "PASS" if self.passed else "FAIL",
            "edge": self.edge,
            "parameters": {"n": self.n, "dt": self.dt, "T": self.T, "theta": self.theta},
            "span": list(self.span),
            "positive_edges": list(self.positive_edges),
            "support": list(self.support),
            "min_interior_in_span": self.min_interior_in_span,
            "max_abs_outside": self.max_abs_outside,
            "block_threshold": self.block_threshold,
            "min_value": self.min_value,
        }


def verify_strong_max_principle(
    g: Graph,
    e0: str,
    n: int = 32,
    dt: float = 1e-3,
    T: float = 0.1,
    theta: float | None = None,
    mass: str = "lumped",
) -> MaxPrincipleReport:
    """Run heat flow from a hat on ``e0`` and compare its reach with the finite span.

    Passes when, at ``t = T``, every span edge is strictly positive at all
    interior grid points, no edge outside the span is, and edges outside the
    span never exceed ``1e-12 * max|u0|`` in absolute value.
    """
    g.edge(e0)
    if n < 2 or dt <= 0 or T <= 0:
        raise ValueError("n, dt and T must be positive (n >= 2)")
    mesh = build_mesh(g, n)
    pair = assemble(mesh, mass)
    u0 = hat_on_edge(mesh, e0)
    traj = evolve(pair, u0, dt, T)
    span = finite_span(g, e0)
    outside = [e for e in g.edge_ids if e not in span]
    u0_max = float(np.abs(u0).max())
    threshold = 1e-12 * u0_max
    if theta is None:
        theta = 1e-10 * u0_max

    max_outside = 0.0
    min_value = math.inf
    for state in traj:
        vals = state.edge_values()
        min_value = min(min_value, float(state.u.min()) if state.u.size else 0.0)
        for eid in outside:
            max_outside = max(max_outside, float(np.abs(vals[eid]).max()))

    support = support_profile(traj[-1], theta).support
    final = traj[-1].edge_values()
    positive = tuple(e for e in g.edge_ids if float(final[e][1:-1].min()) > 0.0)
    min_span = min(float(final[e][1:-1].min()) for e in span)
    passed = set(positive) == set(span) and min_span > 0.0 and max_outside <= threshold
    return MaxPrincipleReport(
        e0, n, dt, T,
        tuple(sorted(span, key=id_key)), positive,
        min_span, max_outside, threshold, min_value,
        theta, tuple(sorted(support, key=id_key)), passed, traj,
    )


def trajectory_rows(traj: list[HeatState]) -> list[tuple[float, str, int, float, float]]:
    """Rows ``(t, edge_id, sample_index, x, value)``."""
    rows = []
    for state in traj:
        vals = state.edge_values()
        n = state.mesh.n
        for eid in state.mesh.graph.edge_ids:
            arr = vals[eid]
            rows.extend((state.t, eid, i, i / n, float(arr[i])) for i in range(n + 1))
    return rows
