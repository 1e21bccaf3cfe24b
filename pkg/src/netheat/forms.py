"""Piecewise-affine functions on the network and the form domain.

An :class:`EdgeFunction` holds ``n_e + 1`` samples per edge on the uniform
grid of ``[0, 1]``. Sample 0 sits at the edge's tail, sample ``n_e`` at its
head. A function belongs to the form domain when all edges meeting at a
vertex agree there (the common value is the vertex trace) and the trace
vanishes at every flagged vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .graph import Graph, GraphError, Subgraph, id_key

DEFAULT_TAU = 1e-9


class EdgeFunction:
    """Per-edge sample arrays; read-only once constructed."""

    def __init__(self, graph: Graph, samples: Mapping[str, np.ndarray], trace: Mapping[str, float] | None = None):
        data = {}
        for e in graph.edges:
            if e.id not in samples:
                raise GraphError(f"edge function has no samples for edge {e.id!r}")
            arr = np.array(samples[e.id], dtype=float)
            if arr.ndim != 1 or arr.size < 2:
                raise ValueError(f"edge {e.id!r} needs at least 2 samples")
            arr.setflags(write=False)
            data[e.id] = arr
        extra = set(samples) - set(data)
        if extra:
            raise GraphError(f"samples given for unknown edges {sorted(extra)}")
        self.graph = graph
        self.samples = data
        self.trace = dict(trace) if trace is not None else None

    @classmethod
    def _trusted(cls, graph: Graph, samples: dict[str, np.ndarray], trace=None) -> "EdgeFunction":
        # internal constructor: arrays are already validated float 1-D copies
        for arr in samples.values():
            arr.setflags(write=False)
        obj = cls.__new__(cls)
        obj.graph, obj.samples, obj.trace = graph, samples, trace
        return obj

    @classmethod
    def zeros(cls, graph: Graph, n: int) -> "EdgeFunction":
        return cls(graph, {e.id: np.zeros(n + 1) for e in graph.edges})

    @classmethod
    def constant(cls, graph: Graph, value: float, n: int = 1) -> "EdgeFunction":
        return cls(graph, {e.id: np.full(n + 1, float(value)) for e in graph.edges})

    def max_abs(self) -> float:
        return max((float(np.abs(a).max()) for a in self.samples.values()), default=0.0)

    def to_rows(self) -> list[tuple[str, int, float, float]]:
        """Rows ``(edge_id, sample_index, x, value)``."""
        rows = []
        for eid in self.graph.edge_ids:
            arr = self.samples[eid]
            xs = np.linspace(0.0, 1.0, arr.size)
            rows.extend((eid, i, float(x), float(v)) for i, (x, v) in enumerate(zip(xs, arr)))
        return rows


@dataclass(frozen=True)
class TraceResult:
    trace: dict[str, float] | None
    # vertex -> endpoint values that failed to agree
    violations: dict[str, tuple[float, ...]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.trace is not None


def _threshold(psi: EdgeFunction, tau: float) -> float:
    scale = psi.max_abs()
    return tau * (scale if scale > 0 else 1.0)


def _endpoint_values(psi: EdgeFunction) -> dict[str, list[float]]:
    g = psi.graph
    values: dict[str, list[float]] = {v: [] for v in g.vertex_ids}
    for e in g.edges:
        arr = psi.samples[e.id]
        values[e.tail].append(float(arr[0]))
        values[e.head].append(float(arr[-1]))
    return values


def vertex_trace(g: Graph, psi: EdgeFunction, tau: float = DEFAULT_TAU) -> TraceResult:
    """Common endpoint value at every vertex, or the vertices where values disagree.

    Values agree when their spread is at most ``tau * max|psi|``. Vertices
    without incident edges get trace 0.
    """
    if psi.graph != g:
        raise GraphError("edge function lives on a different graph")
    thr = _threshold(psi, tau)
    trace: dict[str, float] = {}
    violations: dict[str, tuple[float, ...]] = {}
    for v, vals in _endpoint_values(psi).items():
        if not vals:
            trace[v] = 0.0
        elif max(vals) - min(vals) > thr:
            violations[v] = tuple(sorted(set(vals)))
        else:
            trace[v] = vals[0]
    if violations:
        return TraceResult(None, violations)
    return TraceResult(trace)


@dataclass(frozen=True)
class Violation:
    kind: str  # "continuity" or "flagged_trace"
    vertex: str
    values: tuple[float, ...]

    def __str__(self) -> str:
        if self.kind == "continuity":
            return f"discontinuous at {self.vertex}: values {list(self.values)}"
        return f"nonzero trace at flagged {self.vertex}: {self.values[0]!r}"


@dataclass(frozen=True)
class DomainVerdict:
    ok: bool
    violations: tuple[Violation, ...] = ()
    trace: dict[str, float] | None = None


def in_form_domain(g: Graph, psi: EdgeFunction, tau: float = DEFAULT_TAU) -> DomainVerdict:
    """Continuity at every vertex plus a vanishing trace at flagged vertices."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    res = vertex_trace(g, psi, tau)
    if not res.ok:
        viol = tuple(Violation("continuity", v, vals) for v, vals in sorted(res.violations.items(), key=lambda kv: id_key(kv[0])))
        return DomainVerdict(False, viol)
    thr = _threshold(psi, tau)
    viol = tuple(
        Violation("flagged_trace", v, (res.trace[v],))
        for v in g.flagged
        if abs(res.trace[v]) > thr
    )
    return DomainVerdict(not viol, viol, res.trace)


def tent_function(g: Graph, vid: str, lam: float, n: int = 1) -> EdgeFunction:
    """Affine interpolation of ``lam`` at ``vid`` and 0 at every other vertex.

    ``n`` is the number of segments per edge. Edges not touching ``vid``
    are identically zero.
    """
    if g.is_infinite(vid):
        raise GraphError(f"vertex {vid!r} is flagged infinite; a tent there leaves the form domain")
    if lam == 0:
        raise ValueError("lam must be nonzero")
    if n < 1:
        raise ValueError("n must be >= 1")
    ramp = np.linspace(0.0, 1.0, n + 1)
    samples = {}
    for e in g.edges:
        if e.tail == vid:
            samples[e.id] = lam * ramp[::-1]
        elif e.head == vid:
            samples[e.id] = lam * ramp
        else:
            samples[e.id] = np.zeros(n + 1)
    trace = {v: (float(lam) if v == vid else 0.0) for v in g.vertex_ids}
    return EdgeFunction(g, samples, trace)


@dataclass(frozen=True)
class Norms:
    l2_sq: float
    h1_semi_sq: float
    h1_sq: float


def norms(psi: EdgeFunction) -> Norms:
    """Exact squared L2, H1-seminorm and H1 norms of a piecewise-affine function.

    A segment of length ``h`` with end values ``a, b`` contributes
    ``h (a^2 + ab + b^2) / 3`` and ``(b - a)^2 / h``.
    """
    l2 = 0.0
    semi = 0.0
    for eid in psi.graph.edge_ids:
        arr = psi.samples[eid]
        h = 1.0 / (arr.size - 1)
        a, b = arr[:-1], arr[1:]
        l2 += float(np.sum(a * a + a * b + b * b)) * h / 3.0
        semi += float(np.sum((b - a) ** 2)) / h
    return Norms(l2, semi, l2 + semi)


def l2_inner(psi: EdgeFunction, phi: EdgeFunction) -> float:
    """Exact L2 inner product of two piecewise-affine functions on the same grids."""
    total = 0.0
    for eid in psi.graph.edge_ids:
        a, b = psi.samples[eid], phi.samples[eid]
        if a.size != b.size:
            raise ValueError(f"grids differ on edge {eid!r}")
        h = 1.0 / (a.size - 1)
        total += float(np.sum(2 * a[:-1] * b[:-1] + a[:-1] * b[1:] + a[1:] * b[:-1] + 2 * a[1:] * b[1:])) * h / 6.0
    return total


def energy(psi: EdgeFunction, phi: EdgeFunction) -> float:
    """The form ``a(psi, phi) = integral of psi' phi'`` for piecewise-affine data."""
    total = 0.0
    for eid in psi.graph.edge_ids:
        a, b = psi.samples[eid], phi.samples[eid]
        if a.size != b.size:
            raise ValueError(f"grids differ on edge {eid!r}")
        h = 1.0 / (a.size - 1)
        total += float((a[1:] - a[:-1]) @ (b[1:] - b[:-1])) / h
    return total


def project_ideal(psi: EdgeFunction, sub: Subgraph) -> EdgeFunction:
    """Keep samples on the subgraph's edges, zero elsewhere; the trace is recomputed."""
    g = psi.graph
    samples = {
        eid: (arr if eid in sub.edges else np.zeros_like(arr))
        for eid, arr in psi.samples.items()
    }
    out = EdgeFunction(g, samples)
    res = vertex_trace(g, out)
    out.trace = res.trace
    return out


def random_form_function(g: Graph, rng: np.random.Generator, n: int = 2) -> EdgeFunction:
    """Random member of the form domain.

    A random trace (zero at flagged vertices) is extended affinely along
    every edge and random interior bumps vanishing at the endpoints are
    added.
    """
    values = rng.standard_normal(len(g.vertices))
    index = {v.id: i for i, v in enumerate(g.vertices)}
    values[[index[v] for v in g.flagged]] = 0.0
    trace = {v.id: float(x) for v, x in zip(g.vertices, values)}
    ramp = np.linspace(0.0, 1.0, n + 1)
    tails = values[[index[e.tail] for e in g.edges]]
    heads = values[[index[e.head] for e in g.edges]]
    grid = np.outer(tails, 1.0 - ramp) + np.outer(heads, ramp)
    grid[:, 1:-1] += rng.standard_normal((len(g.edges), n - 1))
    return EdgeFunction._trusted(g, dict(zip(g.edge_ids, grid)), trace)


@dataclass(frozen=True)
class InvarianceReport:
    # every boundary vertex carrying an edge of the subgraph is flagged
    structural: bool
    # literal test over all boundary vertices, including edgeless ones
    boundary_all_flagged: bool
    trials: int
    agreements: int
    orthogonal: bool
    unflagged_boundary: tuple[str, ...]

    @property
    def invariant(self) -> bool:
        return self.structural

    @property
    def consistent(self) -> bool:
        return self.agreements == self.trials and self.orthogonal


def check_invariance(g: Graph, sub: Subgraph, trials: int = 100, seed: int = 0, n: int = 2) -> InvarianceReport:
    """Invariance of the ideal carried by ``sub`` under the heat flow.

    The structural answer asks that every boundary vertex touching an edge
    of ``sub`` be flagged. Boundary vertices with no edge inside ``sub``
    carry no mass and cannot break continuity of a projection, so they are
    excluded. The answer is then corroborated by projecting ``trials``
    random domain members and testing continuity of the result; the form
    of a projected function against a co-projected one must vanish exactly.
    """
    if sub.parent != g:
        raise GraphError("subgraph belongs to a different graph")
    active = sub.active_boundary
    unflagged = tuple(sorted((v for v in active if not g.is_infinite(v)), key=id_key))
    structural = not unflagged
    literal = all(g.is_infinite(v) for v in sub.boundary)
    complement = frozenset(g.edge_ids) - sub.edges

    rng = np.random.default_rng(seed)
    agreements = 0
    orthogonal = True
    for _ in range(trials):
        psi = random_form_function(g, rng, n)
        phi = random_form_function(g, rng, n)
        projected = EdgeFunction._trusted(g, {
            eid: (arr if eid in sub.edges else np.zeros(arr.size)) for eid, arr in psi.samples.items()
        })
        if in_form_domain(g, projected).ok == structural:
            agreements += 1
        cross = 0.0
        for eid in complement:
            a, b = projected.samples[eid], phi.samples[eid]
            cross += float((a[1:] - a[:-1]) @ (b[1:] - b[:-1]))
        if cross != 0.0:
            orthogonal = False
    return InvarianceReport(structural, literal, trials, agreements, orthogonal, unflagged)
