"""Host-graph data model: oriented edges, degrees, stars, induced subgraphs.

A :class:`Graph` is finite. Nodes of infinite degree are represented by a
per-vertex ``infinite`` flag; the flag, not the stored arity, decides every
Dirichlet-related question downstream.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Raised for malformed graph declarations or unknown ids."""


_DIGITS = re.compile(r"(\d+)")


def id_key(ident: str) -> tuple:
    """Natural sort key, so that ``v2`` sorts before ``v10``."""
    parts = _DIGITS.split(ident)
    return tuple((0, int(p), p) if p.isdigit() else (1, 0, p) for p in parts)


@dataclass(frozen=True)
class Vertex:
    id: str
    infinite: bool = False


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Degree:
    inbound: int
    outbound: int
    total: int
    infinite: bool


class Graph:
    """Oriented graph ``(V, E, endpoints)`` with deterministic id ordering.

    Immutable after construction. Parallel edges are allowed, self-loops
    are not.
    """

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge]):
        vertices = list(vertices)
        edges = list(edges)

        seen: set[str] = set()
        for v in vertices:
            if v.id in seen:
                raise GraphError(f"duplicate id: vertex {v.id!r}")
            seen.add(v.id)
        vids = set(seen)
        seen = set()
        for e in edges:
            if e.id in seen:
                raise GraphError(f"duplicate id: edge {e.id!r}")
            seen.add(e.id)
            for end in (e.tail, e.head):
                if end not in vids:
                    raise GraphError(f"dangling endpoint: edge {e.id!r} references {end!r}")
            if e.tail == e.head:
                raise GraphError(f"self-loop: edge {e.id!r} at {e.tail!r}")

        self._vertices = tuple(sorted(vertices, key=lambda v: id_key(v.id)))
        self._edges = tuple(sorted(edges, key=lambda e: id_key(e.id)))
        self._vindex = {v.id: i for i, v in enumerate(self._vertices)}
        self._eindex = {e.id: i for i, e in enumerate(self._edges)}
        self._vmap = {v.id: v for v in self._vertices}
        self._emap = {e.id: e for e in self._edges}

        inbound: dict[str, list[str]] = {v.id: [] for v in self._vertices}
        outbound: dict[str, list[str]] = {v.id: [] for v in self._vertices}
        for e in self._edges:
            outbound[e.tail].append(e.id)
            inbound[e.head].append(e.id)
        self._in = {k: tuple(v) for k, v in inbound.items()}
        self._out = {k: tuple(v) for k, v in outbound.items()}

    # -- basic access -------------------------------------------------------

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def vertex_ids(self) -> list[str]:
        return [v.id for v in self._vertices]

    @property
    def edge_ids(self) -> list[str]:
        return [e.id for e in self._edges]

    def vertex(self, vid: str) -> Vertex:
        try:
            return self._vmap[vid]
        except KeyError:
            raise GraphError(f"unknown vertex: {vid!r}") from None

    def edge(self, eid: str) -> Edge:
        try:
            return self._emap[eid]
        except KeyError:
            raise GraphError(f"unknown edge: {eid!r}") from None

    def vertex_index(self, vid: str) -> int:
        self.vertex(vid)
        return self._vindex[vid]

    def edge_index(self, eid: str) -> int:
        self.edge(eid)
        return self._eindex[eid]

    def is_infinite(self, vid: str) -> bool:
        return self.vertex(vid).infinite

    @property
    def flagged(self) -> list[str]:
        return [v.id for v in self._vertices if v.infinite]

    def inbound_edges(self, vid: str) -> tuple[str, ...]:
        """Edges ending at ``vid``."""
        self.vertex(vid)
        return self._in[vid]

    def outbound_edges(self, vid: str) -> tuple[str, ...]:
        """Edges starting at ``vid``."""
        self.vertex(vid)
        return self._out[vid]

    def incident_edges(self, vid: str) -> tuple[str, ...]:
        edges = self.inbound_edges(vid) + self.outbound_edges(vid)
        return tuple(sorted(edges, key=id_key))

    def neighbours(self, vid: str) -> set[str]:
        out = set()
        for eid in self.incident_edges(vid):
            e = self._emap[eid]
            out.add(e.head if e.tail == vid else e.tail)
        return out

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._vertices, self._edges))

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self._vertices)}, |E|={len(self._edges)}, flagged={self.flagged})"

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v.id, "infinite": v.infinite} for v in self._vertices],
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self._edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "Graph":
        if not isinstance(data, Mapping):
            raise GraphError("graph document must be a JSON object")
        extra = set(data) - {"vertices", "edges"}
        if extra:
            raise GraphError(f"unknown keys in graph document: {sorted(extra)}")
        vertices = []
        for item in data.get("vertices", []):
            _check_keys(item, {"id"}, {"infinite"}, "vertex")
            vertices.append(Vertex(str(item["id"]), bool(item.get("infinite", False))))
        edges = []
        for item in data.get("edges", []):
            _check_keys(item, {"id", "tail", "head"}, set(), "edge")
            edges.append(Edge(str(item["id"]), str(item["tail"]), str(item["head"])))
        return cls(vertices, edges)

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        return cls.from_dict(json.loads(text))


def _check_keys(item, required: set, optional: set, what: str) -> None:
    if not isinstance(item, Mapping):
        raise GraphError(f"{what} entry must be an object, got {item!r}")
    missing = required - set(item)
    if missing:
        raise GraphError(f"{what} entry {item!r} is missing {sorted(missing)}")
    extra = set(item) - required - optional
    if extra:
        raise GraphError(f"{what} entry {item!r} has unknown keys {sorted(extra)}")


def build_graph(
    vertices: Iterable[str | tuple[str, bool] | Vertex],
    edges: Iterable[tuple[str, str, str] | Edge],
) -> Graph:
    """Build a graph from loose declarations.

    Vertices may be given as bare ids, ``(id, infinite)`` pairs or
    :class:`Vertex` objects; edges as ``(id, tail, head)`` triples.
    """
    vs = []
    for v in vertices:
        if isinstance(v, Vertex):
            vs.append(v)
        elif isinstance(v, str):
            vs.append(Vertex(v))
        else:
            vid, flag = v
            vs.append(Vertex(vid, bool(flag)))
    es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
    return Graph(vs, es)


def degree(g: Graph, vid: str) -> Degree:
    n_in = len(g.inbound_edges(vid))
    n_out = len(g.outbound_edges(vid))
    return Degree(n_in, n_out, n_in + n_out, g.is_infinite(vid))


# -- subgraphs ----------------------------------------------------------------


@dataclass(frozen=True)
class Subgraph:
    """Vertex and edge subsets of a parent graph.

    ``boundary`` holds the member vertices adjacent to at least one vertex
    outside the subgraph.
    """

    parent: Graph = field(repr=False, compare=False)
    vertices: frozenset[str]
    edges: frozenset[str]
    boundary: frozenset[str]

    @property
    def vertex_ids(self) -> list[str]:
        return sorted(self.vertices, key=id_key)

    @property
    def edge_ids(self) -> list[str]:
        return sorted(self.edges, key=id_key)

    @property
    def active_boundary(self) -> frozenset[str]:
        """Boundary vertices that carry at least one edge of the subgraph."""
        g = self.parent
        return frozenset(
            v for v in self.boundary if any(e in self.edges for e in g.incident_edges(v))
        )

    def as_graph(self) -> Graph:
        g = self.parent
        return Graph([g.vertex(v) for v in self.vertices], [g.edge(e) for e in self.edges])


def _boundary(g: Graph, vs: frozenset[str]) -> frozenset[str]:
    return frozenset(v for v in vs if g.neighbours(v) - vs)


def _make_subgraph(g: Graph, vs: Iterable[str], es: Iterable[str]) -> Subgraph:
    vs = frozenset(vs)
    return Subgraph(g, vs, frozenset(es), _boundary(g, vs))


def star(g: Graph, vid: str, direction: str = "both") -> Subgraph:
    """Star centred at ``vid``: the centre, the chosen incident edges and their far ends."""
    if direction == "in":
        edges = g.inbound_edges(vid)
    elif direction == "out":
        edges = g.outbound_edges(vid)
    elif direction == "both":
        edges = g.incident_edges(vid)
    else:
        raise ValueError(f"direction must be 'in', 'out' or 'both', got {direction!r}")
    vs = {vid}
    for eid in edges:
        e = g.edge(eid)
        vs.add(e.head if e.tail == vid else e.tail)
    return _make_subgraph(g, vs, edges)


def induced_subgraph(g: Graph, vs: Iterable[str]) -> Subgraph:
    """Subgraph on ``vs`` holding every edge whose endpoints both lie in ``vs``."""
    vs = frozenset(vs)
    for v in vs:
        g.vertex(v)
    edges = [e.id for e in g.edges if e.tail in vs and e.head in vs]
    return _make_subgraph(g, vs, edges)


def finite_part(g: Graph) -> Subgraph:
    """Subgraph induced by the unflagged vertices."""
    return induced_subgraph(g, (v.id for v in g.vertices if not v.infinite))


# -- incidence matrices -------------------------------------------------------


@dataclass(frozen=True)
class SparseIncidence:
    """Vertex-by-edge incidence matrix stored column-major (CSC)."""

    kind: str
    matrix: sp.csc_matrix = field(repr=False)
    vertex_ids: tuple[str, ...]
    edge_ids: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


def incidence(g: Graph, kind: str = "signed") -> SparseIncidence:
    """Incidence matrix of ``g``.

    ``plus`` marks where each edge ends, ``minus`` where it starts and
    ``signed`` is their difference.
    """
    if kind not in ("plus", "minus", "signed"):
        raise ValueError(f"kind must be 'plus', 'minus' or 'signed', got {kind!r}")
    rows, cols, vals = [], [], []
    for j, e in enumerate(g.edges):
        if kind in ("plus", "signed"):
            rows.append(g.vertex_index(e.head))
            cols.append(j)
            vals.append(1.0)
        if kind in ("minus", "signed"):
            rows.append(g.vertex_index(e.tail))
            cols.append(j)
            vals.append(-1.0 if kind == "signed" else 1.0)
    m = sp.csc_matrix((vals, (rows, cols)), shape=(len(g.vertices), len(g.edges)))
    m.sort_indices()
    return SparseIncidence(kind, m, tuple(g.vertex_ids), tuple(g.edge_ids))
