"""Connectedness, finite spans and the span partition of the edge set.

Edge orientation is ignored throughout. Two edges are linked when they share
an unflagged vertex; the finite span of an edge is its class under the
transitive closure of that relation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import Graph, GraphError, id_key


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by rank.

    The representative reported by :meth:`canonical` is the smallest member
    of each set, independent of the merge order.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.smallest = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.smallest[ra] = min(self.smallest[ra], self.smallest[rb])
        return True

    def canonical(self, x: int) -> int:
        return self.smallest[self.find(x)]

    def groups(self) -> list[list[int]]:
        """Members grouped by set, ordered by smallest member."""
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            out.setdefault(self.canonical(x), []).append(x)
        return [out[k] for k in sorted(out)]


@dataclass(frozen=True)
class PathConnectivity:
    connected: bool
    # BFS tree from the first vertex: child -> (parent, edge)
    tree: dict[str, tuple[str, str]] = field(default_factory=dict)
    # vertices not reached from the first vertex; nonempty iff disconnected
    cut: frozenset[str] = frozenset()


def pathwise_connected(g: Graph) -> PathConnectivity:
    """Breadth-first reachability from the first vertex, ignoring orientation.

    On failure, ``cut`` is the unreached vertex set; no edge joins it to
    the reached part, so it witnesses topological disconnection too.
    """
    if not g.vertices:
        raise GraphError("no vertices")
    root = g.vertex_ids[0]
    seen = {root}
    tree: dict[str, tuple[str, str]] = {}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for eid in g.incident_edges(v):
            e = g.edge(eid)
            u = e.head if e.tail == v else e.tail
            if u not in seen:
                seen.add(u)
                tree[u] = (v, eid)
                queue.append(u)
    cut = frozenset(g.vertex_ids) - seen
    return PathConnectivity(not cut, tree, cut)


def finite_span(g: Graph, eid: str) -> frozenset[str]:
    """All edges reachable from ``eid`` through unflagged vertices only."""
    g.edge(eid)
    span = {eid}
    queue = deque([eid])
    while queue:
        e = g.edge(queue.popleft())
        for v in (e.tail, e.head):
            if g.is_infinite(v):
                continue
            for other in g.incident_edges(v):
                if other not in span:
                    span.add(other)
                    queue.append(other)
    return frozenset(span)


@dataclass(frozen=True)
class SpanBlock:
    edges: tuple[str, ...]
    boundary: tuple[str, ...]


@dataclass(frozen=True)
class SpanPartition:
    blocks: tuple[SpanBlock, ...]
    edge_block: dict[str, int]

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, eid: str) -> SpanBlock:
        return self.blocks[self.edge_block[eid]]

    def to_dict(self) -> dict:
        return {
            "blocks": [{"edges": list(b.edges), "boundary": list(b.boundary)} for b in self.blocks],
            "irreducible": len(self.blocks) == 1,
        }


def delta_components(g: Graph) -> SpanPartition:
    """Partition of the edge set into distinct finite spans.

    Blocks are ordered by their smallest edge id; a block's boundary is the
    set of flagged vertices touched by its edges.
    """
    edges = g.edge_ids
    uf = UnionFind(len(edges))
    for v in g.vertices:
        if v.infinite:
            continue
        incident = [g.edge_index(e) for e in g.incident_edges(v.id)]
        for other in incident[1:]:
            uf.union(incident[0], other)
    blocks = []
    edge_block = {}
    for i, members in enumerate(uf.groups()):
        ids = tuple(edges[j] for j in members)
        bnd = set()
        for eid in ids:
            e = g.edge(eid)
            bnd.update(v for v in (e.tail, e.head) if g.is_infinite(v))
            edge_block[eid] = i
        blocks.append(SpanBlock(ids, tuple(sorted(bnd, key=id_key))))
    return SpanPartition(tuple(blocks), edge_block)


@dataclass(frozen=True)
class IrreducibilityVerdict:
    irreducible: bool
    blocks: int
    # (edge in first block, edge in another block, flagged vertices enclosing the first block)
    certificate: tuple[str, str, tuple[str, ...]] | None = None


def is_irreducible(g: Graph) -> IrreducibilityVerdict:
    """Irreducible iff the edge set is a single finite span."""
    if not g.edges:
        raise GraphError("edgeless graph has no finite span")
    part = delta_components(g)
    if len(part) == 1:
        return IrreducibilityVerdict(True, 1)
    first, second = part.blocks[0], part.blocks[1]
    return IrreducibilityVerdict(False, len(part), (first.edges[0], second.edges[0], first.boundary))


def count_invariant_ideals(g: Graph) -> int:
    return len(delta_components(g))
