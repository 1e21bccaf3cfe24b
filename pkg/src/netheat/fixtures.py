"""Built-in fixture gallery plus a seeded random-graph generator."""

from __future__ import annotations

import numpy as np

from .graph import Graph, build_graph


def p3() -> Graph:
    """Path with three edges ``v0 -> v1 -> v2 -> v3``."""
    return build_graph(
        ["v0", "v1", "v2", "v3"],
        [("e0", "v0", "v1"), ("e1", "v1", "v2"), ("e2", "v2", "v3")],
    )


def single() -> Graph:
    return build_graph(["v0", "v1"], [("e0", "v0", "v1")])


def single_d() -> Graph:
    """One edge whose head is flagged."""
    return build_graph(["v0", ("v1", True)], [("e0", "v0", "v1")])


def single_dd() -> Graph:
    return build_graph([("v0", True), ("v1", True)], [("e0", "v0", "v1")])


def star_k(k: int, infinite_center: bool = False) -> Graph:
    """Centre ``c`` with ``k`` pendant out-edges ``c -> l1 .. lk``."""
    vertices = [("c", infinite_center)] + [f"l{i}" for i in range(1, k + 1)]
    edges = [(f"s{i}", "c", f"l{i}") for i in range(1, k + 1)]
    return build_graph(vertices, edges)


def star4_inf() -> Graph:
    return star_k(4, infinite_center=True)


def k3pair_inf() -> Graph:
    """Two triangles joined through the flagged vertex ``w``."""
    return build_graph(
        ["a1", "a2", "a3", "b1", "b2", "b3", ("w", True)],
        [
            ("ea1", "a1", "a2"),
            ("ea2", "a2", "a3"),
            ("ea3", "a3", "a1"),
            ("eb1", "b1", "b2"),
            ("eb2", "b2", "b3"),
            ("eb3", "b3", "b1"),
            ("ew1", "a3", "w"),
            ("ew2", "w", "b3"),
        ],
    )


def ee_inf() -> Graph:
    """An edge between two flagged vertices next to a disjoint P3."""
    return build_graph(
        [("u0", True), ("u1", True), "v0", "v1", "v2", "v3"],
        [("f0", "u0", "u1"), ("e0", "v0", "v1"), ("e1", "v1", "v2"), ("e2", "v2", "v3")],
    )


GALLERY = {
    "p3": p3,
    "single": single,
    "single-d": single_d,
    "single-dd": single_dd,
    "star4-inf": star4_inf,
    "star4": lambda: star_k(4),
    "star16": lambda: star_k(16),
    "k3pair-inf": k3pair_inf,
    "ee-inf": ee_inf,
}


def gallery() -> dict[str, Graph]:
    return {name: make() for name, make in GALLERY.items()}


def random_graph(
    seed: int,
    max_vertices: int = 10,
    max_edges: int = 15,
    max_flags: int = 2,
    allow_flag_pairs: bool = False,
    allow_isolated: bool = False,
) -> Graph:
    """Seeded random graph for property checks.

    By default no edge joins two flagged vertices and every vertex has at
    least one incident edge.
    """
    rng = np.random.default_rng(seed)
    while True:
        nv = int(rng.integers(2, max_vertices + 1))
        ne = int(rng.integers((nv + 1) // 2, max_edges + 1))
        nflag = int(rng.integers(0, min(max_flags, nv - 1) + 1))
        flagged = set(rng.choice(nv, size=nflag, replace=False).tolist())
        pairs = [
            (a, b)
            for a in range(nv)
            for b in range(nv)
            if a != b and (allow_flag_pairs or not (a in flagged and b in flagged))
        ]
        picks = rng.integers(0, len(pairs), size=ne)
        edges = [(f"e{i}", f"v{pairs[p][0]}", f"v{pairs[p][1]}") for i, p in enumerate(picks)]
        used = {v for _, t, h in edges for v in (t, h)}
        if not allow_isolated and len(used) < nv:
            continue
        vertices = [(f"v{i}", i in flagged) for i in range(nv)]
        return build_graph(vertices, edges)
