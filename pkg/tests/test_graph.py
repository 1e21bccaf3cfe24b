import json

import numpy as np
import pytest

from netheat import GraphError, build_graph, degree, finite_part, incidence, induced_subgraph, star
from netheat.fixtures import random_graph
from netheat.graph import Graph, id_key


def test_p3_degrees(p3):
    assert [degree(p3, v).total for v in p3.vertex_ids] == [1, 2, 2, 1]
    d = degree(p3, "v1")
    assert (d.inbound, d.outbound, d.total, d.infinite) == (1, 1, 2, False)


def test_star_flag_is_independent_of_arity(star4):
    d = degree(star4, "c")
    assert (d.inbound, d.outbound, d.total, d.infinite) == (0, 4, 4, True)
    leaf = degree(star4, "l2")
    assert (leaf.inbound, leaf.outbound, leaf.total, leaf.infinite) == (1, 0, 1, False)


@pytest.mark.parametrize(
    "vertices, edges, message",
    [
        (["a", "b"], [("e", "a", "x")], "dangling endpoint"),
        (["a", "a"], [], "duplicate id"),
        (["a", "b"], [("e", "a", "b"), ("e", "b", "a")], "duplicate id"),
        (["a"], [("e", "a", "a")], "self-loop"),
    ],
)
def test_build_graph_rejects(vertices, edges, message):
    with pytest.raises(GraphError, match=message):
        build_graph(vertices, edges)


def test_unknown_vertex(p3):
    with pytest.raises(GraphError, match="unknown vertex"):
        degree(p3, "zz")
    with pytest.raises(GraphError):
        induced_subgraph(p3, ["v0", "zz"])


def test_parallel_edges_allowed():
    g = build_graph(["a", "b"], [("e0", "a", "b"), ("e1", "b", "a")])
    assert degree(g, "a").total == 2


def test_natural_ordering():
    g = build_graph(["v10", "v2", "v1"], [("e10", "v1", "v2"), ("e9", "v2", "v10")])
    assert g.vertex_ids == ["v1", "v2", "v10"]
    assert g.edge_ids == ["e9", "e10"]
    assert id_key("a2") < id_key("a10")


def test_stars(p3, star4):
    s = star(star4, "c", "out")
    assert len(s.vertices) == 5 and len(s.edges) == 4
    s = star(p3, "v1", "in")
    assert s.vertices == {"v0", "v1"} and s.edges == {"e0"}
    s = star(p3, "v0", "in")
    assert s.vertices == {"v0"} and s.edges == frozenset()


def test_induced_subgraph_examples(p3, k3pair):
    a = induced_subgraph(k3pair, ["a1", "a2", "a3"])
    assert a.edges == {"ea1", "ea2", "ea3"}
    assert a.boundary == {"a3"}

    s = induced_subgraph(p3, ["v0", "v2"])
    assert len(s.vertices) == 2 and not s.edges
    assert s.boundary == {"v0", "v2"}

    whole = induced_subgraph(p3, p3.vertex_ids)
    assert whole.edges == set(p3.edge_ids) and not whole.boundary


def test_finite_part(p3, star4, k3pair):
    fin = finite_part(k3pair)
    assert "w" not in fin.vertices
    assert fin.edges == {"ea1", "ea2", "ea3", "eb1", "eb2", "eb3"}

    fin = finite_part(star4)
    assert fin.vertices == {"l1", "l2", "l3", "l4"} and not fin.edges

    assert finite_part(p3).edges == set(p3.edge_ids)


def test_incidence_examples(p3, star4):
    plus = incidence(p3, "plus").toarray()
    assert plus[:, 0].tolist() == [0, 1, 0, 0]
    assert plus[:, 1].tolist() == [0, 0, 1, 0]
    assert plus[:, 2].tolist() == [0, 0, 0, 1]
    signed = incidence(p3, "signed").toarray()
    assert signed[:, 0].tolist() == [-1, 1, 0, 0]
    minus = incidence(star4, "minus")
    assert minus.toarray()[star4.vertex_index("c")].tolist() == [1, 1, 1, 1]
    assert incidence(p3, "plus").matrix.format == "csc"


@pytest.mark.parametrize("seed", range(20))
def test_incidence_invariants(seed):
    g = random_graph(seed)
    plus = incidence(g, "plus").toarray()
    minus = incidence(g, "minus").toarray()
    assert np.array_equal(plus.sum(axis=0), np.ones(len(g.edges)))
    assert np.array_equal(minus.sum(axis=0), np.ones(len(g.edges)))
    for i, v in enumerate(g.vertex_ids):
        d = degree(g, v)
        assert plus[i].sum() == d.inbound
        assert minus[i].sum() == d.outbound
        assert d.total == d.inbound + d.outbound
    assert np.array_equal(incidence(g, "signed").toarray(), plus - minus)


@pytest.mark.parametrize("seed", range(20))
def test_finite_part_has_no_flags_and_induce_is_idempotent(seed):
    g = random_graph(seed, max_flags=3)
    fin = finite_part(g)
    assert not any(g.is_infinite(v) for v in fin.vertices)
    for eid in fin.edges:
        e = g.edge(eid)
        assert not g.is_infinite(e.tail) and not g.is_infinite(e.head)
    vs = g.vertex_ids[: len(g.vertex_ids) // 2 + 1]
    assert induced_subgraph(g, vs) == induced_subgraph(g, induced_subgraph(g, vs).vertices)


def test_json_round_trip(k3pair):
    text = k3pair.to_json()
    again = Graph.from_json(text)
    assert again == k3pair
    assert again.to_json() == text


def test_json_canonical_sorting():
    doc = {
        "vertices": [{"id": "b"}, {"id": "a", "infinite": True}],
        "edges": [{"id": "e1", "tail": "b", "head": "a"}, {"id": "e0", "tail": "a", "head": "b"}],
    }
    g = Graph.from_json(json.dumps(doc))
    canonical = g.to_json()
    assert json.loads(canonical)["vertices"][0] == {"id": "a", "infinite": True}
    assert Graph.from_json(canonical).to_json() == canonical


def test_json_rejects_unknown_keys():
    with pytest.raises(GraphError, match="unknown"):
        Graph.from_json('{"vertices": [{"id": "a", "colour": 1}], "edges": []}')
    with pytest.raises(GraphError, match="missing"):
        Graph.from_json('{"vertices": [{"id": "a"}], "edges": [{"id": "e", "tail": "a"}]}')
