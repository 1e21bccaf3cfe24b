import numpy as np
import pytest

from netheat import (
    EdgeFunction,
    GraphError,
    check_invariance,
    in_form_domain,
    induced_subgraph,
    norms,
    project_ideal,
    tent_function,
    vertex_trace,
)
from netheat.forms import energy, l2_inner, random_form_function
from netheat.fixtures import random_graph, single, star_k


def test_trace_of_constant(p3):
    res = vertex_trace(p3, EdgeFunction.constant(p3, 1.0, n=3))
    assert res.ok and res.trace == {"v0": 1.0, "v1": 1.0, "v2": 1.0, "v3": 1.0}


def test_trace_jump(p3):
    psi = EdgeFunction(p3, {"e0": [1, 1], "e1": [0, 0], "e2": [0, 0]})
    res = vertex_trace(p3, psi)
    assert not res.ok
    assert res.violations == {"v1": (0.0, 1.0)}


def test_trace_of_tent(k3pair):
    psi = tent_function(k3pair, "a1", 1.0, n=4)
    res = vertex_trace(k3pair, psi)
    assert res.trace["a1"] == 1.0
    assert all(val == 0.0 for v, val in res.trace.items() if v != "a1")


def test_trace_orientation_convention(p3):
    # sample 0 is the tail value, the last sample the head value
    psi = EdgeFunction(p3, {"e0": [0, 1], "e1": [1, 2], "e2": [2, 3]})
    assert vertex_trace(p3, psi).trace == {"v0": 0.0, "v1": 1.0, "v2": 2.0, "v3": 3.0}


def test_form_domain_examples(p3, star4):
    verdict = in_form_domain(star4, EdgeFunction.constant(star4, 1.0))
    assert not verdict.ok
    assert [str(v) for v in verdict.violations] == ["nonzero trace at flagged c: 1.0"]

    leaves = [tent_function(star4, f"l{i}", 1.0, n=2) for i in range(1, 5)]
    summed = EdgeFunction(star4, {e: sum(t.samples[e] for t in leaves) for e in star4.edge_ids})
    assert in_form_domain(star4, summed).ok

    rng = np.random.default_rng(0)
    assert in_form_domain(p3, random_form_function(p3, rng, 5)).ok


def test_tent_errors(star4, p3):
    with pytest.raises(GraphError, match="flagged"):
        tent_function(star4, "c", 1.0)
    with pytest.raises(ValueError):
        tent_function(p3, "v1", 0.0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 7])
@pytest.mark.parametrize("lam", [1.0, -2.0, 0.5])
@pytest.mark.parametrize("n", [1, 3, 8])
def test_tent_closed_forms(k, lam, n):
    nm = norms(tent_function(star_k(k), "c", lam, n))
    assert nm.l2_sq == pytest.approx(k * lam**2 / 3, rel=1e-12)
    assert nm.h1_semi_sq == pytest.approx(k * lam**2, rel=1e-12)
    assert nm.h1_sq == pytest.approx(4 * k * lam**2 / 3, rel=1e-12)


def test_norm_examples(p3):
    g = single()
    nm = norms(EdgeFunction(g, {"e0": [0.0, 1.0]}))
    assert (nm.l2_sq, nm.h1_semi_sq) == pytest.approx((1 / 3, 1.0), rel=1e-15)
    assert norms(tent_function(p3, "v1", 2.0, n=2)).l2_sq == pytest.approx(2 * 4 / 3, rel=1e-12)
    assert norms(EdgeFunction.zeros(p3, 4)) == norms(EdgeFunction.zeros(p3, 1))


def test_quadrature_against_fine_midpoint_rule():
    # oracle: composite midpoint rule on a very fine grid of the interpolant
    g = single()
    samples = np.array([0.3, -1.2, 2.0, 0.7, 0.1])
    nm = norms(EdgeFunction(g, {"e0": samples}))
    x = (np.arange(400_000) + 0.5) / 400_000
    vals = np.interp(x, np.linspace(0, 1, samples.size), samples)
    assert nm.l2_sq == pytest.approx(np.mean(vals**2), rel=1e-9)
    slopes = np.diff(samples) * (samples.size - 1)
    assert nm.h1_semi_sq == pytest.approx(np.sum(slopes**2) / (samples.size - 1), rel=1e-12)


def test_projection_examples(p3, k3pair):
    ones = EdgeFunction.constant(k3pair, 1.0)
    block = induced_subgraph(k3pair, ["a1", "a2", "a3", "w"])
    proj = project_ideal(ones, block)
    for e in k3pair.edge_ids:
        assert proj.samples[e].tolist() == ([1.0, 1.0] if e in block.edges else [0.0, 0.0])

    whole = induced_subgraph(p3, p3.vertex_ids)
    psi = random_form_function(p3, np.random.default_rng(1), 3)
    proj = project_ideal(psi, whole)
    assert all(np.array_equal(proj.samples[e], psi.samples[e]) for e in p3.edge_ids)

    proj = project_ideal(EdgeFunction.constant(p3, 1.0), induced_subgraph(p3, ["v0", "v1"]))
    res = vertex_trace(p3, proj)
    assert not res.ok and res.violations == {"v1": (0.0, 1.0)}


@pytest.mark.parametrize("seed", range(10))
def test_projection_idempotent_and_self_adjoint(seed):
    g = random_graph(seed, max_flags=2)
    rng = np.random.default_rng(seed)
    vs = [v for v in g.vertex_ids if rng.random() < 0.5] or g.vertex_ids[:1]
    sub = induced_subgraph(g, vs)
    psi = random_form_function(g, rng, 3)
    phi = random_form_function(g, rng, 3)
    p_psi = project_ideal(psi, sub)
    assert all(np.array_equal(project_ideal(p_psi, sub).samples[e], p_psi.samples[e]) for e in g.edge_ids)
    lhs = l2_inner(p_psi, phi)
    rhs = l2_inner(psi, project_ideal(phi, sub))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_l2_inner_matches_norms(k3pair):
    psi = random_form_function(k3pair, np.random.default_rng(4), 5)
    nm = norms(psi)
    assert l2_inner(psi, psi) == pytest.approx(nm.l2_sq, rel=1e-12)
    assert energy(psi, psi) == pytest.approx(nm.h1_semi_sq, rel=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_domain_members_vanish_on_flags(seed):
    g = random_graph(seed, max_flags=3)
    psi = random_form_function(g, np.random.default_rng(seed), 4)
    verdict = in_form_domain(g, psi)
    assert verdict.ok
    for v in g.flagged:
        assert abs(verdict.trace[v]) <= 1e-9


def test_invariance_examples(p3, k3pair):
    rep = check_invariance(k3pair, induced_subgraph(k3pair, ["a1", "a2", "a3", "w"]), 50, 0)
    assert rep.invariant and rep.consistent
    rep = check_invariance(p3, induced_subgraph(p3, ["v0", "v1"]), 50, 0)
    assert not rep.invariant and rep.unflagged_boundary == ("v1",) and rep.consistent
    rep = check_invariance(p3, induced_subgraph(p3, p3.vertex_ids), 20, 0)
    assert rep.invariant and rep.consistent


def test_invariance_edgeless_boundary(p3):
    # v0 and v2 border v1 but carry no edge of the subgraph: the ideal is {0}
    rep = check_invariance(p3, induced_subgraph(p3, ["v0", "v2"]), 30, 0)
    assert rep.invariant and rep.consistent
    assert not rep.boundary_all_flagged


def test_edge_function_rows():
    g = single()
    rows = EdgeFunction(g, {"e0": [0.0, 0.5, 1.0]}).to_rows()
    assert rows == [("e0", 0, 0.0, 0.0), ("e0", 1, 0.5, 0.5), ("e0", 2, 1.0, 1.0)]


def test_edge_function_validation(p3):
    with pytest.raises(GraphError):
        EdgeFunction(p3, {"e0": [0, 1]})
    with pytest.raises(ValueError):
        EdgeFunction(p3, {"e0": [0], "e1": [0, 1], "e2": [0, 1]})
    psi = EdgeFunction.constant(p3, 2.0)
    with pytest.raises(ValueError):
        psi.samples["e0"][0] = 5.0
