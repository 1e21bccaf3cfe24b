import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netheat import GraphError, apply, apply_transpose, incidence, operator_norm, unbounded_witness
from netheat.fixtures import k3pair_inf, random_graph, single, star_k
from netheat.operators import adjoint_gap, incidence_suite, max_in_degree, verify_contraction_l1_linf
from oracles import dense_incidence


def test_apply_examples(p3, star4):
    assert apply(incidence(p3, "plus"), [1, 1, 1]).tolist() == [0, 1, 1, 1]
    out = apply(incidence(star4, "minus"), [1, 1, 1, 1])
    assert out[star4.vertex_index("c")] == 4
    assert not apply(incidence(p3, "signed"), np.zeros(3)).any()


def test_apply_transpose_examples(p3, star4):
    assert apply_transpose(incidence(p3, "plus"), [0, 1, 2, 3]).tolist() == [1, 2, 3]
    d = np.zeros(5)
    d[star4.vertex_index("c")] = 1
    assert apply_transpose(incidence(star4, "minus"), d).tolist() == [1, 1, 1, 1]
    assert not apply_transpose(incidence(p3, "minus"), np.zeros(4)).any()


def test_dimension_mismatch(p3):
    m = incidence(p3, "plus")
    with pytest.raises(ValueError, match="dimension mismatch"):
        apply(m, [1, 2])
    with pytest.raises(ValueError, match="dimension mismatch"):
        apply_transpose(m, [1, 2, 3])


def test_operator_norm_star16_against_svd():
    g = star_k(16)
    m = incidence(g, "minus")
    svd = np.linalg.svd(dense_incidence(g, "minus"), compute_uv=False)[0]
    assert svd == pytest.approx(4.0, abs=1e-12)
    assert operator_norm(m) == pytest.approx(svd, abs=1e-6)


def test_operator_norm_small_cases(p3):
    assert operator_norm(incidence(single(), "plus")) == pytest.approx(1.0, abs=1e-12)
    assert operator_norm(incidence(p3, "plus")) <= math.sqrt(2)


@pytest.mark.parametrize("seed", range(15))
@pytest.mark.parametrize("kind", ["plus", "minus", "signed"])
def test_operator_norm_matches_svd(seed, kind):
    g = random_graph(seed)
    expected = np.linalg.svd(dense_incidence(g, kind), compute_uv=False)[0]
    assert operator_norm(incidence(g, kind), tol=1e-13) == pytest.approx(expected, rel=1e-6)
    if kind != "signed":
        assert operator_norm(incidence(g, kind)) <= math.sqrt(max_in_degree(g, kind)) + 1e-6


def test_contraction_examples(p3, star4):
    m = incidence(star4, "minus")
    x = np.ones(4)
    assert np.abs(apply(m, x)).max() == 4 == np.abs(x).sum()
    x = np.array([1.0, -1.0, 1.0])
    assert np.abs(apply(incidence(p3, "plus"), x)).max() == 1


def test_contraction_random_k3pair():
    for kind in ("plus", "minus", "signed"):
        rep = verify_contraction_l1_linf(incidence(k3pair_inf(), kind), 1000, seed=0)
        assert rep.passed and rep.max_ratio <= 1.0
        assert rep.counterexample is None


def test_contraction_reproducible():
    m = incidence(k3pair_inf(), "plus")
    a = verify_contraction_l1_linf(m, 50, seed=3)
    b = verify_contraction_l1_linf(m, 50, seed=3)
    assert a.max_ratio == b.max_ratio


def test_unbounded_witness(star4):
    rows = unbounded_witness(star4, "c", (4, 16, 64))
    assert [r.image_norm for r in rows] == [2.0, 4.0, 8.0]
    assert all(r.x_norm == pytest.approx(1.0, abs=1e-15) for r in rows)
    assert unbounded_witness(star4, "c", (1,))[0].image_norm == 1.0
    assert unbounded_witness(star4, "c", (9,))[0].image_norm == pytest.approx(3.0, abs=1e-15)
    with pytest.raises(GraphError, match="not flagged"):
        unbounded_witness(star4, "l1", (4,))


def test_unbounded_witness_monotone(star4):
    norms = [r.image_norm for r in unbounded_witness(star4, "c", range(1, 40))]
    assert all(a < b for a, b in zip(norms, norms[1:]))


def test_suite_rows(k3pair):
    rows = incidence_suite(k3pair, samples=50)
    assert all(r[4] for r in rows)
    assert {r[0] for r in rows} >= {"operator_norm", "contraction_l1_linf", "l1_preserved_positive"}


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 200),
    kind=st.sampled_from(["plus", "minus", "signed"]),
    data=st.data(),
)
def test_adjoint_identity(seed, kind, data):
    g = random_graph(seed)
    m = incidence(g, kind)
    floats = st.floats(-1e3, 1e3, allow_nan=False)
    x = np.array(data.draw(st.lists(floats, min_size=len(g.edges), max_size=len(g.edges))))
    d = np.array(data.draw(st.lists(floats, min_size=len(g.vertices), max_size=len(g.vertices))))
    lhs = float(apply(m, x) @ d)
    rhs = float(x @ apply_transpose(m, d))
    assert abs(lhs - rhs) <= 1e-12 * max(np.abs(x).sum() * np.abs(d).max(), 1e-300)


@pytest.mark.parametrize("seed", range(10))
def test_adjoint_gap_positive_data(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(seed)
    for kind in ("plus", "minus"):
        m = incidence(g, kind)
        assert adjoint_gap(m, rng.random(len(g.edges)), rng.random(len(g.vertices))) <= 1e-12
