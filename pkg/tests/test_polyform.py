import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hyperlam import kernels, polyform
from hyperlam.hypergraph import (Hypergraph, Kind, PartitionSpec, balanced_chromatic,
                                 complete_chromatic, complete_graph, complete_multipartite,
                                 size_vectors, turan_hypergraph)
from hyperlam.polyform import ClassWeights

SINGLE3 = Hypergraph(3, 3, [(0, 1, 2)])


def naive_form(G, x):
    return math.factorial(G.r) * sum(math.prod(x[v] for v in e) for e in G.edges)


@st.composite
def graph_and_vector(draw, max_n=7):
    r = draw(st.integers(2, 4))
    n = draw(st.integers(r, max_n))
    all_edges = list(itertools.combinations(range(n), r))
    edges = draw(st.lists(st.sampled_from(all_edges), unique=True, min_size=1, max_size=25))
    x = draw(arrays(np.float64, n, elements=st.floats(0, 2, allow_subnormal=False)))
    return Hypergraph(r, n, edges), x


def test_evaluate_examples():
    t = 0.3
    assert polyform.evaluate(SINGLE3, [t, t, t]) == pytest.approx(6 * t**3, rel=1e-15)
    assert polyform.evaluate(complete_graph(3, 2), np.full(3, 1 / 3)) == pytest.approx(2 / 3)
    assert polyform.evaluate(complete_graph(4, 3), np.full(4, 0.5)) == pytest.approx(3.0)


def test_gradient_examples():
    np.testing.assert_allclose(polyform.gradient(SINGLE3, [1, 2, 3]), [36, 18, 12])
    np.testing.assert_allclose(polyform.gradient(complete_graph(3, 2), np.ones(3)), [4, 4, 4])


def test_dimension_and_finiteness_checks():
    with pytest.raises(ValueError):
        polyform.evaluate(SINGLE3, [1, 2])
    with pytest.raises(ValueError):
        polyform.gradient(SINGLE3, [1, np.nan, 2])


@given(graph_and_vector())
def test_euler_identity(gx):
    G, x = gx
    f = polyform.evaluate(G, x)
    g = polyform.gradient(G, x)
    assert np.dot(x, g) == pytest.approx(G.r * f, rel=1e-12, abs=1e-12)


@given(graph_and_vector())
def test_matches_naive_evaluation(gx):
    G, x = gx
    assert polyform.evaluate(G, x) == pytest.approx(naive_form(G, x), rel=1e-12, abs=1e-14)
    assert polyform.evaluate(G, x, compensated=True) == pytest.approx(naive_form(G, x),
                                                                      rel=1e-12, abs=1e-14)
    np.testing.assert_allclose(polyform.gradient(G, x, compensated=True), polyform.gradient(G, x),
                               rtol=1e-12, atol=1e-14)


@given(graph_and_vector(), st.data())
def test_multilinear_in_each_coordinate(gx, data):
    G, x = gx
    i = data.draw(st.integers(0, G.n - 1))
    delta = data.draw(st.floats(-1, 1))
    y = x.copy()
    y[i] += delta
    g = polyform.gradient(G, x)
    assert polyform.evaluate(G, y) == pytest.approx(polyform.evaluate(G, x) + delta * g[i],
                                                    rel=1e-10, abs=1e-10)


@given(graph_and_vector())
def test_gradient_matches_central_differences(gx):
    G, x = gx
    x = x + 0.1
    g = polyform.gradient(G, x)
    h = 1e-6
    fd = np.array([(polyform.evaluate(G, x + h * e) - polyform.evaluate(G, x - h * e)) / (2 * h)
                   for e in np.eye(G.n)])
    np.testing.assert_allclose(fd, g, rtol=1e-6, atol=1e-6 * max(1.0, np.abs(g).max()))


def test_hessian_matches_gradient_differences():
    rng = np.random.default_rng(3)
    G = balanced_chromatic(6, 2, 3)
    x = rng.random(6)
    h = 1e-6
    fd = np.array([(polyform.gradient(G, x + h * e) - polyform.gradient(G, x - h * e)) / (2 * h)
                   for e in np.eye(6)])
    np.testing.assert_allclose(polyform.hessian(G, x), fd, rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
def test_batch_kernels_agree_with_scalar(backend):
    rng = np.random.default_rng(0)
    G = complete_graph(7, 3)
    X = rng.random((5, 7))
    f, g = kernels.form_values_grads(G.edge_array, X, backend)
    fv = kernels.form_values(G.edge_array, X, backend)
    for row, fi, gi, fvi in zip(X, f, g, fv):
        assert 6 * fi == pytest.approx(naive_form(G, row), rel=1e-13)
        assert fvi == pytest.approx(fi, rel=1e-15)
        np.testing.assert_allclose(6 * gi, polyform.gradient(G, row), rtol=1e-13)


def test_elementary_symmetric_matches_combinations():
    rng = np.random.default_rng(1)
    y = rng.random(6)
    for r in range(7):
        expected = sum(math.prod(c) for c in itertools.combinations(y, r))
        assert float(polyform.elementary_symmetric(y, r)) == pytest.approx(expected, rel=1e-13)


def test_reduced_chromatic3_examples():
    spec = PartitionSpec((3, 3), Kind.CHROMATIC)
    a = (1 / 6, 1 / 6)
    full = polyform.evaluate(balanced_chromatic(6, 2, 3), np.full(6, 1 / 6)) / 6
    assert polyform.reduced_evaluate_chromatic3(ClassWeights(spec, a)) == pytest.approx(full)
    ones = PartitionSpec((1, 1), Kind.CHROMATIC)
    assert polyform.reduced_evaluate_chromatic3(ClassWeights(ones, (0.7, 0.2))) == 0
    t = 0.4
    pair = PartitionSpec((2, 2), Kind.CHROMATIC)
    assert polyform.reduced_evaluate_chromatic3(ClassWeights(pair, (t, t))) == pytest.approx(4 * t**3)


def test_reduced_multipartite_examples():
    s, t = 0.3, 0.7
    cw = ClassWeights(PartitionSpec((2, 2)), (s, t))
    assert polyform.reduced_evaluate_multipartite(cw, 2) == pytest.approx(8 * s * t)
    cw = ClassWeights(PartitionSpec((1, 1, 1)), (1, 1, 1))
    assert polyform.reduced_evaluate_multipartite(cw, 3) == pytest.approx(6)
    spec = PartitionSpec((3, 2, 2))
    a = np.array([1, 1, 1]) / 7
    cw = ClassWeights(spec, a)
    full = polyform.evaluate(turan_hypergraph(7, 3, 3), cw.expand())
    y = np.array(spec.sizes) * a
    assert polyform.reduced_evaluate_multipartite(cw, 3) == pytest.approx(full, rel=1e-14)
    assert full == pytest.approx(6 * np.prod(y), rel=1e-14)


def test_class_weights_validate():
    with pytest.raises(ValueError):
        ClassWeights(PartitionSpec((2, 2)), (0.1,))
    with pytest.raises(ValueError):
        ClassWeights(PartitionSpec((2, 2)), (0.1, -0.2))
    assert ClassWeights(PartitionSpec((2, 2)), (0.0, 0.5)).a == (0.0, 0.5)
    with pytest.raises(ValueError):
        polyform.reduced_evaluate_chromatic3(ClassWeights(PartitionSpec((2, 2)), (1, 1)))


def _all_specs(max_n):
    for n in range(2, max_n + 1):
        for k in range(1, n + 1):
            yield from size_vectors(n, k)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_reductions_agree_with_full_evaluation(r):
    rng = np.random.default_rng(r)
    for sizes in _all_specs(10):
        if sum(sizes) < r:
            continue
        a = rng.random(len(sizes))
        cspec = PartitionSpec(sizes, Kind.CHROMATIC)
        cw = ClassWeights(cspec, a)
        full = polyform.evaluate(complete_chromatic(cspec, r), cw.expand())
        red = polyform.reduced_evaluate_chromatic(cw, r)
        assert red == pytest.approx(full, rel=1e-12, abs=1e-300)
        if r == 3:
            assert 6 * polyform.reduced_evaluate_chromatic3(cw) == pytest.approx(full, rel=1e-12)
        if len(sizes) >= r:
            pspec = PartitionSpec(sizes)
            cw = ClassWeights(pspec, a)
            full = polyform.evaluate(complete_multipartite(pspec, r), cw.expand())
            assert polyform.reduced_evaluate_multipartite(cw, r) == pytest.approx(full, rel=1e-12)


@settings(max_examples=40)
@given(st.lists(st.integers(1, 4), min_size=2, max_size=4), st.integers(2, 4), st.data())
def test_reduced_gradients_match_differences(sizes, r, data):
    a = np.array(data.draw(st.lists(st.floats(0.05, 1), min_size=len(sizes), max_size=len(sizes))))
    h = 1e-6
    forms = [(polyform.chromatic_form, polyform.chromatic_form_grad)]
    if len(sizes) >= r:
        forms.append((polyform.multipartite_form, polyform.multipartite_form_grad))
    for form, grad in forms:
        g = grad(sizes, a[None], r)[0]
        fd = np.array([(form(sizes, (a + h * e)[None], r)[0] - form(sizes, (a - h * e)[None], r)[0])
                       / (2 * h) for e in np.eye(len(a))])
        np.testing.assert_allclose(g, fd, rtol=1e-6, atol=1e-8)


def test_lp_normalize():
    x = polyform.lp_normalize([3.0, 4.0], 2)
    np.testing.assert_allclose(x, [0.6, 0.8])
    assert polyform.is_lp_normalized(x, 2)
    with pytest.raises(ValueError):
        polyform.lp_normalize([0.0, 0.0], 2)
