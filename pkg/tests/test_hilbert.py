import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial.legendre import leggauss

from pairedcvm.exceptions import DomainError, GridMismatchError
from pairedcvm.hilbert import (FunctionSample, Grid, LegendreBasis, PairedSample,
                               basis_coefficients, basis_matrix, inner_product, legendre_eval)


def gram_schmidt_basis(degree_count, t):
    """Orthonormalize 1, t, t^2, ... on [0, 1] under 40-point Gauss-Legendre quadrature."""
    nodes, weights = leggauss(40)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    mono_q = np.array([nodes ** d for d in range(degree_count)])
    mono_t = np.array([np.asarray(t, dtype=float) ** d for d in range(degree_count)])
    coef = np.eye(degree_count)
    for d in range(degree_count):
        for e in range(d):
            proj = np.sum((coef[d] @ mono_q) * (coef[e] @ mono_q) * weights)
            coef[d] = coef[d] - proj * coef[e]
        norm = np.sqrt(np.sum((coef[d] @ mono_q) ** 2 * weights))
        coef[d] = coef[d] / norm
    return coef @ mono_t


def test_grid_points():
    g = Grid(5)
    np.testing.assert_array_equal(g.points, [0, 0.25, 0.5, 0.75, 1])
    assert np.all(np.diff(Grid(101).points) > 0)
    with pytest.raises(DomainError):
        Grid(1)


def test_function_sample_validation():
    g = Grid(3)
    with pytest.raises(DomainError):
        FunctionSample(g, [0.0, 1.0])
    with pytest.raises(DomainError):
        FunctionSample(g, [0.0, np.nan, 1.0])


def test_legendre_examples():
    assert legendre_eval(1, 0.7) == 1.0
    assert legendre_eval(2, 1.0) == pytest.approx(np.sqrt(3), abs=1e-12)
    assert legendre_eval(3, 0.5) == pytest.approx(-np.sqrt(5) / 2, abs=1e-12)


def test_legendre_matches_gram_schmidt():
    t = np.linspace(0, 1, 17)
    oracle = gram_schmidt_basis(8, t)
    for i in range(1, 9):
        got = [legendre_eval(i, s) for s in t]
        np.testing.assert_allclose(got, oracle[i - 1], atol=1e-8)
    assert legendre_eval(3, 0.5) == pytest.approx(gram_schmidt_basis(3, 0.5)[2], abs=1e-10)


@pytest.mark.parametrize("bad", [(0, 0.5), (1, -0.1), (2, 1.5), (1.5, 0.2)])
def test_legendre_domain(bad):
    with pytest.raises(DomainError):
        legendre_eval(*bad)


@pytest.mark.parametrize("degree", range(12))
def test_legendre_endpoints(degree):
    scale = np.sqrt(2 * degree + 1)
    assert abs(legendre_eval(degree + 1, 0.0)) == pytest.approx(scale, rel=1e-12)
    assert legendre_eval(degree + 1, 1.0) == pytest.approx(scale, rel=1e-12)


def test_inner_product_examples(grid1001):
    one = FunctionSample(Grid(7), np.ones(7))
    assert inner_product(one, one) == pytest.approx(1.0, abs=1e-15)
    t = FunctionSample(grid1001, grid1001.points)
    assert inner_product(t, t) == pytest.approx(1 / 3, abs=1e-6)


def test_inner_product_orthogonality_vs_gauss(grid1001):
    basis = basis_matrix(grid1001, 3)
    e2 = FunctionSample(grid1001, basis[1])
    e3 = FunctionSample(grid1001, basis[2])
    nodes, weights = leggauss(20)
    nodes = 0.5 * (nodes + 1)
    gs = gram_schmidt_basis(3, nodes)
    exact = np.sum(gs[1] * gs[2] * 0.5 * weights)
    assert exact == pytest.approx(0.0, abs=1e-12)
    assert inner_product(e2, e3) == pytest.approx(exact, abs=1e-4)


def test_inner_product_grid_mismatch():
    with pytest.raises(GridMismatchError):
        inner_product(FunctionSample(Grid(3), np.ones(3)), FunctionSample(Grid(4), np.ones(4)))


def test_orthonormality_first_ten(grid1001):
    basis = basis_matrix(grid1001, 10)
    for i in range(10):
        for j in range(10):
            got = inner_product(FunctionSample(grid1001, basis[i]), FunctionSample(grid1001, basis[j]))
            assert abs(got - (i == j)) <= 1e-3


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(finite, min_size=9, max_size=9), st.lists(finite, min_size=9, max_size=9),
       st.lists(finite, min_size=9, max_size=9), finite, finite)
def test_inner_product_symmetry_and_linearity(f, g, h, a, b):
    grid = Grid(9)
    f, g, h = (FunctionSample(grid, v) for v in (f, g, h))
    assert inner_product(f, g) == inner_product(g, f)
    lhs = inner_product(a * f + b * g, h)
    rhs = a * inner_product(f, h) + b * inner_product(g, h)
    scale = abs(a * inner_product(f, h)) + abs(b * inner_product(g, h)) \
        + np.sum(np.abs(a * f.values + b * g.values) * np.abs(h.values)) / 8
    assert abs(lhs - rhs) <= 1e-10 * max(scale, 1e-300)


def test_basis_coefficients_examples(grid1001):
    c = basis_coefficients(FunctionSample(grid1001, np.ones(1001)), 8)
    assert c[0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(c[1:]) < 1e-4)

    e2 = FunctionSample(grid1001, basis_matrix(grid1001, 2)[1])
    c = basis_coefficients(e2, 8)
    assert c[1] == pytest.approx(1.0, abs=1e-4)
    assert np.all(np.abs(np.delete(c, 1)) < 1e-4)

    c = basis_coefficients(FunctionSample(grid1001, grid1001.points), 3)
    assert c[0] == pytest.approx(0.5, abs=1e-5)
    assert c[1] == pytest.approx(1 / (2 * np.sqrt(3)), abs=1e-5)


def test_basis_coefficients_bad_max_index():
    with pytest.raises(DomainError):
        basis_coefficients(FunctionSample(Grid(3), np.ones(3)), 0)


def test_paired_sample_construction():
    g = Grid(4)
    pairs = [(FunctionSample(g, np.zeros(4)), FunctionSample(g, np.ones(4)))] * 3
    s = PairedSample.from_pairs(pairs)
    assert s.n == 3 and s.values.shape == (3, 2, 4)
    a, b = s.pair(1)
    np.testing.assert_array_equal(b.values, np.ones(4))
    with pytest.raises(GridMismatchError):
        PairedSample.from_pairs([(FunctionSample(g, np.zeros(4)), FunctionSample(Grid(5), np.zeros(5)))])


def test_legendre_basis_transformer(grid1001):
    X = np.vstack([np.ones(1001), grid1001.points])
    tr = LegendreBasis(max_index=4)
    coefs = tr.fit_transform(X)
    assert coefs.shape == (2, 4)
    np.testing.assert_allclose(coefs[1, :2], [0.5, 1 / (2 * np.sqrt(3))], atol=1e-5)
    assert tr.get_params() == {"max_index": 4}
    with pytest.raises(GridMismatchError):
        tr.transform(np.ones((2, 11)))
