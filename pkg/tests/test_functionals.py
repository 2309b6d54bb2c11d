import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rkhsreg.functionals import (Convolution, DiscreteMeasure, Expectation, PointEval, apply,
                                 functional_from_dict, gram_matrix, representer)
from rkhsreg.kernels import TOL_EVAL, TOL_PSD, Kernel, inner_product, is_psd, section

from conftest import KERNELS, random_expansion

seeds = st.integers(0, 2 ** 32 - 1)


def random_functional(rng, dim, kind):
    if kind == "point":
        return PointEval(rng.normal(size=dim))
    if kind == "expectation":
        m = int(rng.integers(1, 4))
        w = rng.random(m) + 0.1
        return Expectation(DiscreteMeasure(rng.normal(size=(m, dim)), w / w.sum()))
    axes = np.meshgrid(*[np.arange(3) * 0.1] * dim, indexing="ij")
    grid = np.stack([a.ravel() for a in axes], axis=1)
    return Convolution(grid, rng.normal(size=grid.shape[0]), rng.normal(size=dim))


KINDS = ["point", "expectation", "convolution"]


@pytest.mark.parametrize("k", KERNELS, ids=lambda k: k.family)
@pytest.mark.parametrize("kind", KINDS)
def test_riesz_consistency(k, kind):
    rng = np.random.default_rng(11)
    L = random_functional(rng, k.input_dim, kind)
    rep = representer(L, k)
    for _ in range(100):
        w = random_expansion(rng, k)
        # the representer reproduces the same finite sum, so this is exact up to rounding
        assert apply(L, w) == pytest.approx(inner_product(w, rep), rel=1e-10, abs=TOL_EVAL)


@pytest.mark.parametrize("k", KERNELS, ids=lambda k: k.family)
@pytest.mark.parametrize("kind", KINDS)
@given(seed=seeds)
def test_linearity(k, kind, seed):
    rng = np.random.default_rng(seed)
    L = random_functional(rng, k.input_dim, kind)
    u, v = random_expansion(rng, k), random_expansion(rng, k)
    a, b = rng.normal(size=2)
    assert apply(L, a * u + b * v) == pytest.approx(a * apply(L, u) + b * apply(L, v),
                                                    rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("k", KERNELS, ids=lambda k: k.family)
@pytest.mark.parametrize("kind", KINDS)
@given(seed=seeds)
def test_section_evaluates_representer(k, kind, seed):
    rng = np.random.default_rng(seed)
    L = random_functional(rng, k.input_dim, kind)
    x = rng.normal(size=k.input_dim)
    assert apply(L, section(k, x)) == pytest.approx(representer(L, k)(x), rel=1e-10, abs=TOL_EVAL)


@pytest.mark.parametrize("k", KERNELS, ids=lambda k: k.family)
@given(seed=seeds)
def test_gram_symmetric_psd_and_two_orders_agree(k, seed):
    rng = np.random.default_rng(seed)
    Ls = [random_functional(rng, k.input_dim, KINDS[i % 3]) for i in range(int(rng.integers(1, 6)))]
    G = gram_matrix(Ls, k)
    scale = max(1.0, float(np.max(np.abs(G))))
    assert np.array_equal(G, G.T)
    assert is_psd(G / scale, TOL_PSD)
    reps = [representer(L, k) for L in Ls]
    alt = np.array([[apply(Li, rj) for rj in reps] for Li in Ls])
    assert np.allclose(G, alt, rtol=1e-10, atol=TOL_EVAL * scale)


def test_point_eval_on_section_is_kernel_value():
    k = Kernel("gaussian", 1, width=0.5)
    assert apply(PointEval([0.3]), section(k, [1.1])) == pytest.approx(k([1.1], [0.3]))


def test_one_atom_expectation_matches_point_eval():
    k = Kernel("polynomial", 2, degree=2)
    w = random_expansion(np.random.default_rng(0), k)
    E = Expectation(DiscreteMeasure([[0.4, -0.2]], [1.0]))
    assert apply(E, w) == apply(PointEval([0.4, -0.2]), w)


def test_representer_shapes():
    k = Kernel("gaussian", 1)
    r = representer(PointEval([2.0]), k)
    assert r.centers.tolist() == [[2.0]] and r.coefficients.tolist() == [1.0]
    r = representer(Expectation(DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])), k)
    assert r.centers.tolist() == [[0.0], [1.0]] and r.coefficients.tolist() == [0.5, 0.5]
    assert inner_product(representer(PointEval([2.0]), k), representer(PointEval([2.0]), k)) == 1.0


def test_gram_of_point_evals_is_kernel_matrix():
    k = Kernel("gaussian", 1, width=0.8)
    X = np.array([[0.0], [0.5], [2.0]])
    assert np.allclose(gram_matrix([PointEval(x) for x in X], k), k.matrix(X), rtol=0, atol=1e-15)


def test_gram_single_and_duplicate():
    k = Kernel("linear", 2)
    L = PointEval([1.0, 2.0])
    assert gram_matrix([L], k).tolist() == [[5.0]]
    G = gram_matrix([L, L], k)
    assert np.linalg.matrix_rank(G) == 1


def test_box_convolution_against_double_resolution():
    # nearly constant section of a wide gaussian; rectangle rule over the cells [s_k, s_k + ds)
    k = Kernel("gaussian", 1, width=10.0)
    w = section(k, [0.0])
    L = Convolution(np.arange(100)[:, None] * 0.01, np.ones(100), [0.5])
    fine = Convolution(np.arange(200)[:, None] * 0.005, np.ones(200), [0.5])
    assert L.spacing == pytest.approx(0.01)
    value = apply(L, w)
    assert value == pytest.approx(1.0, abs=1e-2)
    assert abs(value - apply(fine, w)) <= 1e-3


def test_convolution_quadrature_converges():
    from scipy.integrate import quad
    k = Kernel("gaussian", 1, width=0.4)
    w = section(k, [0.1])
    exact = quad(lambda s: w([0.7 - s]), 0.0, 1.0, epsabs=1e-13)[0]
    errs = []
    for m in (50, 100, 200):
        # midpoint nodes make the rule second order
        nodes = (np.arange(m) + 0.5) / m
        errs.append(abs(apply(Convolution(nodes[:, None], np.ones(m), [0.7]), w) - exact))
    assert errs[2] < errs[1] < errs[0]
    assert errs[1] <= 10 * 0.01 ** 2


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(PointEval([1.0, 2.0]), section(Kernel("linear", 1), [1.0]))
    with pytest.raises(ValueError):
        representer(PointEval([1.0]), Kernel("linear", 3))


@pytest.mark.parametrize("atoms, weights", [
    ([[0.0], [1.0]], [0.5, 0.6]),
    ([[0.0], [1.0]], [-0.5, 1.5]),
    ([[0.0], [0.0]], [0.5, 0.5]),
    ([[0.0]], [0.5, 0.5]),
])
def test_invalid_measures(atoms, weights):
    with pytest.raises(ValueError):
        DiscreteMeasure(atoms, weights)


def test_nonuniform_convolution_grid_rejected():
    with pytest.raises(ValueError):
        Convolution([[0.0], [0.1], [0.3]], [1.0, 1.0, 1.0], [0.0])


@pytest.mark.parametrize("kind", KINDS)
def test_descriptor_round_trip(kind):
    L = random_functional(np.random.default_rng(5), 2, kind)
    L2 = functional_from_dict(L.to_dict())
    k = Kernel("gaussian", 2)
    assert np.array_equal(gram_matrix([L], k), gram_matrix([L2], k))
