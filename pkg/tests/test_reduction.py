import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from rkhsreg.functionals import Convolution, DiscreteMeasure, Expectation, PointEval, gram_matrix
from rkhsreg.kernels import Kernel, KernelExpansion
from rkhsreg.optim import InfeasibleError, NumericalError
from rkhsreg.oracle import brute_force_minimize
from rkhsreg.reduction import (HingeLoss, KPCAConstraint, ReducedProblem, ScalarLoss,
                               SquaredLoss, loss_from_dict, project_onto_span, reduce,
                               solve_ivanov, solve_kpca, solve_rls, solve_scalar_family,
                               solve_svm, unique_minimizer_at_one)
from rkhsreg.regularizers import IndicatorBall, MonotoneTable, Power, Square

K1 = Kernel("gaussian", 1, width=0.8)


def points(xs, kernel=K1):
    return [PointEval([x]) for x in xs]


def desk_problem(seed, loss_kind="squared", ell=None, profile=Square(), gamma=None):
    rng = np.random.default_rng(seed)
    ell = ell or int(rng.integers(1, 4))
    Ls = points(np.sort(rng.uniform(-2, 2, ell)))
    if loss_kind == "squared":
        loss = SquaredLoss(rng.normal(size=ell))
    else:
        loss = HingeLoss(np.where(np.arange(ell) % 2 == 0, 1.0, -1.0))
    g = float(rng.uniform(0.5, 5.0)) if gamma is None else gamma
    return reduce(Ls, K1, loss, profile, g)


# -- reduction ------------------------------------------------------------

def test_one_functional_reduction_form():
    L = PointEval([0.3])
    rp = reduce([L], K1, SquaredLoss([2.0]), Square(), 3.0)
    for c in (-1.0, 0.2, 5.0):
        G11 = 1.0
        assert rp.objective([c]) == pytest.approx(3.0 * (2.0 - G11 * c) ** 2 + (math.sqrt(G11) * abs(c)) ** 2)


LOSSES = [SquaredLoss([1.0, -0.5, 2.0]), HingeLoss([1, -1, 1]), KPCAConstraint()]


@pytest.mark.parametrize("loss", LOSSES, ids=lambda l: l.kind)
@pytest.mark.parametrize("profile", [Square(), Power(1.5), IndicatorBall(3.0)], ids=lambda h: h.name)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_reduction_identity(loss, profile, seed):
    rng = np.random.default_rng(seed)
    Ls = [PointEval([0.1]),
          Expectation(DiscreteMeasure([[-1.0], [0.5]], [0.3, 0.7])),
          Convolution(np.arange(5)[:, None] * 0.2, rng.normal(size=5), [1.0])]
    rp = reduce(Ls, K1, loss, profile, 2.0)
    c = rng.normal(size=3)
    if isinstance(loss, KPCAConstraint):
        z = rp.gram @ c
        v = loss.variance(z)
        if v > 0:
            c = c / math.sqrt(v)
    a, b = rp.objective(c), rp.full_objective(rp.reconstruct(c))
    if math.isinf(a) or math.isinf(b):
        assert a == b
    else:
        assert abs(a - b) <= 1e-9 * max(1.0, abs(b))


def test_kpca_constraint_is_feasibility_set():
    loss = KPCAConstraint()
    assert loss(np.array([1.0, -1.0])) == 0.0
    assert math.isinf(float(loss(np.array([2.0, -2.0]))))


def test_reduce_validates_sizes():
    with pytest.raises(ValueError):
        reduce(points([0.0, 1.0]), K1, SquaredLoss([1.0]), Square())
    with pytest.raises(ValueError):
        reduce([], K1, SquaredLoss([]), Square())
    with pytest.raises(ValueError):
        reduce([PointEval([0.0, 1.0])], K1, SquaredLoss([1.0]), Square())


def test_projection_onto_span_never_increases_objective():
    rng = np.random.default_rng(4)
    Ls = points([-1.0, 0.0, 1.2])
    rp = reduce(Ls, K1, SquaredLoss([1.0, 0.0, -1.0]), Square(), 2.0)
    for _ in range(50):
        w = KernelExpansion(K1, rng.uniform(-3, 3, (6, 1)), rng.normal(size=6))
        c, u = project_onto_span(Ls, K1, w)
        assert rp.full_objective(u) <= rp.full_objective(w) + 1e-9


# -- RLS ------------------------------------------------------------------

def test_rls_desk_instance():
    rp = ReducedProblem(np.eye(2), SquaredLoss([2.0, 0.0]), Square(), 1.0)
    np.testing.assert_allclose(solve_rls(rp).coefficients, [1.0, 0.0], atol=1e-15)


def test_rls_zero_targets():
    rp = desk_problem(1, ell=3)
    rp = ReducedProblem(rp.gram, SquaredLoss(np.zeros(3)), Square(), 2.0)
    assert not np.any(solve_rls(rp).coefficients)


def test_rls_interpolation_limits():
    rp = desk_problem(2, ell=3)
    y = rp.loss.targets
    big = solve_rls(ReducedProblem(rp.gram, rp.loss, Square(), 1e12)).coefficients
    exact = solve_rls(ReducedProblem(rp.gram, rp.loss, Square(), math.inf))
    np.testing.assert_allclose(big, np.linalg.solve(rp.gram, y), rtol=1e-6)
    np.testing.assert_allclose(rp.gram @ exact.coefficients, y, atol=1e-10)
    assert exact.method == "interpolation"


def test_rls_not_interpolable():
    rp = ReducedProblem(np.ones((2, 2)), SquaredLoss([1.0, -1.0]), Square(), math.inf)
    with pytest.raises(InfeasibleError):
        solve_rls(rp)


def test_rls_duplicate_functionals_min_norm():
    # duplicated rows make G singular; the solver returns the symmetric split
    rp = reduce(points([0.5, 0.5]), K1, SquaredLoss([1.0, 1.0]), Square(), 1.0)
    c = solve_rls(rp).coefficients
    assert c[0] == pytest.approx(c[1], rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_rls_matches_oracle(seed):
    rp = desk_problem(100 + seed)
    res = solve_rls(rp)
    orc = brute_force_minimize(rp.objective, rp.size, batch_fn=rp.objective_batch)
    assert res.objective <= orc.value * (1 + 1e-6) + 1e-12
    assert res.residual <= 1e-10


# -- SVM ------------------------------------------------------------------

def svm_grid_oracle(G, y, gamma, lo=-5.0, hi=5.0, step=1e-3):
    """Dense grid over c in [lo, hi]^2, one row of c1 at a time."""
    axis = np.arange(lo, hi + step / 2, step)
    best = (math.inf, None)
    for c1 in axis:
        C = np.stack([np.full_like(axis, c1), axis], axis=1)
        Z = C @ G
        vals = gamma * np.sum(np.maximum(0, 1 - y * Z), axis=1) + np.sum(Z * C, axis=1)
        i = int(np.argmin(vals))
        if vals[i] < best[0]:
            best = (float(vals[i]), C[i].copy())
    return best


def test_svm_two_points_against_dense_grid():
    Ls = points([-1.5, 1.5])
    rp = reduce(Ls, K1, HingeLoss([1, -1]), Square(), 50.0)
    res = solve_svm(rp)
    margins = rp.loss.labels * (rp.gram @ res.coefficients)
    assert np.all(margins >= 1 - 1e-3)
    value, c_grid = svm_grid_oracle(rp.gram, rp.loss.labels, 50.0)
    assert res.objective <= value + 1e-12
    # grid spacing bounds how far the grid value can sit above the true minimum
    assert value - res.objective <= 1e-2
    assert np.max(np.abs(c_grid - res.coefficients)) <= 2e-3


@pytest.mark.parametrize("seed", range(5))
def test_svm_matches_oracle(seed):
    rp = desk_problem(200 + seed, "hinge")
    res = solve_svm(rp)
    orc = brute_force_minimize(rp.objective, rp.size, batch_fn=rp.objective_batch)
    assert abs(res.objective - orc.value) <= 1e-4 * max(1.0, abs(orc.value))
    assert res.objective <= orc.value + 1e-9
    assert abs(res.extra["duality_gap"]) <= 1e-8


def test_svm_gamma_zero():
    rp = desk_problem(3, "hinge", gamma=0.0)
    assert not np.any(solve_svm(rp).coefficients)


def test_svm_single_point_scan():
    rp = ReducedProblem(np.array([[1.0]]), HingeLoss([1]), Square(), 1e6)
    c = solve_svm(rp).coefficients[0]
    scan = np.linspace(0, 2, 200_001)
    vals = 1e6 * np.maximum(0, 1 - scan) + scan ** 2
    assert c == pytest.approx(scan[np.argmin(vals)], abs=1e-5)
    assert c == pytest.approx(1.0, abs=1e-5)


def test_svm_hard_margin_and_subgradient():
    rp = reduce(points([-1.0, 0.2, 1.0]), K1, HingeLoss([1, -1, 1]), Square(), 4.0)
    dual = solve_svm(rp)
    sub = solve_svm(rp, method="subgradient")
    assert abs(sub.objective - dual.objective) <= 1e-3 * dual.objective
    hard = solve_svm(ReducedProblem(rp.gram, rp.loss, Square(), math.inf))
    assert np.all(rp.loss.labels * (rp.gram @ hard.coefficients) >= 1 - 1e-9)


def test_svm_hard_margin_infeasible():
    rp = ReducedProblem(np.ones((2, 2)), HingeLoss([1, -1]), Square(), math.inf)
    with pytest.raises(NumericalError):
        solve_svm(rp)


def test_hinge_labels_validated():
    with pytest.raises(ValueError):
        HingeLoss([1, 0])


# -- KPCA -----------------------------------------------------------------

@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_kpca_symmetric_points_hand_oracle(a):
    # G = a^2 [[1, -1], [-1, 1]]; unit variance forces a^2 |c1 - c2| = 1
    Ls = [PointEval([a, 0.0]), PointEval([-a, 0.0])]
    rp = reduce(Ls, Kernel("linear", 2), KPCAConstraint(), Square())
    res = solve_kpca(rp)
    np.testing.assert_allclose(res.coefficients, np.array([-1.0, 1.0]) / (2 * a * a), rtol=1e-12)
    assert res.residual <= 1e-12
    assert res.extra["norm_squared"] == pytest.approx(1 / a ** 2, rel=1e-12)


def test_kpca_duplicated_point_infeasible():
    rp = reduce(points([0.7, 0.7]), K1, KPCAConstraint(), Square())
    with pytest.raises(InfeasibleError):
        solve_kpca(rp)


def test_kpca_beats_rejection_samples():
    rng = np.random.default_rng(9)
    Ls = [PointEval(x) for x in rng.normal(size=(4, 2))]
    rp = reduce(Ls, Kernel("gaussian", 2, width=1.2), KPCAConstraint(), Square())
    res = solve_kpca(rp)
    C = rng.normal(size=(100_000, 4))
    Z = C @ rp.gram
    v = KPCAConstraint().variance(Z)
    C = C[v > 1e-12] / np.sqrt(v[v > 1e-12])[:, None]
    norms = np.sum((C @ rp.gram) * C, axis=1)
    assert res.extra["norm_squared"] <= norms.min() + 1e-12


def test_kpca_any_increasing_profile_same_solution():
    rp = desk_problem(5, ell=3)
    a = solve_kpca(ReducedProblem(rp.gram, KPCAConstraint(), Square()))
    b = solve_kpca(ReducedProblem(rp.gram, KPCAConstraint(), Power(0.5)))
    np.testing.assert_array_equal(a.coefficients, b.coefficients)


# -- Ivanov ---------------------------------------------------------------

def kkt_bisection(G, y, r):
    """c(mu) = (G + mu I)^{-1} y; find mu with c^T G c = r^2 by bisection."""
    def excess(mu):
        c = np.linalg.solve(G + mu * np.eye(len(y)), y)
        return c @ G @ c - r * r
    hi = 1.0
    while excess(hi) > 0:
        hi *= 2
    mu = brentq(excess, 0.0, hi, xtol=1e-15, rtol=1e-15)
    return np.linalg.solve(G + mu * np.eye(len(y)), y)


def test_ivanov_inactive_constraint():
    rp = desk_problem(6, ell=2, profile=IndicatorBall(100.0))
    res = solve_ivanov(rp)
    assert res.method == "unconstrained"
    np.testing.assert_allclose(rp.gram @ res.coefficients, rp.loss.targets, atol=1e-10)


@pytest.mark.parametrize("seed", range(4))
def test_ivanov_boundary_matches_kkt_oracle(seed):
    rp = desk_problem(300 + seed, ell=3, profile=IndicatorBall(0.3))
    res = solve_ivanov(rp)
    c_star = kkt_bisection(rp.gram, rp.loss.targets, 0.3)
    sq = res.coefficients @ rp.gram @ res.coefficients
    assert abs(sq - 0.09) <= 1e-8
    assert res.feasibility <= 1e-10
    f_star = rp.gamma * np.sum((rp.loss.targets - rp.gram @ c_star) ** 2)
    assert abs(res.objective - f_star) <= 1e-4 * max(1.0, f_star)


def test_ivanov_large_radius_matches_interpolation():
    rp = desk_problem(7, ell=3, profile=IndicatorBall(1e8))
    iv = solve_ivanov(rp)
    interp = solve_rls(ReducedProblem(rp.gram, rp.loss, Square(), math.inf))
    np.testing.assert_allclose(rp.gram @ iv.coefficients, rp.gram @ interp.coefficients, atol=1e-9)


@pytest.mark.parametrize("seed", range(3))
def test_ivanov_hinge_matches_oracle(seed):
    rp = desk_problem(400 + seed, "hinge", ell=3, profile=IndicatorBall(0.8))
    res = solve_ivanov(rp)
    assert res.feasibility <= 1e-10
    lam, Q = np.linalg.eigh(rp.gram)

    def project(C):
        C = np.atleast_2d(C)
        q = np.sqrt(np.maximum(np.sum((C @ rp.gram) * C, axis=1), 0.0))
        scale = np.where(q > 0.8, 0.8 / np.maximum(q, 1e-300), 1.0)
        out = C * scale[:, None]
        return out if out.shape[0] > 1 else out[0]

    def data(C):
        return rp.gamma * rp.loss(np.atleast_2d(C) @ rp.gram)

    orc = brute_force_minimize(lambda c: float(data(c)[0]), 3, batch_fn=data, project=project)
    assert res.objective <= orc.value + 1e-4 * max(1.0, orc.value)


def test_ivanov_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        IndicatorBall(0.0)


# -- scalar family --------------------------------------------------------

@pytest.mark.parametrize("k", range(0, 41, 5))
def test_scalar_family_closed_form(k):
    g = 2.0 ** k
    res = solve_scalar_family(np.array([1.0]), ScalarLoss(), Square(), g)
    assert res.lam == pytest.approx(g / (g + 1), rel=1e-9)


def test_scalar_family_edge_cases():
    assert solve_scalar_family(np.array([2.0]), ScalarLoss(), Square(), 0.0).lam == 0.0
    res = solve_scalar_family(np.zeros(3), ScalarLoss(), Square(), 5.0)
    assert res.lam == 0.0 and res.origin_case


def test_scalar_family_expansion_input():
    p = 2.0 * KernelExpansion(K1, [[0.0]], [1.0])
    res = solve_scalar_family(p, ScalarLoss(), Square(), 3.0)
    # ||x|| = 1/2, so the ray objective is 3 (lam - 1)^2 + lam^2 / 4
    assert res.x_norm == pytest.approx(0.5)
    assert res.lam == pytest.approx(3.0 / 3.25, rel=1e-9)


def test_svm_pair_minimum():
    f = ScalarLoss("svm_pair").f
    z = np.round(np.arange(-100_000, 100_001) * 1e-4, 10)
    vals = f(z)
    assert z[np.argmin(vals)] == 1.0
    assert float(f(np.array([1.0]))[0]) == 1.5
    assert np.all(vals[z != 1.0] > 1.5)


def test_scalar_loss_rejects_wrong_minimizer():
    with pytest.raises(ValueError):
        ScalarLoss("shifted", f=lambda z: np.asarray(z) ** 2)
    assert not unique_minimizer_at_one(lambda z: np.maximum(0, 1 - np.asarray(z)))


def test_loss_descriptors():
    assert isinstance(loss_from_dict({"type": "kpca"}), KPCAConstraint)
    assert loss_from_dict({"type": "hinge", "labels": [1, -1]}).to_dict() == {"type": "hinge", "labels": [1.0, -1.0]}
    with pytest.raises(ValueError):
        loss_from_dict({"type": "huber"})


def test_ivanov_hinge_non_separable():
    G = np.array([[1.0, 1.0], [1.0, 1.0]])
    rp = ReducedProblem(G, HingeLoss([1, -1]), IndicatorBall(0.5), 1.0)
    res = solve_ivanov(rp)
    # every c gives margins z and -z with z = c1 + c2, so the hinge sum is at least 2
    assert res.feasibility <= 1e-10
    assert res.objective == pytest.approx(2.0, abs=1e-9)
