import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from powerca.errors import NonPositiveCell, ZeroGrandMean
from powerca.interaction import (
    additive_center,
    covariance_residuals,
    density,
    first_order_approx,
    log_interaction,
    multiplicative_center,
    pearson_contrast,
    sigma,
)
from powerca.tables import ContingencyTable, WeightScheme, centering_defect, make_weights, normalize
from powerca.transform import one_zero_column_reduction, power_transform


def P_of(values):
    return normalize(ContingencyTable(values))


def independent(rng, I=4, J=5):
    a = rng.uniform(0.5, 3, size=I)
    b = rng.uniform(0.5, 3, size=J)
    return P_of(np.outer(a, b))


def test_covariance_independent_is_zero(rng):
    t = covariance_residuals(independent(rng))
    assert np.abs(t.tau).max() < 1e-14
    np.testing.assert_allclose(t.row_metric, 1 / 4)
    np.testing.assert_allclose(t.col_metric, 1 / 5)


def test_covariance_reduced_table():
    P = P_of(one_zero_column_reduction(12, 26, 1).values)
    s = sigma(P)
    assert s[0, 0] == pytest.approx(-275 / 96721, abs=1e-16)
    np.testing.assert_allclose(covariance_residuals(P).tau, 4 * s, atol=1e-16)


def test_covariance_2x2_pattern(rng):
    P = P_of(rng.uniform(0.1, 5, size=(2, 2)))
    s = sigma(P)
    np.testing.assert_allclose(s, s[0, 0] * np.array([[1, -1], [-1, 1]]), atol=1e-16)


def test_pearson_contrast():
    P = P_of([[1, 0], [0, 1]])
    np.testing.assert_array_equal(pearson_contrast(P).tau, [[1, -1], [-1, 1]])


def test_pearson_independent_is_zero(rng):
    assert np.abs(pearson_contrast(independent(rng)).tau).max() < 1e-14


def test_sigma_and_delta_identity(rng):
    P = P_of(rng.uniform(0, 10, size=(4, 6)))
    t = pearson_contrast(P)
    np.testing.assert_allclose(sigma(P), np.outer(P.r, P.c) * t.tau, atol=1e-16)
    np.testing.assert_allclose(t.row_metric, P.r)


def test_log_interaction_rank_one_is_zero(rng):
    t = log_interaction(independent(rng), WeightScheme.uniform(4, 5))
    assert np.abs(t.tau).max() < 1e-13


def test_log_interaction_2x2_closed_form(rng):
    P = P_of(rng.uniform(0.1, 5, size=(2, 2)))
    lam = log_interaction(P, WeightScheme.uniform(2, 2)).tau
    p = P.p
    expected = 0.25 * np.log(p[0, 0] * p[1, 1] / (p[0, 1] * p[1, 0]))
    assert lam[0, 0] == pytest.approx(expected, abs=1e-14)
    np.testing.assert_allclose(lam, expected * np.array([[1, -1], [-1, 1]]), atol=1e-14)


def test_log_interaction_rejects_zero():
    with pytest.raises(NonPositiveCell):
        log_interaction(P_of([[0, 1], [1, 1]]), WeightScheme.uniform(2, 2))


@settings(max_examples=50, deadline=None)
@given(
    arrays(np.float64, (4, 3), elements=st.floats(0.01, 100)),
    arrays(np.float64, 4, elements=st.floats(0.1, 10)),
    arrays(np.float64, 3, elements=st.floats(0.1, 10)),
    st.sampled_from(["uniform", "custom"]),
)
def test_log_interaction_scale_invariant(N, a, b, kind):
    P = P_of(N)
    Q = P_of(a[:, None] * N * b[None, :])
    custom = (np.array([1.0, 2.0, 3.0, 4.0]), np.array([3.0, 1.0, 1.0]))
    w = make_weights(kind, P, custom)
    np.testing.assert_allclose(log_interaction(Q, w).tau, log_interaction(P, w).tau, rtol=0, atol=1e-10)


def test_marginal_weights_not_scale_invariant(rng):
    N = rng.uniform(1, 10, size=(3, 3))
    P, Q = P_of(N), P_of(N * np.array([1, 5, 1])[:, None])
    lp = log_interaction(P, make_weights("marginal", P)).tau
    lq = log_interaction(Q, make_weights("marginal", Q)).tau
    assert np.abs(lp - lq).max() > 1e-3


def test_additive_center_of_additive_matrix(rng):
    Y = rng.normal(size=(5, 1)) + rng.normal(size=(1, 4))
    mr, mc = rng.dirichlet(np.ones(5)), rng.dirichlet(np.ones(4))
    assert np.abs(additive_center(Y, mr, mc)).max() < 1e-14


def test_additive_center_of_log_is_log_interaction(rng):
    P = P_of(rng.uniform(0.5, 9, size=(4, 3)))
    w = WeightScheme.uniform(4, 3)
    np.testing.assert_allclose(
        additive_center(np.log(P.p), w.row_weights, w.col_weights),
        log_interaction(P, w).tau, atol=1e-15,
    )


def test_additive_center_of_incidence_is_fanova_residual(rng):
    Z = (rng.uniform(size=(6, 5)) > 0.4).astype(float)
    Z[:, 0] = 1
    Z[0] = 1
    I, J = Z.shape
    P = P_of(Z)
    tau = additive_center(P.p, np.full(I, 1 / I), np.full(J, 1 / J))
    # p_ij = p_+j / I + p_i+ / J - 1/(IJ) + tau_ij
    main = P.c[None, :] / I + P.r[:, None] / J - 1 / (I * J)
    np.testing.assert_allclose(main + tau, P.p, atol=1e-16)


def test_multiplicative_center_marginal_density_gives_contrast(rng):
    P = P_of(rng.uniform(0, 4, size=(5, 4)) + 0.1)
    tau = multiplicative_center(density(P, P.r, P.c), P.r, P.c)
    np.testing.assert_allclose(tau, pearson_contrast(P).tau, atol=1e-13)
    # the additive centering gives the same contrast
    np.testing.assert_allclose(
        additive_center(density(P, P.r, P.c), P.r, P.c), pearson_contrast(P).tau, atol=1e-13
    )


def test_multiplicative_center_uniform_density_gives_covariance(rng):
    P = P_of(rng.uniform(0, 4, size=(5, 4)) + 0.1)
    ur, uc = np.full(5, 1 / 5), np.full(4, 1 / 4)
    tau = multiplicative_center(density(P, ur, uc), ur, uc)
    np.testing.assert_allclose(tau, covariance_residuals(P).tau, atol=1e-13)


def test_multiplicative_center_rank_one_is_zero(rng):
    Y = np.outer(rng.uniform(1, 2, 4), rng.uniform(1, 2, 3))
    tau = multiplicative_center(Y, rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(3)))
    assert np.abs(tau).max() < 1e-14


def test_multiplicative_center_zero_mean():
    with pytest.raises(ZeroGrandMean):
        multiplicative_center([[1.0, -1.0], [-1.0, 1.0]], [0.5, 0.5], [0.5, 0.5])


@pytest.mark.parametrize("seed", range(5))
def test_centering_rank_statements(seed):
    rng = np.random.default_rng(seed)
    I, J, r = 7, 6, 4
    Y = rng.uniform(0.5, 2, size=(I, r)) @ rng.uniform(0.5, 2, size=(r, J))
    mr, mc = rng.dirichlet(np.ones(I)), rng.dirichlet(np.ones(J))
    rank = np.linalg.matrix_rank
    assert rank(multiplicative_center(Y, mr, mc), tol=1e-10) == r - 1
    # additive centering projects out the constant vectors, so the rank drops
    # by one when one side of Y spans them and by two when both do
    A, B = rng.normal(size=(I, r - 2)), rng.normal(size=(J, r - 2))
    both = np.outer(rng.normal(size=I), np.ones(J)) + np.outer(np.ones(I), rng.normal(size=J)) + A @ B.T
    assert rank(both) == r
    assert rank(additive_center(both, mr, mc), tol=1e-10) == r - 2
    one_side = np.outer(np.ones(I), rng.normal(size=J)) + A @ B.T
    assert rank(additive_center(one_side, mr, mc), tol=1e-10) == rank(one_side) - 1
    # a generic matrix has neither constant vector in its span and keeps its rank
    assert rank(additive_center(Y, mr, mc), tol=1e-10) == r


def test_first_order_independent_is_zero(rng):
    wr, wc = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(3))
    P = P_of(np.outer(wr, wc))
    w = WeightScheme("custom", wr, wc)
    assert np.abs(first_order_approx(P, w)).max() < 1e-13


def test_first_order_uniform_form(rng):
    P = P_of(rng.uniform(1, 5, size=(4, 6)))
    I, J = P.shape
    expected = I * J * P.p + 1 - I * P.r[:, None] - J * P.c[None, :]
    np.testing.assert_allclose(first_order_approx(P, WeightScheme.uniform(I, J)), expected, atol=1e-14)


def test_first_order_error_shrinks_with_alpha(rng):
    # The linearization error is second order in alpha, so relative to
    # max|lambda(P**alpha)| = alpha * max|lambda(P)| it shrinks tenfold per
    # decade of alpha (the absolute gap shrinks a hundredfold).
    N = rng.integers(1, 100, size=(8, 5)).astype(float)
    I, J = N.shape
    w = WeightScheme.uniform(I, J)
    rel, gaps = [], []
    for alpha in (1e-3, 1e-4):
        Pa = P_of(power_transform(ContingencyTable(N), alpha).values)
        lam = log_interaction(Pa, w).tau
        gap = np.abs(first_order_approx(Pa, w) - lam).max()
        gaps.append(gap)
        rel.append(gap / np.abs(lam).max())
    assert 8 <= rel[0] / rel[1] <= 12
    assert 80 <= gaps[0] / gaps[1] <= 120


def test_first_order_is_additive_center_of_density(rng):
    P = P_of(rng.uniform(1, 5, size=(3, 4)))
    wr, wc = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(4))
    w = WeightScheme("custom", wr, wc)
    np.testing.assert_allclose(
        first_order_approx(P, w), additive_center(density(P, wr, wc), wr, wc), atol=1e-12
    )


def test_equivalence_chain_on_rank_one(rng):
    P = independent(rng, 5, 3)
    w = WeightScheme.uniform(5, 3)
    assert np.abs(covariance_residuals(P).tau).max() < 1e-13
    assert np.abs(pearson_contrast(P).tau).max() < 1e-13
    assert np.abs(log_interaction(P, w).tau).max() < 1e-13
    # and away from independence none of them vanish
    Q = P_of(P.p + np.diag([0.05, 0.0, 0.0, 0.0, 0.0])[:, :3])
    assert np.abs(covariance_residuals(Q).tau).max() > 1e-4
    assert np.abs(pearson_contrast(Q).tau).max() > 1e-4
    assert np.abs(log_interaction(Q, w).tau).max() > 1e-4


def test_geometric_mean_property(rng):
    P = independent(rng, 4, 6)
    w = make_weights("marginal", P)
    G = np.log(P.p)
    row_gm = np.exp(G @ w.col_weights)
    col_gm = np.exp(w.row_weights @ G)
    np.testing.assert_allclose(row_gm / row_gm.sum(), P.r, atol=1e-10)
    np.testing.assert_allclose(col_gm / col_gm.sum(), P.c, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (4, 5), elements=st.floats(0.01, 1e3)))
def test_all_indices_doubly_centered(N):
    P = P_of(N)
    I, J = P.shape
    u = WeightScheme.uniform(I, J)
    for t in (covariance_residuals(P), pearson_contrast(P), log_interaction(P, u),
              log_interaction(P, make_weights("marginal", P))):
        assert centering_defect(t.tau, t.row_metric, t.col_metric, t.scale) <= 1e-10
    for mr, mc in ((u.row_weights, u.col_weights), (P.r, P.c)):
        assert centering_defect(additive_center(P.p, mr, mc), mr, mc, P.p.max()) <= 1e-10
        assert centering_defect(multiplicative_center(P.p, mr, mc), mr, mc, 1.0) <= 1e-10
