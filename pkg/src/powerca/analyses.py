"""End-to-end analyses: CA, taxicab CA, log-ratio analysis, covariance
(interbattery) analysis, marginal-free CA, the closed forms for tables with
one zero column, and the small-power convergence sweep."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from . import decomp
from .config import DEFAULT, Tolerances
from .errors import BadZeroCount, NoConvergence, NonPositiveCell, ValidationError
from .interaction import (
    additive_center,
    covariance_residuals,
    first_order_approx,
    log_interaction,
    pearson_contrast,
)
from .tables import (
    CorrespondenceMatrix,
    Decomposition,
    Triplet,
    WeightScheme,
    as_table,
    make_weights,
    normalize,
)
from .transform import power_transform

DEFAULT_ALPHAS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)


def ca(N, k: Optional[int] = None, tol: Tolerances = DEFAULT) -> Decomposition:
    """Correspondence analysis; principal inertias are ``d.deltas**2``."""
    return decomp.weighted_svd(pearson_contrast(normalize(as_table(N))), k, tol)


def tca(N, k: Optional[int] = None, algorithm: str = "auto",
        tol: Tolerances = DEFAULT) -> Decomposition:
    """Taxicab correspondence analysis."""
    return decomp.taxicab_svd(pearson_contrast(normalize(as_table(N))), k, algorithm, tol)


def _weights(w, P):
    if isinstance(w, WeightScheme):
        if w.row_weights.shape != (P.shape[0],) or w.col_weights.shape != (P.shape[1],):
            raise ValidationError("weight vectors do not match the table shape")
        return w
    return make_weights(w, P)


def lra(
    N,
    w: Union[str, WeightScheme] = "uniform",
    method: str = "svd",
    k: Optional[int] = None,
    algorithm: str = "auto",
    tol: Tolerances = DEFAULT,
) -> Decomposition:
    """Weighted log-ratio analysis (``method="taxicab"`` gives TLRA).

    Requires strictly positive data. ``w`` is ``"uniform"``, ``"marginal"``
    or a :class:`WeightScheme`.
    """
    P = normalize(as_table(N))
    if np.any(P.p <= 0):
        i, j = np.argwhere(P.p <= 0)[0]
        raise NonPositiveCell(int(i), int(j))
    t = log_interaction(P, _weights(w, P))
    return decomp.factorize(t, method, k, algorithm, tol)


def incidence_triplet(Z) -> tuple:
    """Uniformly weighted log-ratio triplet of a 0/1 incidence matrix.

    Because ``log2(z + 1) = z`` on 0/1 data, the transformed table is Z
    itself; the interaction is the uniform additive double centering of
    ``P = Z / n``. Returns ``(P, triplet)``.
    """
    Z = as_table(Z)
    if not np.all((Z.values == 0) | (Z.values == 1)):
        raise ValidationError("incidence matrix must contain only 0 and 1")
    Y = np.log2(Z.values + 1.0)
    P = normalize(Z.with_values(Y))
    I, J = P.shape
    mr, mc = np.full(I, 1.0 / I), np.full(J, 1.0 / J)
    t = Triplet(
        additive_center(P.p, mr, mc), mr, mc, "additive_centered",
        P.row_labels, P.col_labels, scale=float(P.p.max()),
    )
    return P, t


def lra_incidence(Z, method: str = "svd", k=None, algorithm="auto",
                  tol: Tolerances = DEFAULT) -> Decomposition:
    _, t = incidence_triplet(Z)
    return decomp.factorize(t, method, k, algorithm, tol)


def covariance_analysis(N, k=None, method: str = "svd", algorithm="auto",
                        tol: Tolerances = DEFAULT) -> Decomposition:
    """Interbattery analysis of ``IJ (p_ij - p_i+ p_+j)`` with uniform metrics."""
    t = covariance_residuals(normalize(as_table(N)))
    return decomp.factorize(t, method, k, algorithm, tol)


@dataclass(frozen=True)
class BalancedTable:
    q: np.ndarray
    a: np.ndarray
    b: np.ndarray
    iterations: int
    residual: float


def _marginal_residual(Q):
    I, J = Q.shape
    return max(
        np.abs(Q.sum(axis=1) - 1.0 / I).max(),
        np.abs(Q.sum(axis=0) - 1.0 / J).max(),
    )


def balance_to_uniform(
    P: CorrespondenceMatrix,
    tol: float = DEFAULT.iteration,
    max_iter: int = DEFAULT.max_iter,
) -> BalancedTable:
    """Rescale rows and columns of a strictly positive P to uniform marginals.

    Alternates row scaling (row sums 1/I) and column scaling (column sums
    1/J) until the largest marginal deviation is at most ``tol``. The result
    is ``q_ij = a_i p_ij b_j``.
    """
    p = P.p
    if np.any(p <= 0):
        i, j = np.argwhere(p <= 0)[0]
        raise NonPositiveCell(int(i), int(j))
    I, J = p.shape
    a = np.ones(I)
    b = np.ones(J)
    Q = p.copy()
    residual = _marginal_residual(Q)
    for it in range(1, max_iter + 1):
        ra = (1.0 / I) / Q.sum(axis=1)
        a *= ra
        Q *= ra[:, None]
        cb = (1.0 / J) / Q.sum(axis=0)
        b *= cb
        Q *= cb[None, :]
        residual = _marginal_residual(Q)
        if residual <= tol:
            break
    else:
        raise NoConvergence(max_iter, residual)
    return BalancedTable(Q, a, b, it, float(residual))


def mfca_triplet(N, tol: Tolerances = DEFAULT) -> Triplet:
    """``IJ q_ij - 1`` of the balanced table, with uniform metrics."""
    N = as_table(N)
    P = normalize(N)
    B = balance_to_uniform(P, tol.iteration, tol.max_iter)
    I, J = P.shape
    return Triplet(
        I * J * B.q - 1.0,
        np.full(I, 1.0 / I),
        np.full(J, 1.0 / J),
        "pearson_contrast",
        N.row_labels,
        N.col_labels,
        scale=float(I * J * B.q.max()),
    )


def mfca(N, method: str = "svd", k=None, algorithm: str = "auto",
         tol: Tolerances = DEFAULT) -> Decomposition:
    """Marginal-free CA: CA (or TCA) of the table balanced to uniform
    marginals. Requires strictly positive data."""
    return decomp.factorize(mfca_triplet(N, tol), method, k, algorithm, tol)


def _check_zero_count(m, I, J):
    if J < 2 or not 1 <= m <= I - 1:
        raise BadZeroCount(f"need 1 <= m <= I-1 and J >= 2 (I={I}, J={J}, m={m})")


def zero_column_ca_inertia(m: int, I: int, J: int) -> float:
    """First CA inertia ``m / (IJ)`` of an indicator table whose m zeros lie
    in one column."""
    _check_zero_count(m, I, J)
    return m / (I * J)


def zero_column_tca_dispersion(m: int, I: int, J: int) -> float:
    """First taxicab dispersion ``4 m (J-1)(I-m) / (IJ - m)**2`` of the same
    table."""
    _check_zero_count(m, I, J)
    return 4.0 * m * (J - 1) * (I - m) / (I * J - m) ** 2


def two_by_two_rho2(P) -> float:
    """Squared correlation of a 2x2 probability table,
    ``(p11 p22 - p12 p21)**2 / (p1+ p2+ p+1 p+2)``."""
    if not isinstance(P, CorrespondenceMatrix):
        P = normalize(as_table(P))
    if P.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 table, got {P.shape}")
    p = P.p
    det = p[0, 0] * p[1, 1] - p[0, 1] * p[1, 0]
    return float(det**2 / (P.r.prod() * P.c.prod()))


@dataclass(frozen=True)
class ConvergenceRow:
    alpha: float
    max_err_lambda: float
    max_err_row_marginal: float
    max_err_col_marginal: float


def _positive(N):
    N = as_table(N)
    if np.any(N.values <= 0):
        i, j = np.argwhere(N.values <= 0)[0]
        raise NonPositiveCell(int(i), int(j))
    return N


def convergence_sweep(N, alphas: Iterable[float] = DEFAULT_ALPHAS) -> list:
    """Distance of CA of ``N**alpha`` from uniformly weighted LRA of N.

    For each alpha reports ``max|Delta(alpha)/alpha - lambda|`` and the
    largest deviations of the powered marginals from 1/I and 1/J.
    """
    N = _positive(N)
    P = normalize(N)
    I, J = P.shape
    lam = log_interaction(P, WeightScheme.uniform(I, J)).tau
    rows = []
    for alpha in alphas:
        if not 0 < alpha <= 1:
            raise ValidationError(f"alpha must lie in (0, 1], got {alpha!r}")
        Pa = normalize(power_transform(N, alpha))
        delta = pearson_contrast(Pa).tau
        rows.append(
            ConvergenceRow(
                alpha=float(alpha),
                max_err_lambda=float(np.abs(delta / alpha - lam).max()),
                max_err_row_marginal=float(np.abs(Pa.r - 1.0 / I).max()),
                max_err_col_marginal=float(np.abs(Pa.c - 1.0 / J).max()),
            )
        )
    return rows


def approximation_layers(N, alpha: float) -> dict:
    """Max-abs gaps between successive approximations linking the log
    interaction of ``N**alpha`` to its CA interaction.

    Layers, all with uniform weights: ``lambda(P**alpha)``, its
    linearization ``IJ p + 1 - I p_i+ - J p_+j``, ``IJ p - 1``, and the
    Pearson contrast of ``P**alpha``. The first layer equals
    ``alpha * lambda(P)`` exactly.
    """
    N = _positive(N)
    P = normalize(N)
    Pa = normalize(power_transform(N, alpha))
    I, J = P.shape
    w = WeightScheme.uniform(I, J)
    lam_a = log_interaction(Pa, w).tau
    linear = first_order_approx(Pa, w)
    shifted = I * J * Pa.p - 1.0
    contrast = pearson_contrast(Pa).tau
    return {
        "scaling": float(np.abs(lam_a - alpha * log_interaction(P, w).tau).max()),
        "linearization": float(np.abs(lam_a - linear).max()),
        "marginals": float(np.abs(linear - shifted).max()),
        "contrast": float(np.abs(shifted - contrast).max()),
    }
