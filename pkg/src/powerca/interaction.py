"""Interaction indices of a correspondence matrix and the two double
centering operators."""

from __future__ import annotations

import numpy as np

from .errors import NonPositiveCell, ZeroGrandMean
from .tables import CorrespondenceMatrix, Triplet, WeightScheme


def _weighted_means(Y, m_r, m_c):
    row = Y @ m_c
    col = m_r @ Y
    return row, col, float(m_r @ Y @ m_c)


def additive_center(Y, m_r, m_c) -> np.ndarray:
    """Row-plus-column double centering ``Y_ij - Y_i+ - Y_+j + Y_++``.

    Marginal means are weighted by ``m_c`` (rows) and ``m_r`` (columns).
    """
    Y = np.asarray(Y, dtype=np.float64)
    m_r = np.asarray(m_r, dtype=np.float64)
    m_c = np.asarray(m_c, dtype=np.float64)
    row, col, total = _weighted_means(Y, m_r, m_c)
    return Y - row[:, None] - col[None, :] + total


def multiplicative_center(Y, m_r, m_c, tol: float = 1e-300) -> np.ndarray:
    """Row-times-column double centering ``Y_ij - Y_i+ Y_+j / Y_++``."""
    Y = np.asarray(Y, dtype=np.float64)
    m_r = np.asarray(m_r, dtype=np.float64)
    m_c = np.asarray(m_c, dtype=np.float64)
    row, col, total = _weighted_means(Y, m_r, m_c)
    if abs(total) <= tol:
        raise ZeroGrandMean(f"weighted grand mean {total!r} is zero")
    return Y - np.outer(row, col) / total


def covariance_residuals(P: CorrespondenceMatrix) -> Triplet:
    """``IJ (p_ij - p_i+ p_+j)`` with uniform metrics.

    The unscaled residuals are ``covariance_residuals(P).tau / (I * J)``;
    :func:`sigma` returns them directly.
    """
    I, J = P.shape
    return Triplet(
        I * J * sigma(P),
        np.full(I, 1.0 / I),
        np.full(J, 1.0 / J),
        "covariance",
        P.row_labels,
        P.col_labels,
        scale=I * J * float(P.p.max()),
    )


def sigma(P: CorrespondenceMatrix) -> np.ndarray:
    return P.p - np.outer(P.r, P.c)


def pearson_contrast(P: CorrespondenceMatrix) -> Triplet:
    expected = np.outer(P.r, P.c)
    return Triplet(
        (P.p - expected) / expected,
        P.r,
        P.c,
        "pearson_contrast",
        P.row_labels,
        P.col_labels,
        scale=float((P.p / expected).max()),
    )


def log_probabilities(P: CorrespondenceMatrix) -> np.ndarray:
    if np.any(P.p <= 0):
        i, j = np.argwhere(P.p <= 0)[0]
        raise NonPositiveCell(int(i), int(j))
    return np.log(P.p)


def log_interaction(P: CorrespondenceMatrix, w: WeightScheme) -> Triplet:
    """Weighted log interaction, the additive double centering of log p.

    Needs every cell strictly positive.
    """
    G = log_probabilities(P)
    return Triplet(
        additive_center(G, w.row_weights, w.col_weights),
        w.row_weights,
        w.col_weights,
        "log_interaction",
        P.row_labels,
        P.col_labels,
        scale=float(np.abs(G).max()),
    )


def first_order_approx(P: CorrespondenceMatrix, w: WeightScheme) -> np.ndarray:
    """Linearization of the log interaction around the product of the weights:
    ``p_ij / (w_i w_j) - p_i+ / w_i - p_+j / w_j + 1``."""
    wr, wc = w.row_weights, w.col_weights
    return (
        P.p / np.outer(wr, wc)
        - (P.r / wr)[:, None]
        - (P.c / wc)[None, :]
        + 1.0
    )


def density(P: CorrespondenceMatrix, m_r, m_c) -> np.ndarray:
    """``p_ij / (m_r_i m_c_j)``, the density with respect to a product measure."""
    return P.p / np.outer(m_r, m_c)
