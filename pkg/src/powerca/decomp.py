"""Factorization of interaction triplets by weighted SVD and taxicab SVD."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import MismatchedSource, ValidationError, ZeroMatrix
from .tables import Axis, CorrespondenceMatrix, Decomposition, Triplet


def sign(x) -> np.ndarray:
    """Elementwise sign with ``sign(0) = +1``."""
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


def _max_axes(t: Triplet, k: Optional[int]) -> int:
    limit = min(t.shape) - 1
    if k is None:
        return limit
    if k < 0 or k > limit:
        raise ValidationError(f"k must be in [0, {limit}], got {k}")
    return k


def _residual(t: Triplet, axes) -> float:
    return float(np.abs(t.tau - _sum_axes(axes, t.shape)).max())


def _sum_axes(axes, shape) -> np.ndarray:
    out = np.zeros(shape)
    for a in axes:
        out += np.outer(a.f, a.g) / a.delta
    return out


def weighted_svd(
    t: Triplet, k: Optional[int] = None, tol: Tolerances = DEFAULT
) -> Decomposition:
    """SVD of ``tau`` under the diagonal metrics of ``t``.

    The SVD of ``D_r^1/2 tau D_c^1/2`` is rescaled so that the principal
    coordinates are orthogonal in the weighted inner products and
    ``delta**2 = sum_i f(i)**2 m_r(i)``. Dispersions below ``tol.rank``
    times the first one are dropped.
    """
    k = _max_axes(t, k)
    sr, sc = np.sqrt(t.row_metric), np.sqrt(t.col_metric)
    A = sr[:, None] * t.tau * sc[None, :]
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    total = float(np.sum(s**2))
    axes = []
    if s.size and s[0] > tol.zero * t.scale:
        for a in range(min(k, s.size)):
            if s[a] <= tol.rank * s[0]:
                break
            f = U[:, a] * s[a] / sr
            g = Vt[a] * s[a] / sc
            axes.append(Axis(f, g, float(s[a])).canonical())
    return Decomposition(tuple(axes), "svd", t, _residual(t, axes), total)


@dataclass(frozen=True)
class TaxicabAxis:
    u: np.ndarray
    v: np.ndarray
    a: np.ndarray
    b: np.ndarray
    delta: float


def _best_sign(M: np.ndarray, chunk: int = 1 << 16) -> np.ndarray:
    """Sign vector x (first entry +1) maximizing ``||M x||_1``; first
    maximizer in enumeration order wins ties."""
    d = M.shape[1]
    n = 2 ** (d - 1)
    best_val, best_idx = -np.inf, 0
    for start in range(0, n, chunk):
        k = np.arange(start, min(n, start + chunk))
        bits = (k[None, :] >> np.arange(d - 2, -1, -1)[:, None]) & 1
        X = np.vstack([np.ones((1, k.size)), 1.0 - 2.0 * bits])
        vals = np.abs(M @ X).sum(axis=0)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best_idx = vals[j], start + j
    bits = (best_idx >> np.arange(d - 2, -1, -1)) & 1
    return np.concatenate([[1.0], 1.0 - 2.0 * bits])


def _finish(S: np.ndarray, u: np.ndarray) -> TaxicabAxis:
    a = S @ u
    v = sign(a)
    b = S.T @ v
    return TaxicabAxis(u, v, a, b, float(np.abs(a).sum()))


def _exhaustive(S: np.ndarray) -> np.ndarray:
    I, J = S.shape
    if J <= I:
        return _best_sign(S)
    # enumerate over the shorter (row) side: max_v ||S'v||_1 = max_u ||Su||_1
    v = _best_sign(S.T)
    return sign(S.T @ v)


def _ascent_from(S: np.ndarray, u: np.ndarray, max_iter: int) -> np.ndarray:
    """Alternate ``v = sign(S u)``, ``u = sign(S' v)`` to a fixed point, then
    try single and pair sign flips of u; repeat while the objective
    increases."""
    best = np.abs(S @ u).sum()
    for _ in range(max_iter):
        v = sign(S @ u)
        u_new = sign(S.T @ v)
        val = np.abs(S @ u_new).sum()
        if val > best:
            u, best = u_new, val
            continue
        # flipping u_j changes S u by -2 u_j S[:, j]
        Su = S @ u
        flips = np.abs(Su[:, None] - 2.0 * S * u[None, :]).sum(axis=0)
        j = int(np.argmax(flips))
        if flips[j] > best:
            u = u.copy()
            u[j] = -u[j]
            best = flips[j]
            continue
        # pair flips
        D = 2.0 * S * u[None, :]
        pairs = np.abs(Su[:, None, None] - D[:, :, None] - D[:, None, :]).sum(axis=0)
        np.fill_diagonal(pairs, -np.inf)
        j, l = np.unravel_index(int(np.argmax(pairs)), pairs.shape)
        if pairs[j, l] <= best:
            break
        u = u.copy()
        u[[j, l]] = -u[[j, l]]
        best = pairs[j, l]
    return u


def _ascent(S: np.ndarray, max_iter: int) -> np.ndarray:
    # Starts: sign pattern of each row of S, u = sign(S'v) for v the sign
    # pattern of each column, and the signs of the right singular vectors.
    _, _, Vt = np.linalg.svd(S, full_matrices=False)
    starts = [sign(row) for row in S]
    starts += [sign(S.T @ sign(col)) for col in S.T]
    starts += [sign(vec) for vec in Vt]
    best_u, best_val = None, -np.inf
    for u0 in starts:
        u = _ascent_from(S, u0, max_iter)
        val = np.abs(S @ u).sum()
        if val > best_val:
            best_u, best_val = u, val
    return best_u


def taxicab_axis(
    S, algorithm: str = "auto", tol: Tolerances = DEFAULT
) -> TaxicabAxis:
    """First taxicab principal axis of a doubly centered matrix ``S``.

    Finds the sign vector u maximizing ``||S u||_1``, then sets
    ``a = S u``, ``v = sign(a)``, ``b = S' v`` and ``delta = ||a||_1``.
    ``algorithm`` is ``exhaustive`` (exact, 2**(d-1) candidates with
    d = min(I, J)), ``ascent`` (alternating sign updates with restarts) or
    ``auto`` (exhaustive when d <= tol.exhaustive_limit).
    """
    S = np.asarray(S, dtype=np.float64)
    if S.size == 0 or np.abs(S).max() <= 1e-300:
        raise ZeroMatrix("cannot extract a taxicab axis from a zero matrix")
    if algorithm == "auto":
        algorithm = "exhaustive" if min(S.shape) <= tol.exhaustive_limit else "ascent"
    if algorithm == "exhaustive":
        u = _exhaustive(S)
    elif algorithm == "ascent":
        max_iter = 10 * (sum(S.shape) + 10)
        if S.shape[1] <= S.shape[0]:
            u = _ascent(S, max_iter)
        else:
            u = sign(S.T @ _ascent(S.T, max_iter))
    else:
        raise ValidationError(f"unknown taxicab algorithm {algorithm!r}")
    # fix the global sign so that u starts with +1
    if u[0] < 0:
        u = -u
    return _finish(S, u)


def taxicab_svd(
    t: Triplet,
    k: Optional[int] = None,
    algorithm: str = "auto",
    tol: Tolerances = DEFAULT,
) -> Decomposition:
    """Taxicab SVD by successive L1 axis extraction and rank-one deflation.

    Works on ``S = D_r tau D_c``; each axis gives ``f = a / m_r`` and
    ``g = b / m_c`` and ``S`` is deflated by ``a b' / delta``.
    """
    k = _max_axes(t, k)
    S = t.cross_covariance()
    scale = np.abs(S).max()
    axes = []
    first = None
    while len(axes) < k and scale > 0:
        if np.abs(S).max() <= 1e-13 * scale:
            break
        ax = taxicab_axis(S, algorithm, tol)
        if first is None:
            if ax.delta <= tol.zero * t.scale:
                break
            first = ax.delta
        elif ax.delta <= tol.rank * first:
            break
        S = S - np.outer(ax.a, ax.b) / ax.delta
        axes.append(
            Axis(ax.a / t.row_metric, ax.b / t.col_metric, ax.delta, ax.u, ax.v).canonical()
        )
    total = float(sum(a.delta for a in axes))
    return Decomposition(tuple(axes), "taxicab", t, _residual(t, axes), total)


def factorize(t: Triplet, method: str = "svd", k=None, algorithm="auto",
              tol: Tolerances = DEFAULT) -> Decomposition:
    if method == "svd":
        return weighted_svd(t, k, tol)
    if method == "taxicab":
        return taxicab_svd(t, k, algorithm, tol)
    raise ValidationError(f"unknown method {method!r}")


def reconstruct(d: Decomposition, k: Optional[int] = None) -> np.ndarray:
    """Rank-k partial sum ``sum_a f_a(i) g_a(j) / delta_a``."""
    if k is None:
        k = len(d.axes)
    if not 0 <= k <= len(d.axes):
        raise ValidationError(f"k must be in [0, {len(d.axes)}]")
    return _sum_axes(d.axes[:k], d.source.shape)


def ca_reconstruct(P: CorrespondenceMatrix, d: Decomposition, k=None) -> np.ndarray:
    """``p_+j p_i+ (1 + rank-k interaction)``."""
    if d.index_kind != "pearson_contrast":
        raise MismatchedSource(f"needs a pearson_contrast decomposition, got {d.index_kind}")
    return np.outer(P.r, P.c) * (1.0 + reconstruct(d, k))


def lra_reconstruct(P: CorrespondenceMatrix, d: Decomposition, k=None) -> np.ndarray:
    """Additive main effects plus rank-k interaction:
    ``p_+j / I + p_i+ / J - 1 / (IJ) + interaction``."""
    if d.index_kind != "additive_centered":
        raise MismatchedSource(f"needs an additive_centered decomposition, got {d.index_kind}")
    I, J = P.shape
    return P.c[None, :] / I + P.r[:, None] / J - 1.0 / (I * J) + reconstruct(d, k)


def l1_operator_norm(S, algorithm: str = "exhaustive") -> float:
    """``max_u ||S u||_1`` over sign vectors u."""
    S = np.asarray(S, dtype=np.float64)
    if np.abs(S).max() == 0:
        return 0.0
    return taxicab_axis(S, algorithm).delta
