"""Core data types: contingency tables, correspondence matrices, weights,
interaction triplets and their factorizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT
from .errors import (
    CenteringError,
    NegativeEntry,
    NonPositiveWeight,
    ValidationError,
    ZeroMarginal,
)

INDEX_KINDS = (
    "covariance",
    "pearson_contrast",
    "log_interaction",
    "additive_centered",
    "multiplicative_centered",
)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def _labels(labels, n, prefix):
    if labels is None:
        return tuple(f"{prefix}{k + 1}" for k in range(n))
    labels = tuple(str(s) for s in labels)
    if len(labels) != n:
        raise ValidationError(f"expected {n} labels, got {len(labels)}")
    return labels


@dataclass(frozen=True)
class ContingencyTable:
    """A labeled nonnegative I x J table of counts or amounts.

    Row labels default to ``R1..RI`` and column labels to ``C1..CJ``.
    """

    values: np.ndarray
    row_labels: tuple = None
    col_labels: tuple = None

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValidationError("a contingency table must be two-dimensional")
        if v.shape[0] < 2 or v.shape[1] < 2:
            raise ValidationError(f"table must be at least 2x2, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("table contains non-finite values")
        if np.any(v < 0):
            i, j = np.argwhere(v < 0)[0]
            raise NegativeEntry(int(i), int(j))
        if not np.any(v > 0):
            raise ValidationError("table has no positive entry")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "row_labels", _labels(self.row_labels, v.shape[0], "R"))
        object.__setattr__(self, "col_labels", _labels(self.col_labels, v.shape[1], "C"))

    @property
    def shape(self):
        return self.values.shape

    def with_values(self, values) -> "ContingencyTable":
        return ContingencyTable(values, self.row_labels, self.col_labels)

    def drop_empty(self) -> "ContingencyTable":
        """Remove all-zero rows and columns."""
        keep_r = self.values.sum(axis=1) > 0
        keep_c = self.values.sum(axis=0) > 0
        return ContingencyTable(
            self.values[np.ix_(keep_r, keep_c)],
            [s for s, k in zip(self.row_labels, keep_r) if k],
            [s for s, k in zip(self.col_labels, keep_c) if k],
        )


@dataclass(frozen=True)
class CorrespondenceMatrix:
    """Probability table ``p = N / n`` with row marginals ``r`` and column
    marginals ``c``."""

    p: np.ndarray
    r: np.ndarray
    c: np.ndarray
    n: float
    row_labels: tuple = None
    col_labels: tuple = None

    @property
    def shape(self):
        return self.p.shape

    @property
    def row_metric(self) -> np.ndarray:
        return self.r

    @property
    def col_metric(self) -> np.ndarray:
        return self.c


def normalize(table: ContingencyTable) -> CorrespondenceMatrix:
    """Divide a table by its grand total.

    Raises ZeroMarginal if any row or column sums to zero, since the
    marginal metrics would not be positive definite.
    """
    v = table.values
    for axis, name in ((1, "row"), (0, "column")):
        sums = v.sum(axis=axis)
        if np.any(sums <= 0):
            raise ZeroMarginal(int(np.argmax(sums <= 0)), name)
    n = float(v.sum())
    p = v / n
    return CorrespondenceMatrix(
        p=_frozen(p),
        r=_frozen(p.sum(axis=1)),
        c=_frozen(p.sum(axis=0)),
        n=n,
        row_labels=table.row_labels,
        col_labels=table.col_labels,
    )


def correspondence_from_probabilities(p, row_labels=None, col_labels=None):
    """Wrap an already normalized probability matrix."""
    p = np.asarray(p, dtype=np.float64)
    return normalize(ContingencyTable(p, row_labels, col_labels))


@dataclass(frozen=True)
class WeightScheme:
    kind: str
    row_weights: np.ndarray
    col_weights: np.ndarray

    def __post_init__(self):
        if self.kind not in ("marginal", "uniform", "custom"):
            raise ValidationError(f"unknown weight kind {self.kind!r}")
        for name in ("row_weights", "col_weights"):
            w = np.array(getattr(self, name), dtype=np.float64)
            if w.ndim != 1 or np.any(~np.isfinite(w)) or np.any(w <= 0):
                raise NonPositiveWeight(f"{name} must be finite and strictly positive")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValidationError(f"{name} must sum to 1 (got {w.sum()!r})")
            w.setflags(write=False)
            object.__setattr__(self, name, w)

    @classmethod
    def uniform(cls, I: int, J: int) -> "WeightScheme":
        return cls("uniform", np.full(I, 1.0 / I), np.full(J, 1.0 / J))


def make_weights(
    kind: str,
    P: CorrespondenceMatrix,
    custom: Optional[tuple] = None,
) -> WeightScheme:
    """Build row and column probability weights for ``P``.

    ``custom`` is a pair ``(row_weights, col_weights)``; either entry may be
    None to fall back to uniform weights on that side. Custom weights are
    rescaled to sum to one.
    """
    I, J = P.shape
    if kind == "uniform":
        return WeightScheme.uniform(I, J)
    if kind == "marginal":
        return WeightScheme("marginal", P.r, P.c)
    if kind != "custom":
        raise ValidationError(f"unknown weight kind {kind!r}")
    if custom is None:
        raise ValidationError("custom weights require explicit vectors")
    rows, cols = custom
    out = []
    for w, size, name in ((rows, I, "row"), (cols, J, "column")):
        if w is None:
            out.append(np.full(size, 1.0 / size))
            continue
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (size,):
            raise ValidationError(f"{name} weights need length {size}")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise NonPositiveWeight(f"{name} weights must be strictly positive")
        out.append(w / w.sum())
    return WeightScheme("custom", out[0], out[1])


def centering_defect(tau, row_metric, col_metric, floor: float = 0.0) -> float:
    """Largest weighted row/column sum of ``tau``, relative to
    ``max(max|tau|, floor)``."""
    tau = np.asarray(tau)
    S = row_metric[:, None] * tau * col_metric[None, :]
    scale = max(np.abs(tau).max(), floor)
    if scale == 0:
        return 0.0
    defect = max(np.abs(S.sum(axis=0)).max(), np.abs(S.sum(axis=1)).max())
    return float(defect / scale)


@dataclass(frozen=True)
class Triplet:
    """Interaction matrix ``tau`` with its row and column metrics.

    Construction checks that ``tau`` is doubly centered under the metrics.
    Pass ``check=False`` to skip the check for approximately centered input
    (the check can also be run later with :func:`centering_defect`).
    """

    tau: np.ndarray
    row_metric: np.ndarray
    col_metric: np.ndarray
    index_kind: str
    row_labels: tuple = None
    col_labels: tuple = None
    # magnitude of the data tau was centered from; defaults to max|tau|
    scale: Optional[float] = None
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        tau = _frozen(self.tau)
        if tau.ndim != 2:
            raise ValidationError("tau must be a matrix")
        mr, mc = _frozen(self.row_metric), _frozen(self.col_metric)
        if mr.shape != (tau.shape[0],) or mc.shape != (tau.shape[1],):
            raise ValidationError("metric lengths do not match tau")
        if np.any(mr <= 0) or np.any(mc <= 0):
            raise NonPositiveWeight("metrics must be strictly positive")
        if self.index_kind not in INDEX_KINDS:
            raise ValidationError(f"unknown index kind {self.index_kind!r}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "row_metric", mr)
        object.__setattr__(self, "col_metric", mc)
        object.__setattr__(self, "row_labels", _labels(self.row_labels, tau.shape[0], "R"))
        object.__setattr__(self, "col_labels", _labels(self.col_labels, tau.shape[1], "C"))
        if self.scale is None:
            object.__setattr__(self, "scale", float(np.abs(tau).max()))
        if self.check:
            # rounding in tau is proportional to the input magnitude, not
            # to tau itself, which can be pure noise near independence
            defect = centering_defect(tau, mr, mc, self.scale)
            if defect > DEFAULT.centering:
                raise CenteringError(
                    f"tau is not doubly centered (relative defect {defect:.3e})"
                )

    @property
    def shape(self):
        return self.tau.shape

    def cross_covariance(self) -> np.ndarray:
        """``S_ij = m^r_i m^c_j tau_ij``."""
        return self.row_metric[:, None] * self.tau * self.col_metric[None, :]


@dataclass(frozen=True)
class Axis:
    """One principal dimension.

    ``f`` and ``g`` are row and column principal coordinates and ``delta``
    the dispersion. Taxicab axes also carry the optimal sign vectors ``u``
    (columns) and ``v`` (rows).
    """

    f: np.ndarray
    g: np.ndarray
    delta: float
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None

    def flipped(self) -> "Axis":
        neg = lambda x: None if x is None else -x
        return Axis(-self.f, -self.g, self.delta, neg(self.u), neg(self.v))

    def canonical(self) -> "Axis":
        """Flip so the largest-magnitude entry of ``f`` is positive."""
        k = int(np.argmax(np.abs(self.f)))
        return self.flipped() if self.f[k] < 0 else self


@dataclass(frozen=True)
class Decomposition:
    axes: tuple
    method: str
    source: Triplet
    residual_norm: float
    total: float = 0.0

    @property
    def index_kind(self) -> str:
        return self.source.index_kind

    @property
    def deltas(self) -> np.ndarray:
        return np.array([a.delta for a in self.axes])

    @property
    def inertias(self) -> np.ndarray:
        return self.deltas**2

    @property
    def row_coordinates(self) -> np.ndarray:
        I = self.source.shape[0]
        return np.column_stack([a.f for a in self.axes]) if self.axes else np.zeros((I, 0))

    @property
    def col_coordinates(self) -> np.ndarray:
        J = self.source.shape[1]
        return np.column_stack([a.g for a in self.axes]) if self.axes else np.zeros((J, 0))

    def percentages(self) -> np.ndarray:
        """Share of each axis in percent.

        SVD axes report ``delta**2`` over the total inertia of ``tau``;
        taxicab axes report ``delta`` over the sum of extracted dispersions.
        """
        if not self.axes:
            return np.zeros(0)
        if self.method == "svd":
            return 100.0 * self.inertias / self.total
        return 100.0 * self.deltas / self.deltas.sum()

    def __len__(self):
        return len(self.axes)


def as_table(values: Sequence, row_labels=None, col_labels=None) -> ContingencyTable:
    if isinstance(values, ContingencyTable):
        return values
    return ContingencyTable(values, row_labels, col_labels)
