"""Elementwise and structural preprocessing of contingency tables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import BadZeroCount, InvalidAlpha, NonPositiveEntry
from .tables import ContingencyTable, as_table


@dataclass(frozen=True)
class MergeReport:
    merged: ContingencyTable
    row_groups: tuple
    col_groups: tuple


@dataclass(frozen=True)
class ZeroStats:
    total_cells: int
    zero_cells: int
    zero_percent: float
    per_column_zeros: tuple


def power_transform(N, alpha: float) -> ContingencyTable:
    """Entrywise ``n_ij ** alpha``; zeros stay zero.

    ``alpha = 0`` is rejected, use :func:`indicator` for that limit.
    """
    N = as_table(N)
    if not alpha > 0:
        raise InvalidAlpha(f"alpha must be > 0, got {alpha!r}")
    v = N.values
    out = np.zeros_like(v)
    pos = v > 0
    out[pos] = np.power(v[pos], alpha)
    return N.with_values(out)


def indicator(N) -> ContingencyTable:
    N = as_table(N)
    return N.with_values((N.values > 0).astype(np.float64))


def log_transform(N) -> np.ndarray:
    """Natural log of every entry; every entry must be strictly positive."""
    v = N.values if isinstance(N, ContingencyTable) else np.asarray(N, dtype=np.float64)
    if np.any(v <= 0):
        i, j = np.argwhere(v <= 0)[0]
        raise NonPositiveEntry(int(i), int(j))
    return np.log(v)


def proportional(x, y, tol: float = DEFAULT.proportional) -> bool:
    """True if ``x`` and ``y`` are proportional.

    Uses the cross-product form ``|x_i y_j - x_j y_i|``, which needs no
    division. An all-zero line is only proportional to another all-zero line.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    sx, sy = np.abs(x).max(), np.abs(y).max()
    if sx == 0 or sy == 0:
        return sx == sy
    cross = np.outer(x, y)
    return bool(np.abs(cross - cross.T).max() <= tol * sx * sy)


def _group_lines(M, tol):
    groups = []
    for k in range(M.shape[0]):
        for g in groups:
            if proportional(M[g[0]], M[k], tol):
                g.append(k)
                break
        else:
            groups.append([k])
    return groups


def merge_proportional(
    N, rows: bool = True, cols: bool = True, tol: float = DEFAULT.proportional
) -> MergeReport:
    """Merge proportional rows, then proportional columns, until nothing
    changes.

    Each merged line is the sum of its group and is labeled by joining the
    group's labels with ``+`` (lowest original index first).
    """
    N = as_table(N)
    values = N.values.copy()
    row_groups = [[i] for i in range(values.shape[0])]
    col_groups = [[j] for j in range(values.shape[1])]
    changed = True
    while changed:
        changed = False
        if rows:
            grouping = _group_lines(values, tol)
            if len(grouping) < values.shape[0]:
                changed = True
                values = np.array([values[g].sum(axis=0) for g in grouping])
                row_groups = [sorted(sum((row_groups[k] for k in g), [])) for g in grouping]
        if cols:
            grouping = _group_lines(values.T, tol)
            if len(grouping) < values.shape[1]:
                changed = True
                values = np.array([values[:, g].sum(axis=1) for g in grouping]).T
                col_groups = [sorted(sum((col_groups[k] for k in g), [])) for g in grouping]

    def label(names, groups):
        return ["+".join(names[k] for k in g) for g in groups]

    if values.shape[0] < 2 or values.shape[1] < 2:
        # a table of rank one collapses to a single line; keep it as a
        # degenerate report rather than an invalid ContingencyTable
        merged = _DegenerateTable(values, label(N.row_labels, row_groups),
                                  label(N.col_labels, col_groups))
    else:
        merged = ContingencyTable(
            values, label(N.row_labels, row_groups), label(N.col_labels, col_groups)
        )
    return MergeReport(
        merged=merged,
        row_groups=tuple(tuple(g) for g in row_groups),
        col_groups=tuple(tuple(g) for g in col_groups),
    )


@dataclass(frozen=True)
class _DegenerateTable:
    values: np.ndarray
    row_labels: list
    col_labels: list

    @property
    def shape(self):
        return self.values.shape


def zero_stats(N) -> ZeroStats:
    v = N.values if hasattr(N, "values") else np.asarray(N, dtype=np.float64)
    zeros = v == 0
    total = int(v.size)
    m = int(zeros.sum())
    return ZeroStats(
        total_cells=total,
        zero_cells=m,
        zero_percent=100.0 * m / total,
        per_column_zeros=tuple(int(k) for k in zeros.sum(axis=0)),
    )


def one_zero_column_reduction(I: int, J: int, m: int) -> ContingencyTable:
    """2x2 table equivalent to an I x J indicator matrix whose m zeros all
    sit in one column.

    Row 1 pools the m rows holding a zero, row 2 the others; column 1 is the
    column holding the zeros, column 2 pools the J - 1 remaining columns.
    """
    if J < 2 or not 1 <= m <= I - 1:
        raise BadZeroCount(f"need 1 <= m <= I-1 and J >= 2 (I={I}, J={J}, m={m})")
    return ContingencyTable(
        [[0, m * (J - 1)], [I - m, (I - m) * (J - 1)]],
        ["zero rows", "other rows"],
        ["zero column", "other columns"],
    )


def planted_indicator(I: int, J: int, m: int, column: int = 0) -> ContingencyTable:
    """I x J table of ones with zeros in the first m rows of one column."""
    if J < 2 or not 1 <= m <= I - 1:
        raise BadZeroCount(f"need 1 <= m <= I-1 and J >= 2 (I={I}, J={J}, m={m})")
    Z = np.ones((I, J))
    Z[:m, column] = 0
    return ContingencyTable(Z)
