"""Dimension-reducing block contractions and same-size adjusted matrices.

A contraction collapses every block of a partition (diagonal blocks are
square by construction of the partition) to its minimum (down) or maximum
(up) row sum.  The matching adjusted matrix keeps the original dimension but
rewrites entries so every block has constant row sums at that same target;
it satisfies adjusted <= M (down) or M <= adjusted (up) componentwise and its
quotient under the partition is exactly the contraction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidSize
from .matrix import IndexPartition, Matrix, transpose

DIRECTIONS = ("down", "up")
ORIENTATIONS = ("row", "column")


@dataclass(frozen=True)
class ContractionSpec:
    partition: IndexPartition
    direction: str
    orientation: str = "row"

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise InvalidSize(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if self.orientation not in ORIENTATIONS:
            raise InvalidSize(
                f"orientation must be one of {ORIENTATIONS}, got {self.orientation!r}"
            )

    def flipped(self) -> "ContractionSpec":
        return ContractionSpec(self.partition, self.direction, "row")


def contract(m: Matrix, spec: ContractionSpec) -> Matrix:
    """The k x k matrix of per-block minimum (down) or maximum (up) row sums.

    Column orientation contracts the transpose by rows and transposes back.
    """
    if spec.orientation == "column":
        return transpose(contract(transpose(m), spec.flipped()))
    partition = spec.partition
    if partition.n != m.n:
        raise DimensionMismatch(
            f"partition of {partition.n} indices vs {m.n}x{m.n} matrix"
        )
    blocks = partition.blocks()
    reduce = np.min if spec.direction == "down" else np.max
    k = partition.k
    out = np.zeros((k, k))
    for i, rows in enumerate(blocks):
        sub = m.entries[list(rows)]
        for j, cols in enumerate(blocks):
            out[i, j] = reduce(sub[:, list(cols)].sum(axis=1))
    return Matrix(out)


def adjust(m: Matrix, spec: ContractionSpec) -> Matrix:
    """Same-dimension matrix with constant block row sums at the block target.

    Deterministic rule: downward surplus is removed from block entries
    scanning block columns right to left (clamped at zero); upward deficit is
    added entirely to the rightmost block column of the row.  Any matrix
    satisfying the ordering/equitability/quotient contracts is equivalent for
    bound purposes; this rule just pins one.

    For column orientation the same is done on the transpose, so the
    transpose of the result has constant block row sums.
    """
    if spec.orientation == "column":
        return transpose(adjust(transpose(m), spec.flipped()))
    partition = spec.partition
    if partition.n != m.n:
        raise DimensionMismatch(
            f"partition of {partition.n} indices vs {m.n}x{m.n} matrix"
        )
    out = np.array(m.entries, dtype=float, copy=True)
    blocks = partition.blocks()
    down = spec.direction == "down"
    for rows in blocks:
        for cols in blocks:
            col_list = list(cols)
            sums = out[np.ix_(list(rows), col_list)].sum(axis=1)
            target = sums.min() if down else sums.max()
            for r, row_sum in zip(rows, sums):
                if down:
                    surplus = float(row_sum - target)
                    for c in reversed(col_list):
                        if surplus <= 0.0:
                            break
                        take = min(float(out[r, c]), surplus)
                        out[r, c] -= take
                        surplus -= take
                else:
                    out[r, col_list[-1]] += target - row_sum
    return Matrix(out)
