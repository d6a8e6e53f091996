"""Spectral-radius-preserving expansions of nonnegative square matrices.

Every expansion replaces one or more diagonal entries by square blocks while
keeping the relevant block sums equal to the replaced entries, which leaves
the spectral radius unchanged.  How a replaced value is distributed over a
block row (or column) is decided by a :class:`FillPolicy`.

Fill draws are consumed in a fixed, documented order per operation so that
seeded results reproduce across platforms from the seed alone:

* ``row_sum_expand``: the ``size`` rows of the new diagonal block first, then
  one split per remaining old row in increasing row order.
* ``column_sum_expand``: as ``row_sum_expand`` applied to the transpose.
* ``equitable_expand``: blocks in row-major order, rows within a block top to
  bottom; the split width is the column group's size.
* ``mixed_expand``: the columns of the upper-left block left to right, then a
  single flat split of the upper-right block (row-major cells), then the rows
  of the lower-right block.

The seeded generator is PCG64; a value v is split into t parts by drawing t-1
uniforms, sorting them, and taking the gaps of [0, u_(1), ..., u_(t-1), 1]
scaled by v.  Splits are quantized to the ulp(v) grid with the last part
taking the exact remainder, so the parts of a split sum to v exactly under
any summation order and quotients of expanded matrices recover the source
entries bitwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidSize,
    NotTwoByTwo,
    SequenceError,
    ToolkitError,
)
from .matrix import Matrix, Permutation, permute_symmetric, transpose

FILL_KINDS = ("uniform", "seeded-random", "explicit")

#: Absolute tolerance on explicit weight rows summing to one.
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class FillPolicy:
    """How expansion operations split a value over the cells of a block row.

    ``uniform`` splits v into t equal parts, ``seeded-random`` draws a
    reproducible point on the t-simplex (see the module docstring for the
    exact scheme), ``explicit`` consumes caller-supplied weight rows, each
    nonnegative and summing to one within 1e-12.
    """

    kind: str = "uniform"
    seed: int = 0
    weights: tuple = None

    def __post_init__(self):
        if self.kind not in FILL_KINDS:
            raise InvalidSize(f"unknown fill kind {self.kind!r}, expected one of {FILL_KINDS}")
        if self.kind == "explicit":
            if not self.weights:
                raise InvalidSize("explicit fill needs at least one weights row")
            rows = tuple(tuple(float(w) for w in row) for row in self.weights)
            for idx, row in enumerate(rows):
                if any(w < 0.0 for w in row):
                    raise InvalidSize(f"weights row {idx} has a negative entry")
                if abs(math.fsum(row) - 1.0) > WEIGHT_SUM_TOL:
                    raise InvalidSize(
                        f"weights row {idx} sums to {math.fsum(row)!r}, expected 1"
                    )
            object.__setattr__(self, "weights", rows)
        elif self.weights is not None:
            raise InvalidSize(f"{self.kind} fill does not take weights")


UNIFORM = FillPolicy()


def seeded_fill(seed: int) -> FillPolicy:
    return FillPolicy(kind="seeded-random", seed=seed)


def explicit_fill(weights: Iterable[Iterable[float]]) -> FillPolicy:
    return FillPolicy(kind="explicit", weights=tuple(tuple(row) for row in weights))


def _quantized_split(value: float, first_parts: list) -> np.ndarray:
    """Close a split: round parts to the ulp(value) grid, last part exact rest."""
    t = len(first_parts) + 1
    if value == 0.0:
        return np.zeros(t)
    grid = math.ulp(value)
    parts = [round(p / grid) * grid for p in first_parts]
    acc = 0.0
    for p in parts:
        acc += p
    last = value - acc
    if last < 0.0:
        # rounding overshoot is below t*ulp(value); absorb it in the largest part
        i = max(range(len(parts)), key=lambda j: parts[j])
        parts[i] += last
        last = 0.0
    parts.append(last)
    return np.array(parts)


class _Splitter:
    """Stateful split source; one instance per expansion call."""

    def __init__(self, policy: FillPolicy):
        self.policy = policy
        self._rng = None
        if policy.kind == "seeded-random":
            self._rng = np.random.Generator(np.random.PCG64(policy.seed))
        self._next_row = 0

    def split(self, value: float, parts: int) -> np.ndarray:
        if parts < 1:
            raise InvalidSize(f"cannot split into {parts} parts")
        kind = self.policy.kind
        if kind == "explicit":
            rows = self.policy.weights
            if self._next_row >= len(rows):
                raise InvalidSize(
                    f"explicit fill exhausted after {len(rows)} weight rows"
                )
            row = rows[self._next_row]
            self._next_row += 1
            if len(row) != parts:
                raise InvalidSize(
                    f"weights row {self._next_row - 1} has {len(row)} entries, "
                    f"needed {parts}"
                )
            first = [value * w for w in row[:-1]]
        elif kind == "seeded-random":
            # draw even for value 0 so the stream depends on shapes only
            cuts = np.sort(self._rng.random(parts - 1)) * value
            first = []
            prev = 0.0
            for c in cuts:
                first.append(float(c) - prev)
                prev = float(c)
        else:
            first = [value / parts] * (parts - 1)
        return _quantized_split(float(value), first)

    def finish(self) -> None:
        if self.policy.kind == "explicit" and self._next_row != len(self.policy.weights):
            raise InvalidSize(
                f"explicit fill has {len(self.policy.weights)} weight rows, "
                f"consumed {self._next_row}"
            )


@dataclass(frozen=True)
class ExpansionPlan:
    """Simultaneous expansion: index i grows into an s_i x s_i diagonal block.

    ``sizes`` has one entry per index of the source matrix (1 = untouched).
    The orientation is uniform; mixed orientations exist only for the 2x2
    case, see :func:`mixed_expand`.
    """

    sizes: tuple
    orientation: str = "row"
    fill: FillPolicy = UNIFORM

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise InvalidSize(f"sizes must be positive integers, got {self.sizes!r}")
        object.__setattr__(self, "sizes", sizes)
        if self.orientation not in ("row", "column"):
            raise InvalidSize(f"orientation must be 'row' or 'column', got {self.orientation!r}")

    @property
    def output_dimension(self) -> int:
        return sum(self.sizes)


def row_sum_expand(m: Matrix, index: int, size: int, fill: FillPolicy = UNIFORM) -> Matrix:
    """Expand diagonal entry ``index`` into a ``size`` x ``size`` block.

    The new diagonal block D has constant row sums equal to the old diagonal
    entry; the rows left and right of it replicate the old row exactly; the
    old entries above and below it are each split over the new columns so the
    row sums match the old column entries.
    """
    n = m.n
    if not 0 <= index < n:
        raise IndexOutOfRange(f"index {index} out of range for an {n}x{n} matrix")
    if size < 1:
        raise InvalidSize(f"expansion size must be >= 1, got {size}")
    others = [j for j in range(n) if j != index]
    pos = {j: (j if j < index else j + size - 1) for j in others}
    out_n = n - 1 + size
    out = np.zeros((out_n, out_n))
    for j in others:
        for j2 in others:
            out[pos[j], pos[j2]] = m.entries[j, j2]
    splitter = _Splitter(fill)
    diagonal = float(m.entries[index, index])
    for r in range(size):
        out[index + r, index : index + size] = splitter.split(diagonal, size)
        for j in others:
            # replicated row: every new row repeats the old one exactly
            out[index + r, pos[j]] = m.entries[index, j]
    for j in others:
        out[pos[j], index : index + size] = splitter.split(float(m.entries[j, index]), size)
    splitter.finish()
    return Matrix(out)


def column_sum_expand(m: Matrix, index: int, size: int, fill: FillPolicy = UNIFORM) -> Matrix:
    """Dual of :func:`row_sum_expand` with the block sum rules transposed."""
    return transpose(row_sum_expand(transpose(m), index, size, fill))


def equitable_expand(m: Matrix, plan: ExpansionPlan) -> Matrix:
    """Expand every index i into an s_i block; block (i, j) gets constant row
    sums equal to the source entry (i, j), making the induced partition
    equitable with quotient exactly ``m``."""
    if len(plan.sizes) != m.n:
        raise InvalidSize(f"plan has {len(plan.sizes)} sizes for an {m.n}x{m.n} matrix")
    if plan.orientation == "column":
        flipped = replace(plan, orientation="row")
        return transpose(equitable_expand(transpose(m), flipped))
    sizes = plan.sizes
    starts = np.concatenate(([0], np.cumsum(sizes))).astype(int)
    out = np.zeros((int(starts[-1]), int(starts[-1])))
    splitter = _Splitter(plan.fill)
    for i in range(m.n):
        for j in range(m.n):
            value = float(m.entries[i, j])
            for r in range(sizes[i]):
                out[starts[i] + r, starts[j] : starts[j + 1]] = splitter.split(value, sizes[j])
    splitter.finish()
    return Matrix(out)


def induced_partition(plan: ExpansionPlan):
    """Group labels of the expanded matrix, one group per source index."""
    from .matrix import IndexPartition

    labels = []
    for i, s in enumerate(plan.sizes):
        labels.extend([i] * s)
    return IndexPartition(labels)


def mixed_expand(m: Matrix, size_first: int, size_second: int, fill: FillPolicy = UNIFORM) -> Matrix:
    """Column expansion of the first diagonal entry and row expansion of the
    second, for a 2x2 source.

    The upper-left block gets constant column sums m[0][0], the lower-right
    block constant row sums m[1][1], the lower-left block repeats m[1][0] in
    every cell, and the upper-right block is any nonnegative block whose
    total entry sum is m[0][1].
    """
    if m.n != 2:
        raise NotTwoByTwo(f"mixed_expand needs a 2x2 matrix, got {m.n}x{m.n}")
    if size_first < 1 or size_second < 1:
        raise InvalidSize("expansion sizes must be >= 1")
    s1, s2 = size_first, size_second
    out = np.zeros((s1 + s2, s1 + s2))
    splitter = _Splitter(fill)
    for c in range(s1):
        out[0:s1, c] = splitter.split(float(m.entries[0, 0]), s1)
    out[0:s1, s1:] = splitter.split(float(m.entries[0, 1]), s1 * s2).reshape(s1, s2)
    out[s1:, 0:s1] = m.entries[1, 0]
    for r in range(s2):
        out[s1 + r, s1:] = splitter.split(float(m.entries[1, 1]), s2)
    splitter.finish()
    return Matrix(out)


@dataclass(frozen=True)
class TransposeStep:
    pass


@dataclass(frozen=True)
class PermuteStep:
    permutation: Permutation


@dataclass(frozen=True)
class RowSumExpandStep:
    index: int
    size: int
    fill: FillPolicy = UNIFORM


@dataclass(frozen=True)
class ColumnSumExpandStep:
    index: int
    size: int
    fill: FillPolicy = UNIFORM


@dataclass(frozen=True)
class EquitableExpandStep:
    sizes: tuple
    fill: FillPolicy = UNIFORM
    orientation: str = "row"


@dataclass(frozen=True)
class MixedExpandStep:
    size_first: int
    size_second: int
    fill: FillPolicy = UNIFORM


@dataclass(frozen=True)
class SequenceResult:
    matrix: Matrix
    dimensions: tuple = field(default=())


def _apply_step(m: Matrix, step) -> Matrix:
    if isinstance(step, TransposeStep):
        return transpose(m)
    if isinstance(step, PermuteStep):
        return permute_symmetric(m, step.permutation)
    if isinstance(step, RowSumExpandStep):
        return row_sum_expand(m, step.index, step.size, step.fill)
    if isinstance(step, ColumnSumExpandStep):
        return column_sum_expand(m, step.index, step.size, step.fill)
    if isinstance(step, EquitableExpandStep):
        return equitable_expand(m, ExpansionPlan(step.sizes, step.orientation, step.fill))
    if isinstance(step, MixedExpandStep):
        return mixed_expand(m, step.size_first, step.size_second, step.fill)
    raise InvalidSize(f"unknown sequence step {step!r}")


def apply_sequence(m: Matrix, steps: Iterable) -> SequenceResult:
    """Left-to-right composition of expansion steps.

    Returns the final matrix and the realized dimension trail (one entry per
    intermediate matrix, starting with the input).  The first failing step
    raises :class:`SequenceError` carrying the step index, chained to the
    original error.
    """
    current = m
    dims = [m.n]
    for idx, step in enumerate(steps):
        try:
            current = _apply_step(current, step)
        except ToolkitError as err:
            raise SequenceError(idx, err) from err
        dims.append(current.n)
    return SequenceResult(current, tuple(dims))
