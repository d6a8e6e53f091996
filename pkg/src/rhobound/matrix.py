"""Dense nonnegative square matrices, index partitions, and quotient structure.

Indices are 0-based throughout the API; the command line mirrors the 1-based
convention of the worked examples only when displaying results.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidSize,
    NegativeEntry,
    NonFinite,
    NonSquare,
    NotEquitable,
)

#: Absolute tolerance on row-sum deviation when deciding equitability.
DEFAULT_EQUITABLE_TOL = 1e-9


class Matrix:
    """Immutable dense square matrix with finite, nonnegative real entries.

    The wrapped ``entries`` array is read-only; all operations return new
    matrices, so instances can be shared freely across workers.
    """

    __slots__ = ("entries",)

    entries: np.ndarray

    def __init__(self, entries):
        arr = np.array(entries, dtype=float, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise NonSquare(f"expected a nonempty square array, got shape {arr.shape}")
        bad = ~np.isfinite(arr)
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            raise NonFinite(i, j, arr[i, j])
        neg = arr < 0.0
        if neg.any():
            i, j = map(int, np.argwhere(neg)[0])
            raise NegativeEntry(i, j, float(arr[i, j]))
        arr.setflags(write=False)
        self.entries = arr

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Read-only view-like copy of the submatrix on ``rows`` x ``cols``."""
        return self.entries[np.ix_(list(rows), list(cols))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.entries, other.entries))

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(f"{v:g}" for v in row) for row in self.entries)
        return f"Matrix({self.n}x{self.n}: {rows})"


def validate(entries) -> Matrix:
    """Validate a square array of finite nonnegative reals and wrap it."""
    return Matrix(entries)


class IndexPartition:
    """Assignment of the indices 0..n-1 to k groups.

    Stored canonically as a restricted growth string: the first occurrence of
    group j precedes the first occurrence of group j+1.  Constructors accept
    any labelling and canonicalize, so equal set partitions compare equal.
    """

    __slots__ = ("labels", "k")

    labels: tuple
    k: int

    def __init__(self, labels: Iterable[int]):
        raw = [int(x) for x in labels]
        if not raw:
            raise InvalidSize("a partition needs at least one index")
        if any(x < 0 for x in raw):
            raise InvalidSize("group labels must be nonnegative")
        relabel: dict[int, int] = {}
        canon = []
        for lab in raw:
            canon.append(relabel.setdefault(lab, len(relabel)))
        self.labels = tuple(canon)
        self.k = len(relabel)

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def singletons(cls, n: int) -> "IndexPartition":
        return cls(range(n))

    @classmethod
    def one_group(cls, n: int) -> "IndexPartition":
        if n < 1:
            raise InvalidSize("a partition needs at least one index")
        return cls([0] * n)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "IndexPartition":
        """Build from explicit groups, e.g. ``[[0, 2, 4], [1, 3]]``."""
        labels: dict[int, int] = {}
        for g, block in enumerate(blocks):
            for i in block:
                if i in labels:
                    raise InvalidSize(f"index {i} appears in two groups")
                labels[int(i)] = g
        if not labels or sorted(labels) != list(range(len(labels))):
            raise InvalidSize("groups must cover 0..n-1 exactly once")
        return cls(labels[i] for i in range(len(labels)))

    @classmethod
    def from_string(cls, text: str) -> "IndexPartition":
        """Parse a comma-separated restricted growth string like ``0,1,1,2``."""
        try:
            return cls(int(tok) for tok in text.replace(" ", "").split(",") if tok != "")
        except ValueError as err:
            raise InvalidSize(f"bad partition string {text!r}: {err}") from None

    def blocks(self) -> tuple:
        """Groups as tuples of indices, ordered by group label."""
        out: list[list[int]] = [[] for _ in range(self.k)]
        for i, lab in enumerate(self.labels):
            out[lab].append(i)
        return tuple(tuple(b) for b in out)

    def to_string(self) -> str:
        return ",".join(str(x) for x in self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexPartition):
            return NotImplemented
        return self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        groups = "".join("{" + ",".join(str(i) for i in b) + "}" for b in self.blocks())
        return f"IndexPartition({groups})"


class Permutation:
    """Bijection on 0..n-1; ``mapping[i]`` is the image of ``i``."""

    __slots__ = ("mapping",)

    mapping: tuple

    def __init__(self, mapping: Iterable[int]):
        m = tuple(int(x) for x in mapping)
        if sorted(m) != list(range(len(m))):
            raise InvalidSize(f"not a bijection on 0..{len(m) - 1}: {m}")
        self.mapping = m

    @property
    def n(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self`` after ``other``: (self.compose(other))(i) == self(other(i))."""
        if self.n != other.n:
            raise DimensionMismatch("cannot compose permutations of different sizes")
        return Permutation(self.mapping[other.mapping[i]] for i in range(self.n))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, image in enumerate(self.mapping):
            inv[image] = i
        return Permutation(inv)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(self.mapping)

    def __repr__(self) -> str:
        return f"Permutation({list(self.mapping)})"


def transpose(m: Matrix) -> Matrix:
    return Matrix(m.entries.T)


def permute_symmetric(m: Matrix, p: Permutation) -> Matrix:
    """Relabel rows and columns simultaneously: out[i][j] = m[p(i)][p(j)]."""
    if p.n != m.n:
        raise DimensionMismatch(f"permutation on {p.n} indices vs {m.n}x{m.n} matrix")
    idx = np.array(p.mapping)
    return Matrix(m.entries[np.ix_(idx, idx)])


def block_row_sums(m: Matrix, partition: IndexPartition) -> list:
    """Per-block lists of row sums: entry (i, j) holds one sum per row of group i."""
    if partition.n != m.n:
        raise DimensionMismatch(f"partition of {partition.n} indices vs {m.n}x{m.n} matrix")
    blocks = partition.blocks()
    return [
        [m.entries[np.ix_(rows, cols)].sum(axis=1) for cols in blocks]
        for rows in blocks
    ]


def is_equitable(m: Matrix, partition: IndexPartition, tol: float = DEFAULT_EQUITABLE_TOL) -> bool:
    """True iff within every block all row sums agree within ``tol`` (absolute)."""
    for row_of_blocks in block_row_sums(m, partition):
        for sums in row_of_blocks:
            if float(sums.max() - sums.min()) > tol:
                return False
    return True


def quotient(m: Matrix, partition: IndexPartition, tol: float = DEFAULT_EQUITABLE_TOL) -> Matrix:
    """The k x k matrix of shared block row sums of an equitable partition."""
    table = block_row_sums(m, partition)
    k = partition.k
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            sums = table[i][j]
            deviation = float(sums.max() - sums.min())
            if deviation > tol:
                raise NotEquitable(i, j, deviation)
            out[i, j] = sums[0]
    return Matrix(out)


def componentwise_le(a: Matrix, b: Matrix) -> bool:
    """Componentwise partial order: every entry of ``a`` <= the same entry of ``b``."""
    if a.n != b.n:
        raise DimensionMismatch(f"{a.n}x{a.n} vs {b.n}x{b.n}")
    return bool((a.entries <= b.entries).all())
