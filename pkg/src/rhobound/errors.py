"""Exception types shared by every module of the toolkit."""


class ToolkitError(Exception):
    """Base class for all rhobound errors."""


class NonSquare(ToolkitError):
    """The input array is not a nonempty square matrix."""


class NegativeEntry(ToolkitError):
    def __init__(self, i, j, value):
        super().__init__(f"negative entry {value!r} at ({i}, {j})")
        self.i = i
        self.j = j
        self.value = value


class NonFinite(ToolkitError):
    def __init__(self, i, j, value):
        super().__init__(f"non-finite entry {value!r} at ({i}, {j})")
        self.i = i
        self.j = j
        self.value = value


class DimensionMismatch(ToolkitError):
    """Operands do not have compatible dimensions."""


class NotEquitable(ToolkitError):
    """A block has non-constant row sums where constant sums are required."""

    def __init__(self, i, j, deviation):
        super().__init__(
            f"block ({i}, {j}) row sums differ by {deviation:.3e}"
        )
        self.i = i
        self.j = j
        self.deviation = deviation


class IndexOutOfRange(ToolkitError):
    """An index does not address a row/column of the matrix."""


class InvalidSize(ToolkitError):
    """A size, count, or shape argument is out of its allowed range."""


class NotTwoByTwo(ToolkitError):
    """The operation is only defined for 2x2 matrices."""


class PartitionSpaceTooLarge(ToolkitError):
    """Enumerating the requested set partitions would exceed the cap."""


class EnclosureDisagreement(ToolkitError):
    """The two spectral radius engines produced disjoint enclosures.

    This signals an implementation bug, never a property of the input.
    """


class MatrixParseError(ToolkitError):
    """A matrix file or text block could not be parsed."""


class SequenceError(ToolkitError):
    """A step of apply_sequence failed; carries the failing step index."""

    def __init__(self, step, cause):
        super().__init__(f"step {step} failed: {cause}")
        self.step = step
        self.cause = cause
