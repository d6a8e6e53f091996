"""Search over contraction space for certified spectral radius bounds.

Every downward contraction's spectral radius is a lower bound on rho(M) and
every upward contraction's an upper bound, so enumerating set partitions (by
group membership, which subsumes permutations) and both orientations (column
orientation subsumes transposes) yields the best certified bounds available
at a given search depth.  The reported lower bound uses each contraction's
enclosure lower end and the upper bound the enclosure upper end, keeping the
final report sound even for unconverged estimates.

Ties between equally good candidates break deterministically: shorter trails
first, then fewest blocks, then restricted-growth-string order, then row
before column, so results do not depend on evaluation order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .contraction import ContractionSpec, contract
from .errors import InvalidSize, PartitionSpaceTooLarge
from .matrix import IndexPartition, Matrix
from .spectral import DEFAULT_TOL, RhoEstimate, rho

#: Hard cap on how many partitions one enumeration may yield.
DEFAULT_PARTITION_CAP = 5_000_000

#: Dimension guard: full enumeration beyond this is rejected outright.
MAX_ENUMERATION_DIMENSION = 12

ORIENTATIONS = ("row", "column")
_ORIENT_ORDER = {"row": 0, "column": 1}

#: Power-iteration budget per contracted matrix inside a search; unconverged
#: estimates fall back to the Gelfand intersection and stay sound either way.
_SEARCH_RHO_MAX_ITERS = 4096

A_LE_B = "A_le_B"
INCONCLUSIVE = "inconclusive"


def count_partitions(n: int, max_blocks: int | None = None) -> int:
    """Number of set partitions of n elements with at most ``max_blocks`` groups.

    Stirling-number recurrence S(n, k) = k*S(n-1, k) + S(n-1, k-1); the full
    sum is the Bell number.
    """
    if n < 1:
        raise InvalidSize(f"need n >= 1, got {n}")
    stirling = [[0] * (n + 1) for _ in range(n + 1)]
    stirling[0][0] = 1
    for row in range(1, n + 1):
        for k in range(1, row + 1):
            stirling[row][k] = k * stirling[row - 1][k] + stirling[row - 1][k - 1]
    top = n if max_blocks is None else min(max_blocks, n)
    return sum(stirling[n][k] for k in range(1, top + 1))


def enumerate_partitions(
    n: int,
    max_blocks: int | None = None,
    *,
    cap: int = DEFAULT_PARTITION_CAP,
) -> Iterator[IndexPartition]:
    """All set partitions of 0..n-1 in restricted-growth-string lexicographic
    order, filtered to at most ``max_blocks`` groups.

    Raises ``PartitionSpaceTooLarge`` eagerly if n exceeds the dimension guard
    or the partition count exceeds ``cap``.
    """
    if n < 1:
        raise InvalidSize(f"need n >= 1, got {n}")
    if max_blocks is not None and max_blocks < 1:
        raise InvalidSize(f"max_blocks must be >= 1, got {max_blocks}")
    if n > MAX_ENUMERATION_DIMENSION:
        raise PartitionSpaceTooLarge(
            f"n={n} exceeds the enumeration guard of {MAX_ENUMERATION_DIMENSION}"
        )
    total = count_partitions(n, max_blocks)
    if total > cap:
        raise PartitionSpaceTooLarge(f"{total} partitions exceed the cap of {cap}")
    kmax = n if max_blocks is None else min(max_blocks, n)

    def walk(prefix: list, used: int) -> Iterator[IndexPartition]:
        if len(prefix) == n:
            yield IndexPartition(prefix)
            return
        for label in range(min(used + 1, kmax)):
            prefix.append(label)
            yield from walk(prefix, max(used, label + 1))
            prefix.pop()

    return walk([0], 1)


@dataclass(frozen=True)
class SearchOptions:
    orientations: tuple = ORIENTATIONS
    max_blocks: int | None = None
    depth: int = 1
    partition_cap: int = DEFAULT_PARTITION_CAP
    tol: float = 1e-8
    allow_deep: bool = False

    def __post_init__(self):
        orientations = tuple(self.orientations)
        if not orientations or any(o not in ORIENTATIONS for o in orientations):
            raise InvalidSize(
                f"orientations must be a nonempty subset of {ORIENTATIONS}, got {orientations!r}"
            )
        object.__setattr__(self, "orientations", orientations)
        if self.depth < 1:
            raise InvalidSize(f"depth must be >= 1, got {self.depth}")
        if self.depth >= 3 and not self.allow_deep:
            raise InvalidSize(
                f"depth {self.depth} is exponential; pass allow_deep=True to confirm"
            )
        if self.partition_cap < 1:
            raise InvalidSize(f"partition_cap must be positive, got {self.partition_cap}")
        if self.tol <= 0.0:
            raise InvalidSize(f"tol must be positive, got {self.tol}")


@dataclass(frozen=True)
class TrailStep:
    orientation: str
    partition: IndexPartition


@dataclass(frozen=True)
class ContractionTrail:
    """A chain of same-direction contractions with the terminal's estimate."""

    direction: str
    steps: tuple
    terminal: Matrix
    estimate: RhoEstimate


@dataclass(frozen=True)
class BoundsReport:
    lower: float
    upper: float
    lower_certificate: ContractionTrail
    upper_certificate: ContractionTrail
    options_echo: SearchOptions


@dataclass(frozen=True)
class ComparisonCertificate:
    conclusion: str
    a_trail: ContractionTrail
    b_trail: ContractionTrail


def _trail_key(steps: tuple) -> tuple:
    return (
        len(steps),
        tuple(
            (s.partition.k, s.partition.labels, _ORIENT_ORDER[s.orientation])
            for s in steps
        ),
    )


def _terminal_trails(
    m: Matrix, options: SearchOptions, direction: str, include_identity: bool
) -> list:
    """All contraction trails of length 1..depth, deterministic order.

    The all-singleton partition returns the matrix itself; it is admitted only
    when ``include_identity`` is set and only as a standalone step.
    """
    found: list[tuple] = []
    rho_cache: dict = {}

    def estimate_for(matrix: Matrix) -> RhoEstimate:
        key = matrix.entries.tobytes()
        est = rho_cache.get(key)
        if est is None:
            est = rho(matrix, DEFAULT_TOL, max_iters=_SEARCH_RHO_MAX_ITERS)
            rho_cache[key] = est
        return est

    def extend(current: Matrix, steps: tuple, depth_left: int) -> None:
        for orientation in ORIENTATIONS:
            if orientation not in options.orientations:
                continue
            for partition in enumerate_partitions(
                current.n, options.max_blocks, cap=options.partition_cap
            ):
                identity = partition.k == current.n
                if identity and (steps or not include_identity):
                    continue
                spec = ContractionSpec(partition, direction, orientation)
                terminal = contract(current, spec)
                new_steps = steps + (TrailStep(orientation, partition),)
                found.append((new_steps, terminal))
                if depth_left > 1 and terminal.n > 1 and not identity:
                    extend(terminal, new_steps, depth_left - 1)

    extend(m, (), options.depth)
    return [
        ContractionTrail(direction, steps, terminal, estimate_for(terminal))
        for steps, terminal in found
    ]


def _pick(trails: list, value_of, want_max: bool) -> ContractionTrail:
    best = None
    best_value = None
    best_key = None
    for trail in trails:
        value = value_of(trail)
        key = _trail_key(trail.steps)
        if best is None:
            best, best_value, best_key = trail, value, key
            continue
        better = value > best_value if want_max else value < best_value
        if better or (value == best_value and key < best_key):
            best, best_value, best_key = trail, value, key
    return best


def row_sum_bounds(m: Matrix) -> tuple:
    """(min row sum, max row sum); the one-group contraction in both directions."""
    sums = m.row_sums()
    return float(sums.min()), float(sums.max())


def _single_step_trail(m: Matrix, partition: IndexPartition, direction: str, orientation: str) -> ContractionTrail:
    terminal = contract(m, ContractionSpec(partition, direction, orientation))
    return ContractionTrail(
        direction,
        (TrailStep(orientation, partition),),
        terminal,
        rho(terminal, DEFAULT_TOL, max_iters=_SEARCH_RHO_MAX_ITERS),
    )


def bounds_search(m: Matrix, options: SearchOptions | None = None) -> BoundsReport:
    """Best certified bounds over all contraction trails allowed by the options.

    The identity (all-singleton) partition is excluded since it merely returns
    the matrix whose radius is being bounded.  The classical row-sum bounds
    are always injected as candidates, so a report is never worse than them
    even when the options exclude the row orientation.
    """
    options = options or SearchOptions()
    down = _terminal_trails(m, options, "down", include_identity=False)
    up = _terminal_trails(m, options, "up", include_identity=False)
    one_group = IndexPartition.one_group(m.n)
    down.append(_single_step_trail(m, one_group, "down", "row"))
    up.append(_single_step_trail(m, one_group, "up", "row"))
    best_down = _pick(down, lambda t: t.estimate.lower, want_max=True)
    best_up = _pick(up, lambda t: t.estimate.upper, want_max=False)
    return BoundsReport(
        lower=best_down.estimate.lower,
        upper=best_up.estimate.upper,
        lower_certificate=best_down,
        upper_certificate=best_up,
        options_echo=options,
    )


def two_by_two_bounds(m: Matrix, orientations: tuple = ORIENTATIONS) -> BoundsReport:
    """Best bounds over all 2x2 contractions, whose radii are closed-form.

    lower = max over downward bipartition contractions of
    tr/2 + sqrt((tr/2)^2 - det), upper = min over upward ones.
    """
    if m.n < 2:
        raise InvalidSize(f"two_by_two_bounds needs n >= 2, got n={m.n}")
    options = SearchOptions(orientations=tuple(orientations), max_blocks=2, depth=1)
    down: list[ContractionTrail] = []
    up: list[ContractionTrail] = []
    for orientation in ORIENTATIONS:
        if orientation not in options.orientations:
            continue
        for partition in enumerate_partitions(m.n, 2, cap=options.partition_cap):
            if partition.k != 2:
                continue
            down.append(_single_step_trail(m, partition, "down", orientation))
            up.append(_single_step_trail(m, partition, "up", orientation))
    best_down = _pick(down, lambda t: t.estimate.lower, want_max=True)
    best_up = _pick(up, lambda t: t.estimate.upper, want_max=False)
    return BoundsReport(
        lower=best_down.estimate.lower,
        upper=best_up.estimate.upper,
        lower_certificate=best_down,
        upper_certificate=best_up,
        options_echo=options,
    )


def compare(a: Matrix, b: Matrix, options: SearchOptions | None = None) -> ComparisonCertificate:
    """Certify rho(A) <= rho(B) via an upward trail on A and a downward on B.

    The identity partition is admitted on both sides (a matrix is trivially a
    contraction of itself), so compare(M, M) concludes reflexively.  The
    method never disproves an ordering: failure to certify is inconclusive.
    """
    options = options or SearchOptions()
    ups = _terminal_trails(a, options, "up", include_identity=True)
    downs = _terminal_trails(b, options, "down", include_identity=True)
    best_up = _pick(ups, lambda t: t.estimate.upper, want_max=False)
    best_down = _pick(downs, lambda t: t.estimate.lower, want_max=True)
    certified = best_up.estimate.upper <= best_down.estimate.lower + options.tol
    return ComparisonCertificate(
        conclusion=A_LE_B if certified else INCONCLUSIVE,
        a_trail=best_up,
        b_trail=best_down,
    )


def replay_trail(m: Matrix, trail: ContractionTrail) -> RhoEstimate:
    """Re-run a certificate's contraction chain from scratch and re-estimate.

    Verifiers compare the result (and the re-derived terminal) against the
    certificate's recorded values.
    """
    current = m
    for step in trail.steps:
        current = contract(current, ContractionSpec(step.partition, trail.direction, step.orientation))
    if current != trail.terminal:
        raise InvalidSize("trail terminal does not match the recorded matrix")
    return rho(current, DEFAULT_TOL, max_iters=_SEARCH_RHO_MAX_ITERS)
