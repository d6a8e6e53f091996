import itertools
import math

import numpy as np
import pytest

from rhobound import (
    ContractionSpec,
    IndexPartition,
    InvalidSize,
    Matrix,
    PartitionSpaceTooLarge,
    SearchOptions,
    bounds_search,
    compare,
    contract,
    count_partitions,
    enumerate_partitions,
    replay_trail,
    rho,
    row_sum_bounds,
    two_by_two_bounds,
)
from rhobound.reference import (
    BOUNDS_3X3,
    BOUNDS_3X3_COLUMN_2X2,
    BOUNDS_3X3_ROW_2X2,
    BOUNDS_5X5,
    BOUNDS_5X5_BEST_PARTITION,
    BOUNDS_5X5_ROW_2X2,
    COMPARE_A,
    COMPARE_B,
)

from helpers import eig_rho, random_matrix

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597]


class TestEnumeratePartitions:
    def test_n3_exact_order(self):
        got = [p.labels for p in enumerate_partitions(3)]
        assert got == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2)]

    @pytest.mark.parametrize("n", range(1, 8))
    def test_counts_match_bell(self, n):
        partitions = list(enumerate_partitions(n))
        assert len(partitions) == BELL[n] == count_partitions(n)
        assert len(set(partitions)) == len(partitions)

    def test_brute_force_oracle(self):
        # independent count: distinct canonical forms of all label vectors
        for n in range(1, 6):
            brute = {IndexPartition(labels).labels for labels in itertools.product(range(n), repeat=n)}
            assert {p.labels for p in enumerate_partitions(n)} == brute

    def test_bipartition_count(self):
        bipartitions = [p for p in enumerate_partitions(5, max_blocks=2) if p.k == 2]
        assert len(bipartitions) == 15  # Stirling S(5, 2)
        assert count_partitions(5, 2) == 16  # plus the one-group partition

    def test_max_blocks_filters(self):
        assert all(p.k <= 3 for p in enumerate_partitions(6, max_blocks=3))

    def test_dimension_guard(self):
        with pytest.raises(PartitionSpaceTooLarge):
            enumerate_partitions(13)

    def test_cap(self):
        with pytest.raises(PartitionSpaceTooLarge):
            enumerate_partitions(8, cap=1000)
        assert len(list(enumerate_partitions(8, cap=BELL[8]))) == BELL[8]

    def test_lexicographic_order(self):
        labels = [p.labels for p in enumerate_partitions(5)]
        assert labels == sorted(labels)


class TestRowSumBounds:
    def test_worked_3x3(self):
        assert row_sum_bounds(Matrix(BOUNDS_3X3)) == (6.0, 9.0)

    def test_worked_5x5(self):
        assert row_sum_bounds(Matrix(BOUNDS_5X5)) == (9.0, 15.0)

    def test_identity(self):
        assert row_sum_bounds(Matrix(np.eye(4))) == (1.0, 1.0)

    def test_equals_one_group_contractions(self):
        rng = np.random.default_rng(3)
        m = random_matrix(rng)
        one = IndexPartition.one_group(m.n)
        down = contract(m, ContractionSpec(one, "down")).entries[0, 0]
        up = contract(m, ContractionSpec(one, "up")).entries[0, 0]
        assert row_sum_bounds(m) == (down, up)


class TestTwoByTwoBounds:
    def test_worked_3x3_rows(self):
        report = two_by_two_bounds(Matrix(BOUNDS_3X3), ("row",))
        assert report.lower == pytest.approx(BOUNDS_3X3_ROW_2X2[0], abs=1e-9)
        assert report.upper == pytest.approx(BOUNDS_3X3_ROW_2X2[1], abs=1e-9)

    def test_worked_3x3_columns(self):
        report = two_by_two_bounds(Matrix(BOUNDS_3X3), ("column",))
        assert report.lower == pytest.approx(BOUNDS_3X3_COLUMN_2X2[0], abs=1e-9)
        assert report.upper == pytest.approx(BOUNDS_3X3_COLUMN_2X2[1], abs=1e-9)

    def test_worked_5x5_rows_with_certificate(self):
        report = two_by_two_bounds(Matrix(BOUNDS_5X5), ("row",))
        assert report.lower == pytest.approx(BOUNDS_5X5_ROW_2X2[0], abs=1e-9)
        assert report.upper == pytest.approx(BOUNDS_5X5_ROW_2X2[1], abs=1e-9)
        best = IndexPartition(BOUNDS_5X5_BEST_PARTITION)
        assert report.lower_certificate.steps[0].partition == best
        assert report.upper_certificate.steps[0].partition == best

    def test_n2_is_exact(self):
        m = Matrix([[5, 7], [2, 4]])
        report = two_by_two_bounds(m)
        assert report.lower == report.upper == rho(m).value

    def test_rejects_n1(self):
        with pytest.raises(InvalidSize):
            two_by_two_bounds(Matrix([[1.0]]))

    def test_consistent_with_capped_search(self):
        rng = np.random.default_rng(5)
        for _ in range(15):
            m = random_matrix(rng, min_n=3, max_n=5)
            fine = two_by_two_bounds(m)
            capped = bounds_search(m, SearchOptions(max_blocks=2))
            # the capped search sees the same k=2 candidates plus k=1 floors,
            # so it can only match or beat the pure 2x2 report
            assert capped.lower >= fine.lower - 1e-12
            assert capped.upper <= fine.upper + 1e-12
            if capped.lower_certificate.steps[0].partition.k == 2:
                assert capped.lower == fine.lower
                assert capped.lower_certificate == fine.lower_certificate
            if capped.upper_certificate.steps[0].partition.k == 2:
                assert capped.upper == fine.upper
                assert capped.upper_certificate == fine.upper_certificate


class TestBoundsSearch:
    def test_worked_5x5_row_depth1(self):
        m = Matrix(BOUNDS_5X5)
        true = eig_rho(m)
        assert true == pytest.approx(10.995, abs=0.01)
        # restricted to bipartitions the worked values appear ...
        capped = bounds_search(m, SearchOptions(orientations=("row",), max_blocks=2))
        assert capped.lower == pytest.approx(4 + math.sqrt(33), abs=1e-9)
        assert capped.upper == pytest.approx((9 + math.sqrt(221)) / 2, abs=1e-9)
        # ... and the exhaustive search can only tighten them
        report = bounds_search(m, SearchOptions(orientations=("row",)))
        assert capped.lower - 1e-9 <= report.lower
        assert report.upper <= capped.upper + 1e-9
        assert report.lower - 1e-9 <= true <= report.upper + 1e-9

    def test_scalar_matrix_bounds_are_exact(self):
        report = bounds_search(Matrix([[3.0]]))
        assert report.lower == report.upper == 3.0

    def test_one_group_only_equals_row_sums(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            m = random_matrix(rng)
            report = bounds_search(m, SearchOptions(orientations=("row",), max_blocks=1))
            assert (report.lower, report.upper) == row_sum_bounds(m)

    def test_dominates_row_sums_even_column_only(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            m = random_matrix(rng)
            report = bounds_search(m, SearchOptions(orientations=("column",)))
            low, high = row_sum_bounds(m)
            assert report.lower >= low - 1e-12
            assert report.upper <= high + 1e-12

    def test_depth_two_never_worse(self):
        rng = np.random.default_rng(11)
        for _ in range(12):
            m = random_matrix(rng, max_n=4)
            shallow = bounds_search(m, SearchOptions(depth=1))
            deep = bounds_search(m, SearchOptions(depth=2))
            assert deep.lower >= shallow.lower - 1e-8
            assert deep.upper <= shallow.upper + 1e-8

    def test_tie_break_prefers_fewest_blocks(self):
        # every partition of the all-ones matrix gives the same radius
        report = bounds_search(Matrix(np.ones((3, 3))))
        assert report.lower == report.upper == 3.0
        assert report.lower_certificate.steps[0].partition == IndexPartition.one_group(3)
        assert report.lower_certificate.steps[0].orientation == "row"
        assert report.upper_certificate.steps[0].partition == IndexPartition.one_group(3)

    def test_depth_three_needs_flag(self):
        with pytest.raises(InvalidSize):
            SearchOptions(depth=3)
        SearchOptions(depth=3, allow_deep=True)

    def test_options_validation(self):
        with pytest.raises(InvalidSize):
            SearchOptions(depth=0)
        with pytest.raises(InvalidSize):
            SearchOptions(orientations=())
        with pytest.raises(InvalidSize):
            SearchOptions(orientations=("diagonal",))
        with pytest.raises(InvalidSize):
            SearchOptions(tol=0.0)

    def test_partition_space_guard_propagates(self):
        rng = np.random.default_rng(13)
        m = Matrix(rng.random((13, 13)))
        with pytest.raises(PartitionSpaceTooLarge):
            bounds_search(m)

    def test_certificates_replay(self):
        rng = np.random.default_rng(17)
        for _ in range(8):
            m = random_matrix(rng, max_n=5)
            report = bounds_search(m)
            for trail in (report.lower_certificate, report.upper_certificate):
                replayed = replay_trail(m, trail)
                assert replayed.value == trail.estimate.value
                assert replayed.lower == trail.estimate.lower
                assert replayed.upper == trail.estimate.upper

    def test_deterministic_reports(self):
        rng = np.random.default_rng(19)
        m = random_matrix(rng, n=5)
        first = bounds_search(m)
        second = bounds_search(m)
        assert first == second


class TestCompare:
    def test_worked_example_with_printed_certificates(self):
        a, b = Matrix(COMPARE_A), Matrix(COMPARE_B)
        cert = compare(a, b, SearchOptions(orientations=("row",), max_blocks=2))
        assert cert.conclusion == "A_le_B"
        assert cert.a_trail.steps[0].partition == IndexPartition([0, 1, 1, 0])
        assert cert.a_trail.terminal == Matrix([[5, 2], [1, 4]])
        assert cert.a_trail.estimate.value == 6.0
        assert cert.b_trail.steps[0].partition == IndexPartition([0, 0, 1])
        assert cert.b_trail.terminal == Matrix([[3, 2], [2, 5]])
        assert cert.b_trail.estimate.value == pytest.approx(4 + math.sqrt(5), abs=1e-12)

    def test_worked_example_default_options(self):
        assert compare(Matrix(COMPARE_A), Matrix(COMPARE_B)).conclusion == "A_le_B"

    def test_reflexive_via_identity_partition(self):
        rng = np.random.default_rng(23)
        for _ in range(6):
            m = random_matrix(rng, max_n=5, zero_fraction=0.0)
            cert = compare(m, m)
            assert cert.conclusion == "A_le_B"

    def test_scalar_inconclusive(self):
        cert = compare(Matrix([[2.0]]), Matrix([[1.0]]))
        assert cert.conclusion == "inconclusive"

    def test_never_certifies_a_false_ordering(self):
        rng = np.random.default_rng(29)
        certified = 0
        for _ in range(40):
            a = random_matrix(rng, max_n=5)
            b = random_matrix(rng, max_n=5)
            cert = compare(a, b)
            if cert.conclusion == "A_le_B":
                certified += 1
                assert eig_rho(a) <= eig_rho(b) + 2e-8
        assert certified > 0  # the test would be vacuous otherwise

    def test_compare_trails_replay(self):
        a, b = Matrix(COMPARE_A), Matrix(COMPARE_B)
        cert = compare(a, b, SearchOptions(orientations=("row",), max_blocks=2))
        assert replay_trail(a, cert.a_trail).value == cert.a_trail.estimate.value
        assert replay_trail(b, cert.b_trail).value == cert.b_trail.estimate.value
