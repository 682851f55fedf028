from itertools import product

import numpy as np
import pytest

from readlab.genomes.utils.boundary import (all_hamming_paths,
                                            boundary_report, boundary_status,
                                            boundary_table, bs_distribution,
                                            enumerate_neighbors,
                                            hamming_distance, hamming_path,
                                            locate_boundary_pair,
                                            neighbor_codes, neighbor_count,
                                            neighbor_similarity)
from readlab.genomes.utils.boundary.neighbors import neighbor_triplet_counts
from readlab.genomes.utils.boundary.paths import boundary_pair_on_path
from readlab.genomes.utils.boundary.status import neighbor_similarity_rows
from readlab.genomes.utils.classifier import ClassifierKind, fit
from readlab.genomes.utils.sequence.alphabet import SYMBOLS
from readlab.genomes.utils.sequence.records import DnaSequence, ReadDataset
from readlab.genomes.utils.sequence.triplets import (triplet_counts,
                                                     triplet_distribution)
from tests.conftest import random_dataset, stump_classifier


def brute_force(classifier, seq: DnaSequence):
    """Histogram of neighbor decisions, by classifying each neighbor on its own."""
    labels = classifier.label_set.labels
    histogram = np.zeros(len(labels), dtype=np.int64)
    dropped = 0
    for neighbor in enumerate_neighbors(seq):
        f = triplet_distribution(neighbor)
        if f.degenerate:
            dropped += 1
            continue
        histogram[labels.index(classifier.predict(f))] += 1
    decision = labels.index(classifier.predict(triplet_distribution(seq)))
    bs = int(np.count_nonzero(histogram)) - int(histogram[decision] > 0)
    return decision, histogram, bs, dropped


class TestNeighbors:
    def test_count(self):
        assert neighbor_count(101) == 404

    def test_single_base(self):
        assert [str(n) for n in enumerate_neighbors(DnaSequence("A"))] == ["C", "G", "T", "N"]

    @pytest.mark.parametrize("length", [1, 2, 3])
    def test_exactly_the_hamming_sphere(self, length):
        for bases in product(SYMBOLS, repeat=length):
            x = DnaSequence("".join(bases))
            found = [str(n) for n in enumerate_neighbors(x)]
            expected = {
                "".join(c)
                for c in product(SYMBOLS, repeat=length)
                if sum(a != b for a, b in zip(c, bases)) == 1
            }
            assert len(found) == neighbor_count(length)
            assert set(found) == expected

    def test_codes_match_enumeration(self):
        x = DnaSequence("ACNGTA")
        rows = ["".join(SYMBOLS[c] for c in row) for row in neighbor_codes(x.codes())]
        assert rows == [str(n) for n in enumerate_neighbors(x)]

    def test_incremental_counts_match_direct_counts(self):
        rng = np.random.default_rng(3)
        codes = rng.integers(0, 5, size=(4, 9), dtype=np.uint8)
        expected = np.vstack([triplet_counts(neighbor_codes(row)) for row in codes])
        np.testing.assert_array_equal(neighbor_triplet_counts(codes), expected)


@pytest.fixture(scope="module")
def bayes():
    return fit(ClassifierKind.BAYES, random_dataset(300, 5, seed=1))


class TestBoundaryStatus:
    def test_matches_brute_force_stump(self):
        clf = stump_classifier("ACG", 0.2)
        data = random_dataset(60, 5, seed=2)
        table = boundary_table(clf, data)
        for i, rec in enumerate(data.records()):
            decision, histogram, bs, dropped = brute_force(clf, rec.sequence)
            assert table.decisions[i] == decision
            assert table.histograms[i].tolist() == histogram.tolist()
            assert table.bs[i] == bs
            assert table.dropped[i] == dropped

    def test_matches_brute_force_bayes(self, bayes):
        data = random_dataset(40, 5, seed=3)
        table = boundary_table(bayes, data)
        expected = []
        for rec in data.records():
            decision, histogram, bs, _ = brute_force(bayes, rec.sequence)
            expected.append(bs)
            assert boundary_status(bayes, rec) == bs
        assert table.bs.tolist() == expected
        assert table.bs_distribution().tolist() == np.bincount(expected, minlength=3).tolist()

    def test_bs_is_bounded(self, bayes):
        table = boundary_table(bayes, random_dataset(100, 8, seed=4))
        assert table.bs.min() >= 0
        assert table.bs.max() <= 2
        assert table.bs_distribution().sum() == 100

    def test_zero_bs_iff_full_similarity(self, bayes):
        table = boundary_table(bayes, random_dataset(100, 8, seed=5))
        assert ((table.bs == 0) == (table.ns == 1.0)).all()
        assert (table.ns >= 0).all() and (table.ns <= 1).all()

    @pytest.mark.parametrize("chunk,workers", [(1, 1), (7, 1), (7, 3), (50, 2)])
    def test_blocks_and_workers_do_not_matter(self, bayes, chunk, workers):
        data = random_dataset(50, 8, seed=6)
        a = boundary_table(bayes, data)
        b = boundary_table(bayes, data, chunk=chunk, workers=workers)
        np.testing.assert_array_equal(a.histograms, b.histograms)
        np.testing.assert_array_equal(a.decisions, b.decisions)

    def test_degenerate_neighbors_are_dropped(self):
        report = boundary_report(stump_classifier("AAA", 0.5), DnaSequence("AAAAA"))
        assert report.dropped_neighbors == 1
        assert sum(report.neighbor_histogram) == 19

    def test_frame_columns(self, bayes):
        data = random_dataset(5, 8, seed=7)
        df = boundary_table(bayes, data).to_frame()
        assert list(df.columns) == ["id", "label", "decision", "bs", "ns", "n_Adeno", "n_COVID", "n_SARS"]
        assert (df[["n_Adeno", "n_COVID", "n_SARS"]].sum(axis=1) == 32).all()

    def test_module_level_distribution(self, bayes):
        data = random_dataset(30, 6, seed=8)
        assert bs_distribution(bayes, data).tolist() == boundary_table(bayes, data).bs_distribution().tolist()


class TestNeighborSimilarity:
    def test_half_agree(self):
        ns = neighbor_similarity_rows(np.array([0]), np.array([[2, 2, 0]]))
        assert ns[0] == pytest.approx(0.458804, abs=1e-6)

    def test_all_agree(self):
        assert neighbor_similarity_rows(np.array([1]), np.array([[0, 7, 0]]))[0] == 1.0

    def test_none_agree(self):
        assert neighbor_similarity_rows(np.array([0]), np.array([[0, 3, 5]]))[0] == pytest.approx(0.0)

    def test_single_read(self):
        clf = stump_classifier("AAA", 0.0)
        # every neighbor of CCCCC still lacks AAA
        assert neighbor_similarity(clf, DnaSequence("CCCCC")) == 1.0
        assert boundary_status(clf, DnaSequence("CCCCC")) == 0


class TestPaths:
    def test_distance(self):
        assert hamming_distance(DnaSequence("ACGT"), DnaSequence("ACGA")) == 1
        with pytest.raises(ValueError):
            hamming_distance(DnaSequence("ACG"), DnaSequence("ACGT"))

    def test_left_to_right_path(self):
        path = hamming_path(DnaSequence("CCCC"), DnaSequence("AACA"))
        assert [str(s) for s in path] == ["CCCC", "ACCC", "AACC", "AACA"]

    def test_order_must_permute_differences(self):
        with pytest.raises(ValueError):
            hamming_path(DnaSequence("CCCC"), DnaSequence("AACA"), order=(0, 2))

    def test_same_read_has_no_pair(self):
        clf = stump_classifier("AAA", 0.0)
        assert locate_boundary_pair(clf, DnaSequence("ACGTA"), DnaSequence("ACGTA")) is None

    def test_pair_found(self):
        clf = stump_classifier("AAA", 0.0)
        a, b = locate_boundary_pair(clf, DnaSequence("CCCCC"), DnaSequence("AAAAA"))
        assert (str(a), str(b)) == ("AACCC", "AAACC")
        assert boundary_status(clf, a) >= 1
        assert boundary_status(clf, b) >= 1

    def test_every_path_crosses(self):
        clf = stump_classifier("AAA", 0.0)
        r, r2 = DnaSequence("CCCCC"), DnaSequence("AAAAC")
        paths = list(all_hamming_paths(r, r2))
        assert len(paths) == 24
        for path in paths:
            assert str(path[0]) == str(r) and str(path[-1]) == str(r2)
            a, b = boundary_pair_on_path(clf, path)
            assert hamming_distance(a, b) == 1
            assert clf.predict(triplet_distribution(a)) != clf.predict(triplet_distribution(b))
        # the identity permutation comes first
        assert locate_boundary_pair(clf, r, r2) == boundary_pair_on_path(clf, paths[0])

    def test_exhaustive_limit(self):
        with pytest.raises(ValueError):
            list(all_hamming_paths(DnaSequence("CCCCCC"), DnaSequence("AAAAAA")))

    def test_undecided_path(self):
        clf = stump_classifier("AAA", 0.0)
        # neither end nor any step holds AAA
        assert locate_boundary_pair(clf, DnaSequence("CCCCC"), DnaSequence("CGCGC")) is None


def test_reads_from_dataset_records():
    data = ReadDataset.from_strings(["r1"], ["CCCCC"], ["X"])
    report = boundary_report(stump_classifier("AAA", 0.0), next(data.records()))
    assert report.id == "r1" and report.label == "X" and report.decision == "X"
