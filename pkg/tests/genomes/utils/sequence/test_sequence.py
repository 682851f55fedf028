import numpy as np
import pytest

from readlab.genomes.utils.sequence.alphabet import Nucleotide, decode, encode
from readlab.genomes.utils.sequence.distance import hellinger, hellinger_rows
from readlab.genomes.utils.sequence.fasta import (parse_fasta,
                                                  parse_labeled_fasta,
                                                  read_reads_csv, write_fasta,
                                                  write_labeled_fasta,
                                                  write_reads_csv)
from readlab.genomes.utils.sequence.records import (DnaSequence, LabelSet,
                                                    ReadDataset)
from readlab.genomes.utils.sequence.triplets import (TRIPLETS,
                                                     TripletDistribution,
                                                     triplet_distribution,
                                                     triplet_entropy,
                                                     triplet_matrix)
from readlab.utils.errors import (DataError, DegenerateFeatureError,
                                  SequenceError)
from tests.conftest import random_dataset


class TestFasta:
    def test_minimal_record(self):
        assert parse_fasta(">g1\nACGT\n") == [("g1", DnaSequence("ACGT"))]

    def test_lowercase_is_normalized(self):
        assert parse_fasta(">g1\nacgn\n") == [("g1", DnaSequence("ACGN"))]

    def test_illegal_character_names_line(self):
        with pytest.raises(SequenceError) as e:
            parse_fasta(">g1\nACXT\n")
        assert e.value.line == 2
        assert "'X'" in str(e.value)

    def test_wrapped_lines_and_header_id(self):
        records = parse_fasta(">chr1 some description\nACG\nTTA\n>chr2\nNN\n")
        assert records == [("chr1", DnaSequence("ACGTTA")), ("chr2", DnaSequence("NN"))]

    def test_sequence_before_header(self):
        with pytest.raises(SequenceError):
            parse_fasta("ACGT\n>g1\nACGT\n")

    def test_empty_header(self):
        with pytest.raises(SequenceError):
            parse_fasta(">\nACGT\n")

    def test_write_then_parse_wrapped(self):
        records = [("a", DnaSequence("ACGTACGTAC")), ("b", DnaSequence("NNA"))]
        assert parse_fasta(write_fasta(records, width=4)) == records

    def test_labeled_reads(self):
        d = random_dataset(6, 12)
        assert parse_labeled_fasta(write_labeled_fasta(d)) == d


class TestDnaSequence:
    def test_one_based_access(self):
        s = DnaSequence("ACGTN")
        assert s.at(1) == "A"
        assert s.at(5) == "N"
        assert str(s.slice(2, 4)) == "CGT"

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            DnaSequence("ACG").at(4)

    def test_codes_round_trip(self):
        s = DnaSequence("ACGTN")
        assert encode("ACGTN").tolist() == [0, 1, 2, 3, 4]
        assert decode(s.codes()) == "ACGTN"
        assert Nucleotide.N.code == 4


class TestTriplets:
    def test_single_symbol(self):
        d = triplet_distribution(DnaSequence("AAAAA"))
        assert d["AAA"] == 1.0
        assert d.probs.sum() == 1.0
        assert d.valid_triplet_count == 3

    def test_hand_enumerated_windows(self):
        d = triplet_distribution(DnaSequence("ACGTACGT"))
        assert d["ACG"] == pytest.approx(2 / 6)
        assert d["CGT"] == pytest.approx(2 / 6)
        assert d["GTA"] == pytest.approx(1 / 6)
        assert d["TAC"] == pytest.approx(1 / 6)
        assert d.valid_triplet_count == 6

    def test_n_windows_are_excluded(self):
        d = triplet_distribution(DnaSequence("ANAAA"))
        assert d["AAA"] == 1.0
        assert d.valid_triplet_count == 1

    def test_all_n_is_degenerate(self):
        d = triplet_distribution(DnaSequence("ANNNA"))
        assert d.degenerate
        assert not d.probs.any()

    def test_too_short(self):
        with pytest.raises(SequenceError):
            triplet_distribution(DnaSequence("AC"))

    def test_lexicographic_order(self):
        assert TRIPLETS[0] == "AAA"
        assert TRIPLETS[1] == "AAC"
        assert TRIPLETS[-1] == "TTT"
        assert len(TRIPLETS) == 64

    def test_sums_to_one_without_n(self):
        d = random_dataset(50, 101, seed=3)
        features, valid = triplet_matrix(d)
        np.testing.assert_allclose(features.sum(axis=1), 1.0, atol=1e-9)
        assert (valid == 99).all()


class TestEntropy:
    def test_uniform(self):
        d = TripletDistribution(np.full(64, 1 / 64), 64)
        assert triplet_entropy(d) == pytest.approx(6.0)

    def test_point_mass(self):
        assert triplet_entropy(triplet_distribution(DnaSequence("AAAA"))) == 0.0

    def test_one_bit(self):
        p = np.zeros(64)
        p[[0, 5]] = 0.5
        assert triplet_entropy(TripletDistribution(p, 2)) == pytest.approx(1.0)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(1)
        p = rng.dirichlet(np.ones(64))
        a = triplet_entropy(TripletDistribution(p, 100))
        b = triplet_entropy(TripletDistribution(rng.permutation(p), 100))
        assert a == pytest.approx(b, abs=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateFeatureError):
            triplet_entropy(TripletDistribution(np.zeros(64), 0))


class TestHellinger:
    def test_identity(self):
        p = np.array([0.2, 0.3, 0.5])
        assert hellinger(p, p) == 0.0

    def test_disjoint(self):
        assert hellinger([1, 0, 0], [0, 1, 0]) == pytest.approx(1.0)

    def test_formula_value(self):
        assert hellinger([1, 0, 0], [0.5, 0.5, 0]) == pytest.approx(0.541196, abs=1e-6)
        assert hellinger([1, 0, 0], [0.5, 0.5, 0]) == pytest.approx(
            np.sqrt(1 - np.sqrt(0.5)), abs=1e-12
        )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            hellinger([1, 0], [1, 0, 0])

    def test_not_normalized(self):
        with pytest.raises(ValueError):
            hellinger([0.5, 0.4], [0.5, 0.5])

    def test_random_pairs_match_affinity_form(self):
        rng = np.random.default_rng(2)
        P = rng.dirichlet(np.ones(64), size=1000)
        Q = rng.dirichlet(np.ones(64), size=1000)
        rows = hellinger_rows(P, Q)
        affinity = np.sqrt(np.maximum(1 - np.sqrt(P * Q).sum(axis=1), 0))
        np.testing.assert_allclose(rows, affinity, atol=1e-7)
        for p, q, h in zip(P[:50], Q[:50], rows[:50]):
            assert hellinger(p, q) == pytest.approx(h, abs=1e-12)
            assert hellinger(q, p) == pytest.approx(h, abs=1e-12)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            p, q, r = rng.dirichlet(np.ones(8), size=3)
            assert hellinger(p, r) <= hellinger(p, q) + hellinger(q, r) + 1e-12


class TestDataset:
    def test_label_set_rejects_duplicates(self):
        with pytest.raises(DataError):
            LabelSet(("A", "A"))

    def test_union_keeps_order(self):
        assert LabelSet(("a", "b")).union(LabelSet(("c", "a"))).labels == ("a", "b", "c")

    def test_csv_round_trip(self, tmp_path):
        d = random_dataset(20, 30, seed=5)
        path = write_reads_csv(d, str(tmp_path / "reads.csv"))
        with open(path) as f:
            assert f.readline().startswith("# readlab reads v1")
        assert read_reads_csv(path) == d

    def test_fingerprint_tracks_content(self):
        a = random_dataset(10, 20, seed=1)
        b = random_dataset(10, 20, seed=1)
        c = random_dataset(10, 20, seed=2)
        assert a.fingerprint() == b.fingerprint()
        assert a.fingerprint() != c.fingerprint()

    def test_misaligned(self):
        with pytest.raises(DataError):
            ReadDataset(
                ids=("a",),
                codes=np.zeros((2, 5), dtype=np.uint8),
                labels=np.zeros(2),
                label_set=LabelSet(("x",)),
            )
