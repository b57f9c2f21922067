import itertools
import math

import numpy as np
import pytest

from fcgs.chaos_game import (FcgrMatrix, cell_index, cgr_map, cgr_step,
                             compute_fcgr, encode_residues, fcgr_lookup,
                             matrix_from_csv, matrix_to_csv,
                             sliding_cell_indices)
from fcgs.errors import (AmbiguousBase, EmptyTrajectory, NoValidWords,
                         OrderMismatch, OrderTooLarge, ParseError)
from fcgs.fcgs_encoder import word_stream
from fcgs.sequence_io import NucleotideSequence

from conftest import SEQ20


def quantized_cell(word):
    """Independent layout oracle: floor-quantize the chaos-game point."""
    x, y = cgr_map(word)[-1]
    side = 1 << len(word)
    return side - 1 - int(math.floor(side * y)), int(math.floor(side * x))


def test_cgr_step_from_centre():
    assert cgr_step((0.5, 0.5), "A") == (0.25, 0.25)


def test_cgr_step_iterated_by_hand():
    assert cgr_step((0.25, 0.25), "C") == (0.125, 0.625)


def test_cgr_step_corner_fixed_point():
    assert cgr_step((1.0, 1.0), "G") == (1.0, 1.0)


def test_cgr_step_rejects_n():
    with pytest.raises(AmbiguousBase):
        cgr_step((0.5, 0.5), "N")


def test_cgr_map_acggt():
    # Hand iteration of the halfway rule from (0.5, 0.5).
    expected = [
        (0.25, 0.25),
        (0.125, 0.625),
        (0.5625, 0.8125),
        (0.78125, 0.90625),
        (0.890625, 0.453125),
    ]
    points = cgr_map("ACGGT")
    assert points.shape == (5, 2)
    assert np.array_equal(points, np.array(expected))


def test_cgr_map_contraction_toward_a_vertex():
    points = cgr_map("A" * 30)
    assert np.all(np.diff(points[:, 0]) < 0)
    assert np.all(np.diff(points[:, 1]) < 0)
    assert points[-1, 0] == pytest.approx(0.0, abs=1e-9)


def test_cgr_map_interior():
    rng = np.random.default_rng(0)
    bases = np.array(list("ACGT"))
    for _ in range(25):
        seq = "".join(rng.choice(bases, size=rng.integers(1, 200)))
        points = cgr_map(seq)
        assert np.all((points > 0.0) & (points < 1.0))


def test_cgr_map_skips_n_and_rejects_all_n():
    assert cgr_map("NANA").shape == (2, 2)
    with pytest.raises(EmptyTrajectory):
        cgr_map("NNN")


def test_cgr_map_deterministic():
    a = cgr_map(SEQ20)
    b = cgr_map(SEQ20)
    assert a.tobytes() == b.tobytes()


def test_cell_index_monomers():
    assert cell_index("A") == (1, 0)
    assert cell_index("C") == (0, 0)
    assert cell_index("G") == (0, 1)
    assert cell_index("T") == (1, 1)


def test_cell_index_ga():
    assert cell_index("GA") == (2, 1)


def test_cell_index_rejects_n():
    with pytest.raises(AmbiguousBase):
        cell_index("GAN")


def test_cell_index_matches_quantization_up_to_k4():
    for k in range(1, 5):
        for letters in itertools.product("ACGT", repeat=k):
            word = "".join(letters)
            assert cell_index(word) == quantized_cell(word), word


def test_nested_quadrant_property():
    rng = np.random.default_rng(1)
    bases = "ACGT"
    for _ in range(200):
        k = int(rng.integers(1, 7))
        word = "".join(rng.choice(list(bases), size=k))
        row, col = cell_index(word)
        prefix = bases[rng.integers(0, 4)]
        row2, col2 = cell_index(prefix + word)
        assert row2 // 2 == row and col2 // 2 == col


def test_sliding_indices_match_cell_index():
    rng = np.random.default_rng(2)
    seq = "".join(rng.choice(list("ACGTN"), size=300, p=[0.24, 0.24, 0.24, 0.24, 0.04]))
    for k in (1, 2, 3, 5):
        words = word_stream(seq, k)
        got = []
        for offset, rows, cols, valid in sliding_cell_indices(encode_residues(seq), k):
            got.extend(zip(rows.tolist(), cols.tolist(), valid.tolist()))
        assert len(got) == len(words)
        for word, (row, col, ok) in zip(words, got):
            if "N" in word:
                assert not ok
            else:
                assert ok and (row, col) == cell_index(word)


def test_compute_fcgr_k1(seq20):
    m = compute_fcgr(seq20, 1)
    assert m.counted_words == 20
    assert fcgr_lookup(m, "A") == pytest.approx(6 / 20, abs=1e-12)
    assert fcgr_lookup(m, "C") == pytest.approx(6 / 20, abs=1e-12)
    assert fcgr_lookup(m, "G") == pytest.approx(3 / 20, abs=1e-12)
    assert fcgr_lookup(m, "T") == pytest.approx(5 / 20, abs=1e-12)


def test_compute_fcgr_k2_matches_dimer_tally(seq20):
    m = compute_fcgr(seq20, 2)
    assert m.counted_words == 19
    tally = {"AA": 3, "CC": 3, "CT": 3, "TA": 2, "AG": 2, "GC": 2,
             "GA": 1, "AT": 1, "TT": 1, "TC": 1}
    for word, count in tally.items():
        assert fcgr_lookup(m, word) == pytest.approx(count / 19, abs=1e-12)
    assert m.frequency_sum == pytest.approx(1.0, abs=1e-9)


def test_fcgr_matrix_invariants():
    rng = np.random.default_rng(3)
    seq = "".join(rng.choice(list("ACGT"), size=5000))
    for k in (1, 2, 3, 4):
        m = compute_fcgr(seq, k)
        assert m.is_normalized(1e-9)
        assert np.all(m.cells >= 0) and np.all(m.cells <= 1)


def test_compute_fcgr_concat_differs_only_at_junction():
    rng = np.random.default_rng(4)
    seq = "".join(rng.choice(list("ACGT"), size=2000))
    for k in (2, 3):
        single = compute_fcgr(seq, k)
        double = compute_fcgr(seq + seq, k)
        counts_1 = np.rint(single.cells * single.counted_words)
        counts_2 = np.rint(double.cells * double.counted_words)
        extra = counts_2 - 2 * counts_1
        assert extra.min() >= 0
        assert extra.sum() == k - 1   # only the junction windows are new


def test_compute_fcgr_skips_n_windows():
    m = compute_fcgr("ACGTNACGT", 2)
    # windows: AC CG GT TN NA AC CG GT -> 6 valid
    assert m.counted_words == 6


def test_compute_fcgr_errors():
    with pytest.raises(NoValidWords):
        compute_fcgr("NNNN", 2)
    with pytest.raises(NoValidWords):
        compute_fcgr("AC", 3)
    with pytest.raises(OrderTooLarge):
        compute_fcgr("ACGT" * 10, 13)
    with pytest.raises(ValueError):
        compute_fcgr("ACGT", 0)


def test_fcgr_lookup_reference_matrix(ref_k1, ref_k2):
    assert fcgr_lookup(ref_k1, "A") == 0.3226
    assert fcgr_lookup(ref_k2, "GA") == 0.0506


def test_fcgr_lookup_uniform():
    for k in (1, 2, 3):
        side = 1 << k
        uniform = FcgrMatrix(k, np.full((side, side), 4.0 ** -k), 1, "uniform")
        assert fcgr_lookup(uniform, "A" * k) == 4.0 ** -k


def test_fcgr_lookup_errors(ref_k2):
    with pytest.raises(OrderMismatch):
        fcgr_lookup(ref_k2, "GAT")
    with pytest.raises(AmbiguousBase):
        fcgr_lookup(ref_k2, "GN")


def test_matrix_csv_round_trip(seq20):
    m = compute_fcgr(seq20, 2)
    back = matrix_from_csv(matrix_to_csv(m))
    assert back.order == m.order
    assert back.counted_words == m.counted_words
    assert back.source_id == m.source_id
    assert back.cells.tobytes() == m.cells.tobytes()


def test_matrix_csv_bad_header():
    with pytest.raises(ParseError):
        matrix_from_csv("0.5,0.5\n0.0,0.0\n")
    with pytest.raises(ParseError):
        matrix_from_csv("# fcgr order=2 counted_words=1 source_id=x\n0.1,0.2\n")


def test_entropy_uniform():
    m = FcgrMatrix(2, np.full((4, 4), 1 / 16), 1, "u")
    assert m.entropy_bits() == pytest.approx(4.0, abs=1e-12)
