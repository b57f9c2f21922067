import numpy as np
import pytest

from fcgs.chaos_game import FcgrMatrix
from fcgs.sequence_io import NucleotideSequence

# 20 bp C. elegans chromosome V snippet used throughout; note the
# (TAAGCC)x2 tandem tail.
SEQ20 = "GAATTCCTAAGCCTAAGCCT"

# Published order-1 / order-2 word-frequency grids of the whole
# C. elegans chromosome V (printed to 4 decimals, so the order-2 grid
# sums to 0.9999 rather than 1).
REF_K1 = [
    [0.1774, 0.1769],
    [0.3226, 0.3231],
]
REF_K2 = [
    [0.0333, 0.0305, 0.0333, 0.0330],
    [0.0627, 0.0509, 0.0618, 0.0487],
    [0.0489, 0.0506, 0.0619, 0.0628],
    [0.1339, 0.0893, 0.0642, 0.1341],
]


@pytest.fixture
def seq20():
    return NucleotideSequence("S", SEQ20)


@pytest.fixture
def ref_k1():
    return FcgrMatrix(1, np.array(REF_K1), 0, "chrV")


@pytest.fixture
def ref_k2():
    return FcgrMatrix(2, np.array(REF_K2), 0, "chrV")
