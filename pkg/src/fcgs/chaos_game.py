"""Chaos game representation of DNA and k-mer frequency (FCGR) matrices.

The unit square carries A at (0,0), C at (0,1), G at (1,1), T at (1,0).
Iterating "move halfway toward the corner of the next base" from the
centre (0.5, 0.5) sends every k-word into its own 2^-k sub-square;
quantizing the final point defines the grid layout used here. Row 0 is
the top of the matrix, so words made of A and T land in the bottom rows
(visibly dominant for AT-rich genomes).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import (AmbiguousBase, IoError, NoValidWords, OrderMismatch,
                     OrderTooLarge, ParseError)
from .sequence_io import NucleotideSequence

VERTICES = {"A": (0.0, 0.0), "C": (0.0, 1.0), "G": (1.0, 1.0), "T": (1.0, 0.0)}
ORIGIN = (0.5, 0.5)

# Dense storage is 4^k float64 cells; k=12 is ~134 MB.
DEFAULT_MAX_ORDER = 12

_CODE_TABLE = np.full(256, 4, dtype=np.uint8)
for _i, _b in enumerate("ACGT"):
    _CODE_TABLE[ord(_b)] = _i

_WINDOW_CHUNK = 1 << 22


def _residues(seq: NucleotideSequence | str) -> str:
    return seq.residues if isinstance(seq, NucleotideSequence) else seq


def encode_residues(seq: NucleotideSequence | str) -> np.ndarray:
    """uint8 codes: A=0, C=1, G=2, T=3, N(or other)=4."""
    return _CODE_TABLE[np.frombuffer(_residues(seq).encode("ascii"), dtype=np.uint8)]


def cgr_step(previous: tuple[float, float], base: str) -> tuple[float, float]:
    """One iteration: halfway between the previous point and the base vertex."""
    try:
        vx, vy = VERTICES[base]
    except KeyError:
        raise AmbiguousBase(f"cannot place base {base!r} in the chaos game") from None
    px, py = previous
    return ((px + vx) / 2.0, (py + vy) / 2.0)


def cgr_map(seq: NucleotideSequence | str) -> np.ndarray:
    """Trajectory of chaos-game points, one per non-N residue, as an (n, 2) array."""
    from .errors import EmptyTrajectory

    x, y = ORIGIN
    points = []
    for base in _residues(seq):
        if base == "N":
            continue
        x, y = cgr_step((x, y), base)
        points.append((x, y))
    if not points:
        raise EmptyTrajectory("no unambiguous residues to map")
    return np.array(points, dtype=np.float64)


def cell_index(word: str) -> tuple[int, int]:
    """Grid cell (row, col) of a k-word, row 0 at the top.

    Equals the floor-quantization of the word's chaos-game point: letter i
    (1-based) contributes 2^(i-1) to the column when it is G or T and to
    the complemented row when it is C or G.
    """
    k = len(word)
    if k < 1:
        raise ValueError("word must have length >= 1")
    col = 0
    row_c = 0
    for i, base in enumerate(word):
        if base in "GT":
            col |= 1 << i
        if base in "CG":
            row_c |= 1 << i
        if base not in "ACGT":
            raise AmbiguousBase(f"word {word!r} contains ambiguous base {base!r}")
    return ((1 << k) - 1 - row_c, col)


def sliding_cell_indices(codes: np.ndarray, k: int) -> Iterator[tuple[int, np.ndarray, np.ndarray, np.ndarray]]:
    """Yield (offset, rows, cols, valid) for every width-k window, in chunks.

    `valid` is False wherever the window contains a code 4 (N).
    """
    total = codes.size - k + 1
    x_bit = ((codes == 2) | (codes == 3)).astype(np.int32)
    y_bit = ((codes == 1) | (codes == 2)).astype(np.int32)
    side = 1 << k
    for offset in range(0, total, _WINDOW_CHUNK):
        n = min(_WINDOW_CHUNK, total - offset)
        cols = np.zeros(n, dtype=np.int32)
        rows_c = np.zeros(n, dtype=np.int32)
        valid = np.ones(n, dtype=bool)
        for j in range(k):
            sl = slice(offset + j, offset + j + n)
            cols += x_bit[sl] << j
            rows_c += y_bit[sl] << j
            valid &= codes[sl] != 4
        yield offset, (side - 1) - rows_c, cols, valid


@dataclass(frozen=True)
class FcgrMatrix:
    """Order-k word-frequency grid over the chaos-game layout."""

    order: int
    cells: np.ndarray          # (2^k, 2^k) float64, row 0 = top
    counted_words: int
    source_id: str = ""

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("matrix order must be >= 1")
        cells = np.ascontiguousarray(np.asarray(self.cells, dtype=np.float64))
        side = 1 << self.order
        if cells.shape != (side, side):
            raise ValueError(f"expected {side}x{side} cells for order {self.order}, got {cells.shape}")
        if np.any(cells < 0.0) or np.any(cells > 1.0):
            raise ValueError("cell frequencies must lie in [0, 1]")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def frequency_sum(self) -> float:
        return float(self.cells.sum())

    def is_normalized(self, tol: float = 1e-9) -> bool:
        return abs(self.frequency_sum - 1.0) <= tol

    def entropy_bits(self) -> float:
        p = self.cells[self.cells > 0]
        return float(-(p * np.log2(p)).sum())


def compute_fcgr(seq: NucleotideSequence | str, k: int,
                 max_order: int = DEFAULT_MAX_ORDER) -> FcgrMatrix:
    """Count every N-free width-k window and normalize by the count.

    Counting accumulates chunk-local histograms merged by summation, so
    the result is independent of chunking.
    """
    if k < 1:
        raise ValueError("word length k must be >= 1")
    if k > max_order:
        raise OrderTooLarge(f"order {k} exceeds the configured cap of {max_order}")
    codes = encode_residues(seq)
    side = 1 << k
    counts = np.zeros(side * side, dtype=np.int64)
    counted = 0
    if codes.size >= k:
        for _, rows, cols, valid in sliding_cell_indices(codes, k):
            flat = rows.astype(np.int64) * side + cols
            counts += np.bincount(flat[valid], minlength=side * side)
            counted += int(valid.sum())
    if counted == 0:
        raise NoValidWords(f"no N-free window of length {k} in the sequence")
    freqs = (counts / counted).reshape(side, side)
    source = seq.id if isinstance(seq, NucleotideSequence) else ""
    return FcgrMatrix(k, freqs, counted, source)


def fcgr_lookup(matrix: FcgrMatrix, word: str) -> float:
    if len(word) != matrix.order:
        raise OrderMismatch(f"word length {len(word)} != matrix order {matrix.order}")
    row, col = cell_index(word)
    return float(matrix.cells[row, col])


_HEADER_RE = re.compile(r"^# fcgr order=(\d+) counted_words=(\d+) source_id=(.*)$")


def matrix_to_csv(matrix: FcgrMatrix) -> str:
    lines = [f"# fcgr order={matrix.order} counted_words={matrix.counted_words} source_id={matrix.source_id}"]
    for row in matrix.cells:
        lines.append(",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> FcgrMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty matrix file")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise ParseError("missing '# fcgr order=... counted_words=... source_id=...' header", 1)
    order, counted, source = int(m.group(1)), int(m.group(2)), m.group(3)
    side = 1 << order
    if len(lines) - 1 != side:
        raise ParseError(f"expected {side} data rows for order {order}, got {len(lines) - 1}")
    try:
        cells = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"bad matrix value: {exc}") from None
    if cells.shape != (side, side):
        raise ParseError(f"expected {side} columns per row")
    return FcgrMatrix(order, cells, counted, source)


def write_matrix_csv(matrix: FcgrMatrix, path: str | Path) -> None:
    try:
        Path(path).write_text(matrix_to_csv(matrix))
    except OSError as exc:
        raise IoError(f"cannot write matrix file {path}: {exc}") from exc


def read_matrix_csv(path: str | Path) -> FcgrMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read matrix file {path}: {exc}") from exc
    return matrix_from_csv(text)
