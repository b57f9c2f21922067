"""Frequency chaos game signal: map each sliding k-word to its FCGR frequency.

The signal has one sample per window start, L - n + 1 in total; windows
containing N emit a sentinel 0 so the sample index stays aligned to
genome coordinates.
"""
from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chaos_game import FcgrMatrix, encode_residues, sliding_cell_indices
from .errors import IoError, ParseError, SequenceTooShort
from .sequence_io import NucleotideSequence

logger = logging.getLogger(__name__)

_MAGIC = b"FCGSSIG1"
_HEADER = struct.Struct("<8sIQQ4x")   # magic, order n, start coordinate, length; 32 bytes


@dataclass(frozen=True)
class FcgsSignal:
    """1-D frequency signal; sample i sits at genomic bp start_coordinate + i."""

    values: np.ndarray
    order: int
    source_id: str = ""
    start_coordinate: int = 1
    matrix_id: str = ""
    n_mask: np.ndarray = field(default=None, repr=False)  # True where the window held an N

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        mask = self.n_mask
        if mask is None:
            mask = np.zeros(values.size, dtype=bool)
        mask = np.ascontiguousarray(np.asarray(mask, dtype=bool))
        if mask.size != values.size:
            raise ValueError("n_mask length must match values length")
        mask.setflags(write=False)
        object.__setattr__(self, "n_mask", mask)

    def __len__(self) -> int:
        return self.values.size

    @property
    def coordinates(self) -> np.ndarray:
        return self.start_coordinate + np.arange(self.values.size, dtype=np.int64)


def word_stream(seq: NucleotideSequence | str, n: int) -> list[str]:
    """All overlapping n-words at stride 1, in sequence order."""
    res = seq.residues if isinstance(seq, NucleotideSequence) else seq
    if n < 1:
        raise ValueError("word length must be >= 1")
    if n > len(res):
        raise SequenceTooShort(f"word length {n} exceeds sequence length {len(res)}")
    return [res[i:i + n] for i in range(len(res) - n + 1)]


def encode(seq: NucleotideSequence | str, matrix: FcgrMatrix,
           start_coordinate: int = 1) -> FcgsSignal:
    """Per-position frequency lookup of the width-n window starting there."""
    res = seq.residues if isinstance(seq, NucleotideSequence) else seq
    n = matrix.order
    if n > len(res):
        raise SequenceTooShort(f"matrix order {n} exceeds sequence length {len(res)}")
    codes = encode_residues(res)
    total = len(res) - n + 1
    values = np.zeros(total, dtype=np.float64)
    n_mask = np.zeros(total, dtype=bool)
    for offset, rows, cols, valid in sliding_cell_indices(codes, n):
        chunk = slice(offset, offset + valid.size)
        vals = np.zeros(valid.size, dtype=np.float64)
        vals[valid] = matrix.cells[rows[valid], cols[valid]]
        values[chunk] = vals
        n_mask[chunk] = ~valid
    if n_mask.any():
        logger.info("encode: %d of %d windows contained N; emitted sentinel 0",
                    int(n_mask.sum()), total)
    source = seq.id if isinstance(seq, NucleotideSequence) else ""
    return FcgsSignal(values, n, source, start_coordinate, matrix.source_id, n_mask)


def signal_to_csv(sig: FcgsSignal) -> str:
    lines = [
        f"# fcgs order={sig.order} start={sig.start_coordinate} "
        f"source_id={sig.source_id} matrix_id={sig.matrix_id}",
        "coordinate,value",
    ]
    coords = sig.coordinates
    for i in range(sig.values.size):
        lines.append(f"{coords[i]},{sig.values[i]:.17g}")
    return "\n".join(lines) + "\n"


def signal_from_csv(text: str) -> FcgsSignal:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# fcgs "):
        raise ParseError("missing '# fcgs ...' header line", 1)
    meta = {}
    for token in lines[0][2:].split()[1:]:
        key, _, value = token.partition("=")
        meta[key] = value
    try:
        order = int(meta["order"])
        start = int(meta["start"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad signal header: {exc}", 1) from None
    rows = [ln for ln in lines[1:] if ln.strip()]
    if not rows or rows[0] != "coordinate,value":
        raise ParseError("missing 'coordinate,value' column header", 2)
    values = np.array([float(ln.split(",")[1]) for ln in rows[1:]], dtype=np.float64)
    return FcgsSignal(values, order, meta.get("source_id", ""), start, meta.get("matrix_id", ""))


def write_signal_csv(sig: FcgsSignal, path: str | Path) -> None:
    try:
        Path(path).write_text(signal_to_csv(sig))
    except OSError as exc:
        raise IoError(f"cannot write signal file {path}: {exc}") from exc


def read_signal_csv(path: str | Path) -> FcgsSignal:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read signal file {path}: {exc}") from exc
    return signal_from_csv(text)


def write_signal_binary(sig: FcgsSignal, path: str | Path) -> None:
    """32-byte header (magic, order, start coordinate, length) + float64 LE samples."""
    header = _HEADER.pack(_MAGIC, sig.order, sig.start_coordinate, sig.values.size)
    try:
        Path(path).write_bytes(header + sig.values.astype("<f8").tobytes())
    except OSError as exc:
        raise IoError(f"cannot write signal file {path}: {exc}") from exc


def read_signal_binary(path: str | Path) -> FcgsSignal:
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read signal file {path}: {exc}") from exc
    if len(blob) < _HEADER.size:
        raise ParseError(f"file too short for a signal header: {path}")
    magic, order, start, length = _HEADER.unpack_from(blob)
    if magic != _MAGIC:
        raise ParseError(f"bad magic in {path}: {magic!r}")
    payload = blob[_HEADER.size:]
    if len(payload) != 8 * length:
        raise ParseError(f"payload length {len(payload)} != 8 * {length}")
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return FcgsSignal(values, order, "", start, "")
