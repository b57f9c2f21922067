"""Synthetic genomes with planted periodic motif segments.

Background bases are drawn i.i.d. at an AT-rich, C. elegans-like
composition; motif segments alternate a 6 bp and a 7 bp repeat unit so
the mean repeat period is 6.5 bp, optionally degraded by point
mutations. The matching truth intervals label motif segments "intron"
and background "intergenic".
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .sequence_io import AnnotationTrack, Interval, NucleotideSequence

BACKGROUND_COMPOSITION = {"A": 0.3226, "C": 0.1774, "G": 0.1769, "T": 0.3231}

# Mixed AT/GC dinucleotides make the encoded signal swing within each repeat.
MOTIF_UNITS = ("TAAGCC", "TAAGCCT")

_BASES = np.array(list("ACGT"))
_BASE_INDEX = {b: i for i, b in enumerate("ACGT")}


def parse_layout(text: str) -> list[tuple[str, int]]:
    """Parse "background:3000,motif:53,..." into (kind, length) segments."""
    segments: list[tuple[str, int]] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        kind, sep, num = part.partition(":")
        kind = kind.strip()
        if not sep or kind not in ("background", "motif"):
            raise ConfigError(f"bad layout segment '{part}' (want background:<len> or motif:<len>)")
        try:
            length = int(num)
        except ValueError:
            raise ConfigError(f"bad segment length in '{part}'") from None
        if length < 1:
            raise ConfigError(f"segment length must be >= 1 in '{part}'")
        segments.append((kind, length))
    if not segments:
        raise ConfigError("layout has no segments")
    return segments


def motif_segment(length: int) -> str:
    pieces: list[str] = []
    total = 0
    i = 0
    while total < length:
        unit = MOTIF_UNITS[i % 2]
        pieces.append(unit)
        total += len(unit)
        i += 1
    return "".join(pieces)[:length]


def _mutate(segment: str, rng: np.random.Generator, rate: float) -> str:
    if rate <= 0:
        return segment
    arr = np.array(list(segment))
    hits = np.flatnonzero(rng.random(arr.size) < rate)
    if hits.size:
        current = np.array([_BASE_INDEX[b] for b in arr[hits]])
        arr[hits] = _BASES[(current + rng.integers(1, 4, hits.size)) % 4]
    return "".join(arr)


def synthesize(layout: list[tuple[str, int]], seed: int,
               mutation_rate: float = 0.05,
               seq_id: str = "synth") -> tuple[NucleotideSequence, AnnotationTrack]:
    """Deterministic genome + truth track for a layout and seed."""
    if not 0.0 <= mutation_rate < 1.0:
        raise ConfigError(f"mutation rate must be in [0, 1), got {mutation_rate}")
    rng = np.random.default_rng(seed)
    probs = [BACKGROUND_COMPOSITION[b] for b in "ACGT"]
    pieces: list[str] = []
    entries: list[Interval] = []
    pos = 1
    for kind, length in layout:
        if kind == "background":
            segment = "".join(rng.choice(_BASES, size=length, p=probs))
            label = "intergenic"
        else:
            segment = _mutate(motif_segment(length), rng, mutation_rate)
            label = "intron"
        pieces.append(segment)
        entries.append(Interval(seq_id, pos, pos + length - 1, label))
        pos += length
    return NucleotideSequence(seq_id, "".join(pieces)), AnnotationTrack(entries)
