"""FASTA and annotation-interval ingestion.

Coordinates are 1-based inclusive everywhere; conversion to 0-based
offsets happens only at array boundaries.
"""
from __future__ import annotations

import hashlib
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (EmptyInput, EmptyRecord, FetchError, InvalidCharacter,
                     InvalidInterval, IoError, OverlapError, ParseError,
                     RangeError)

ALPHABET = "ACGTN"
# IUPAC one-letter nucleotide codes; anything outside ACGT collapses to N.
IUPAC_CODES = set("ACGTURYSWKMBDHVN")
_TO_N = str.maketrans({c: "N" for c in IUPAC_CODES - set("ACGT")})

ANNOTATION_LABELS = ("exon", "intron", "intergenic", "other")


@dataclass(frozen=True)
class NucleotideSequence:
    """DNA sequence over {A,C,G,T,N}, canonicalized to uppercase."""

    id: str
    residues: str

    def __post_init__(self):
        res = self.residues.upper()
        bad = set(res) - set(ALPHABET)
        if bad:
            pos = min(res.index(c) for c in bad)
            raise InvalidCharacter(res[pos], pos + 1, self.id)
        if res is not self.residues:
            object.__setattr__(self, "residues", res)

    def __len__(self) -> int:
        return len(self.residues)

    @property
    def length(self) -> int:
        return len(self.residues)


def _finish_record(record_id: str, chunks: list[str]) -> NucleotideSequence:
    raw = "".join(chunks).upper()
    if not raw:
        raise EmptyRecord(record_id)
    bad = set(raw) - IUPAC_CODES
    if bad:
        pos = min(raw.index(c) for c in bad)
        raise InvalidCharacter(raw[pos], pos + 1, record_id)
    return NucleotideSequence(record_id, raw.translate(_TO_N))


def parse_fasta(raw: bytes | str) -> list[NucleotideSequence]:
    """Parse FASTA text into records, collapsing non-ACGT IUPAC codes to N."""
    text = raw.decode("utf-8", errors="replace") if isinstance(raw, bytes) else raw
    if not text.strip():
        raise EmptyInput("empty FASTA input")
    records: list[NucleotideSequence] = []
    record_id: str | None = None
    chunks: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            if record_id is not None:
                records.append(_finish_record(record_id, chunks))
            fields = line[1:].split()
            record_id = fields[0] if fields else ""
            chunks = []
        else:
            if record_id is None:
                raise ParseError("sequence data before first FASTA header", lineno)
            chunks.append("".join(line.split()))
    if record_id is None:
        raise EmptyInput("no FASTA records found")
    records.append(_finish_record(record_id, chunks))
    return records


def serialize_fasta(seqs: list[NucleotideSequence], width: int = 70) -> str:
    out = []
    for seq in seqs:
        out.append(f">{seq.id}\n")
        for i in range(0, len(seq.residues), width):
            out.append(seq.residues[i:i + width] + "\n")
    return "".join(out)


def read_fasta(path: str | Path) -> list[NucleotideSequence]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read FASTA file {path}: {exc}") from exc
    return parse_fasta(data)


def write_fasta(seqs: list[NucleotideSequence], path: str | Path, width: int = 70) -> None:
    try:
        Path(path).write_text(serialize_fasta(seqs, width))
    except OSError as exc:
        raise IoError(f"cannot write FASTA file {path}: {exc}") from exc


def subsequence(seq: NucleotideSequence, start: int, end: int) -> NucleotideSequence:
    """Inclusive 1-based window; id gets the coordinate range appended."""
    if not (1 <= start <= end <= len(seq)):
        raise RangeError(f"window [{start}:{end}] outside sequence '{seq.id}' of length {len(seq)}")
    return NucleotideSequence(f"{seq.id}:{start}-{end}", seq.residues[start - 1:end])


@dataclass(frozen=True)
class Interval:
    seq_id: str
    start: int
    end: int
    label: str

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@dataclass
class AnnotationTrack:
    entries: list[Interval] = field(default_factory=list)

    def for_label(self, label: str) -> list[Interval]:
        return [e for e in self.entries if e.label == label]

    def for_seq(self, seq_id: str) -> list[Interval]:
        return [e for e in self.entries if e.seq_id == seq_id]

    @property
    def labels(self) -> set[str]:
        return {e.label for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)


def parse_annotations(raw: str) -> AnnotationTrack:
    """Parse 4-column tab-separated intervals (seq_id, start, end, label).

    '#' lines are comments. Output is sorted by (seq_id, start); same-id
    intervals must not overlap.
    """
    rows: list[tuple[Interval, int]] = []
    for lineno, line in enumerate(raw.splitlines(), 1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ParseError(f"expected 4 tab-separated columns, got {len(parts)}", lineno)
        seq_id, start_s, end_s, label = (p.strip() for p in parts)
        try:
            start, end = int(start_s), int(end_s)
        except ValueError:
            raise ParseError(f"non-integer coordinates '{start_s}', '{end_s}'", lineno) from None
        if label not in ANNOTATION_LABELS:
            raise ParseError(f"unknown label '{label}' (expected one of {ANNOTATION_LABELS})", lineno)
        if start < 1 or start > end:
            raise InvalidInterval(f"invalid interval [{start}:{end}]", lineno)
        rows.append((Interval(seq_id, start, end, label), lineno))
    rows.sort(key=lambda r: (r[0].seq_id, r[0].start, r[0].end))
    for (prev, _), (cur, lineno) in zip(rows, rows[1:]):
        if cur.seq_id == prev.seq_id and cur.start <= prev.end:
            raise OverlapError(
                f"interval [{cur.start}:{cur.end}] overlaps [{prev.start}:{prev.end}] on {cur.seq_id}",
                lineno,
            )
    return AnnotationTrack([iv for iv, _ in rows])


def serialize_annotations(track: AnnotationTrack) -> str:
    return "".join(f"{e.seq_id}\t{e.start}\t{e.end}\t{e.label}\n" for e in track.entries)


def read_annotations(path: str | Path) -> AnnotationTrack:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read annotation file {path}: {exc}") from exc
    return parse_annotations(text)


def write_annotations(track: AnnotationTrack, path: str | Path) -> None:
    try:
        Path(path).write_text(serialize_annotations(track))
    except OSError as exc:
        raise IoError(f"cannot write annotation file {path}: {exc}") from exc


def fetch_remote_fasta(url: str, cache_dir: str | Path) -> list[NucleotideSequence]:
    """Download FASTA from url with a cache-first policy keyed by url digest."""
    cache_dir = Path(cache_dir)
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create cache dir {cache_dir}: {exc}") from exc
    key = hashlib.sha256(url.encode()).hexdigest()[:24] + ".fasta"
    path = cache_dir / key
    if not path.exists():
        try:
            with urllib.request.urlopen(url, timeout=120) as resp:
                data = resp.read()
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise FetchError(f"cannot fetch {url}: {exc}") from exc
        tmp = path.with_suffix(".part")
        try:
            tmp.write_bytes(data)
            tmp.rename(path)
        except OSError as exc:
            raise IoError(f"cannot write cache file {path}: {exc}") from exc
    try:
        cached = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read cache file {path}: {exc}") from exc
    return parse_fasta(cached)
