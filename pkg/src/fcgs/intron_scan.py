"""Band-energy projection of a scalogram and interval calling.

Intron-like regions show a persistent band near 1/6.5 cycles/bp; the
scanner averages the modulus over the scales falling in a frequency
band, smooths the profile, thresholds it and reports the surviving runs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cwt_engine import Scalogram
from .errors import EmptyBand, IoError, LabelNotFound
from .sequence_io import AnnotationTrack, Interval

DEFAULT_BAND = (1.0 / 7.5, 1.0 / 5.5)   # brackets the 6.5 bp periodicity with ~1 bp slack
DEFAULT_MIN_LEN = 40
DEFAULT_SMOOTHING = 25


@dataclass(frozen=True)
class BandEnergyProfile:
    """Per-position mean modulus over the scales inside a frequency band."""

    values: np.ndarray
    band: tuple[float, float] | None
    coordinates: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        coords = np.ascontiguousarray(np.asarray(self.coordinates, dtype=np.int64))
        if values.size != coords.size:
            raise ValueError("profile values and coordinates must have the same length")
        values.setflags(write=False)
        coords.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "coordinates", coords)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class RegionCall:
    """Non-overlapping sorted intervals (start bp, end bp, mean_energy)."""

    intervals: list[tuple[int, int, float]]
    threshold_used: float
    min_len: int

    def __len__(self) -> int:
        return len(self.intervals)


@dataclass(frozen=True)
class ScanMetrics:
    precision: float
    recall: float
    f1: float
    mean_boundary_offset: float
    matched: int
    no_calls: bool = False


def band_energy(s: Scalogram, f_lo: float, f_hi: float) -> BandEnergyProfile:
    """Mean modulus over scales with f_lo <= f(a) <= f_hi, skipping masked cells.

    Positions where every in-band scale sits inside the cone of influence
    get value 0.
    """
    if not (0.0 < f_lo < f_hi):
        raise ValueError(f"band must satisfy 0 < f_lo < f_hi, got ({f_lo}, {f_hi})")
    rows = np.flatnonzero((s.frequency_axis >= f_lo) & (s.frequency_axis <= f_hi))
    if rows.size == 0:
        raise EmptyBand(f"no grid scale maps into the band [{f_lo:.5g}, {f_hi:.5g}]")
    mod = s.modulus[rows]
    ok = s.valid_mask[rows]
    count = ok.sum(axis=0)
    total = (mod * ok).sum(axis=0)
    values = np.where(count > 0, total / np.maximum(count, 1), 0.0)
    return BandEnergyProfile(values, (f_lo, f_hi), s.coordinates)


def auto_threshold(values: np.ndarray, bins: int = 512) -> float:
    """Midpoint between the class means of the variance-minimizing 2-way split."""
    v = np.asarray(values, dtype=np.float64)
    lo, hi = float(v.min()), float(v.max())
    if not hi > lo:
        return hi
    hist, edges = np.histogram(v, bins=bins, range=(lo, hi))
    centers = 0.5 * (edges[:-1] + edges[1:])
    p = hist / hist.sum()
    w0 = np.cumsum(p)
    mu = np.cumsum(p * centers)
    mu_total = mu[-1]
    w1 = 1.0 - w0
    with np.errstate(divide="ignore", invalid="ignore"):
        between = (mu_total * w0 - mu) ** 2 / (w0 * w1)
    between[~np.isfinite(between)] = -1.0
    split = int(np.argmax(between))
    mu0 = mu[split] / w0[split]
    mu1 = (mu_total - mu[split]) / w1[split]
    return 0.5 * (mu0 + mu1)


def _smooth(values: np.ndarray, width: int) -> np.ndarray:
    if width <= 1:
        return values.astype(np.float64)
    if width % 2 == 0:
        width += 1   # keep the window centred
    kernel = np.full(width, 1.0 / width)
    return np.convolve(values, kernel, mode="same")


def call_regions(profile: BandEnergyProfile, threshold: float | str = "auto",
                 min_len: int = DEFAULT_MIN_LEN,
                 smoothing: int = DEFAULT_SMOOTHING) -> RegionCall:
    """Threshold the smoothed profile and keep runs of at least min_len bp.

    Runs separated by less than min_len / 2 are merged. threshold="auto"
    picks the 2-class split of `auto_threshold`.
    """
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    smoothed = _smooth(profile.values, smoothing)
    thr = auto_threshold(smoothed) if threshold == "auto" else float(threshold)
    above = smoothed > thr
    flips = np.diff(np.concatenate(([0], above.astype(np.int8), [0])))
    starts = np.flatnonzero(flips == 1)
    ends = np.flatnonzero(flips == -1) - 1
    runs = [(int(s), int(e)) for s, e in zip(starts, ends) if e - s + 1 >= min_len]
    merged: list[list[int]] = []
    for s, e in runs:
        if merged and s - merged[-1][1] - 1 < min_len / 2:
            merged[-1][1] = e
        else:
            merged.append([s, e])
    coords = profile.coordinates
    intervals = [
        (int(coords[s]), int(coords[e]), float(smoothed[s:e + 1].mean()))
        for s, e in merged
    ]
    return RegionCall(intervals, float(thr), min_len)


def _overlap_length(a: list[tuple[int, int]], b: list[tuple[int, int]]) -> int:
    """Total overlap between two sorted non-overlapping interval lists."""
    total = 0
    j = 0
    for s, e in a:
        while j < len(b) and b[j][1] < s:
            j += 1
        i = j
        while i < len(b) and b[i][0] <= e:
            total += min(e, b[i][1]) - max(s, b[i][0]) + 1
            i += 1
    return total


def evaluate(calls: RegionCall, truth: AnnotationTrack, label: str) -> ScanMetrics:
    """Per-bp precision/recall/F1 for a label, plus mean |boundary offset|.

    Each truth interval is matched to the call overlapping it most; both
    edge offsets of every matched pair enter the mean.
    """
    if label not in truth.labels:
        raise LabelNotFound(f"label '{label}' not present in the truth track")
    truth_iv = sorted((e.start, e.end) for e in truth.for_label(label))
    call_iv = sorted((s, e) for s, e, _ in calls.intervals)
    truth_len = sum(e - s + 1 for s, e in truth_iv)
    call_len = sum(e - s + 1 for s, e in call_iv)
    overlap = _overlap_length(call_iv, truth_iv)
    no_calls = call_len == 0
    precision = overlap / call_len if call_len else 0.0
    recall = overlap / truth_len if truth_len else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    offsets: list[int] = []
    matched = 0
    for ts, te in truth_iv:
        best, best_ov = None, 0
        for cs, ce in call_iv:
            ov = min(te, ce) - max(ts, cs) + 1
            if ov > best_ov:
                best, best_ov = (cs, ce), ov
        if best is not None:
            matched += 1
            offsets.extend((abs(best[0] - ts), abs(best[1] - te)))
    mean_offset = float(np.mean(offsets)) if offsets else math.nan
    return ScanMetrics(precision, recall, f1, mean_offset, matched, no_calls)


def calls_to_track(calls: RegionCall, seq_id: str, label: str) -> AnnotationTrack:
    return AnnotationTrack([Interval(seq_id, s, e, label) for s, e, _ in calls.intervals])


def write_calls_bed(calls: RegionCall, seq_id: str, label: str, path: str | Path) -> None:
    lines = [f"{seq_id}\t{s}\t{e}\t{label}\n" for s, e, _ in calls.intervals]
    try:
        Path(path).write_text("".join(lines))
    except OSError as exc:
        raise IoError(f"cannot write calls file {path}: {exc}") from exc


def metrics_to_text(metrics: ScanMetrics, label: str) -> str:
    lines = [
        f"label = {label}",
        f"precision = {metrics.precision:.6f}",
        f"recall = {metrics.recall:.6f}",
        f"f1 = {metrics.f1:.6f}",
        f"mean_boundary_offset_bp = {metrics.mean_boundary_offset:.3f}",
        f"matched_truth_intervals = {metrics.matched}",
        f"no_calls = {str(metrics.no_calls).lower()}",
    ]
    return "\n".join(lines) + "\n"
