"""Scalogram rendering and delimited exports.

Rendering is a pure function of (scalogram, spec): the modulus is
normalized by the per-image maximum, so scaled copies of the same data
produce byte-identical PNGs.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .cwt_engine import Scalogram
from .errors import EmptyWindow, IoError, ParseError
from .intron_scan import BandEnergyProfile
from .sequence_io import AnnotationTrack

_PNG_METADATA = {"Software": "fcgs"}   # fixed so repeated renders are byte-identical


@dataclass(frozen=True)
class RenderSpec:
    window: tuple[int, int] | None = None       # (start bp, end bp), default full range
    colormap: str = "jet"                       # dark red = high, blue = low
    size: tuple[int, int] = (960, 480)          # pixels
    overlay: AnnotationTrack | None = None
    dpi: int = 100

    def __post_init__(self):
        w, h = self.size
        if w < 16 or h < 16:
            raise ValueError("render size must be at least 16x16 pixels")


def render_scalogram(s: Scalogram, spec: RenderSpec | None = None) -> bytes:
    """Rasterize the modulus as PNG bytes; low frequency sits at the bottom."""
    spec = spec or RenderSpec()
    coords = s.coordinates
    lo, hi = spec.window if spec.window else (int(coords[0]), int(coords[-1]))
    if hi < lo:
        raise EmptyWindow(f"window [{lo}:{hi}] is empty")
    sel = np.flatnonzero((coords >= lo) & (coords <= hi))
    if sel.size == 0:
        raise EmptyWindow(f"window [{lo}:{hi}] does not intersect the scalogram")
    sub = s.modulus[:, sel]
    peak = sub.max()
    norm = sub / peak if peak > 0 else np.zeros_like(sub)
    x0, x1 = int(coords[sel[0]]), int(coords[sel[-1]])
    n_scales = s.scales.size

    width, height = spec.size
    fig = plt.figure(figsize=(width / spec.dpi, height / spec.dpi), dpi=spec.dpi)
    ax = fig.add_axes((0.11, 0.14, 0.86, 0.80))
    ax.imshow(
        norm,
        aspect="auto",
        origin="upper",
        interpolation="nearest",
        cmap=spec.colormap,
        vmin=0.0,
        vmax=1.0,
        extent=(x0 - 0.5, x1 + 0.5, n_scales - 0.5, -0.5),
    )
    ticks = np.unique(np.linspace(0, n_scales - 1, min(6, n_scales)).astype(int))
    ax.set_yticks(ticks)
    ax.set_yticklabels([f"{s.frequency_axis[i]:.3f}" for i in ticks])
    ax.set_xlabel("position (bp)")
    ax.set_ylabel("frequency (cycles/bp)")
    if spec.overlay is not None:
        for entry in spec.overlay.entries:
            for edge in (entry.start, entry.end):
                if x0 <= edge <= x1:
                    ax.axvline(edge, color="red", linewidth=1.0)
    buf = io.BytesIO()
    fig.savefig(buf, format="png", metadata=_PNG_METADATA, facecolor="white")
    plt.close(fig)
    return buf.getvalue()


def save_scalogram_png(s: Scalogram, path: str | Path, spec: RenderSpec | None = None) -> None:
    try:
        Path(path).write_bytes(render_scalogram(s, spec))
    except OSError as exc:
        raise IoError(f"cannot write image {path}: {exc}") from exc


def profile_to_csv(p: BandEnergyProfile) -> str:
    lines = ["coordinate,band_energy"]
    for i in range(len(p)):
        lines.append(f"{p.coordinates[i]},{p.values[i]:.17g}")
    return "\n".join(lines) + "\n"


def profile_from_csv(text: str) -> BandEnergyProfile:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "coordinate,band_energy":
        raise ParseError("missing 'coordinate,band_energy' header", 1)
    coords, values = [], []
    for ln in lines[1:]:
        c, _, v = ln.partition(",")
        coords.append(int(c))
        values.append(float(v))
    return BandEnergyProfile(np.array(values), None, np.array(coords, dtype=np.int64))


def export_profile_csv(p: BandEnergyProfile, path: str | Path) -> None:
    try:
        Path(path).write_text(profile_to_csv(p))
    except OSError as exc:
        raise IoError(f"cannot write profile file {path}: {exc}") from exc


def read_profile_csv(path: str | Path) -> BandEnergyProfile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read profile file {path}: {exc}") from exc
    return profile_from_csv(text)
