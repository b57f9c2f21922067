"""Full analysis chain: FASTA -> FCGR -> FCGS -> CWT -> band scan -> artifacts.

Every run writes a manifest listing the effective configuration and the
SHA-256 of each input and artifact, so repeated runs are comparable
byte for byte.
"""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path

from . import chaos_game, cwt_engine, fcgs_encoder, intron_scan, sequence_io, viz_export
from .config import PipelineConfig
from .errors import ConfigError, FcgsError, StageError
from .intron_scan import ScanMetrics

logger = logging.getLogger(__name__)

ARTIFACT_NAMES = (
    "fcgr.csv",
    "signal.csv",
    "scalogram.csv",
    "scalogram.png",
    "profile.csv",
    "calls.bed",
)


@dataclass
class PipelineResult:
    outdir: Path
    artifacts: dict[str, Path]
    metrics: ScanMetrics | None
    manifest_path: Path


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    cfg.validate()
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, Path] = {}

    def stage(name: str, fn):
        try:
            return fn()
        except FcgsError as exc:
            raise StageError(name, exc) from exc

    records = stage("ingest", lambda: sequence_io.read_fasta(cfg.fasta))
    if cfg.record:
        matches = [r for r in records if r.id == cfg.record]
        if not matches:
            raise StageError("ingest", ConfigError(f"record '{cfg.record}' not in {cfg.fasta}"))
        seq = matches[0]
    else:
        seq = records[0]
    logger.info("pipeline: record '%s' (%d bp)", seq.id, len(seq))

    matrix = stage("fcgr", lambda: chaos_game.compute_fcgr(seq, cfg.k_order))
    artifacts["fcgr.csv"] = outdir / "fcgr.csv"
    chaos_game.write_matrix_csv(matrix, artifacts["fcgr.csv"])

    if cfg.window_start > 0:
        target = stage("window", lambda: sequence_io.subsequence(seq, cfg.window_start, cfg.window_end))
        start_coordinate = cfg.window_start
    else:
        target, start_coordinate = seq, 1

    signal = stage("encode", lambda: fcgs_encoder.encode(target, matrix, start_coordinate))
    artifacts["signal.csv"] = outdir / "signal.csv"
    fcgs_encoder.write_signal_csv(signal, artifacts["signal.csv"])

    params = cwt_engine.MorletParams(cfg.omega0, cfg.support_len)
    if cfg.scale_spacing == "log":
        grid = cwt_engine.ScaleGrid.logarithmic(cfg.scale_min, cfg.scale_max, cfg.scale_count)
    else:
        grid = cwt_engine.ScaleGrid.linear(cfg.scale_min, cfg.scale_max, cfg.scale_count)
    scalogram = stage("cwt", lambda: cwt_engine.cwt(signal, grid, params, workers=cfg.workers))
    artifacts["scalogram.csv"] = outdir / "scalogram.csv"
    cwt_engine.write_scalogram_csv(scalogram, artifacts["scalogram.csv"])

    truth = None
    if cfg.annotations:
        truth = stage("annotations", lambda: sequence_io.read_annotations(cfg.annotations))

    artifacts["scalogram.png"] = outdir / "scalogram.png"
    spec = viz_export.RenderSpec(overlay=truth)
    stage("render", lambda: viz_export.save_scalogram_png(scalogram, artifacts["scalogram.png"], spec))

    profile = stage("scan", lambda: intron_scan.band_energy(scalogram, cfg.band_lo, cfg.band_hi))
    artifacts["profile.csv"] = outdir / "profile.csv"
    viz_export.export_profile_csv(profile, artifacts["profile.csv"])

    calls = stage("scan", lambda: intron_scan.call_regions(
        profile, cfg.threshold_value(), cfg.min_len, cfg.smoothing))
    artifacts["calls.bed"] = outdir / "calls.bed"
    intron_scan.write_calls_bed(calls, seq.id, cfg.label, artifacts["calls.bed"])

    metrics = None
    if truth is not None:
        metrics = stage("evaluate", lambda: intron_scan.evaluate(calls, truth, cfg.label))
        artifacts["metrics.txt"] = outdir / "metrics.txt"
        artifacts["metrics.txt"].write_text(intron_scan.metrics_to_text(metrics, cfg.label))

    manifest_path = outdir / "manifest.txt"
    lines = ["# fcgs pipeline manifest"]
    for key, value in cfg.items():
        lines.append(f"config.{key} = {value}")
    lines.append(f"input.fasta.sha256 = {_sha256(Path(cfg.fasta))}")
    if cfg.annotations:
        lines.append(f"input.annotations.sha256 = {_sha256(Path(cfg.annotations))}")
    for name in sorted(artifacts):
        lines.append(f"artifact.{name}.sha256 = {_sha256(artifacts[name])}")
    manifest_path.write_text("\n".join(lines) + "\n")

    return PipelineResult(outdir, artifacts, metrics, manifest_path)
