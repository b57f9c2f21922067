"""Command-line pipeline: fcgr, encode, cwt, scan, render, synth, pipeline, fetch.

Exit codes: 0 ok, 2 usage, 3 I/O, 4 data validation, 5 numeric failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, chaos_game, cwt_engine, fcgs_encoder, intron_scan, \
    sequence_io, synth, viz_export
from .config import load_config
from .errors import FcgsError
from .pipeline import run_pipeline


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _window(text: str) -> tuple[int, int]:
    try:
        start, _, end = text.partition(":")
        return int(start), int(end)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:END, got '{text}'") from None


def _size(text: str) -> tuple[int, int]:
    try:
        w, _, h = text.partition("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got '{text}'") from None


def _pick_record(records, record_id: str | None):
    if not record_id:
        return records[0]
    for rec in records:
        if rec.id == record_id:
            return rec
    raise FcgsError(f"record '{record_id}' not found")


def _read_signal(path: str):
    if path.endswith(".bin"):
        return fcgs_encoder.read_signal_binary(path)
    return fcgs_encoder.read_signal_csv(path)


def cmd_fcgr(args) -> int:
    records = sequence_io.read_fasta(args.fasta)
    seq = _pick_record(records, args.record)
    matrix = chaos_game.compute_fcgr(seq, args.order, max_order=args.max_order)
    chaos_game.write_matrix_csv(matrix, args.out)
    print(f"wrote {args.out}")
    print(f"counted_words = {matrix.counted_words}")
    print(f"entropy_bits = {matrix.entropy_bits():.6f}")
    return 0


def cmd_encode(args) -> int:
    records = sequence_io.read_fasta(args.fasta)
    seq = _pick_record(records, args.record)
    matrix = chaos_game.read_matrix_csv(args.matrix)
    signal = fcgs_encoder.encode(seq, matrix, args.start_coordinate)
    fcgs_encoder.write_signal_csv(signal, args.out)
    print(f"wrote {args.out} ({len(signal)} samples, order {signal.order})")
    if args.binary_out:
        fcgs_encoder.write_signal_binary(signal, args.binary_out)
        print(f"wrote {args.binary_out}")
    return 0


def cmd_cwt(args) -> int:
    signal = _read_signal(args.signal)
    params = cwt_engine.MorletParams(args.omega0, args.support_len)
    if args.spacing == "log":
        grid = cwt_engine.ScaleGrid.logarithmic(args.scale_min, args.scale_max, args.scale_count)
    else:
        grid = cwt_engine.ScaleGrid.linear(args.scale_min, args.scale_max, args.scale_count)
    scalogram = cwt_engine.cwt(signal, grid, params, workers=args.workers)
    cwt_engine.write_scalogram_csv(scalogram, args.out)
    print(f"wrote {args.out} ({len(grid)} scales x {scalogram.n_positions} positions)")
    return 0


def cmd_scan(args) -> int:
    scalogram = cwt_engine.read_scalogram_csv(args.scalogram)
    profile = intron_scan.band_energy(scalogram, args.band_lo, args.band_hi)
    viz_export.export_profile_csv(profile, args.profile_out)
    print(f"wrote {args.profile_out}")
    threshold = "auto" if args.threshold == "auto" else float(args.threshold)
    calls = intron_scan.call_regions(profile, threshold, args.min_len, args.smoothing)
    intron_scan.write_calls_bed(calls, args.seq_id, args.label, args.calls_out)
    print(f"wrote {args.calls_out} ({len(calls)} intervals, threshold "
          f"{calls.threshold_used:.6g})")
    if args.annotations:
        truth = sequence_io.read_annotations(args.annotations)
        metrics = intron_scan.evaluate(calls, truth, args.label)
        text = intron_scan.metrics_to_text(metrics, args.label)
        if args.metrics_out:
            Path(args.metrics_out).write_text(text)
            print(f"wrote {args.metrics_out}")
        print(text, end="")
    return 0


def cmd_render(args) -> int:
    scalogram = cwt_engine.read_scalogram_csv(args.scalogram)
    overlay = sequence_io.read_annotations(args.annotations) if args.annotations else None
    spec = viz_export.RenderSpec(window=args.window, colormap=args.cmap,
                                 size=args.size, overlay=overlay)
    viz_export.save_scalogram_png(scalogram, args.out, spec)
    print(f"wrote {args.out}")
    return 0


def cmd_synth(args) -> int:
    layout = synth.parse_layout(args.layout)
    seq, truth = synth.synthesize(layout, args.seed, args.mutation_rate, args.seq_id)
    sequence_io.write_fasta([seq], args.out_fasta)
    sequence_io.write_annotations(truth, args.out_bed)
    motif_bp = sum(e.length for e in truth.for_label("intron"))
    print(f"wrote {args.out_fasta} ({len(seq)} bp) and {args.out_bed} "
          f"({len(truth)} intervals, {motif_bp} motif bp)")
    return 0


def cmd_pipeline(args) -> int:
    overrides = {}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise FcgsError(f"--set expects key=value, got '{item}'")
        overrides[key.strip()] = value.strip()
    cfg = load_config(args.config, overrides)
    result = run_pipeline(cfg)
    for name in sorted(result.artifacts):
        print(f"wrote {result.artifacts[name]}")
    print(f"wrote {result.manifest_path}")
    if result.metrics is not None:
        print(f"recall = {result.metrics.recall:.4f}  precision = "
              f"{result.metrics.precision:.4f}")
    return 0


def cmd_fetch(args) -> int:
    records = sequence_io.fetch_remote_fasta(args.url, args.cache_dir)
    print(f"fetched {len(records)} record(s) into {args.cache_dir}")
    for rec in records:
        print(f"  {rec.id}: {len(rec)} bp")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fcgs",
        description="Chaos-game frequency signals, Morlet scalograms and "
                    "6.5 bp periodicity scanning for DNA.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fcgr", help="compute a k-mer frequency matrix from FASTA")
    p.add_argument("fasta")
    p.add_argument("-k", "--order", type=_positive_int, required=True,
                   help="word length (k >= 1)")
    p.add_argument("--out", required=True, help="output matrix CSV")
    p.add_argument("--record", help="FASTA record id (default: first)")
    p.add_argument("--max-order", type=_positive_int, default=chaos_game.DEFAULT_MAX_ORDER,
                   help="memory guard on k (default %(default)s)")
    p.set_defaults(func=cmd_fcgr)

    p = sub.add_parser("encode", help="encode a sequence against a matrix CSV")
    p.add_argument("fasta")
    p.add_argument("--matrix", required=True, help="matrix CSV from 'fcgr'")
    p.add_argument("--out", required=True, help="output signal CSV")
    p.add_argument("--binary-out", help="optional binary signal output")
    p.add_argument("--record", help="FASTA record id (default: first)")
    p.add_argument("--start-coordinate", type=_positive_int, default=1,
                   help="genomic bp of the first sample (default 1)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("cwt", help="complex Morlet transform of a signal file")
    p.add_argument("signal", help="signal CSV or .bin from 'encode'")
    p.add_argument("--out", required=True, help="output scalogram CSV")
    p.add_argument("--omega0", type=float, default=5.4285,
                   help="wavelet carrier in rad/sample (default %(default)s)")
    p.add_argument("--support-len", type=_positive_int, default=601,
                   help="mother tabulation points (default %(default)s)")
    p.add_argument("--scale-min", type=float, default=1.0, help="default %(default)s")
    p.add_argument("--scale-max", type=float, default=64.0, help="default %(default)s")
    p.add_argument("--scale-count", type=_positive_int, default=64,
                   help="default %(default)s")
    p.add_argument("--spacing", choices=("log", "linear"), default="log",
                   help="scale spacing (default %(default)s)")
    p.add_argument("--workers", type=_positive_int, default=1,
                   help="threads for per-scale convolutions (default 1)")
    p.set_defaults(func=cmd_cwt)

    p = sub.add_parser("scan", help="band-energy profile and region calls")
    p.add_argument("scalogram", help="scalogram CSV from 'cwt'")
    p.add_argument("--band-lo", type=float, default=intron_scan.DEFAULT_BAND[0],
                   help="low band edge in cycles/bp (default 1/7.5)")
    p.add_argument("--band-hi", type=float, default=intron_scan.DEFAULT_BAND[1],
                   help="high band edge in cycles/bp (default 1/5.5)")
    p.add_argument("--threshold", default="auto", help="'auto' or a number (default auto)")
    p.add_argument("--min-len", type=_positive_int, default=intron_scan.DEFAULT_MIN_LEN,
                   help="default %(default)s bp")
    p.add_argument("--smoothing", type=int, default=intron_scan.DEFAULT_SMOOTHING,
                   help="moving-average width in bp (default %(default)s)")
    p.add_argument("--profile-out", required=True, help="output profile CSV")
    p.add_argument("--calls-out", required=True, help="output calls BED")
    p.add_argument("--seq-id", default="seq", help="sequence id for the BED output")
    p.add_argument("--label", default="intron", help="label for calls (default %(default)s)")
    p.add_argument("--annotations", help="truth BED; enables evaluation")
    p.add_argument("--metrics-out", help="write evaluation metrics to this file")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("render", help="render a scalogram CSV to PNG")
    p.add_argument("scalogram", help="scalogram CSV from 'cwt'")
    p.add_argument("--out", required=True, help="output PNG")
    p.add_argument("--window", type=_window, help="bp window START:END (default full)")
    p.add_argument("--size", type=_size, default=(960, 480), help="pixels, WIDTHxHEIGHT")
    p.add_argument("--cmap", default="jet", help="matplotlib colormap (default %(default)s)")
    p.add_argument("--annotations", help="BED whose boundaries are drawn as red lines")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("synth", help="synthetic genome with planted periodic motifs")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--layout", required=True,
                   help="e.g. background:3000,motif:200,background:3000")
    p.add_argument("--mutation-rate", type=float, default=0.05,
                   help="per-base substitution rate in motif segments (default %(default)s)")
    p.add_argument("--seq-id", default="synth")
    p.add_argument("--out-fasta", required=True)
    p.add_argument("--out-bed", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pipeline", help="run the full chain from a config file")
    p.add_argument("--config", required=True, help="key=value config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a config key (repeatable)")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("fetch", help="download FASTA into a local cache")
    p.add_argument("--url", required=True)
    p.add_argument("--cache-dir", required=True)
    p.set_defaults(func=cmd_fetch)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:   # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FcgsError as exc:
        print(f"fcgs {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"fcgs {args.command}: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
