"""Chaos-game frequency signals from DNA, complex Morlet scalograms, and
6.5 bp intron-periodicity scanning."""

__version__ = "0.1.0"

from .chaos_game import FcgrMatrix, cell_index, cgr_map, cgr_step, compute_fcgr, fcgr_lookup
from .cwt_engine import (MorletParams, ScaleGrid, Scalogram, cwt, cwt_direct,
                         daughter, morlet, scale_to_frequency)
from .fcgs_encoder import FcgsSignal, encode, word_stream
from .intron_scan import BandEnergyProfile, RegionCall, band_energy, call_regions, evaluate
from .sequence_io import (AnnotationTrack, Interval, NucleotideSequence,
                          parse_annotations, parse_fasta, subsequence)

__all__ = [
    "AnnotationTrack",
    "BandEnergyProfile",
    "FcgrMatrix",
    "FcgsSignal",
    "Interval",
    "MorletParams",
    "NucleotideSequence",
    "RegionCall",
    "ScaleGrid",
    "Scalogram",
    "band_energy",
    "call_regions",
    "cell_index",
    "cgr_map",
    "cgr_step",
    "compute_fcgr",
    "cwt",
    "cwt_direct",
    "daughter",
    "encode",
    "evaluate",
    "fcgr_lookup",
    "morlet",
    "parse_annotations",
    "parse_fasta",
    "scale_to_frequency",
    "subsequence",
    "word_stream",
]
