"""Flat key=value pipeline configuration.

Untouched defaults reproduce the reference protocol: order-2 coding,
omega0 = 5.4285, a 601-point mother support, 64 log-spaced scales on
[1, 64] and the 6.5 bp band.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError, IoError

DEFAULT_BAND_LO = 1.0 / 7.5
DEFAULT_BAND_HI = 1.0 / 5.5


@dataclass
class PipelineConfig:
    fasta: str = ""
    outdir: str = "fcgs-out"
    record: str = ""                 # FASTA record id; empty = first record
    annotations: str = ""            # optional truth BED for evaluation
    label: str = "intron"
    k_order: int = 2
    omega0: float = 5.4285
    support_len: int = 601
    scale_min: float = 1.0
    scale_max: float = 64.0
    scale_count: int = 64
    scale_spacing: str = "log"       # "log" or "linear"
    band_lo: float = DEFAULT_BAND_LO
    band_hi: float = DEFAULT_BAND_HI
    min_len: int = 40
    smoothing: int = 25
    threshold: str = "auto"          # "auto" or a number
    seed: int = 0
    window_start: int = 0            # 0 = no window
    window_end: int = 0
    workers: int = 1

    def validate(self) -> None:
        if not self.fasta:
            raise ConfigError("config key 'fasta' is required")
        if self.k_order < 1:
            raise ConfigError(f"k_order must be >= 1, got {self.k_order}")
        if not self.omega0 > 5.0:
            raise ConfigError(f"omega0 must be > 5 for admissibility, got {self.omega0}")
        if self.support_len < 3:
            raise ConfigError(f"support_len must be >= 3, got {self.support_len}")
        if self.scale_min <= 0:
            raise ConfigError(f"scale_min must be positive, got {self.scale_min}")
        if self.scale_max < self.scale_min:
            raise ConfigError(
                f"scale_max ({self.scale_max}) must be >= scale_min ({self.scale_min})")
        if self.scale_count < 1:
            raise ConfigError(f"scale_count must be >= 1, got {self.scale_count}")
        if self.scale_spacing not in ("log", "linear"):
            raise ConfigError(f"scale_spacing must be 'log' or 'linear', got '{self.scale_spacing}'")
        if not 0 < self.band_lo < self.band_hi:
            raise ConfigError(f"band must satisfy 0 < band_lo < band_hi, got "
                              f"({self.band_lo}, {self.band_hi})")
        if self.min_len < 1:
            raise ConfigError(f"min_len must be >= 1, got {self.min_len}")
        if self.smoothing < 0:
            raise ConfigError(f"smoothing must be >= 0, got {self.smoothing}")
        if self.threshold != "auto":
            try:
                float(self.threshold)
            except ValueError:
                raise ConfigError(f"threshold must be 'auto' or a number, got "
                                  f"'{self.threshold}'") from None
        if (self.window_start > 0) != (self.window_end > 0):
            raise ConfigError("window_start and window_end must be set together")
        if self.window_start > 0 and self.window_end < self.window_start:
            raise ConfigError(f"window_end ({self.window_end}) must be >= "
                              f"window_start ({self.window_start})")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def threshold_value(self) -> float | str:
        return "auto" if self.threshold == "auto" else float(self.threshold)

    def items(self) -> list[tuple[str, str]]:
        return [(f.name, str(getattr(self, f.name))) for f in fields(self)]


def parse_config_text(text: str) -> dict[str, str]:
    """key = value lines; '#' starts a comment; blank lines are skipped."""
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"expected 'key = value' on line {lineno}: '{line}'")
        mapping[key.strip()] = value.strip()
    return mapping


def config_from_mapping(mapping: dict[str, str]) -> PipelineConfig:
    cfg = PipelineConfig()
    valid = {f.name: f.type for f in fields(PipelineConfig)}
    for key, raw in mapping.items():
        if key not in valid:
            raise ConfigError(f"unknown config key '{key}'")
        current = getattr(cfg, key)
        try:
            if isinstance(current, int):
                value: object = int(raw)
            elif isinstance(current, float):
                value = float(raw)
            else:
                value = raw
        except ValueError:
            raise ConfigError(f"bad value '{raw}' for config key '{key}'") from None
        setattr(cfg, key, value)
    cfg.validate()
    return cfg


def load_config(path: str | Path, overrides: dict[str, str] | None = None) -> PipelineConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read config file {path}: {exc}") from exc
    mapping = parse_config_text(text)
    if overrides:
        mapping.update(overrides)
    return config_from_mapping(mapping)
