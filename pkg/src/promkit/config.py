"""Config-file loading and flag precedence for the CLI.

Precedence: CLI flag > config file > built-in default.  The effective
configuration is echoed to a sidecar JSON in the output directory so runs
are reproducible; it never contains timestamps.
"""

from __future__ import annotations

import json
from dataclasses import asdict, fields, is_dataclass
from pathlib import Path
from typing import Any

from promkit.acoustics.duration import DurationUnit
from promkit.acoustics.energy import EnergyConfig
from promkit.acoustics.pitch import PitchConfig
from promkit.models.training import TrainingConfig
from promkit.models.transformer import TransformerConfig
from promkit.prominence.annotate import AnnotateConfig
from promkit.prominence.loma import LomaConfig
from promkit.prominence.quantize import QuantizerConfig


class ConfigError(ValueError):
    pass


def load_config_file(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return raw


def _build(cls, raw: dict, nested: dict[str, Any] | None = None):
    nested = nested or {}
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    kwargs = {}
    for key, value in raw.items():
        if key in nested:
            kwargs[key] = nested[key](value) if isinstance(value, dict) else value
        elif isinstance(value, list):
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {cls.__name__}: {exc}") from exc


def annotate_config(raw: dict) -> AnnotateConfig:
    return _build(
        AnnotateConfig,
        raw,
        nested={
            "pitch": lambda d: _build(PitchConfig, d),
            "energy": lambda d: _build(EnergyConfig, d),
            "loma": lambda d: _build(LomaConfig, d),
            "quantizer": lambda d: _build(QuantizerConfig, d),
        },
    )


def transformer_config(raw: dict) -> TransformerConfig:
    raw = dict(raw)
    raw.setdefault("vocab_size", 3)  # rebuilt from the training vocabulary
    return _build(TransformerConfig, raw)


def training_config(raw: dict) -> TrainingConfig:
    return _build(TrainingConfig, raw)


def _jsonable(value):
    if is_dataclass(value) and not isinstance(value, type):
        return {k: _jsonable(v) for k, v in asdict(value).items()}
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, DurationUnit):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "value") and not isinstance(value, (int, float, str, bool)):
        return value.value
    return value


def echo_effective_config(out_dir: str | Path, name: str, payload: dict) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(
        json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path
