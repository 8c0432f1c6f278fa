"""Flat key-value run configuration with typed validation.

Format: ``key = value`` lines, ``#`` comments.  All validation problems
are collected and reported together, before anything runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .engine import BootstrapConfig
from .model import STRATEGIES

_INT_KEYS = ("n_threshold", "m_threshold", "max_iterations",
             "top_k_patterns", "top_k_nc_seeds", "snippet_cap",
             "min_ngram_count", "workers")
_PATH_KEYS = ("index", "ngrams", "seed_ncs", "seed_patterns", "seed_pairs",
              "output_dir")
_STR_KEYS = ("strategy", "format")
_ALL_KEYS = set(_INT_KEYS) | set(_PATH_KEYS) | set(_STR_KEYS)

_DEFAULTS = {
    "n_threshold": 5,
    "m_threshold": 50,
    "max_iterations": 3,
    "top_k_patterns": 20,
    "top_k_nc_seeds": 10,
    "snippet_cap": 1000,
    "min_ngram_count": 100,
    "workers": 1,
    "format": "jsonl",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    engine: BootstrapConfig
    index: Path
    ngrams: Path
    output_dir: Path
    seed_ncs: Path | None = None
    seed_patterns: Path | None = None
    seed_pairs: Path | None = None
    format: str = "jsonl"
    raw: tuple[tuple[str, str], ...] = ()


def parse_key_values(text: str, source: str = "<config>") -> dict[str, str]:
    values: dict[str, str] = {}
    errors: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            errors.append(f"{source}:{lineno}: expected key = value")
            continue
        key, value = key.strip(), value.strip()
        if key in values:
            errors.append(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value
    if errors:
        raise ConfigError("; ".join(errors))
    return values


def load_run_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = parse_key_values(path.read_text(encoding="utf-8"), str(path))
    errors: list[str] = []
    for key in values:
        if key not in _ALL_KEYS:
            errors.append(f"unknown config key {key!r}")
    for key in ("strategy", "index", "ngrams", "output_dir"):
        if key not in values:
            errors.append(f"missing required config key {key!r}")
    resolved: dict[str, object] = dict(_DEFAULTS)
    for key, value in values.items():
        if key in _INT_KEYS:
            try:
                resolved[key] = int(value)
            except ValueError:
                errors.append(f"{key} must be an integer, got {value!r}")
        else:
            resolved[key] = value
    if "strategy" in resolved and resolved.get("strategy") \
            not in STRATEGIES and "strategy" in values:
        errors.append(f"invalid strategy {values['strategy']!r}; "
                      f"expected one of {', '.join(STRATEGIES)}")
    if resolved.get("format") not in ("jsonl", "tsv"):
        errors.append(f"invalid format {resolved.get('format')!r}")
    if errors:
        raise ConfigError("; ".join(sorted(errors)))
    base = path.parent

    def as_path(key):
        return (base / str(values[key])).resolve() if key in values else None

    engine = BootstrapConfig(
        strategy=str(resolved["strategy"]),
        n_threshold=int(resolved["n_threshold"]),
        m_threshold=int(resolved["m_threshold"]),
        max_iterations=int(resolved["max_iterations"]),
        top_k_patterns=int(resolved["top_k_patterns"]),
        top_k_nc_seeds=int(resolved["top_k_nc_seeds"]),
        snippet_cap=int(resolved["snippet_cap"]),
        min_ngram_count=int(resolved["min_ngram_count"]),
        workers=int(resolved["workers"]),
    )
    return RunConfig(
        engine=engine,
        index=as_path("index"),
        ngrams=as_path("ngrams"),
        output_dir=as_path("output_dir"),
        seed_ncs=as_path("seed_ncs"),
        seed_patterns=as_path("seed_patterns"),
        seed_pairs=as_path("seed_pairs"),
        format=str(resolved["format"]),
        raw=tuple(sorted(values.items())),
    )
