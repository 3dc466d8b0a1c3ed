"""
Flat key=value experiment configuration.

A config file holds one ``key = value`` pair per line; ``#`` starts a
comment. Grid keys (``n``, ``lambda``, ``T``, ``R``, ``r``,
``erasure_rate``) take comma-separated lists. Command-line flags use the
same names with ``-`` in place of ``_`` and override file values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

from ..errors import DomainError

TASKS = ("identify-pauli", "bell-sample", "shadows", "purity", "happy", "simon", "verify-lemmas")
FORMATS = ("csv", "json-lines")
SIMON_MODES = ("recover", "tv")
ARMS = ("both", "H0", "H1")

GRID_KEYS = {"n": int, "lambda": float, "T": int, "R": int, "r": int, "erasure_rate": float}
SCALAR_KEYS = {
    "task": str, "C": float, "trials": int, "seed": int, "out": str, "format": str, "workers": int,
    "swap_reps": int, "queries": int, "mode": str, "N": int, "pauli": str, "eps": float, "arm": str,
    "depth": int, "min_success": float, "timing": bool,
}
KNOWN_KEYS = set(GRID_KEYS) | set(SCALAR_KEYS)


class ConfigError(ValueError):
    """Malformed, missing or unknown configuration values."""


@dataclass(frozen=True)
class ExperimentConfig:
    task: str
    n: tuple[int, ...] = ()
    lam: tuple[float, ...] = ()
    T: tuple[int, ...] = ()
    C: float = 8.0
    trials: int = 100
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    workers: int = 1
    R: tuple[int, ...] = ()
    r: tuple[int, ...] = ()
    erasure_rate: tuple[float, ...] = ()
    swap_reps: int = 5
    queries: int = 60
    mode: str = "recover"
    N: int = 1000
    pauli: str | None = None
    eps: float = 0.3
    arm: str = "both"
    depth: int = 1
    min_success: float | None = None
    timing: bool = False

    def to_dict(self) -> dict:
        """Flat mapping with the external key names; lists are comma-joined strings."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            key = "lambda" if f.name == "lam" else f.name
            if value is None or (isinstance(value, tuple) and not value):
                continue
            if isinstance(value, tuple):
                value = ",".join(_fmt(v) for v in value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            else:
                value = _fmt(value)
            out[key] = value
        return out

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.to_dict().items())


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def read_config_file(path: str | Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _convert(key: str, kind, text: str):
    if kind is bool:
        low = text.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {text!r}")
    if kind is str:
        return text.strip()
    try:
        return kind(text.strip())
    except ValueError:
        raise ConfigError(f"{key}: malformed number {text!r}") from None


def _grid(key: str, kind, value) -> tuple:
    if isinstance(value, (list, tuple)):
        items = [str(v) for v in value]
    else:
        items = [s for s in str(value).split(",") if s.strip()]
    if not items:
        raise ConfigError(f"{key}: empty grid")
    return tuple(_convert(key, kind, s) for s in items)


def parse_config(file_values: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Merge file values with overriding flags and validate.

    Values may be strings (as read from a file or the command line) or
    already-typed Python values. ``None`` overrides are ignored.
    """
    merged: dict = {}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            key = key.replace("-", "_")
            if key not in KNOWN_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            merged[key] = value
    if "task" not in merged:
        raise ConfigError("missing required key 'task'")
    kwargs: dict = {}
    for key, value in merged.items():
        if key in GRID_KEYS:
            kwargs["lam" if key == "lambda" else key] = _grid(key, GRID_KEYS[key], value)
        else:
            kind = SCALAR_KEYS[key]
            kwargs[key] = value if isinstance(value, kind) and not isinstance(value, str) else _convert(key, kind, str(value))
    cfg = ExperimentConfig(**kwargs)
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    if cfg.task not in TASKS:
        raise ConfigError(f"unknown task {cfg.task!r}; choose from {', '.join(TASKS)}")
    if cfg.format not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    if cfg.trials < 1:
        raise ConfigError("trials must be at least 1")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned value")
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")
    for lam in cfg.lam:
        if not 0.0 <= lam <= 1.0 or math.isnan(lam):
            raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    for rate in cfg.erasure_rate:
        if not 0.0 <= rate <= 1.0:
            raise DomainError(f"erasure_rate must lie in [0, 1], got {rate}")
    if any(n < 1 for n in cfg.n):
        raise ConfigError("n values must be positive")
    if any(t < 1 for t in cfg.T):
        raise ConfigError("T values must be positive")
    if cfg.C <= 0:
        raise DomainError("C must be positive")
    if cfg.mode not in SIMON_MODES:
        raise ConfigError(f"mode must be one of {SIMON_MODES}")
    if cfg.arm not in ARMS:
        raise ConfigError(f"arm must be one of {ARMS}")
    if cfg.min_success is not None and not 0.0 <= cfg.min_success <= 1.0:
        raise ConfigError("min_success must lie in [0, 1]")
    if cfg.task == "happy":
        for key in ("R", "r", "erasure_rate"):
            if not getattr(cfg, key):
                raise ConfigError(f"task happy needs key {key!r}")
    else:
        if not cfg.n:
            raise ConfigError(f"task {cfg.task} needs key 'n'")
        if not cfg.lam:
            raise ConfigError(f"task {cfg.task} needs key 'lambda'")
    if cfg.task == "identify-pauli" and not cfg.T and any(lam >= 1.0 for lam in cfg.lam):
        raise DomainError("lambda = 1 gives an infinite sample budget; pass T explicitly")
    if cfg.task == "shadows" and any(lam >= 1.0 for lam in cfg.lam):
        raise DomainError("the shadow estimator is undefined at lambda = 1")
