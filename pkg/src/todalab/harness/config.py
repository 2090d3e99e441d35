"""Run configuration: flags merged over an optional JSON file."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from ..geomcore import SamplerConfig, default_seed

SYSTEMS = ("classical", "relativistic", "bn", "kostant", "lie-catalog")
MODES = ("exact", "float")


class ConfigError(ValueError):
    """Bad configuration; the CLI maps it to exit status 2."""


@dataclass
class RunConfig:
    system: str
    dim: Any = None
    checks: list[str] | str = "all"
    seed: int = field(default_factory=default_seed)
    samples: int = 100
    mode: str = "exact"
    tol: float = 1e-9
    out: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ConfigError(f"unknown system {self.system!r}; valid systems: {', '.join(SYSTEMS)}")
        if isinstance(self.checks, str):
            self.checks = "all" if self.checks.strip() == "all" else [c for c in self.checks.split(",") if c.strip()]
        self.checks = self.checks if self.checks == "all" else [c.strip() for c in self.checks]
        if self.checks != "all" and not self.checks:
            raise ConfigError("no checks selected")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ConfigError("samples must be an integer >= 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}")
        if self.mode == "float" and not (isinstance(self.tol, (int, float)) and self.tol > 0):
            raise ConfigError("tolerance must be > 0 in float mode")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def sampler(self) -> SamplerConfig:
        return SamplerConfig(samples=self.samples, seed=self.seed, mode=self.mode, tol=float(self.tol))

    def echo(self) -> dict:
        """Config as written into reports (no output path, no pool size)."""
        d = asdict(self)
        d.pop("out")
        d.pop("jobs")
        return d


_KEYS = {"system", "dim", "N", "n", "rank", "checks", "seed", "samples", "mode", "tol", "out", "jobs"}


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    bad = sorted(set(raw) - _KEYS)
    if bad:
        raise ConfigError(f"unknown config keys {bad}; valid keys: {', '.join(sorted(_KEYS))}")
    return raw


def merge(file_cfg: dict, flags: dict) -> dict:
    """Flags that were given (not None) override the file."""
    out = dict(file_cfg)
    for k in ("N", "n", "rank"):
        if k in out:
            out["dim"] = out.pop(k)
    for k, v in flags.items():
        if v is not None:
            out[k] = v
    return out
