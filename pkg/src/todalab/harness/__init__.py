"""Configuration, check registry and the command line."""
from .cli import main, run_verify
from .config import ConfigError, RunConfig
from .registry import SYSTEM_SPECS, CheckSpec, SystemSpec

__all__ = ["CheckSpec", "ConfigError", "RunConfig", "SYSTEM_SPECS", "SystemSpec", "main", "run_verify"]
