"""Run settings, config-file parsing and thread-cap handling."""

import os
from dataclasses import dataclass, replace

from .errors import InvalidParameterError

__all__ = ["RunSettings", "load_config", "apply_overrides", "thread_cap"]

_INT_KEYS = {"alpha_levels", "quad_nodes", "seed"}
_FLOAT_KEYS = {"epsilon", "fd_step"}
_KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS


@dataclass(frozen=True)
class RunSettings:
    """Defaults shared by the CLI and the benchmark runner."""

    alpha_levels: int = 21
    quad_nodes: int = 64
    epsilon: float = 1e-6
    fd_step: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.alpha_levels < 1:
            raise InvalidParameterError("alpha_levels must be >= 1")
        if self.quad_nodes < 32:
            raise InvalidParameterError("quad_nodes must be >= 32")
        if self.epsilon <= 0 or self.fd_step <= 0:
            raise InvalidParameterError("epsilon and fd_step must be positive")


def load_config(path):
    """Parse a flat key=value config file (UTF-8, '#' comments).

    Returns a dict of typed overrides; unknown keys are rejected so typos
    surface as usage errors instead of silently keeping defaults.
    """
    overrides = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidParameterError(
                    f"{path}:{lineno}: expected key=value, got {raw.strip()!r}"
                )
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _KNOWN_KEYS:
                raise InvalidParameterError(
                    f"{path}:{lineno}: unknown config key {key!r}"
                )
            try:
                overrides[key] = int(value) if key in _INT_KEYS else float(value)
            except ValueError as exc:
                raise InvalidParameterError(
                    f"{path}:{lineno}: bad value for {key}: {value!r}"
                ) from exc
    return overrides


def apply_overrides(settings, overrides):
    """New RunSettings with the given key/value overrides applied."""
    return replace(settings, **overrides)


def thread_cap(default=1):
    """Worker-parallelism cap from the HRA_THREADS environment variable."""
    raw = os.environ.get("HRA_THREADS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise InvalidParameterError(f"HRA_THREADS must be an integer, got {raw!r}") from exc
    return max(1, value)
