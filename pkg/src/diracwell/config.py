"""Sweep configuration: defaults per mode, flat config files, validation."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError

MODES = (
    "width-sweep", "energy-sweep", "phase-sweep", "packet",
    "threshold-table", "compare-nonrel", "validate",
)

# Default grids per mode; anything not listed falls back to SweepConfig's.
MODE_DEFAULTS = {
    "width-sweep": dict(alpha=1.01, beta=0.4, width_min=0.05, width_max=4 * math.pi, points=2000),
    "phase-sweep": dict(alpha=1.01, beta=0.4, width_min=0.05, width_max=4 * math.pi, points=2000),
    "energy-sweep": dict(beta=0.4, gamma=0.01, alpha_min=1.0001, alpha_max=1.2, points=2000),
    "packet": dict(alpha=1.01, beta=0.4, w=300.0, width_min=0.2 * math.pi, width_max=3 * math.pi, points=21),
    "compare-nonrel": dict(alpha=1.01, beta=0.2, width_min=0.1, width_max=4 * math.pi, points=1000),
    "threshold-table": dict(beta_min=1e-4, beta_max=2.0, points=100),
    "validate": dict(),
}


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    alpha: float = 1.01
    beta: float = 0.4
    gamma: float = 0.01
    width_min: float = 0.05
    width_max: float = 4 * math.pi
    points: int = 2000
    alpha_min: float = 1.0001
    alpha_max: float = 1.2
    beta_min: float = 1e-4
    beta_max: float = 2.0
    w: float = 300.0
    nodes: int = 4096
    window_max: float | None = None
    out: str | None = None
    plot: bool = False
    trace_dir: str | None = None
    jobs: int = 1
    quick: bool = False
    skip: str = ""

    def output_path(self) -> Path:
        return Path(self.out) if self.out else Path(f"{self.mode.replace('-', '_')}.csv")

    def validate(self) -> "SweepConfig":
        def bad(field, msg):
            raise ConfigError(f"{field}: {msg}", field=field)

        if self.mode not in MODES:
            bad("mode", f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.points < 2:
            bad("points", f"need at least 2 grid points, got {self.points}")
        if self.jobs < 1:
            bad("jobs", "must be >= 1")
        if self.nodes < 32:
            bad("nodes", "must be >= 32")
        m = self.mode
        if m in ("width-sweep", "phase-sweep", "packet", "compare-nonrel"):
            if not self.alpha > 1.0:
                bad("alpha", f"must exceed 1, got {self.alpha}")
            if self.width_min < 0.0:
                bad("width-min", "must be >= 0")
            if not self.width_max > self.width_min:
                bad("width-max", "must exceed width-min")
        if m in ("width-sweep", "phase-sweep", "energy-sweep", "compare-nonrel") and self.beta < 0.0:
            bad("beta", "must be >= 0")
        if m == "packet":
            if not self.beta >= 0.0:
                bad("beta", "must be >= 0")
            if not self.w > 0.0:
                bad("w", "must be > 0")
            if self.window_max is not None and not self.window_max > self.alpha:
                bad("window-max", "must exceed alpha (the central energy)")
        if m == "energy-sweep":
            if not self.gamma > 0.0:
                bad("gamma", "must be > 0")
            if not self.alpha_min > 1.0:
                bad("alpha-min", "must exceed 1")
            if not self.alpha_max > self.alpha_min:
                bad("alpha-max", "must exceed alpha-min")
        if m == "threshold-table":
            if not self.beta_min > 0.0:
                bad("beta-min", "must be > 0")
            if not self.beta_max > self.beta_min:
                bad("beta-max", "must exceed beta-min")
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(SweepConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    value = raw.strip()
    try:
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
        if kind == "float | None":
            return None if value.lower() in ("", "none") else float(value)
        if kind == "bool":
            low = value.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        return value
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind}", field=key) from None


def normalise_key(key: str) -> str:
    return key.strip().replace("-", "_")


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = line.split("=", 1)
        key = normalise_key(key)
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}", field=key)
        values[key] = _coerce(key, raw)
    return values


def load_config_file(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}", field="config") from None
    return parse_config_text(text, source=str(path))


def build_config(mode: str, file_values: dict | None = None, overrides: dict | None = None) -> SweepConfig:
    """Mode defaults, then config-file values, then explicit overrides."""
    if mode not in MODES:
        raise ConfigError(f"mode: unknown mode {mode!r}", field="mode")
    values = dict(MODE_DEFAULTS[mode])
    values.update(file_values or {})
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    values.pop("mode", None)
    return replace(SweepConfig(mode=mode), **values).validate()
