"""Run configuration: defaults, a flat ``key = value`` file, then command-line overrides."""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

SCENARIOS = ("lemma1", "lemma2a", "lemma2b", "neumann", "combined", "sweep", "convergence")
CONVERGENCE_TARGETS = ("rectangle", "oscillator", "window", "wedge")
SWEEPABLE = {
    "lemma1": ("L", "h", "eps"),
    "oscillator": ("alpha", "beta"),
    "lemma2a": ("alpha", "beta"),
    "lemma2b": ("L", "c"),
    "halfline": ("alpha", "eps"),
}
MAX_SWEEP_POINTS = 10_000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "lemma1"
    # geometry and physics
    L: float = 1.5
    h: float = 1.2
    eps: float = 0.05
    alpha: float = 1.0
    beta: float = 4.0
    eps_list: tuple = (0.2, 0.1, 0.05)
    scaling: bool = True
    betas: tuple = (0.5, 1.0, 2.0, 3.0, 4.0)
    c: float = 0.25
    L_min: float = 10.0
    L_max: float = 500.0
    L_count: int = 40
    eps_primes: tuple = (0.5, 0.25, 0.125)
    extent: float = 8.0
    # numerics; spacing None picks a per-scenario default
    spacing: Optional[float] = None
    levels: int = 3
    truncation: float = 2.0
    max_truncation: float = 16.0
    tol: float = 1e-8
    seed: int = 0
    threads: int = 1
    # sweeps and convergence studies
    target: str = "lemma1"
    param: str = "eps"
    values: tuple = ()
    param2: str = ""
    values2: tuple = ()
    study: str = "rectangle"
    # output
    out: str = "results"
    plot: bool = False

    def validate(self) -> "RunConfig":
        def bad(name, why):
            raise ConfigError(f"field '{name}': {why}")

        if self.scenario not in SCENARIOS:
            bad("scenario", f"unknown scenario {self.scenario!r}")
        for name in ("L", "h", "alpha", "beta", "c", "L_min", "L_max", "extent", "truncation",
                     "max_truncation", "tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                bad(name, f"must be a positive finite number, got {v!r}")
        if not 0 <= self.eps < 1:
            bad("eps", f"must lie in [0, 1), got {self.eps!r}")
        if self.spacing is not None and not self.spacing > 0:
            bad("spacing", "must be positive")
        if self.levels < 2:
            bad("levels", "need at least two levels of the halving ladder")
        if self.seed < 0:
            bad("seed", "must be nonnegative")
        if self.threads < 1:
            bad("threads", "must be at least 1")
        if self.L_min > self.L_max:
            bad("L_min", "exceeds L_max")
        if self.target not in SWEEPABLE:
            bad("target", f"must be one of {tuple(SWEEPABLE)}")
        if self.study not in CONVERGENCE_TARGETS:
            bad("study", f"must be one of {CONVERGENCE_TARGETS}")
        if self.scenario == "sweep":
            if not self.values:
                bad("values", "empty sweep range")
            if self.param2 and not self.values2:
                bad("values2", "empty sweep range")
            for name in (self.param, self.param2) if self.param2 else (self.param,):
                if name not in SWEEPABLE[self.target]:
                    bad("param", f"{name!r} cannot be swept for target {self.target!r}; "
                                 f"choose from {SWEEPABLE[self.target]}")
            n = len(self.values) * (len(self.values2) if self.param2 else 1)
            if n > MAX_SWEEP_POINTS:
                bad("values", f"{n} sweep points exceed {MAX_SWEEP_POINTS}")
            for v in tuple(self.values) + tuple(self.values2):
                if not math.isfinite(v):
                    bad("values", "sweep values must be finite")
        return self

    def ladder(self, coarse: float) -> list:
        """The strictly halving spacing ladder starting at ``coarse``."""
        return [coarse / 2 ** k for k in range(self.levels)]


_FIELDS = {f.name: f for f in fields(RunConfig)}
_DEFAULTS = RunConfig()


def _coerce(name: str, raw):
    default = getattr(_DEFAULTS, name)
    if isinstance(default, bool):
        if not isinstance(raw, bool):
            raise ConfigError(f"field '{name}': expected true/false, got {raw!r}")
        return raw
    if isinstance(default, tuple):
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            raw = [raw]
        if not isinstance(raw, (list, tuple)) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
            raise ConfigError(f"field '{name}': expected a list of numbers, got {raw!r}")
        return tuple(float(v) for v in raw)
    if isinstance(default, str):
        if not isinstance(raw, str):
            raise ConfigError(f"field '{name}': expected a string, got {raw!r}")
        return raw
    if isinstance(default, int):
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ConfigError(f"field '{name}': expected an integer, got {raw!r}")
        return raw
    # floats, including the optional spacing
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(f"field '{name}': expected a number, got {raw!r}")
    return float(raw)


def _strip_comment(line: str) -> str:
    quote = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def _parse_value(text: str):
    if text in ("true", "false"):
        return text == "true"
    return ast.literal_eval(text)


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse flat ``key = value`` lines (``#`` comments, TOML scalars and arrays)."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = _strip_comment(line).strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, _, value = (part.strip() for part in body.partition("="))
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown field '{key}'")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: field '{key}' given twice")
        try:
            raw = _parse_value(value)
        except (ValueError, SyntaxError):
            raise ConfigError(f"{source}:{lineno}: field '{key}': cannot parse value {value!r}") from None
        try:
            out[key] = _coerce(key, raw)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    return out


def load_config(path: Optional[str], overrides: dict, scenario: str) -> RunConfig:
    """Defaults, then the file at ``path``, then non-``None`` ``overrides``."""
    values = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise ConfigError(f"{path}: cannot read config ({exc})") from None
        values.update(parse_config_text(text, str(p)))
    for key, v in overrides.items():
        if v is not None:
            values[key] = _coerce(key, v)
    values["scenario"] = scenario
    return replace(_DEFAULTS, **values).validate()
