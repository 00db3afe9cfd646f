"""Flat key=value experiment configuration with per-command defaults."""

from __future__ import annotations

import difflib
import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved settings for one experiment run.

    Every field has a per-command default; a config file only overrides.
    l_min/l_max bound the probe modes (0 excluded where the experiment
    requires it), n_modes is the working band, p the vanishing order for
    rate probes, r0/r_max radial scales, eps0/theta the smoothing schedule,
    tol the assertion tolerance, samples the randomized-suite size.
    """

    experiment: str = ""
    n_modes: int = 48
    l_min: int = 1
    l_max: int = 32
    p: float = 0.5
    r0: float = 1.0
    r_max: float = 30.0
    eps0: float = 1.0
    theta: float = 1.25
    tol: float = 1e-8
    max_steps: int = 30
    samples: int = 200
    seed: int = 20260815
    out_dir: str = "edl-out"
    do_assert: bool = True

    def validate(self):
        if self.n_modes <= 0:
            raise ConfigError(f"n_modes must be positive, got {self.n_modes}")
        if self.l_min <= 0:
            raise ConfigError(f"l_min must be positive, got {self.l_min}")
        if self.l_max < self.l_min:
            raise ConfigError(f"l_max {self.l_max} below l_min {self.l_min}")
        for name in ("p", "r0", "r_max", "eps0", "tol"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.theta <= 1.0:
            raise ConfigError(f"theta must exceed 1, got {self.theta}")
        if self.max_steps <= 0 or self.samples <= 0:
            raise ConfigError("max_steps and samples must be positive")
        return self


class ConfigError(ValueError):
    pass


_INT_KEYS = {"n_modes", "l_min", "l_max", "max_steps", "samples", "seed"}
_FLOAT_KEYS = {"p", "r0", "r_max", "eps0", "theta", "tol"}
_STR_KEYS = {"out_dir"}
_BOOL_KEYS = {"do_assert"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _BOOL_KEYS

COMMAND_DEFAULTS = {
    "modes": dict(l_max=32, r_max=26.0, tol=1e-8),
    "obstruction": dict(l_max=24, n_modes=24, tol=1e-5),
    "conormal": dict(l_min=8, l_max=256, tol=0.05),
    "gram": dict(l_min=1, l_max=96, tol=2.0),
    "deform-op": dict(n_modes=128, samples=6, tol=0.1),
    "bg-check": dict(l_min=8, l_max=128, tol=0.2),
    "decay": dict(l_min=4, l_max=64, samples=200, tol=0.2),
    "nash-moser": dict(n_modes=96, max_steps=30, tol=1e-8),
    "continuation": dict(n_modes=24, tol=1e-6),
}


def _parse_value(key, raw, line_no):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ConfigError(
            f"line {line_no}: invalid value {raw!r} for key {key!r}"
        ) from None


def parse_config_text(text, experiment=""):
    """Parse flat key=value lines into a validated ExperimentConfig.

    Empty lines and #-comments are skipped; unknown keys fail with a
    suggestion from the known-key list and the offending line number.
    """
    overrides = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _ALL_KEYS:
            near = difflib.get_close_matches(key, sorted(_ALL_KEYS), n=3)
            hint = f" (did you mean: {', '.join(near)}?)" if near else ""
            raise ConfigError(f"line {line_no}: unknown key {key!r}{hint}")
        overrides[key] = _parse_value(key, raw, line_no)
    return build_config(experiment, overrides)


def build_config(experiment, overrides=None):
    base = dict(COMMAND_DEFAULTS.get(experiment, {}))
    base.update(overrides or {})
    valid = {f.name for f in fields(ExperimentConfig)}
    base = {k: v for k, v in base.items() if k in valid}
    return ExperimentConfig(experiment=experiment, **base).validate()


def load_config(path, experiment=""):
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as handle:
        return parse_config_text(handle.read(), experiment)


def with_overrides(config, **kwargs):
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return replace(config, **kwargs).validate() if kwargs else config
