"""Flat key=value experiment configs (same parser as presentation specs)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError, PresentationError
from .presentations import GroupPresentation, parse_keyvalues, parse_presentation

EXPERIMENTS = ("ball", "walk", "percolate", "msf", "cycles", "bounds",
               "pak-smirnova", "relative-pc")

_PRESENTATION_KEYS = ("family", "d", "k", "generators", "mode", "name")
_CONFIG_KEYS = _PRESENTATION_KEYS + (
    "experiment", "radius", "radius_grid", "p", "p_grid", "trials", "master_seed",
    "size_floor", "subset_cap", "n_max", "gamma_n_max", "method", "L", "kfold",
    "out_dir",
)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    presentation: GroupPresentation
    mode: str = "geometric"
    radius: int = 16
    radius_grid: tuple = ()
    p: float | None = None
    p_grid: tuple = ()
    trials: int = 100
    master_seed: int = 0
    size_floor: int | None = None
    subset_cap: int = 8
    n_max: int = 60
    gamma_n_max: int = 0
    method: str = "invasion"
    L: int | None = None
    kfold: int = 1
    out_dir: str | None = None
    raw: dict = field(default_factory=dict)

    def echo(self) -> dict:
        """Config content for the JSON report (deterministic ordering)."""
        return {k: self.raw[k] for k in sorted(self.raw)}


def _intval(kv, key, default, lo=None, hi=None):
    if key not in kv:
        return default
    try:
        v = int(kv[key])
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {kv[key]!r}") from exc
    if lo is not None and v < lo:
        raise ConfigError(f"{key} must be >= {lo}, got {v}")
    if hi is not None and v > hi:
        raise ConfigError(f"{key} must be <= {hi}, got {v}")
    return v


def _floatval(kv, key, default, lo=None, hi=None):
    if key not in kv:
        return default
    try:
        v = float(kv[key])
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {kv[key]!r}") from exc
    if lo is not None and v < lo:
        raise ConfigError(f"{key} must be >= {lo}, got {v}")
    if hi is not None and v > hi:
        raise ConfigError(f"{key} must be <= {hi}, got {v}")
    return v


def parse_config(text: str, experiment: str | None = None) -> ExperimentConfig:
    """Parse and validate an experiment config; unknown keys are rejected."""
    try:
        kv = parse_keyvalues(text)
    except PresentationError as exc:
        raise ConfigError(str(exc)) from exc
    unknown = set(kv) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    exp = kv.get("experiment", experiment)
    if exp is None:
        raise ConfigError("no experiment named (config key 'experiment' or CLI argument)")
    if experiment is not None and "experiment" in kv and kv["experiment"] != experiment:
        raise ConfigError(
            f"config names experiment {kv['experiment']!r} but CLI asked for {experiment!r}")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {exp!r} (expected one of {EXPERIMENTS})")

    if "family" not in kv:
        raise ConfigError("config must include a presentation (family = lattice|free|matrix)")
    pres_lines = "\n".join(f"{k} = {kv[k]}" for k in _PRESENTATION_KEYS
                           if k in kv and k != "mode")
    try:
        pres = parse_presentation(pres_lines)
    except PresentationError as exc:
        raise ConfigError(f"bad presentation: {exc}") from exc

    mode = kv.get("mode", "geometric")
    if mode not in ("geometric", "family"):
        raise ConfigError(f"mode must be geometric|family, got {mode!r}")

    p_grid = ()
    if "p_grid" in kv:
        try:
            p_grid = tuple(float(x) for x in kv["p_grid"].replace(",", " ").split())
        except ValueError as exc:
            raise ConfigError(f"bad p_grid: {kv['p_grid']!r}") from exc
        for x in p_grid:
            if not 0.0 <= x <= 1.0:
                raise ConfigError(f"p_grid entry {x} outside [0, 1]")

    radius_grid = ()
    if "radius_grid" in kv:
        try:
            radius_grid = tuple(int(x) for x in kv["radius_grid"].replace(",", " ").split())
        except ValueError as exc:
            raise ConfigError(f"bad radius_grid: {kv['radius_grid']!r}") from exc
        for r in radius_grid:
            if r < 2:
                raise ConfigError(f"radius_grid entry {r} too small")

    cfg = ExperimentConfig(
        experiment=exp,
        presentation=pres,
        mode=mode,
        radius=_intval(kv, "radius", 16, lo=0),
        radius_grid=radius_grid,
        p=_floatval(kv, "p", None, lo=0.0, hi=1.0),
        p_grid=p_grid,
        trials=_intval(kv, "trials", 100, lo=1),
        master_seed=_intval(kv, "master_seed", 0, lo=0),
        size_floor=_intval(kv, "size_floor", None, lo=1),
        subset_cap=_intval(kv, "subset_cap", 8, lo=1),
        n_max=_intval(kv, "n_max", 60, lo=2),
        gamma_n_max=_intval(kv, "gamma_n_max", 0, lo=0),
        method=kv.get("method", "invasion"),
        L=_intval(kv, "L", None, lo=8),
        kfold=_intval(kv, "kfold", 1, lo=1),
        out_dir=kv.get("out_dir"),
        raw=dict(kv, experiment=exp),
    )
    if cfg.method not in ("invasion", "crossing", "raw_root", "polynomial_fit"):
        raise ConfigError(
            f"method must be invasion|crossing (percolation) or "
            f"raw_root|polynomial_fit (walk), got {cfg.method!r}")
    return cfg
