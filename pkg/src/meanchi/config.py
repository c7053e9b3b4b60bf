"""Experiment configuration: TOML parsing and validation.

The config is a small TOML document with exactly these keys (unknown keys
are errors)::

    mode = "validate"            # predict | simulate | validate | density
    alpha = 0.0

    [model]
    family = "squared_exponential_isotropic"
    sigma2 = 1.0
    ell = 0.25                   # or A = [[...], ...] for the anisotropic family
    dim = 2                      # required unless A or window.generators pin it

    [window]
    kind = "cube"                # cube | zonotope | ball
    side = 2.0                   # or generators = [[...], ...] or radius = 1.0

    [grid]                       # required for simulate/validate
    n = 512
    h = 0.03125
    window_points = 65

    [mc]                         # required for validate
    replications = 200
    seed = 1234
"""

from __future__ import annotations

import math
import warnings

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass

import numpy as np

from .models import CovarianceModel
from .simulate import GridSpec
from .zonotope import Zonotope

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config"]

MODES = ("predict", "simulate", "validate", "density")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    alpha: float
    model: CovarianceModel
    window_kind: str | None = None
    window_side: float | None = None
    window_radius: float | None = None
    window_generators: np.ndarray | None = None
    grid: GridSpec | None = None
    window_points: int | None = None
    replications: int | None = None
    seed: int | None = None

    def window_zonotope(self) -> Zonotope:
        if self.window_kind == "cube":
            return Zonotope.cube(self.model.dim, self.window_side)
        if self.window_kind == "zonotope":
            return Zonotope(self.window_generators)
        raise ConfigError(f"window kind {self.window_kind!r} is not a zonotope")

    def echo(self) -> dict:
        """Plain-dict rendering of the config for reports."""
        model: dict = {
            "family": self.model.family,
            "dim": self.model.dim,
            "sigma2": self.model.sigma2,
        }
        if self.model.is_isotropic:
            model["ell"] = self.model.ell
        else:
            model["A"] = self.model.shape.tolist()
        out: dict = {"mode": self.mode, "alpha": self.alpha, "model": model}
        window: dict = {"kind": self.window_kind}
        if self.window_side is not None:
            window["side"] = self.window_side
        if self.window_radius is not None:
            window["radius"] = self.window_radius
        if self.window_generators is not None:
            window["generators"] = self.window_generators.tolist()
        out["window"] = window
        if self.grid is not None:
            out["grid"] = {
                "n": self.grid.n,
                "h": self.grid.h,
                "window_points": self.window_points,
            }
        if self.replications is not None:
            out["mc"] = {"replications": self.replications, "seed": self.seed}
        return out


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(raw)


def _take(table: dict, key, required=False, default=None):
    if key in table:
        return table.pop(key)
    if required:
        raise ConfigError(f"missing required key {key!r}")
    return default


def _reject_unknown(table: dict, section: str):
    if table:
        raise ConfigError(f"unknown keys in {section}: {sorted(table)}")


def parse_config(raw: dict) -> ExperimentConfig:
    raw = dict(raw)
    mode = _take(raw, "mode", required=True)
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    alpha = float(_take(raw, "alpha", required=True))

    model_tab = dict(_take(raw, "model", required=True))
    family = _take(model_tab, "family", required=True)
    sigma2 = float(_take(model_tab, "sigma2", required=True))
    ell = _take(model_tab, "ell")
    a_rows = _take(model_tab, "A")
    dim_key = _take(model_tab, "dim")
    _reject_unknown(model_tab, "[model]")
    if (ell is None) == (a_rows is None):
        raise ConfigError("specify exactly one of model.ell and model.A")

    window_tab = dict(_take(raw, "window", required=True))
    kind = _take(window_tab, "kind", required=True)
    side = _take(window_tab, "side")
    radius = _take(window_tab, "radius")
    gens = _take(window_tab, "generators")
    _reject_unknown(window_tab, "[window]")

    grid_tab = _take(raw, "grid")
    mc_tab = _take(raw, "mc")
    _reject_unknown(raw, "config")

    try:
        if family == "squared_exponential_isotropic":
            if gens is not None:
                dim = np.atleast_2d(np.asarray(gens, dtype=float)).shape[1]
                if dim_key is not None and int(dim_key) != dim:
                    raise ConfigError(
                        f"model.dim = {dim_key} contradicts the generator dimension {dim}"
                    )
            elif dim_key is not None:
                dim = int(dim_key)
            else:
                raise ConfigError(
                    "the ambient dimension is not determined; set model.dim "
                    "or use a zonotope window"
                )
            model = CovarianceModel.isotropic(dim, sigma2, float(ell))
        else:
            model = CovarianceModel.anisotropic(sigma2, a_rows)
            if dim_key is not None and int(dim_key) != model.dim:
                raise ConfigError(
                    f"model.dim = {dim_key} contradicts the shape-matrix dimension {model.dim}"
                )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if kind == "cube":
        if side is None:
            raise ConfigError("cube window requires window.side")
        side = float(side)
        if side <= 0:
            raise ConfigError(f"window side must be positive, got {side}")
        window = dict(window_kind="cube", window_side=side)
    elif kind == "ball":
        if radius is None:
            raise ConfigError("ball window requires window.radius")
        radius = float(radius)
        if radius <= 0:
            raise ConfigError(f"window radius must be positive, got {radius}")
        window = dict(window_kind="ball", window_radius=radius)
    elif kind == "zonotope":
        if gens is None:
            raise ConfigError("zonotope window requires window.generators")
        gens_arr = np.atleast_2d(np.asarray(gens, dtype=float))
        try:
            Zonotope(gens_arr)  # eager validation, incl. the m <= 16 bound
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if gens_arr.shape[1] != model.dim:
            raise ConfigError("generator dimension does not match the model")
        window = dict(window_kind="zonotope", window_generators=gens_arr)
    else:
        raise ConfigError(f"unknown window kind {kind!r}")

    grid = None
    window_points = None
    replications = None
    seed = None

    needs_grid = mode in ("simulate", "validate")
    if grid_tab is not None:
        grid_tab = dict(grid_tab)
        n = int(_take(grid_tab, "n", required=True))
        h = float(_take(grid_tab, "h", required=True))
        window_points = int(_take(grid_tab, "window_points", required=True))
        _reject_unknown(grid_tab, "[grid]")
        try:
            grid = GridSpec(model.dim, n, h)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not 2 <= window_points <= n:
            raise ConfigError(
                f"grid.window_points must lie in [2, n], got {window_points}"
            )
    elif needs_grid:
        raise ConfigError(f"mode {mode!r} requires a [grid] section")

    if mc_tab is not None:
        mc_tab = dict(mc_tab)
        replications = int(_take(mc_tab, "replications", required=True))
        seed = int(_take(mc_tab, "seed", required=True))
        _reject_unknown(mc_tab, "[mc]")
        if replications < 1:
            raise ConfigError(f"mc.replications must be positive, got {replications}")
    elif mode == "validate":
        raise ConfigError("validate mode requires an [mc] section")

    cfg = ExperimentConfig(
        mode=mode,
        alpha=alpha,
        model=model,
        grid=grid,
        window_points=window_points,
        replications=replications,
        seed=seed,
        **window,
    )
    _validate_mode(cfg)
    return cfg


def _validate_mode(cfg: ExperimentConfig) -> None:
    if cfg.mode == "validate":
        if cfg.replications < 30:
            raise ConfigError(
                f"validate mode needs at least 30 replications, got {cfg.replications}"
            )
        if cfg.window_kind != "cube":
            raise ConfigError("validate mode supports cube windows only")
        win_extent = (cfg.window_points - 1) * cfg.grid.h
        if abs(win_extent - cfg.window_side) > 1e-9 * max(cfg.window_side, 1.0):
            raise ConfigError(
                f"window side {cfg.window_side} does not match the counting "
                f"sub-grid extent (window_points-1)*h = {win_extent}"
            )
    if cfg.grid is not None:
        ell_eff = _correlation_scale(cfg.model)
        win_extent = (cfg.window_points - 1) * cfg.grid.h
        if win_extent < 4.0 * ell_eff:
            raise ConfigError(
                f"window extent {win_extent:g} is below 4 correlation lengths "
                f"({4.0 * ell_eff:g})"
            )
        if win_extent < 8.0 * ell_eff:
            warnings.warn(
                f"window extent {win_extent:g} is below 8 correlation lengths; "
                "boundary effects may be visible",
                stacklevel=2,
            )


def _correlation_scale(model: CovarianceModel) -> float:
    if model.is_isotropic:
        return model.ell
    return 1.0 / math.sqrt(float(np.linalg.eigvalsh(model.shape).max()))
