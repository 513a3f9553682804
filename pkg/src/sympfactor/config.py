"""Tolerances and run configuration."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

# Library-wide defaults; every tolerance-taking function accepts an override.
TOL_SYMP = 1e-10     # relative ||M^T J M - J|| / max(1, ||M||)^2
TOL_FACTOR = 1e-8    # relative reconstruction residual
TOL_RANK = 1e-12     # singular value cutoff, relative to sigma_max * max(shape)
TOL_SOLVE = 1e-10    # residual of symmetric solves and lifts
TOL_ZERO = 1e-12     # "a != 0" test for float vectors
TOL_PIVOT = 1e-8     # SL2 pivot threshold, relative to ||M||


@dataclass(frozen=True)
class Config:
    tol_symp: float = TOL_SYMP
    tol_factor: float = TOL_FACTOR
    tol_rank: float = TOL_RANK
    tol_solve: float = TOL_SOLVE
    tol_zero: float = TOL_ZERO
    tol_pivot: float = TOL_PIVOT
    mode: str = "float"
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            if f.name.startswith("tol_") and not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")
        if self.mode not in ("float", "exact"):
            raise ValueError(f"mode must be 'float' or 'exact', got {self.mode!r}")

    @classmethod
    def load(cls, path=None, overrides=None) -> "Config":
        """Defaults < config file (TOML or JSON) < explicit overrides.

        The seed falls back to ``SYMPFACTOR_SEED`` when neither the file nor
        the overrides set it.
        """
        values = {}
        if path is not None:
            values.update(_read_config_file(Path(path)))
        if "seed" not in values and "SYMPFACTOR_SEED" in os.environ:
            values["seed"] = int(os.environ["SYMPFACTOR_SEED"])
        for k, v in (overrides or {}).items():
            if v is not None:
                values[k] = v
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**values)

    def with_(self, **kw) -> "Config":
        return replace(self, **kw)

    def as_dict(self) -> dict:
        return asdict(self)


def _read_config_file(path: Path) -> dict:
    text = path.read_text()
    if path.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # python < 3.11
            import tomli as tomllib
        data = tomllib.loads(text)
    else:
        data = json.loads(text)
    return dict(data.get("sympfactor", data))
