"""Analysis configuration shared by the command line and the experiment scripts."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .errors import RangeError
from .limits import EpsilonLadder, LimitConfig
from .moduli import parse_modulus


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything an ``analyze`` run depends on.

    Exactly one of ``fn`` and ``csv`` names the function.  Evaluation points are
    the explicit ``points`` or, when ``interval`` and ``grid`` are given, the
    uniform grid with ``grid`` points.
    """

    fn: Optional[str] = None
    csv: Optional[str] = None
    points: tuple[float, ...] = ()
    interval: Optional[tuple[float, float]] = None
    grid: Optional[int] = None
    modulus: str = "linear"
    beta: Optional[float] = None
    eps0: float = 0.1
    ratio: float = 0.5
    steps: int = 24
    floor: float = 1e-9
    tol_conv: float = 1e-6
    tol_add: float = 1e-9
    jump_threshold: float = 1e-3
    nonzero_threshold: float = 1e-3
    budget: float = 1e-3
    resolution: int = 1024
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if (self.fn is None) == (self.csv is None):
            raise RangeError("give exactly one of fn and csv")
        for name in ("tol_conv", "tol_add", "jump_threshold", "nonzero_threshold", "budget"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise RangeError(f"{name} must be positive, got {v!r}")
        if self.interval is not None:
            a, b = self.interval
            if not a < b:
                raise RangeError(f"interval [{a}, {b}] is empty")
        if self.grid is not None and self.grid < 2:
            raise RangeError("grid needs at least 2 points")
        if self.grid is not None and self.interval is None:
            raise RangeError("grid requires an interval")
        if self.resolution < 2:
            raise RangeError("resolution must be at least 2")
        if self.workers < 1:
            raise RangeError("workers must be at least 1")
        if self.beta is not None and not 0 < self.beta <= 1:
            raise RangeError("beta must lie in (0, 1]")
        self.ladder  # validates the ladder parameters
        if self.modulus.strip().lower() != "empirical":
            try:
                parse_modulus(self.modulus)
            except ValueError as exc:
                raise RangeError(f"bad modulus {self.modulus!r}: {exc}") from None

    @property
    def ladder(self) -> EpsilonLadder:
        return EpsilonLadder(self.eps0, self.ratio, self.steps, self.floor)

    @property
    def limit(self) -> LimitConfig:
        return LimitConfig(tol_conv=self.tol_conv)

    @property
    def function_spec(self) -> str:
        return self.fn if self.fn is not None else f"csv:{self.csv}"

    def evaluation_points(self) -> list[float]:
        pts = list(self.points)
        if self.grid is not None and self.interval is not None:
            pts += np.linspace(self.interval[0], self.interval[1], self.grid).tolist()
        return sorted(set(pts))

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["points"] = list(self.points)
        d["interval"] = list(self.interval) if self.interval is not None else None
        return d

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "AnalysisConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise RangeError(f"unknown configuration keys: {', '.join(unknown)}")
        kw = dict(data)
        if kw.get("points") is not None:
            kw["points"] = tuple(float(p) for p in kw["points"])
        if kw.get("interval") is not None:
            a, b = kw["interval"]
            kw["interval"] = (float(a), float(b))
        try:
            return cls(**kw)
        except TypeError as exc:
            raise RangeError(str(exc)) from None


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read a JSON object of configuration keys."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise RangeError(f"config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise RangeError(f"config file {path} must hold a JSON object")
    return data
