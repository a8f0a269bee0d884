"""Increment ladders and limit estimation along them.

Every ``eps -> 0`` limit in the library is estimated from a finite decreasing
sequence of increments (an :class:`EpsilonLadder`). :func:`estimate_limit`
turns the corresponding sequence of values into a :class:`LimitEstimate`
with a status tag.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import RangeError


class Side(enum.Enum):
    Forward = 1
    Backward = -1

    @property
    def sign(self) -> int:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Side":
        key = text.strip().lower()
        if key in ("forward", "+", "right", "f"):
            return cls.Forward
        if key in ("backward", "-", "left", "b"):
            return cls.Backward
        raise ValueError(f"unknown side {text!r}")


class Status(enum.Enum):
    Converged = "converged"
    Diverged = "diverged"
    Oscillating = "oscillating"
    Indeterminate = "indeterminate"


@dataclass(frozen=True)
class EpsilonLadder:
    """Geometric increments ``eps_k = eps0 * ratio**k`` for ``k < steps``."""

    eps0: float = 0.1
    ratio: float = 0.5
    steps: int = 24
    floor: float = 1e-9

    def __post_init__(self):
        if not self.eps0 > 0:
            raise RangeError("eps0 must be positive")
        if not 0 < self.ratio < 1:
            raise RangeError("ratio must lie in (0, 1)")
        if self.steps < 3:
            raise RangeError("a ladder needs at least 3 steps")
        if not self.floor > 0:
            raise RangeError("floor must be positive")
        if self.eps0 * self.ratio ** (self.steps - 1) < self.floor:
            raise RangeError(
                f"smallest increment {self.eps0 * self.ratio ** (self.steps - 1):.3g} "
                f"is below the floor {self.floor:.3g}")

    @property
    def values(self) -> np.ndarray:
        return self.eps0 * self.ratio ** np.arange(self.steps, dtype=float)

    def __len__(self) -> int:
        return self.steps

    @classmethod
    def to_floor(cls, eps0: float, ratio: float, floor: float = 1e-9) -> "EpsilonLadder":
        """Longest ladder from ``eps0`` that stays at or above ``floor``."""
        steps = int(math.floor(math.log(floor / eps0) / math.log(ratio) + 1e-9)) + 1
        return cls(eps0, ratio, steps, floor)

    def clamped(self, room: float) -> "EpsilonLadder":
        """Same ratio and length, starting no further than ``room`` from the anchor.

        The floor is lowered if needed so that the shortened ladder stays valid.
        """
        if room <= 0:
            raise RangeError("no room on this side of the anchor")
        if self.eps0 <= room:
            return self
        smallest = room * self.ratio ** (self.steps - 1)
        return EpsilonLadder(room, self.ratio, self.steps, min(self.floor, smallest))

    def as_dict(self) -> dict:
        return {"eps0": self.eps0, "ratio": self.ratio, "steps": self.steps, "floor": self.floor}


@dataclass(frozen=True)
class LimitConfig:
    """Tolerances for :func:`estimate_limit`.

    ``window`` entries decide the plain spread test; ``fit_window`` entries
    feed the extrapolation and growth tests.
    """

    tol_conv: float = 1e-6
    window: int = 4
    fit_window: int = 6
    cap: float = 1e9
    min_exponent: float = 0.1
    max_contraction: float = 0.98


DEFAULT_LIMIT = LimitConfig()


@dataclass(frozen=True)
class LimitEstimate:
    value: float
    status: Status
    tail_spread: float
    entries_used: int
    method: str = "spread"

    @property
    def converged(self) -> bool:
        return self.status is Status.Converged

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "status": self.status.value,
            "tail_spread": self.tail_spread,
            "entries_used": self.entries_used,
            "method": self.method,
        }


def _loglog_slope(values: np.ndarray, eps: np.ndarray) -> float:
    return float(np.polyfit(np.log(eps), np.log(np.abs(values)), 1)[0])


def estimate_limit(values: Sequence[float], eps: Optional[Sequence[float]] = None,
                   config: LimitConfig = DEFAULT_LIMIT,
                   noise: Optional[Sequence[float]] = None) -> LimitEstimate:
    """Estimate ``lim_{eps->0}`` of ``values`` sampled on decreasing ``eps``.

    Tests, in order:

    1. spread: the last ``window`` values agree within ``tol_conv`` (widened
       by twice the largest rounding bound in ``noise``, if given);
    2. geometric: successive differences contract by a steady factor
       ``rho < max_contraction``; the limit is the Aitken-extrapolated value
       and the disagreement between extrapolations with the extreme ratios
       must stay below ``tol_conv``;
    3. divergence: magnitudes grow strictly and either pass ``cap`` or grow
       like a power of ``1/eps`` with exponent at least ``min_exponent``;
    4. power decay: magnitudes shrink monotonically like ``eps**a`` with
       ``a >= min_exponent``, so the limit is zero.

    Anything else is Oscillating (differences change sign) or Indeterminate.
    """
    v = np.asarray(values, dtype=float)
    n = len(v)
    cfg = config
    if eps is None:
        e = 0.5 ** np.arange(n, dtype=float)
    else:
        e = np.asarray(eps, dtype=float)
        if len(e) != n:
            raise ValueError("values and eps differ in length")
    if n == 0:
        return LimitEstimate(math.nan, Status.Indeterminate, math.nan, 0, "none")

    last = float(v[-1])
    if not np.all(np.isfinite(v[-cfg.window:])):
        tail = v[-cfg.window:]
        if np.all(np.isinf(tail)) and len(set(np.sign(tail))) == 1:
            return LimitEstimate(float(tail[-1]), Status.Diverged, math.inf, len(tail), "cap")
        return LimitEstimate(last, Status.Indeterminate, math.nan, len(tail), "none")

    if n < cfg.window:
        spread = float(np.ptp(v))
        return LimitEstimate(last, Status.Indeterminate, spread, n, "none")

    tail = v[-cfg.window:]
    spread = float(np.ptp(tail))
    slack = 0.0
    if noise is not None:
        slack = 2.0 * float(np.max(np.asarray(noise, dtype=float)[-cfg.window:]))
    if spread <= cfg.tol_conv + slack:
        return LimitEstimate(last, Status.Converged, spread, cfg.window, "spread")

    m = min(cfg.fit_window, n)
    fit = v[-m:]
    fit_eps = e[-m:]
    d = np.diff(fit)

    # geometric contraction of the differences
    if m >= 4 and np.all(d != 0) and (np.all(d > 0) or np.all(d < 0)):
        rho = d[1:] / d[:-1]
        if np.all(rho > 0) and np.all(rho <= cfg.max_contraction):
            r_last = float(rho[-1])
            limit = float(fit[-1] + d[-1] * r_last / (1.0 - r_last))
            lo, hi = float(rho.min()), float(rho.max())
            uncertainty = abs(d[-1]) * abs(hi / (1 - hi) - lo / (1 - lo))
            if uncertainty <= cfg.tol_conv + slack:
                return LimitEstimate(limit, Status.Converged, spread, m, "geometric")

    mags = np.abs(fit)
    same_sign = np.all(fit > 0) or np.all(fit < 0)
    if same_sign and np.all(np.diff(mags) > 0):
        if mags[-1] > cfg.cap:
            return LimitEstimate(math.copysign(math.inf, last), Status.Diverged, spread, m, "cap")
        if _loglog_slope(fit, fit_eps) <= -cfg.min_exponent:
            return LimitEstimate(math.copysign(math.inf, last), Status.Diverged, spread, m, "growth")

    if same_sign and np.all(np.diff(mags) <= 0):
        if _loglog_slope(fit, fit_eps) >= cfg.min_exponent:
            return LimitEstimate(0.0, Status.Converged, spread, m, "power-decay")

    signs = np.sign(d[d != 0])
    if len(signs) >= 2 and np.any(signs[1:] != signs[:-1]):
        return LimitEstimate(last, Status.Oscillating, spread, m, "none")
    return LimitEstimate(last, Status.Indeterminate, spread, m, "none")
