"""Set-level analyses: sets of change, null covers, measure estimates and
monotone segmentation on grids.

Grid detection can only exhibit finitely many points, so a null cover built on
the detected points bounds the measure of that detected subset.  It says
nothing about points the grid never visits.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .corpus import IntervalSet
from .derivatives import modular_derivative
from .errors import RangeError
from .functions import RealFunction
from .limits import DEFAULT_LIMIT, EpsilonLadder, LimitConfig, Side
from .moduli import Modulus

NONZERO_THRESHOLD = 1e-3
FLAT_TOL = 1e-12
DEFAULT_BUDGET = 1e-3


class ChangePoint(NamedTuple):
    x: float
    value: float
    side: Side


@dataclass(frozen=True)
class ChangeSetReport:
    points: tuple[ChangePoint, ...]
    grid_size: int
    ladder: EpsilonLadder
    budget: float
    cover: IntervalSet

    @property
    def measure_upper_bound(self) -> float:
        return measure_estimate(self.cover)

    @property
    def xs(self) -> list[float]:
        return sorted({p.x for p in self.points})

    def as_dict(self) -> dict:
        return {
            "points": [{"x": p.x, "value": p.value, "side": p.side.name} for p in self.points],
            "grid_size": self.grid_size,
            "ladder": self.ladder.as_dict(),
            "budget": self.budget,
            "measure_upper_bound": self.measure_upper_bound,
        }


def merge_intervals(pairs: Sequence[tuple[float, float]]) -> IntervalSet:
    """Union of closed intervals as a sorted disjoint :class:`IntervalSet`."""
    merged: list[list[float]] = []
    for lo, hi in sorted(pairs):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return IntervalSet.from_pairs(merged)


def null_cover(points: Sequence[float], budget: float) -> IntervalSet:
    """Cover the ``k``-th smallest point by a centered interval of length
    ``budget / 2**(k + 1)`` and merge; the total length is at most ``budget``."""
    if not budget > 0:
        raise RangeError("budget must be positive")
    pts = sorted(float(p) for p in points)
    pairs = []
    for k, p in enumerate(pts):
        half = math.ldexp(budget, -(k + 2))
        exact = Fraction(half)
        lo, hi = p - half, p + half
        # round endpoints inwards so no interval is longer than its share
        if Fraction(lo) < Fraction(p) - exact:
            lo = math.nextafter(lo, p)
        if Fraction(hi) > Fraction(p) + exact:
            hi = math.nextafter(hi, p)
        pairs.append((lo, hi))
    return merge_intervals(pairs)


def measure_estimate(s: IntervalSet) -> float:
    """Total length of the union of the intervals in ``s``."""
    if len(s) == 0:
        return 0.0
    return float(measure_of_union(s.intervals))


def measure_of_union(pairs: Sequence[tuple[float, float]]) -> float:
    """Length of the union, summed exactly over the float endpoints."""
    merged = merge_intervals([(float(a), float(b)) for a, b in pairs])
    return float(sum((Fraction(b) - Fraction(a) for a, b in merged.intervals), Fraction(0)))


def set_of_change(f: RealFunction, g: Modulus, interval: tuple[float, float], grid_size: int,
                  ladder: EpsilonLadder, nonzero_threshold: float = NONZERO_THRESHOLD,
                  config: LimitConfig = DEFAULT_LIMIT, budget: float = DEFAULT_BUDGET,
                  workers: int = 1) -> ChangeSetReport:
    """Grid points where a converged one-sided g-derivative exceeds the threshold.

    Near the ends of the domain the ladder is shortened to fit; sides with no
    room are skipped.
    """
    if grid_size < 16:
        raise RangeError("grid_size must be at least 16")
    a, b = interval
    lo, hi = f.domain
    grid = np.linspace(a, b, grid_size)

    def one(x: float) -> list[ChangePoint]:
        found = []
        for side in (Side.Forward, Side.Backward):
            room = (hi - x) if side is Side.Forward else (x - lo)
            if room <= 0:
                continue
            est = modular_derivative(f, x, g, side, ladder.clamped(room), config).value
            if est.converged and abs(est.value) > nonzero_threshold:
                found.append(ChangePoint(float(x), float(est.value), side))
        return found

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, grid))
    else:
        results = [one(x) for x in grid]
    points = sorted((p for r in results for p in r), key=lambda p: (p.x, p.side.value))
    cover = null_cover(sorted({p.x for p in points}), budget)
    return ChangeSetReport(tuple(points), grid_size, ladder, budget, cover)


class Direction(enum.Enum):
    Up = "up"
    Down = "down"
    Flat = "flat"


class Segment(NamedTuple):
    interval: tuple[float, float]
    direction: Direction


def _directions(v: np.ndarray, flat_tol: float) -> np.ndarray:
    d = np.diff(v)
    return np.where(d > flat_tol, 1, np.where(d < -flat_tol, -1, 0))


_DIR = {1: Direction.Up, -1: Direction.Down, 0: Direction.Flat}


def monotone_segments(f: RealFunction, interval: tuple[float, float], grid_size: int,
                      flat_tol: float = FLAT_TOL) -> list[Segment]:
    """Maximal runs of grid steps with the same direction."""
    if grid_size < 3:
        raise RangeError("grid_size must be at least 3")
    xs = np.linspace(interval[0], interval[1], grid_size)
    dirs = _directions(np.asarray(f(xs)), flat_tol)
    breaks = np.flatnonzero(dirs[1:] != dirs[:-1]) + 1
    starts = np.concatenate([[0], breaks])
    ends = np.concatenate([breaks, [len(dirs)]])
    return [Segment((float(xs[s]), float(xs[e])), _DIR[int(dirs[s])])
            for s, e in zip(starts, ends)]


def nm_score(f: RealFunction, interval: tuple[float, float], grid_size: int,
             flat_tol: float = FLAT_TOL) -> float:
    """Direction changes between successive grid steps, per step pair."""
    segments = monotone_segments(f, interval, grid_size, flat_tol)
    return (len(segments) - 1) / (grid_size - 2)


__all__ = [
    "ChangePoint", "ChangeSetReport", "Direction", "Segment", "measure_estimate",
    "measure_of_union", "merge_intervals", "monotone_segments", "nm_score", "null_cover",
    "set_of_change",
]
