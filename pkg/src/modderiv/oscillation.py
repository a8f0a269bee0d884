"""Interval, directed and point-wise oscillation of sampled functions.

Suprema and infima are taken over dense equispaced samples that include both
endpoints.  Each interval is sampled at ``resolution`` points and refined
once with the midpoints; the refined value is kept only when the supremum or
infimum moved by more than ``refine_tol``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import DomainError
from .functions import RealFunction
from .limits import (DEFAULT_LIMIT, EpsilonLadder, LimitConfig, LimitEstimate, Side,
                     Status, estimate_limit)

DEFAULT_RESOLUTION = 1024
REFINE_TOL = 1e-9
_MAX_BATCH = 1 << 20


@dataclass(frozen=True)
class Scan:
    """Per-interval sampling statistics, one row per increment.

    ``f0`` is the value at the anchor and ``fend`` the value at the far end of
    each one-sided interval, taken from the same samples as the extrema.
    """

    eps: np.ndarray
    f0: float
    fend: np.ndarray
    sup: np.ndarray
    inf: np.ndarray
    sup_at: np.ndarray
    inf_at: np.ndarray
    resolution: np.ndarray

    @property
    def osc(self) -> np.ndarray:
        return self.sup - self.inf

    @property
    def omega(self) -> np.ndarray:
        return np.maximum(self.sup - self.f0, self.f0 - self.inf)

    @property
    def delta(self) -> np.ndarray:
        return self.fend - self.f0


def _stats(t: np.ndarray, v: np.ndarray):
    imax = np.argmax(v, axis=1)
    imin = np.argmin(v, axis=1)
    rows = np.arange(len(v))
    return v[rows, imax], v[rows, imin], t[rows, imax], t[rows, imin]


def _scan_rows(f: RealFunction, starts: np.ndarray, widths: np.ndarray, n: int):
    """Sample ``f`` on ``starts + widths * u`` for ``u`` in [0, 1]; rows are intervals."""
    u = np.linspace(0.0, 1.0, n)
    um = 0.5 * (u[:-1] + u[1:])
    t = starts[:, None] + widths[:, None] * u[None, :]
    tm = starts[:, None] + widths[:, None] * um[None, :]
    v = np.asarray(f(t.ravel())).reshape(t.shape)
    vm = np.asarray(f(tm.ravel())).reshape(tm.shape)
    sup, inf, sup_at, inf_at = _stats(t, v)
    msup, minf, msup_at, minf_at = _stats(tm, vm)
    up = (msup - sup > REFINE_TOL) | (inf - minf > REFINE_TOL)
    sup_at = np.where(up & (msup > sup), msup_at, sup_at)
    inf_at = np.where(up & (minf < inf), minf_at, inf_at)
    sup = np.where(up, np.maximum(sup, msup), sup)
    inf = np.where(up, np.minimum(inf, minf), inf)
    res = np.where(up, 2 * n - 1, n)
    return v[:, 0], v[:, -1], sup, inf, sup_at, inf_at, res


def _batched(f, starts, widths, n):
    rows = max(1, _MAX_BATCH // (2 * n))
    parts = [_scan_rows(f, starts[i:i + rows], widths[i:i + rows], n)
             for i in range(0, len(starts), rows)]
    return [np.concatenate(col) for col in zip(*parts)]


def scan(f: RealFunction, x: float, eps: Sequence[float] | np.ndarray, side: Side,
         resolution: int = DEFAULT_RESOLUTION) -> Scan:
    """Sample the one-sided intervals ``[x, x+e]`` or ``[x-e, x]`` for every ``e``."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    e = np.atleast_1d(np.asarray(eps, dtype=float))
    if np.any(e <= 0):
        raise ValueError("increments must be positive")
    a, b = f.domain
    if not a <= x <= b:
        raise DomainError(f"{f.label}: anchor {x!r} outside domain [{a}, {b}]")
    # Rows run from the anchor outwards so column 0 is f(x) and the last is f(x +- e).
    starts = np.full(e.shape, float(x))
    widths = side.sign * e
    f0, fend, sup, inf, sup_at, inf_at, res = _batched(f, starts, widths, resolution)
    return Scan(e, float(f0[0]), fend, sup, inf, sup_at, inf_at, res)


def interval_scan(f: RealFunction, a: float, b: float,
                  resolution: int = DEFAULT_RESOLUTION):
    """Return ``(sup, inf, sup_at, inf_at, resolution_used)`` over ``[a, b]``."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if not a <= b:
        raise ValueError(f"empty interval [{a}, {b}]")
    _, _, sup, inf, sup_at, inf_at, res = _scan_rows(
        f, np.array([float(a)]), np.array([float(b) - float(a)]), resolution)
    return float(sup[0]), float(inf[0]), float(sup_at[0]), float(inf_at[0]), int(res[0])


def interval_oscillation(f: RealFunction, interval: tuple[float, float],
                         resolution: int = DEFAULT_RESOLUTION) -> float:
    """``sup f - inf f`` over the sampled interval."""
    sup, inf, *_ = interval_scan(f, interval[0], interval[1], resolution)
    return sup - inf


def directed_oscillation(f: RealFunction, x: float, eps: float, side: Side,
                         resolution: int = DEFAULT_RESOLUTION) -> float:
    """Oscillation over ``[x, x+eps]`` (Forward) or ``[x-eps, x]`` (Backward)."""
    return float(scan(f, x, [eps], side, resolution).osc[0])


def point_oscillation(f: RealFunction, x: float, eps: float, side: Side,
                      resolution: int = DEFAULT_RESOLUTION) -> float:
    """``sup |f(t) - f(x)|`` over the one-sided interval of length ``eps``."""
    return float(scan(f, x, [eps], side, resolution).omega[0])


class ProfileEntry(NamedTuple):
    eps: float
    omega: float
    sup_witness: float
    inf_witness: float


@dataclass(frozen=True)
class OscillationProfile:
    """Point oscillation along a ladder, made non-increasing towards small eps.

    The monotone envelope is exact, not a smoothing: a sample that lies in a
    smaller interval also lies in every larger one, so it bounds the larger
    interval's supremum from below.  ``delta`` and ``osc`` hold the increment
    and the interval oscillation computed from the same samples.
    """

    x: float
    side: Side
    entries: tuple[ProfileEntry, ...]
    delta: np.ndarray
    osc: np.ndarray
    resolution: np.ndarray

    @property
    def eps(self) -> np.ndarray:
        return np.array([e.eps for e in self.entries])

    @property
    def omega(self) -> np.ndarray:
        return np.array([e.omega for e in self.entries])

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "side": self.side.name,
            "entries": [list(e) for e in self.entries],
            "resolution": [int(r) for r in self.resolution],
        }


def _envelope(values: np.ndarray, *witnesses: np.ndarray):
    """Running maximum from the last (smallest eps) row to the first."""
    out = values.copy()
    wit = [w.copy() for w in witnesses]
    for k in range(len(out) - 2, -1, -1):
        if out[k + 1] > out[k]:
            out[k] = out[k + 1]
            for w in wit:
                w[k] = w[k + 1]
    return (out, *wit)


def profile_from_scan(s: Scan, x: float, side: Side) -> OscillationProfile:
    omega, sup_at, inf_at = _envelope(s.omega, s.sup_at, s.inf_at)
    osc, = _envelope(s.osc)
    entries = tuple(ProfileEntry(float(e), float(w), float(a), float(b))
                    for e, w, a, b in zip(s.eps, omega, sup_at, inf_at))
    return OscillationProfile(float(x), side, entries, s.delta.copy(), osc, s.resolution)


def oscillation_profile(f: RealFunction, x: float, ladder: EpsilonLadder, side: Side,
                        resolution: int = DEFAULT_RESOLUTION) -> OscillationProfile:
    """Tabulate ``omega_x(eps_k)`` on one side of ``x`` for every ladder step."""
    return profile_from_scan(scan(f, x, ladder.values, side, resolution), x, side)


def oscillation_limit(profile: OscillationProfile,
                      config: LimitConfig = DEFAULT_LIMIT) -> LimitEstimate:
    """Estimate ``lim omega_x(eps)``: zero at a one-sided continuity point,
    at least the jump size at a jump."""
    return estimate_limit(profile.omega, profile.eps, config)


def total_variation(f: RealFunction, interval: tuple[float, float], partition_size: int) -> float:
    """Variation sum over the uniform partition of ``interval`` into
    ``partition_size`` pieces."""
    if partition_size < 1:
        raise ValueError("partition_size must be at least 1")
    a, b = interval
    v = np.asarray(f(np.linspace(a, b, partition_size + 1)))
    return float(np.abs(np.diff(v)).sum())


class Discontinuity(NamedTuple):
    x: float
    osc: float


def two_sided_limit(f: RealFunction, x: float, ladder: EpsilonLadder,
                    config: LimitConfig = DEFAULT_LIMIT,
                    resolution: int = DEFAULT_RESOLUTION) -> LimitEstimate:
    """Limit of the oscillation over ``[x-eps, x+eps]`` (clipped to the domain).

    Only the ladder tail that :func:`estimate_limit` inspects is sampled.
    """
    eps = ladder.values[-max(config.window, config.fit_window):]
    a, b = f.domain
    sups, infs = [], []
    for side in (Side.Backward, Side.Forward):
        room = (x - a) if side is Side.Backward else (b - x)
        if room <= 0:
            continue
        s = scan(f, x, np.minimum(eps, room), side, resolution)
        sups.append(s.sup)
        infs.append(s.inf)
    if not sups:
        return LimitEstimate(0.0, Status.Converged, 0.0, 0, "spread")
    osc = np.max(sups, axis=0) - np.min(infs, axis=0)
    osc, = _envelope(osc)
    return estimate_limit(osc, eps, config)


def detect_discontinuities(f: RealFunction, interval: tuple[float, float], grid_points: int,
                           jump_threshold: float, ladder: Optional[EpsilonLadder] = None,
                           config: LimitConfig = DEFAULT_LIMIT,
                           resolution: int = DEFAULT_RESOLUTION,
                           workers: int = 1) -> list[Discontinuity]:
    """Grid points whose two-sided oscillation limit exceeds ``jump_threshold``.

    When the limit does not converge, the oscillation at the smallest
    increment is used; it bounds the limit from above.  Results are sorted by
    ``x`` and do not depend on ``workers``.
    """
    ladder = ladder or EpsilonLadder()
    a, b = interval
    grid = np.linspace(a, b, grid_points)

    def one(x: float) -> Discontinuity:
        # an unconverged estimate carries the smallest-increment value
        est = two_sided_limit(f, float(x), ladder, config, resolution)
        return Discontinuity(float(x), float(est.value))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            found = list(pool.map(one, grid))
    else:
        found = [one(x) for x in grid]
    return sorted((d for d in found if d.osc > jump_threshold), key=lambda d: d.x)


def majorization_holds(f: RealFunction, x: float, eps: float, side: Side,
                       resolution: int = DEFAULT_RESOLUTION, tol: float = 0.0) -> bool:
    """Check ``osc >= omega >= |delta|`` on one sampled interval."""
    s = scan(f, x, [eps], side, resolution)
    return bool(s.osc[0] + tol >= s.omega[0] and s.omega[0] + tol >= abs(s.delta[0]))


def iter_sides(f: RealFunction, x: float) -> Iterable[Side]:
    a, b = f.domain
    if x < b:
        yield Side.Forward
    if x > a:
        yield Side.Backward


__all__ = [
    "DEFAULT_RESOLUTION", "Discontinuity", "OscillationProfile", "ProfileEntry", "Scan",
    "detect_discontinuities", "directed_oscillation", "interval_oscillation",
    "interval_scan", "iter_sides", "majorization_holds", "oscillation_limit",
    "oscillation_profile", "point_oscillation", "scan", "total_variation",
    "two_sided_limit",
]
