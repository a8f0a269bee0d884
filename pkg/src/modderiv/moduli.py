"""Moduli of continuity: representations, additivity classes, Lipschitz/singular
typing, growth-class constants and the canonical (normalized point
oscillation) modulus."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateModulus, DivisionGuard, RangeError
from .functions import RealFunction, parse_expression
from .limits import (DEFAULT_LIMIT, EpsilonLadder, LimitConfig, LimitEstimate, Side,
                     estimate_limit)
from .oscillation import DEFAULT_RESOLUTION, OscillationProfile, profile_from_scan, scan

TOL_ADD = 1e-9


class Modulus:
    """Base class: a non-decreasing map with ``g(0) = 0`` evaluated on ``eps > 0``."""

    def __call__(self, eps):
        arr = np.asarray(eps, dtype=float)
        out = self._eval(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def _eval(self, eps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def normalization(self) -> float:
        return self(1.0)

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerLaw(Modulus):
    beta: float

    def __post_init__(self):
        if not 0 < self.beta:
            raise RangeError(f"power-law exponent must be positive, got {self.beta}")

    def _eval(self, eps):
        return np.power(eps, self.beta)

    def spec(self) -> str:
        return f"pow:{self.beta!r}"


@dataclass(frozen=True)
class Linear(Modulus):
    def _eval(self, eps):
        return eps.copy()

    def spec(self) -> str:
        return "linear"


@dataclass(frozen=True)
class LogPower(Modulus):
    """``eps**beta * (1 + |log eps|)**gamma``; equals 1 at ``eps = 1``."""

    beta: float
    gamma: float

    def _eval(self, eps):
        return np.power(eps, self.beta) * np.power(1.0 + np.abs(np.log(eps)), self.gamma)

    def spec(self) -> str:
        return f"logpow:{self.beta!r},{self.gamma!r}"


@dataclass(frozen=True, eq=False)
class Empirical(Modulus):
    """Tabulated modulus, interpolated linearly in log-log coordinates.

    Outside the table the end segments are extended with their log-log slope.
    Tables with zero entries fall back to plain linear interpolation.
    """

    eps: np.ndarray
    values: np.ndarray
    norm_point: float = 1.0

    def __post_init__(self):
        order = np.argsort(self.eps)
        object.__setattr__(self, "eps", np.asarray(self.eps, dtype=float)[order])
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float)[order])

    def _eval(self, eps):
        xs, ys = self.eps, self.values
        if np.any(ys <= 0):
            return np.interp(eps, xs, ys, left=0.0)
        lx, ly = np.log(xs), np.log(ys)
        le = np.log(eps)
        out = np.interp(le, lx, ly)
        if len(xs) > 1:
            lo_slope = (ly[1] - ly[0]) / (lx[1] - lx[0])
            hi_slope = (ly[-1] - ly[-2]) / (lx[-1] - lx[-2])
            out = np.where(le < lx[0], ly[0] + lo_slope * (le - lx[0]), out)
            out = np.where(le > lx[-1], ly[-1] + hi_slope * (le - lx[-1]), out)
        out = np.exp(out)
        # table nodes return their stored value exactly
        idx = np.clip(np.searchsorted(xs, eps), 0, len(xs) - 1)
        return np.where(xs[idx] == eps, ys[idx], out)

    def spec(self) -> str:
        return "empirical"


@dataclass(frozen=True, eq=False)
class CustomModulus(Modulus):
    func: RealFunction

    def _eval(self, eps):
        return np.asarray(self.func(eps))

    def spec(self) -> str:
        return self.func.name or "custom"


def parse_modulus(text: str) -> Modulus:
    """``pow:B``, ``linear``, ``logpow:B,G`` or ``expr:<expression in eps>``.

    ``empirical`` needs a function and a point; see :func:`canonical_modulus`.
    """
    name, _, rest = text.strip().partition(":")
    name = name.lower()
    if name in ("pow", "power"):
        return PowerLaw(float(rest))
    if name in ("linear", "lin", "identity"):
        return Linear()
    if name == "logpow":
        beta, gamma = (float(p) for p in rest.split(","))
        return LogPower(beta, gamma)
    if name == "expr":
        fn = parse_expression(rest, domain=(0.0, math.inf), variables=("eps", "ε", "x", "e_"))
        return CustomModulus(fn)
    raise ValueError(f"unknown modulus spec {text!r}")


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


class Additivity(enum.Enum):
    StrictlySubAdditive = "strictly-sub-additive"
    Additive = "additive"
    SuperAdditive = "super-additive"
    Mixed = "mixed"


@dataclass(frozen=True)
class AdditivityClass:
    value: Additivity
    sub: int
    additive: int
    super: int

    @property
    def pairs(self) -> int:
        return self.sub + self.additive + self.super


def sample_pairs(lo: float, hi: float, n: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Seeded pairs ``(a, b)`` with ``a, b > 0`` and ``a + b`` in ``[lo, hi]``.

    The sum is log-uniform when ``lo > 0``; the split is uniform.
    """
    rng = np.random.default_rng(seed)
    if lo > 0:
        s = np.exp(rng.uniform(math.log(lo), math.log(hi), n))
    else:
        s = rng.uniform(lo, hi, n)
    u = rng.uniform(0.0, 1.0, n)
    a = u * s
    return a, s - a


def classify_additivity(g: Modulus, interval: tuple[float, float] = (1e-6, 1.0),
                        pair_samples: int = 1000, seed: int = 0,
                        tol_add: float = TOL_ADD) -> AdditivityClass:
    """Unanimous pairwise classification of ``g(a) + g(b)`` against ``g(a + b)``.

    The tolerance is relative to ``g(a + b)``; any disagreement among the
    sampled pairs gives Mixed.
    """
    lo, hi = interval
    if not 0 <= lo < hi:
        raise ValueError("range must satisfy 0 <= lo < hi")
    if pair_samples < 100:
        raise ValueError("pair_samples must be at least 100")
    a, b = sample_pairs(lo, hi, pair_samples, seed)
    keep = (a > 0) & (b > 0)
    a, b = a[keep], b[keep]
    gab = g(a + b)
    gap = g(a) + g(b) - gab
    tol = tol_add * np.abs(gab)
    sub = int(np.sum(gap > tol))
    sup = int(np.sum(gap < -tol))
    add = len(gap) - sub - sup
    if sub == len(gap):
        value = Additivity.StrictlySubAdditive
    elif add == len(gap):
        value = Additivity.Additive
    elif sup == len(gap):
        value = Additivity.SuperAdditive
    else:
        value = Additivity.Mixed
    return AdditivityClass(value, sub, add, sup)


class ModulusKind(enum.Enum):
    Lipschitz = "lipschitz"
    Singular = "singular"
    Indeterminate = "indeterminate"


@dataclass(frozen=True)
class ModulusType:
    value: ModulusKind
    ratio_limit: LimitEstimate


def classify_modulus_type(profile: OscillationProfile,
                          config: LimitConfig = DEFAULT_LIMIT) -> ModulusType:
    """Lipschitz when ``omega(eps)/eps`` has a finite limit, Singular when it diverges."""
    ratio = profile.omega / profile.eps
    est = estimate_limit(ratio, profile.eps, config)
    if est.converged:
        kind = ModulusKind.Lipschitz
    elif est.status.name == "Diverged":
        kind = ModulusKind.Singular
    else:
        kind = ModulusKind.Indeterminate
    return ModulusType(kind, est)


def _nonzero(g: Modulus, eps: np.ndarray) -> np.ndarray:
    gv = np.asarray(g(eps), dtype=float)
    if np.any(gv <= 0):
        raise DivisionGuard(f"modulus vanishes at eps={eps[gv <= 0][0]!r}")
    return gv


@dataclass(frozen=True)
class GrowthClass:
    """Report on membership of ``f`` in the growth class of ``g`` at a point.

    Membership needs a converged, finite, non-zero constant and the bound
    ``|delta| <= C * g(eps)`` on every ladder entry.
    """

    constant: LimitEstimate
    nonzero: bool
    bound_holds: bool
    worst_bound_ratio: float

    @property
    def member(self) -> bool:
        return (self.constant.converged and math.isfinite(self.constant.value)
                and self.nonzero and self.bound_holds)


def growth_class_constant(f: RealFunction, x: float, g: Modulus, ladder: EpsilonLadder,
                          side: Side = Side.Forward, config: LimitConfig = DEFAULT_LIMIT,
                          resolution: int = DEFAULT_RESOLUTION) -> GrowthClass:
    eps = ladder.values
    gv = _nonzero(g, eps)
    prof = profile_from_scan(scan(f, x, eps, side, resolution), x, side)
    est = estimate_limit(prof.omega / gv, eps, config)
    c = est.value
    nonzero = est.converged and abs(c) > config.tol_conv
    worst = float(np.max(np.abs(prof.delta) / gv))
    holds = bool(est.converged and math.isfinite(c) and np.all(np.abs(prof.delta) <= c * gv))
    return GrowthClass(est, bool(nonzero), holds, worst)


def canonical_modulus(f: RealFunction, x: float, ladder: EpsilonLadder,
                      side: Side = Side.Forward,
                      resolution: int = DEFAULT_RESOLUTION) -> Empirical:
    """``g(eps) = omega_x(eps) / omega_x(norm)`` tabulated on the ladder.

    ``norm`` is 1 when the unit one-sided interval fits in the domain and the
    first ladder increment otherwise.
    """
    a, b = f.domain
    room = (b - x) if side is Side.Forward else (x - a)
    norm = 1.0 if room >= 1.0 else float(ladder.values[0])
    eps = ladder.values
    all_eps = np.concatenate([[norm], eps]) if norm > eps[0] else eps
    prof = profile_from_scan(scan(f, x, all_eps, side, resolution), x, side)
    omega = prof.omega
    if np.all(omega <= 0):
        raise DegenerateModulus(f"point oscillation of {f.label} vanishes at x={x!r}")
    table = dict(zip(all_eps.tolist(), omega.tolist()))
    scale = table[norm]
    return Empirical(np.array(all_eps), omega / scale, norm)


def continuity_ratio(g: Modulus, ladder: EpsilonLadder,
                     config: LimitConfig = DEFAULT_LIMIT) -> LimitEstimate:
    """Limit of ``2 g(eps/2) / g(eps)``.

    Concave power laws give a value above 1 (``sqrt`` gives ``sqrt(2)``),
    linear growth gives exactly 1 and convex growth gives a value below 1.
    """
    eps = ladder.values
    gv = _nonzero(g, eps)
    half = np.asarray(g(eps / 2), dtype=float)
    return estimate_limit(2.0 * half / gv, eps, config)


@dataclass(frozen=True)
class ModulusReport:
    """Everything ``classify`` prints for one point and side."""

    modulus: Optional[Empirical]
    additivity: Optional[AdditivityClass]
    kind: ModulusType
    continuity: Optional[LimitEstimate]
    notes: list[str] = field(default_factory=list)
