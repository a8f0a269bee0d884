"""Limit-quotient estimators along increment ladders.

Sign convention for one-sided differences: ``Forward`` is
``f(x + eps) - f(x)`` and ``Backward`` is ``f(x) - f(x - eps)``.  With this
convention ``|x|`` has backward quotient ``-1`` at the origin, and an
increasing function has positive quotients on both sides.
"""

from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DivisionGuard
from .functions import RealFunction
from .limits import (DEFAULT_LIMIT, EpsilonLadder, LimitConfig, LimitEstimate, Side,
                     Status, estimate_limit)
from .moduli import Linear, Modulus, PowerLaw
from .oscillation import DEFAULT_RESOLUTION, _envelope, scan

EPS_MACH = float(np.finfo(float).eps)
EXTRA_PER_DECADE = 64
LITTLE_O_TOL = 1e-3

_OP_IDS = {"dini": 1, "omega": 2}


class QuotientKind(enum.Enum):
    Classical = "classical"
    FractionalVelocity = "fractional-velocity"
    Modular = "modular"
    Omega = "omega"


@dataclass(frozen=True)
class DerivativeEstimate:
    value: LimitEstimate
    side: Side
    kind: QuotientKind
    quotient_trace: tuple[tuple[float, float], ...]
    modulus: str = ""

    @property
    def quotients(self) -> np.ndarray:
        return np.array([q for _, q in self.quotient_trace])

    def as_dict(self) -> dict:
        return {
            "value": self.value.as_dict(),
            "side": self.side.name,
            "kind": self.kind.value,
            "modulus": self.modulus,
            "quotient_trace": [list(p) for p in self.quotient_trace],
        }


@dataclass(frozen=True)
class DiniQuadruple:
    upper_forward: float
    lower_forward: float
    upper_backward: float
    lower_backward: float

    def as_dict(self) -> dict:
        return {
            "upper_forward": self.upper_forward,
            "lower_forward": self.lower_forward,
            "upper_backward": self.upper_backward,
            "lower_backward": self.lower_backward,
        }


@dataclass(frozen=True)
class OmegaDerivative:
    """Upper and lower ω-derivatives with the limit estimate of the quotient."""

    upper: float
    lower: float
    limit: LimitEstimate
    side: Side
    quotient_trace: tuple[tuple[float, float], ...]

    def as_dict(self) -> dict:
        return {
            "upper": self.upper,
            "lower": self.lower,
            "limit": self.limit.as_dict(),
            "side": self.side.name,
            "quotient_trace": [list(p) for p in self.quotient_trace],
        }


@dataclass(frozen=True)
class C1Report:
    """``holds`` when ``omega/g`` stays bounded as ``eps`` shrinks.

    ``C`` is the smallest constant with ``omega <= C g`` on the whole ladder;
    ``C_tail`` is the same over the last ``window`` entries.
    """

    holds: bool
    C: float
    C_tail: float

    def __iter__(self):
        return iter((self.holds, self.C))

    def as_dict(self) -> dict:
        return {"holds": self.holds, "C": self.C, "C_tail": self.C_tail}


@dataclass(frozen=True)
class TaylorResidualReport:
    fitted_D: float
    residual_trace: tuple[tuple[float, float], ...]
    noise_trace: tuple[float, ...]
    is_little_o: bool
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "fitted_D": self.fitted_D,
            "residual_trace": [list(p) for p in self.residual_trace],
            "is_little_o": self.is_little_o,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class BridgeReport:
    """``K = lim omega/g`` together with ``D_g`` and ``D_omega``.

    ``consistent`` tests ``D_g = K * D_omega``.  ``reversed_form`` records the
    test of the opposite orientation ``D_omega = K * D_g``.
    """

    K: LimitEstimate
    D_g: LimitEstimate
    D_omega: LimitEstimate
    consistent: bool
    reversed_form: bool
    tol: float

    def __iter__(self):
        return iter((self.K, self.consistent))

    def as_dict(self) -> dict:
        return {
            "K": self.K.as_dict(),
            "D_g": self.D_g.as_dict(),
            "D_omega": self.D_omega.as_dict(),
            "consistent": self.consistent,
            "reversed_form": self.reversed_form,
            "tol": self.tol,
        }


# ---------------------------------------------------------------------------
# Differences
# ---------------------------------------------------------------------------


def _differences(f: RealFunction, x: float, eps: np.ndarray, side: Side):
    """Signed differences and a rounding bound for each of them."""
    fx = float(f(x))
    fe = np.asarray(f(x + side.sign * eps), dtype=float)
    d = side.sign * (fe - fx)
    noise = 4.0 * EPS_MACH * np.maximum(abs(fx), np.abs(fe))
    return d, noise


def delta(f: RealFunction, x: float, eps: float, side: Side) -> float:
    d, _ = _differences(f, x, np.array([float(eps)]), side)
    return float(d[0])


def g_variation(f: RealFunction, x: float, eps: float, side: Side, g: Modulus) -> float:
    ge = float(g(eps))
    if ge == 0:
        raise DivisionGuard(f"modulus vanishes at eps={eps!r}")
    return delta(f, x, eps, side) / ge


def _modulus_values(g: Modulus, eps: np.ndarray) -> np.ndarray:
    gv = np.asarray(g(eps), dtype=float)
    if np.any(gv <= 0):
        raise DivisionGuard(f"modulus vanishes at eps={eps[gv <= 0][0]!r}")
    return gv


def point_seed(seed: int, x: float, op: str) -> np.random.Generator:
    """Generator seeded by ``(seed, x, op)`` so sweeps are order independent."""
    hi, lo = struct.unpack("<II", struct.pack("<d", float(x)))
    return np.random.default_rng(np.random.SeedSequence([seed, hi, lo, _OP_IDS[op]]))


def extra_increments(eps: np.ndarray, rng: np.random.Generator,
                     per_decade: int = EXTRA_PER_DECADE) -> np.ndarray:
    """Stratified log-uniform increments between the extremes of ``eps``."""
    lo, hi = math.log10(float(eps.min())), math.log10(float(eps.max()))
    n = max(1, int(math.ceil((hi - lo) * per_decade)))
    edges = np.linspace(lo, hi, n + 1)
    return 10.0 ** (edges[:-1] + (edges[1:] - edges[:-1]) * rng.uniform(size=n))


# ---------------------------------------------------------------------------
# Dini derivatives
# ---------------------------------------------------------------------------


def _dini_side(f: RealFunction, x: float, ladder: EpsilonLadder, side: Side,
               config: LimitConfig, rng: np.random.Generator) -> tuple[float, float]:
    a, b = f.domain
    if (side is Side.Forward and x >= b) or (side is Side.Backward and x <= a):
        return math.nan, math.nan
    eps = ladder.values
    d, noise = _differences(f, x, eps, side)
    q = d / eps
    est = estimate_limit(q, eps, config, noise / eps)
    if est.status is Status.Diverged:
        return est.value, est.value
    m = min(config.fit_window, len(eps))
    tail_eps = eps[-m:]
    extra = extra_increments(tail_eps, rng)
    de, _ = _differences(f, x, extra, side)
    samples = np.concatenate([q[-m:], de / extra])
    return float(samples.max()), float(samples.min())


def dini(f: RealFunction, x: float, ladder: EpsilonLadder,
         config: LimitConfig = DEFAULT_LIMIT, seed: int = 0) -> DiniQuadruple:
    """Dini derivatives estimated as max and min of the classical quotient over
    the ladder tail, supplemented by stratified random increments.

    A diverging ladder quotient sets both components of that side to the
    signed infinity.  Sides outside the domain are NaN.
    """
    rng = point_seed(seed, x, "dini")
    uf, lf = _dini_side(f, x, ladder, Side.Forward, config, rng)
    ub, lb = _dini_side(f, x, ladder, Side.Backward, config, rng)
    return DiniQuadruple(uf, lf, ub, lb)


# ---------------------------------------------------------------------------
# Modular derivatives
# ---------------------------------------------------------------------------


def modular_derivative(f: RealFunction, x: float, g: Modulus, side: Side,
                       ladder: EpsilonLadder, config: LimitConfig = DEFAULT_LIMIT,
                       kind: QuotientKind = QuotientKind.Modular) -> DerivativeEstimate:
    """Limit of ``delta / g(eps)`` along the ladder, one side only."""
    eps = ladder.values
    gv = _modulus_values(g, eps)
    d, noise = _differences(f, x, eps, side)
    q = d / gv
    est = estimate_limit(q, eps, config, noise / gv)
    trace = tuple((float(e), float(v)) for e, v in zip(eps, q))
    return DerivativeEstimate(est, side, kind, trace, g.spec())


def fractional_velocity(f: RealFunction, x: float, beta: float, side: Side,
                        ladder: EpsilonLadder,
                        config: LimitConfig = DEFAULT_LIMIT) -> DerivativeEstimate:
    """Limit of ``delta / eps**beta``."""
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    return modular_derivative(f, x, PowerLaw(beta), side, ladder, config,
                              QuotientKind.FractionalVelocity)


def classical_derivative(f: RealFunction, x: float, side: Side, ladder: EpsilonLadder,
                         config: LimitConfig = DEFAULT_LIMIT) -> DerivativeEstimate:
    return modular_derivative(f, x, Linear(), side, ladder, config, QuotientKind.Classical)


# ---------------------------------------------------------------------------
# ω-derivatives
# ---------------------------------------------------------------------------


def _omega_quotients(f: RealFunction, x: float, eps: np.ndarray, side: Side,
                     resolution: int, envelope: bool) -> np.ndarray:
    s = scan(f, x, eps, side, resolution)
    omega = s.omega
    if envelope:
        omega, = _envelope(omega)
    d = side.sign * s.delta
    floor = 64.0 * EPS_MACH * np.maximum(np.abs(s.sup), np.abs(s.inf))
    flat = omega <= floor
    if np.any(flat & (np.abs(d) > floor)):
        raise ConsistencyError(f"{f.label}: increment exceeds point oscillation at x={x!r}")
    with np.errstate(invalid="ignore", divide="ignore"):
        q = np.where(flat, 0.0, d / np.where(flat, 1.0, omega))
    if np.any(np.abs(q) > 1.0 + 1e-12):
        raise ConsistencyError(f"{f.label}: |delta| > omega at x={x!r}")
    return q


def omega_derivatives(f: RealFunction, x: float, side: Side, ladder: EpsilonLadder,
                      config: LimitConfig = DEFAULT_LIMIT,
                      resolution: int = DEFAULT_RESOLUTION, seed: int = 0,
                      extra: bool = True) -> OmegaDerivative:
    """Quotient ``delta / omega_x(eps)`` along the ladder.

    Increments where the point oscillation is at rounding level are treated as
    locally constant and contribute 0.  Upper and lower values also use
    stratified random increments over the ladder tail when ``extra`` is set.
    """
    eps = ladder.values
    q = _omega_quotients(f, x, eps, side, resolution, envelope=True)
    est = estimate_limit(q, eps, config)
    m = min(config.fit_window, len(eps))
    samples = q[-m:]
    if extra:
        rng = point_seed(seed, x, "omega")
        more = extra_increments(eps[-m:], rng)
        samples = np.concatenate([samples, _omega_quotients(f, x, more, side, resolution,
                                                            envelope=False)])
    trace = tuple((float(e), float(v)) for e, v in zip(eps, q))
    return OmegaDerivative(float(samples.max()), float(samples.min()), est, side, trace)


# ---------------------------------------------------------------------------
# Conditions and consequences
# ---------------------------------------------------------------------------


def _omega_over_g(f, x, g, ladder, side, resolution):
    eps = ladder.values
    gv = _modulus_values(g, eps)
    s = scan(f, x, eps, side, resolution)
    omega, = _envelope(s.omega)
    return eps, omega / gv


def check_C1(f: RealFunction, x: float, g: Modulus, ladder: EpsilonLadder,
             side: Side = Side.Forward, config: LimitConfig = DEFAULT_LIMIT,
             resolution: int = DEFAULT_RESOLUTION) -> C1Report:
    """Bounded growth of ``omega_x(eps) / g(eps)``.

    The ratio counts as bounded when it has a finite limit or when its largest
    value over the ladder tail does not exceed the largest value before it.
    """
    eps, r = _omega_over_g(f, x, g, ladder, side, resolution)
    w = config.window
    est = estimate_limit(r, eps, config)
    head_max = float(r[:-w].max()) if len(r) > w else -math.inf
    tail_max = float(r[-w:].max())
    bounded = (est.converged and math.isfinite(est.value)) or (
        est.status is not Status.Diverged and tail_max <= head_max + config.tol_conv)
    return C1Report(bool(bounded), float(r.max()), tail_max)


def check_C2(f: RealFunction, x: float, g: Modulus, ladder: EpsilonLadder,
             side: Side = Side.Forward, config: LimitConfig = DEFAULT_LIMIT) -> bool:
    """Raw spread of the g-variation over the last ``window`` entries is below
    ``tol_conv``."""
    eps = ladder.values
    gv = _modulus_values(g, eps)
    d, _ = _differences(f, x, eps, side)
    q = (d / gv)[-config.window:]
    return bool(np.all(np.isfinite(q)) and np.ptp(q) <= config.tol_conv)


def taylor_residual(f: RealFunction, x: float, g: Modulus, side: Side,
                    ladder: EpsilonLadder, config: LimitConfig = DEFAULT_LIMIT,
                    tol: float = LITTLE_O_TOL) -> TaylorResidualReport:
    """Residual quotients ``(delta - D g(eps)) / g(eps)`` for the fitted ``D``.

    The residual is small-o of ``g`` when its magnitudes over the last
    ``window`` entries do not grow beyond rounding and the last one is below
    ``tol``.
    """
    est = modular_derivative(f, x, g, side, ladder, config)
    D = est.value.value
    if not est.value.converged or not math.isfinite(D):
        return TaylorResidualReport(D, (), (), False,
                                    f"modular derivative {est.value.status.value}")
    eps = ladder.values
    gv = _modulus_values(g, eps)
    d, noise = _differences(f, x, eps, side)
    r = (d - D * gv) / gv
    nq = noise / gv + 4.0 * EPS_MACH * abs(D)
    tail = np.abs(r[-config.window:])
    tail_noise = nq[-config.window:]
    shrinking = bool(np.all(tail[1:] <= tail[:-1] + tail_noise[1:] + tail_noise[:-1]))
    small = bool(tail[-1] <= tol)
    trace = tuple((float(e), float(v)) for e, v in zip(eps, r))
    reason = "" if shrinking and small else ("residual grows" if not shrinking
                                              else "residual above tolerance")
    return TaylorResidualReport(D, trace, tuple(float(v) for v in nq),
                                shrinking and small, reason)


def omega_g_bridge(f: RealFunction, x: float, g: Modulus, ladder: EpsilonLadder,
                   side: Side = Side.Forward, config: LimitConfig = DEFAULT_LIMIT,
                   resolution: int = DEFAULT_RESOLUTION) -> BridgeReport:
    """Estimate ``K = lim omega/g``, ``D_g`` and ``D_omega`` and test both
    orientations of the relation between them."""
    eps, r = _omega_over_g(f, x, g, ladder, side, resolution)
    K = estimate_limit(r, eps, config)
    Dg = modular_derivative(f, x, g, side, ladder, config).value
    Dw = omega_derivatives(f, x, side, ladder, config, resolution, extra=False).limit
    ok = K.converged and Dg.converged and Dw.converged and all(
        math.isfinite(v.value) for v in (K, Dg, Dw))
    if not ok:
        return BridgeReport(K, Dg, Dw, False, False, math.nan)
    tol = 10 * config.tol_conv + K.tail_spread + Dg.tail_spread + abs(K.value) * Dw.tail_spread
    consistent = abs(Dg.value - K.value * Dw.value) <= tol
    other = abs(Dw.value - K.value * Dg.value) <= tol
    return BridgeReport(K, Dg, Dw, bool(consistent), bool(other), float(tol))


def both_sides(f: RealFunction, x: float):
    """Sides of ``x`` that lie inside the domain of ``f``."""
    a, b = f.domain
    return [s for s, ok in ((Side.Forward, x < b), (Side.Backward, x > a)) if ok]


__all__ = [
    "BridgeReport", "C1Report", "DerivativeEstimate", "DiniQuadruple", "OmegaDerivative",
    "QuotientKind", "TaylorResidualReport", "both_sides", "check_C1", "check_C2",
    "classical_derivative", "delta", "dini", "extra_increments", "fractional_velocity",
    "g_variation", "modular_derivative", "omega_derivatives", "omega_g_bridge",
    "point_seed", "taylor_residual",
]
