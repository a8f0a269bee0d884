"""Seeded sweeps over the function corpus.

Each sweep returns a plain dict that :func:`modderiv.report.dumps` serializes
deterministically; the scripts in ``scripts/`` and the acceptance tests share
these entry points.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .corpus import (builtin, cantor_function, cantor_generation, resolve_function,
                     svc_generation, svc_remaining_length, svc_singular_cdf)
from .derivatives import (check_C1, check_C2, classical_derivative, fractional_velocity,
                          modular_derivative, omega_derivatives, taylor_residual)
from .functions import RealFunction
from .limits import DEFAULT_LIMIT, EpsilonLadder, LimitConfig, Side
from .moduli import (Linear, PowerLaw, classify_additivity, parse_modulus,
                     sample_pairs)
from .oscillation import detect_discontinuities, scan
from .sets import null_cover, set_of_change

# (spec, direction): +1 strictly increasing, -1 strictly decreasing, 0 otherwise
RANGE_LAW_CORPUS: tuple[tuple[str, int], ...] = (
    ("power:0.25", 1),
    ("power:0.5", 1),
    ("power:0.75", 1),
    ("power:1", 1),
    ("cubic", 1),
    ("expr:1-x^3", -1),
    ("expr:1-sqrt(x)", -1),
    ("cantor:20", 0),
    ("svc-cdf:12", 0),
    ("weierstrass:0.5,3,8", 0),
    ("weierstrass:0.5,3,24", 0),
)

RANGE_TOL = 1e-3


def unit(spec: str) -> RealFunction:
    """Corpus function restricted to ``[0, 1]``."""
    return resolve_function(spec).restrict(0.0, 1.0)


def _room(f: RealFunction, x: float, side: Side) -> float:
    a, b = f.domain
    return (b - x) if side is Side.Forward else (x - a)


@dataclass(frozen=True)
class SweepConfig:
    seed: int = 0
    points: int = 50
    resolution: int = 1024
    ladder: EpsilonLadder = EpsilonLadder()
    limit: LimitConfig = DEFAULT_LIMIT
    workers: int = 1


def _range_law_function(spec: str, direction: int, index: int, cfg: SweepConfig) -> dict:
    f = unit(spec)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, index]))
    xs = np.sort(rng.uniform(0.0, 1.0, cfg.points))
    rows = []
    converged = in_range = monotone_hits = 0
    for x in xs.tolist():
        sides = {}
        for side in (Side.Forward, Side.Backward):
            ladder = cfg.ladder.clamped(_room(f, x, side))
            od = omega_derivatives(f, x, side, ladder, cfg.limit, cfg.resolution, cfg.seed,
                                   extra=False)
            v = od.limit.value
            ok = od.limit.converged and min(abs(v - t) for t in (-1, 0, 1)) <= RANGE_TOL
            converged += od.limit.converged
            in_range += bool(ok)
            if direction:
                monotone_hits += bool(od.limit.converged and v == direction)
            sides[side.name] = {"value": v, "status": od.limit.status.value}
        rows.append({"x": x, "sides": sides})
    evaluated = 2 * len(xs)
    return {
        "function": spec,
        "direction": direction,
        "evaluated": evaluated,
        "converged": converged,
        "converged_in_range": in_range,
        "monotone_exact": monotone_hits if direction else None,
        "points": rows,
    }


def range_law_sweep(cfg: SweepConfig = SweepConfig(),
                    corpus: tuple[tuple[str, int], ...] = RANGE_LAW_CORPUS) -> dict:
    """ω-derivatives at seeded points of every corpus function, both sides."""
    jobs = [(spec, d, i) for i, (spec, d) in enumerate(corpus)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(lambda j: _range_law_function(*j, cfg), jobs))
    else:
        results = [_range_law_function(*j, cfg) for j in jobs]
    return {
        "tool": "modderiv", "version": __version__, "command": "sweep",
        "config": {"sweep": "range-law", "seed": cfg.seed, "points": cfg.points,
                   "resolution": cfg.resolution, "ladder": cfg.ladder.as_dict(),
                   "tol_conv": cfg.limit.tol_conv},
        "results": results,
    }


# ---------------------------------------------------------------------------
# Conditions matrix
# ---------------------------------------------------------------------------

MATRIX_FUNCTIONS = (
    "power:0.25", "power:0.5", "power:0.75", "identity", "cubic", "expr:x^2",
    "expr:5*sqrt(x)+x", "expr:3*sqrt(x)", "sin", "exp", "abs", "xsin1x", "sqrt_sin1x",
    "exp_flat", "cantor:20", "svc-cdf:12", "step:0.5", "const:1",
)
MATRIX_MODULI = ("pow:0.25", "pow:0.5", "pow:0.75", "linear", "logpow:0.5,1")
# Anchors where the interesting behaviour sits, mixed with random points.
MATRIX_ANCHORS = (0.0, 0.5, 0.25)


def matrix_cases(seed: int = 0, cases: int = 200) -> list[tuple[str, float, str, Side]]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, 4]))
    out = []
    for _ in range(cases):
        fn = MATRIX_FUNCTIONS[rng.integers(len(MATRIX_FUNCTIONS))]
        mod = MATRIX_MODULI[rng.integers(len(MATRIX_MODULI))]
        if rng.uniform() < 0.5:
            x = float(MATRIX_ANCHORS[rng.integers(len(MATRIX_ANCHORS))])
        else:
            x = float(np.round(rng.uniform(0.0, 1.0), 6))
        side = Side.Forward if rng.uniform() < 0.6 else Side.Backward
        if x == 0.0:
            side = Side.Forward
        out.append((fn, x, mod, side))
    return out


def conditions_case(fn: str, x: float, mod: str, side: Side,
                    ladder: EpsilonLadder = EpsilonLadder(),
                    config: LimitConfig = DEFAULT_LIMIT, resolution: int = 1024) -> dict:
    f = unit(fn)
    g = parse_modulus(mod)
    lad = ladder.clamped(_room(f, x, side))
    est = modular_derivative(f, x, g, side, lad, config).value
    c1 = check_C1(f, x, g, lad, side, config, resolution)
    c2 = check_C2(f, x, g, lad, side, config)
    tr = taylor_residual(f, x, g, side, lad, config)
    tail = [abs(r) for _, r in tr.residual_trace[-config.window:]]
    return {
        "function": fn, "x": x, "modulus": mod, "side": side.name,
        "derivative": est, "C1": c1, "C2": c2,
        "taylor": {"is_little_o": tr.is_little_o, "reason": tr.reason,
                   "tail": tail, "tail_noise": list(tr.noise_trace[-config.window:])},
    }


def conditions_matrix(seed: int = 0, cases: int = 200, workers: int = 1) -> list[dict]:
    jobs = matrix_cases(seed, cases)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda j: conditions_case(*j), jobs))
    return [conditions_case(*j) for j in jobs]


# ---------------------------------------------------------------------------
# Other acceptance experiments
# ---------------------------------------------------------------------------


def svc_measure(n: int = 20) -> dict:
    from fractions import Fraction

    g1 = svc_generation(1, exact=True).intervals
    g2 = svc_generation(2, exact=True).intervals
    return {
        "n": n,
        "remaining": svc_remaining_length(n),
        "remaining_exact": svc_remaining_length(n, exact=True),
        "expected": (1 + 2.0 ** -n) / 2,
        "gen1": g1,
        "gen2": g2,
        "gen1_expected": [(Fraction(0), Fraction(3, 8)), (Fraction(5, 8), Fraction(1))],
        "gen2_expected": [(Fraction(0), Fraction(5, 32)), (Fraction(7, 32), Fraction(3, 8)),
                          (Fraction(5, 8), Fraction(25, 32)), (Fraction(27, 32), Fraction(1))],
    }


def fractional_velocity_table(betas=(0.25, 0.5, 0.75, 1.0),
                              ladder: EpsilonLadder = EpsilonLadder()) -> list[dict]:
    rows = []
    for bf in betas:
        f = builtin("power", bf)
        for bq in betas:
            est = fractional_velocity(f, 0.0, bq, Side.Forward, ladder).value
            rows.append({"function_beta": bf, "velocity_beta": bq, "estimate": est})
    return rows


def cantor_change_set(depth: int = 20, generation: int = 7, budgets=(1e-1, 1e-3, 1e-6),
                      workers: int = 1) -> dict:
    beta = math.log(2) / math.log(3)
    ladder = EpsilonLadder(1 / 3, 1 / 3, 15, 1e-9)
    rep = set_of_change(cantor_function(depth), PowerLaw(beta), (0.0, 1.0),
                        3 ** generation + 1, ladder, workers=workers)
    cset = cantor_generation(generation)
    inside = [cset.contains(p.x, 1e-12) for p in rep.points]
    covers = {b: null_cover(rep.xs, b) for b in budgets}
    return {"report": rep, "inside": inside, "covers": covers}


def monotone_differentiation(points: int = 501, ladder: EpsilonLadder = EpsilonLadder(),
                             tol: float = 1e-5, resolution: int = 1024) -> dict:
    """Forward and backward estimates on interior grids.

    Smooth functions use the classical quotient; the SVC singular function uses
    the ω-quotient, whose values are 1 inside the generation intervals and 0 in
    the removed gaps.
    """
    out = {}
    grid = np.linspace(0.0, 1.0, points + 2)[1:-1]
    for spec in ("expr:x^2", "exp"):
        f = unit(spec)
        agree = 0
        for x in grid.tolist():
            fw = classical_derivative(f, x, Side.Forward, ladder.clamped(_room(f, x, Side.Forward)))
            bw = classical_derivative(f, x, Side.Backward, ladder.clamped(_room(f, x, Side.Backward)))
            agree += bool(fw.value.converged and bw.value.converged
                          and abs(fw.value.value - bw.value.value) <= tol)
        out[spec] = {"agree": agree, "points": len(grid)}
    f = svc_singular_cdf(12)
    gen = svc_generation(12)
    agree = ones = inside_count = 0
    margin = 1e-6
    for x in grid.tolist():
        vals = []
        for side in (Side.Forward, Side.Backward):
            od = omega_derivatives(f, x, side, ladder.clamped(_room(f, x, side)),
                                   resolution=resolution, extra=False)
            vals.append(od.limit.value if od.limit.converged else math.nan)
        agree += bool(vals[0] == vals[1])
        # strictly inside a generation interval F is linear with positive slope
        if gen.contains(x - margin) and gen.contains(x + margin) and gen.contains(x):
            inside_count += 1
            ones += bool(vals[0] == 1.0 and vals[1] == 1.0)
    out["svc-cdf:12"] = {"agree": agree, "points": len(grid), "inside": inside_count,
                         "inside_exact_one": ones}
    return out


CONTINUOUS_CORPUS = ("power:0.5", "cubic", "exp_flat", "xsin1x", "sqrt_sin1x", "cantor:20",
                     "svc-cdf:12", "weierstrass:0.5,3,24", "sin", "abs")


def discontinuity_roundtrip(grid: int = 1001, continuous_grid: int = 201,
                            threshold: float = 1e-3, workers: int = 1) -> dict:
    step = unit("step:0.5")
    found = detect_discontinuities(step, (0.0, 1.0), grid, 0.5, workers=workers)
    cont = {}
    for spec in CONTINUOUS_CORPUS:
        f = unit(spec)
        cont[spec] = detect_discontinuities(f, (0.0, 1.0), continuous_grid, threshold,
                                            workers=workers)
    return {"step": found, "grid": np.linspace(0.0, 1.0, grid), "continuous": cont}


SUBADDITIVE_FUNCTIONS = ("power:0.25", "power:0.5", "power:0.75", "cantor:20")


def moduli_inequalities(pairs: int = 10_000, seed: int = 0, tol: float = 1e-9,
                        resolution: int = 64) -> dict:
    """Pairwise additivity checks and the triangle inequality of point oscillations.

    Only the anchors and far ends matter for the functions used here (all are
    non-decreasing from the anchor), so a coarse resolution suffices.
    """
    out = {}
    for name, g in (("sqrt", PowerLaw(0.5)), ("square", PowerLaw(2.0)),
                    ("linear", Linear())):
        out[name] = classify_additivity(g, (1e-6, 1.0), pairs, seed, tol)
    a, b = sample_pairs(1e-6, 1.0, pairs, seed)
    tri = {}
    for spec in SUBADDITIVE_FUNCTIONS:
        f = unit(spec)
        wa = scan(f, 0.0, a, Side.Forward, resolution).omega
        wb = scan(f, 0.0, b, Side.Forward, resolution).omega
        wab = scan(f, 0.0, a + b, Side.Forward, resolution).omega
        bad = wab > (wa + wb) * (1 + tol)
        tri[spec] = {"tested": int(len(a)), "violations": int(bad.sum())}
    out["triangle"] = tri
    return out


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - t0
