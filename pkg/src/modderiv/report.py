"""Report assembly and deterministic JSON serialization.

Reports are plain nested dicts.  :func:`dumps` writes them with sorted keys,
floats at 17 significant digits and non-finite floats as the strings
``"inf"``, ``"-inf"`` and ``"nan"``, so equal inputs give byte-identical text.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .config import AnalysisConfig
from .corpus import (SVC_MAX_MATERIALIZED, resolve_function, svc_generation,
                     svc_remaining_length, svc_singular_cdf)
from .derivatives import (both_sides, check_C1, check_C2, dini, fractional_velocity,
                          modular_derivative, omega_derivatives, taylor_residual)
from .errors import DegenerateModulus, RangeError
from .functions import RealFunction, load_csv, write_csv
from .limits import EpsilonLadder, LimitConfig, Side
from .moduli import (canonical_modulus, classify_additivity, classify_modulus_type,
                     continuity_ratio, parse_modulus)
from .oscillation import (detect_discontinuities, interval_oscillation, oscillation_limit,
                          oscillation_profile, total_variation)
from .sets import set_of_change

TOOL = "modderiv"
SCHEMA_PATH = Path(__file__).resolve().parents[2] / "docs" / "report.schema.json"


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _float(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    if v == 0:
        return "0"  # also folds -0.0
    return format(v, ".17g")


def to_plain(obj: Any) -> Any:
    """Convert numpy values, enums, tuples and ``as_dict`` objects to JSON types."""
    if hasattr(obj, "as_dict"):
        return to_plain(obj.as_dict())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, enum.Enum):
        return obj.name if isinstance(obj, Side) else obj.value
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write(obj: Any, out: list[str], indent: int, depth: int) -> None:
    pad = "\n" + " " * (indent * (depth + 1))
    end = "\n" + " " * (indent * depth)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            out.append(("," if i else "") + pad)
            _write(v, out, indent, depth + 1)
        out.append(end + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, k in enumerate(sorted(obj)):
            out.append(("," if i else "") + pad + json.dumps(k, ensure_ascii=False) + ": ")
            _write(obj[k], out, indent, depth + 1)
        out.append(end + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 1) -> str:
    out: list[str] = []
    _write(to_plain(obj), out, indent, 0)
    return "".join(out) + "\n"


def envelope(command: str, config: dict, **body: Any) -> dict:
    return {"tool": TOOL, "version": __version__, "command": command, "config": config, **body}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def load_function(config: AnalysisConfig) -> RealFunction:
    if config.csv is not None:
        return load_csv(config.csv)
    return resolve_function(config.fn)


def _check_in_domain(f: RealFunction, xs: list[float], interval) -> None:
    a, b = f.domain
    for x in xs:
        if not a <= x <= b:
            raise RangeError(f"point {x!r} outside the domain [{a}, {b}] of {f.label}")
    if interval is not None and not (a <= interval[0] and interval[1] <= b):
        raise RangeError(f"interval {list(interval)} not inside the domain [{a}, {b}]")


def _room(f: RealFunction, x: float, side: Side) -> float:
    a, b = f.domain
    return (b - x) if side is Side.Forward else (x - a)


def _modulus_for(spec: str, f: RealFunction, x: float, ladder: EpsilonLadder, side: Side,
                 resolution: int):
    if spec.strip().lower() == "empirical":
        return canonical_modulus(f, x, ladder, side, resolution)
    return parse_modulus(spec)


def analyze_point(f: RealFunction, x: float, config: AnalysisConfig) -> dict:
    lim = config.limit
    sides: dict[str, Any] = {}
    for side in both_sides(f, x):
        ladder = config.ladder.clamped(_room(f, x, side))
        g = _modulus_for(config.modulus, f, x, ladder, side, config.resolution)
        prof = oscillation_profile(f, x, ladder, side, config.resolution)
        mod = modular_derivative(f, x, g, side, ladder, lim)
        entry = {
            "ladder": ladder.as_dict(),
            "oscillation_limit": oscillation_limit(prof, lim),
            "modular_derivative": mod.value,
            "omega_derivative": _omega_summary(
                omega_derivatives(f, x, side, ladder, lim, config.resolution, config.seed)),
            "C1": check_C1(f, x, g, ladder, side, lim, config.resolution),
            "C2": check_C2(f, x, g, ladder, side, lim),
            "taylor_little_o": taylor_residual(f, x, g, side, ladder, lim).is_little_o,
        }
        if config.beta is not None:
            entry["fractional_velocity"] = fractional_velocity(
                f, x, config.beta, side, ladder, lim).value
        sides[side.name] = entry
    room = min(_room(f, x, s) for s in both_sides(f, x)) if both_sides(f, x) else 0.0
    dl = config.ladder.clamped(room) if room > 0 else config.ladder
    return {"x": x, "sides": sides, "dini": dini(f, x, dl, lim, config.seed)}


def _omega_summary(o) -> dict:
    return {"upper": o.upper, "lower": o.lower, "limit": o.limit}


def analyze(config: AnalysisConfig) -> dict:
    """Run the estimator suite at every configured point."""
    f = load_function(config)
    xs = config.evaluation_points()
    if not xs:
        raise RangeError("no evaluation points: give --point or --interval with --grid")
    _check_in_domain(f, xs, config.interval)
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            points = list(pool.map(lambda x: analyze_point(f, x, config), xs))
    else:
        points = [analyze_point(f, x, config) for x in xs]
    set_level: Optional[dict] = None
    if config.interval is not None and config.grid is not None:
        disc = detect_discontinuities(f, config.interval, config.grid, config.jump_threshold,
                                      config.ladder, config.limit, config.resolution,
                                      config.workers)
        change = None
        if config.grid >= 16 and config.modulus.strip().lower() != "empirical":
            g = parse_modulus(config.modulus)
            change = set_of_change(f, g, config.interval, config.grid, config.ladder,
                                   config.nonzero_threshold, config.limit, config.budget,
                                   config.workers)
        set_level = {
            "discontinuities": [{"x": d.x, "osc": d.osc} for d in disc],
            "change_set": change,
            "total_variation": total_variation(f, config.interval, config.grid - 1),
        }
    return envelope("analyze", config.as_dict(), function=f.label, points=points,
                    set_level=set_level)


def classify(f: RealFunction, x: float, ladder: EpsilonLadder, config: LimitConfig,
             resolution: int = 1024, seed: int = 0, tol_add: float = 1e-9) -> dict:
    """Canonical modulus, additivity class and Lipschitz/Singular verdict per side."""
    _check_in_domain(f, [x], None)
    sides = {}
    for side in both_sides(f, x):
        lad = ladder.clamped(_room(f, x, side))
        prof = oscillation_profile(f, x, lad, side, resolution)
        kind = classify_modulus_type(prof, config)
        entry: dict[str, Any] = {"kind": kind.value.value, "ratio_limit": kind.ratio_limit,
                                 "notes": []}
        try:
            g = canonical_modulus(f, x, lad, side, resolution)
        except DegenerateModulus as exc:
            entry["notes"].append(f"DegenerateModulus: {exc}")
            entry.update(modulus=None, additivity=None, continuity_ratio=None)
        else:
            lo, hi = float(lad.values[-1]), float(lad.values[0])
            add = classify_additivity(g, (lo, hi), 1000, seed, tol_add)
            entry.update(
                modulus={"norm_point": g.norm_point,
                         "table": [[e, v] for e, v in zip(g.eps.tolist(), g.values.tolist())]},
                additivity={"value": add.value.value, "sub": add.sub,
                            "additive": add.additive, "super": add.super},
                continuity_ratio=continuity_ratio(g, lad, config),
            )
        sides[side.name] = entry
    return {"x": x, "sides": sides}


def oscillation_report(f: RealFunction, xs: list[float], ladder: EpsilonLadder,
                       config: LimitConfig, resolution: int,
                       interval: Optional[tuple[float, float]] = None,
                       grid: Optional[int] = None, jump_threshold: float = 1e-3,
                       workers: int = 1) -> dict:
    _check_in_domain(f, xs, interval)
    points = []
    for x in xs:
        sides = {}
        for side in both_sides(f, x):
            prof = oscillation_profile(f, x, ladder.clamped(_room(f, x, side)), side, resolution)
            sides[side.name] = {"profile": prof, "limit": oscillation_limit(prof, config)}
        points.append({"x": x, "sides": sides})
    body: dict[str, Any] = {"points": points}
    if interval is not None:
        body["interval"] = {
            "bounds": list(interval),
            "oscillation": interval_oscillation(f, interval, resolution),
        }
        if grid is not None:
            disc = detect_discontinuities(f, interval, grid, jump_threshold, ladder, config,
                                          resolution, workers)
            body["interval"]["discontinuities"] = [{"x": d.x, "osc": d.osc} for d in disc]
            body["interval"]["total_variation"] = total_variation(f, interval, grid - 1)
    return body


def svc_report(n: int, plot_path: Optional[str] = None, plot_points: int = 1025) -> dict:
    """Generation-``n`` intervals (when materializable) and the remaining length."""
    remaining = svc_remaining_length(n)
    body: dict[str, Any] = {"generation": n, "remaining_length": remaining,
                            "removed_length": 1.0 - remaining}
    if n <= SVC_MAX_MATERIALIZED:
        body["intervals"] = [list(p) for p in svc_generation(n).intervals]
    else:
        body["intervals"] = None
        body["note"] = f"{2 ** n} intervals are not materialized"
    if plot_path is not None:
        F = svc_singular_cdf(n)
        xs = np.linspace(0.0, 1.0, plot_points)
        write_csv(plot_path, xs, np.asarray(F(xs)))
        body["plot"] = {"path": str(plot_path), "points": plot_points}
    return body


def validate(report: dict) -> None:
    """Validate ``report`` against the shipped JSON schema (needs ``jsonschema``)."""
    import jsonschema

    schema = json.loads(SCHEMA_PATH.read_text())
    jsonschema.validate(json.loads(dumps(report)), schema)
