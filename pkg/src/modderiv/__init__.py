"""Oscillation, moduli of continuity and modular derivatives of real functions."""

from __future__ import annotations

__version__ = "0.1.0"

from .corpus import (IntervalSet, builtin, cantor_function, cantor_generation, corpus_list,
                     resolve_function, svc_generation, svc_remaining_length, svc_singular_cdf,
                     weierstrass)
from .derivatives import (check_C1, check_C2, delta, dini, fractional_velocity, g_variation,
                          modular_derivative, omega_derivatives, omega_g_bridge,
                          taylor_residual)
from .functions import RealFunction, evaluate, from_samples, load_csv, parse_expression
from .limits import EpsilonLadder, LimitConfig, LimitEstimate, Side, Status, estimate_limit
from .moduli import (Linear, LogPower, PowerLaw, canonical_modulus, classify_additivity,
                     classify_modulus_type, continuity_ratio, growth_class_constant,
                     parse_modulus)
from .oscillation import (detect_discontinuities, directed_oscillation, interval_oscillation,
                          oscillation_profile, point_oscillation, total_variation)
from .sets import measure_estimate, monotone_segments, nm_score, null_cover, set_of_change

__all__ = [
    "EpsilonLadder", "IntervalSet", "LimitConfig", "LimitEstimate", "Linear", "LogPower",
    "PowerLaw", "RealFunction", "Side", "Status", "builtin", "canonical_modulus",
    "cantor_function", "cantor_generation", "check_C1", "check_C2", "classify_additivity",
    "classify_modulus_type", "continuity_ratio", "corpus_list", "delta",
    "detect_discontinuities", "dini", "directed_oscillation", "estimate_limit", "evaluate",
    "fractional_velocity", "from_samples", "g_variation", "growth_class_constant",
    "interval_oscillation", "load_csv", "measure_estimate", "modular_derivative",
    "monotone_segments", "nm_score", "null_cover", "omega_derivatives", "omega_g_bridge",
    "oscillation_profile", "parse_expression", "parse_modulus", "point_oscillation",
    "resolve_function", "set_of_change", "svc_generation", "svc_remaining_length",
    "svc_singular_cdf", "taylor_residual", "total_variation", "weierstrass",
]
