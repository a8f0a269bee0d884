from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modderiv.corpus import builtin, cantor_function
from modderiv.errors import DegenerateModulus, DivisionGuard, RangeError
from modderiv.functions import parse_expression
from modderiv.limits import EpsilonLadder, Side, Status
from modderiv.moduli import (Additivity, CustomModulus, Empirical, Linear, LogPower,
                             ModulusKind, PowerLaw, canonical_modulus, classify_additivity,
                             classify_modulus_type, continuity_ratio, growth_class_constant,
                             parse_modulus, sample_pairs)
from modderiv.oscillation import oscillation_profile, point_oscillation

F, B = Side.Forward, Side.Backward
LADDER = EpsilonLadder()


# --- representations --------------------------------------------------------

def test_parse_modulus_forms():
    assert parse_modulus("pow:0.5") == PowerLaw(0.5)
    assert parse_modulus("linear") == Linear()
    assert parse_modulus("logpow:1,-1") == LogPower(1.0, -1.0)
    g = parse_modulus("expr:eps^2")
    assert isinstance(g, CustomModulus) and g(0.5) == 0.25
    assert parse_modulus("expr:sqrt(ε)")(0.25) == 0.5
    for bad in ("pow:-1", "pow:0"):
        with pytest.raises(RangeError):
            parse_modulus(bad)
    for bad in ("cubic", "pow:x", "logpow:1"):
        with pytest.raises(ValueError):
            parse_modulus(bad)


def test_scalar_and_vector_evaluation():
    g = PowerLaw(0.5)
    assert isinstance(g(0.25), float) and g(0.25) == 0.5
    assert np.array_equal(g(np.array([1.0, 4.0])), [1.0, 2.0])
    assert LogPower(1.0, 2.0)(1.0) == 1.0
    assert LogPower(1.0, 1.0)(math.e ** -1) == pytest.approx(2 / math.e, rel=1e-15)


def test_empirical_interpolation_is_loglog():
    eps = np.array([1e-3, 1e-2, 1e-1, 1.0])
    g = Empirical(eps, np.sqrt(eps))
    for e in (2e-3, 0.05, 0.3, 1e-5, 3.0):  # inside and extrapolated
        assert g(e) == pytest.approx(math.sqrt(e), rel=1e-12)


# --- additivity -------------------------------------------------------------

@pytest.mark.parametrize("g, expected", [
    (PowerLaw(0.5), Additivity.StrictlySubAdditive),
    (Linear(), Additivity.Additive),
    (PowerLaw(1.0), Additivity.Additive),
    (PowerLaw(2.0), Additivity.SuperAdditive),
    (LogPower(1.0, 1.0), Additivity.StrictlySubAdditive),
])
def test_additivity_trichotomy(g, expected):
    cls = classify_additivity(g)
    assert cls.value is expected
    assert cls.pairs == 1000


def test_additivity_mixed():
    # concave on (0, 1) and convex beyond it
    g = CustomModulus(parse_expression("x^2/(1+x)", (0, math.inf), ("x",)))
    g2 = CustomModulus(parse_expression("x + sin(x)*x^2/4", (0, math.inf), ("x",)))
    assert classify_additivity(g2, (1e-3, 20.0)).value is Additivity.Mixed
    assert classify_additivity(g, (1e-3, 1.0)).value is Additivity.SuperAdditive


def test_additivity_needs_enough_pairs():
    with pytest.raises(ValueError):
        classify_additivity(Linear(), pair_samples=10)


@given(st.floats(1e-6, 1.0), st.floats(1e-6, 1.0))
def test_sqrt_subadditivity_and_square_superadditivity(a, b):
    assert math.sqrt(a) + math.sqrt(b) >= math.sqrt(a + b)
    g2 = PowerLaw(2.0)
    assert g2(a) + g2(b) <= g2(a + b) * (1 + 1e-15)


@given(st.floats(0.05, 0.95), st.floats(1e-4, 1.0), st.floats(1e-4, 1.0))
def test_concave_midpoint_and_scaling(p, a, b):
    g = PowerLaw(p)
    assert g((a + b) / 2) >= (g(a) + g(b)) / 2 * (1 - 1e-12)
    lam = 1 + b
    assert g(lam * a) <= lam * g(a) * (1 + 1e-12)
    assert classify_additivity(g, pair_samples=100).value is Additivity.StrictlySubAdditive


@given(st.floats(1.05, 4.0), st.floats(1e-4, 1.0), st.floats(1e-4, 1.0))
def test_convex_midpoint_and_scaling(p, a, b):
    g = PowerLaw(p)
    assert g((a + b) / 2) <= (g(a) + g(b)) / 2 * (1 + 1e-12)
    lam = 1 + b
    assert g(lam * a) >= lam * g(a) * (1 - 1e-12)
    assert classify_additivity(g, pair_samples=100).value is Additivity.SuperAdditive


@given(st.integers(0, 2 ** 32 - 1))
def test_sample_pairs_in_range(seed):
    a, b = sample_pairs(1e-6, 1.0, 200, seed)
    s = a + b
    assert np.all(a >= 0) and np.all(b >= 0)
    assert np.all(s >= 1e-6 * (1 - 1e-12)) and np.all(s <= 1.0 + 1e-12)


@given(st.sampled_from(["sqrt", "p03", "cantor"]), st.floats(1e-5, 0.45), st.floats(1e-5, 0.45))
def test_point_oscillation_triangle_inequality(name, a, b):
    f = {"sqrt": builtin("power", 0.5), "p03": builtin("power", 0.3),
         "cantor": cantor_function(20)}[name]
    wa, wb = point_oscillation(f, 0, a, F, 64), point_oscillation(f, 0, b, F, 64)
    assert point_oscillation(f, 0, a + b, F, 64) <= wa + wb + 1e-9


# --- Lipschitz / singular ---------------------------------------------------

def test_modulus_type():
    p = oscillation_profile(parse_expression("x^2"), 1.0, LADDER, F)
    t = classify_modulus_type(p)
    assert t.value is ModulusKind.Lipschitz and t.ratio_limit.value == pytest.approx(2, abs=1e-6)
    p = oscillation_profile(builtin("power", 0.5), 0.0, LADDER, F)
    assert classify_modulus_type(p).value is ModulusKind.Singular
    p = oscillation_profile(cantor_function(30), 0.0, EpsilonLadder(1 / 3, 1 / 3, 15, 1e-9), F)
    assert classify_modulus_type(p).value is ModulusKind.Singular


@pytest.mark.parametrize("expr, x", [("sin(x)", 0.3), ("exp(x)", -0.7), ("x^3-x", 0.2),
                                     ("cos(3*x)", 1.1)])
def test_lipschitz_constant_of_smooth_functions(expr, x):
    f = parse_expression(expr)
    h = 1e-6
    slope = abs(f(x + h) - f(x - h)) / (2 * h)
    for side in (F, B):
        gc = growth_class_constant(f, x, Linear(), LADDER, side)
        assert gc.constant.converged
        assert gc.constant.value == pytest.approx(slope, abs=1e-4)


# --- growth class -----------------------------------------------------------

def test_growth_class_examples():
    gc = growth_class_constant(parse_expression("3*sqrt(x)+x", (0, math.inf)), 0.0,
                               PowerLaw(0.5), LADDER)
    assert gc.constant.converged and gc.constant.value == pytest.approx(3, abs=1e-3)
    gc = growth_class_constant(builtin("identity"), 0.0, PowerLaw(0.5), LADDER)
    assert gc.constant.converged and not gc.nonzero and not gc.member
    gc = growth_class_constant(builtin("power", 0.5), 0.0, Linear(), LADDER)
    assert gc.constant.status is Status.Diverged and not gc.member
    gc = growth_class_constant(builtin("identity"), 0.3, Linear(), LADDER)
    assert gc.member and gc.constant.value == pytest.approx(1.0, abs=1e-8)


def test_growth_class_rejects_vanishing_modulus():
    g = CustomModulus(parse_expression("0*x", (0, math.inf), ("x",)))
    with pytest.raises(DivisionGuard):
        growth_class_constant(builtin("identity"), 0.0, g, LADDER)


# --- canonical modulus ------------------------------------------------------

def test_canonical_modulus_of_identity_is_eps():
    g = canonical_modulus(builtin("identity"), 0.0, LADDER)
    assert g.norm_point == 1.0
    assert np.array_equal(g(LADDER.values), LADDER.values)


def test_canonical_modulus_near_domain_end_uses_first_increment():
    f = builtin("identity").restrict(0.0, 0.5)
    g = canonical_modulus(f, 0.0, LADDER)
    assert g.norm_point == LADDER.eps0 and g(LADDER.eps0) == 1.0


def test_canonical_modulus_degenerate():
    with pytest.raises(DegenerateModulus):
        canonical_modulus(builtin("const", 2.0), 0.3, LADDER)


def test_canonical_modulus_is_nondecreasing_and_vanishes():
    g = canonical_modulus(builtin("xsin1x"), 0.0, LADDER)
    v = g(LADDER.values)
    assert np.all(np.diff(v) <= 0) and v[-1] < 1e-6


# --- continuity ratio -------------------------------------------------------

@pytest.mark.parametrize("g, value", [(PowerLaw(0.5), math.sqrt(2)), (Linear(), 1.0),
                                      (PowerLaw(2.0), 0.5), (PowerLaw(0.25), 2 ** 0.75)])
def test_continuity_ratio(g, value):
    est = continuity_ratio(g, LADDER)
    assert est.converged and est.value == pytest.approx(value, rel=1e-12)
