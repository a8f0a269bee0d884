from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modderiv.corpus import builtin, cantor_function, svc_singular_cdf, weierstrass
from modderiv.errors import DomainError
from modderiv.functions import RealFunction, parse_expression
from modderiv.limits import EpsilonLadder, Side
from modderiv.oscillation import (detect_discontinuities, directed_oscillation,
                                  interval_oscillation, majorization_holds, oscillation_limit,
                                  oscillation_profile, point_oscillation, scan,
                                  total_variation, two_sided_limit)

F, B = Side.Forward, Side.Backward
LADDER = EpsilonLadder()

CORPUS = {
    "sqrt": builtin("power", 0.5),
    "cubic": builtin("cubic"),
    "xsin1x": builtin("xsin1x"),
    "exp_flat": builtin("exp_flat"),
    "cantor": cantor_function(20),
    "svc": svc_singular_cdf(10),
    "weier": weierstrass(0.5, 3, 12),
    "abs": builtin("abs"),
    "step": builtin("step", 0.5),
}


def test_interval_oscillation_examples():
    assert interval_oscillation(parse_expression("x^2"), (0, 2)) == 4
    assert interval_oscillation(builtin("const", 3.0), (-5, 5)) == 0
    assert interval_oscillation(builtin("sin"), (0, 2 * math.pi), 4096) == pytest.approx(2, abs=1e-5)


def test_directed_oscillation_examples():
    assert directed_oscillation(builtin("identity"), 0, 1, F) == 1
    # cadlag step: f(0) = 1 and f = 0 to the left
    assert directed_oscillation(builtin("step", 0.0), 0, 0.5, B) == 1
    assert directed_oscillation(builtin("step", 0.0), 0, 0.5, F) == 0
    for side in (F, B):
        assert directed_oscillation(builtin("abs"), 0, 1, side) == 1


def test_point_oscillation_examples():
    f = parse_expression("x^3+x")
    assert point_oscillation(f, 0.3, 0.2, F) == pytest.approx(abs(f(0.5) - f(0.3)), abs=0)
    assert point_oscillation(builtin("abs"), 0, 1, F) == 1
    assert point_oscillation(cantor_function(12), 0, 3.0 ** -5, F) == 2.0 ** -5


def test_point_oscillation_sees_interior_extremes():
    # |f(t) - f(x)| peaks inside the interval, not at its end
    f = builtin("sin")
    assert point_oscillation(f, 0.0, math.pi, F) == pytest.approx(1.0, abs=1e-6)


def test_domain_errors():
    with pytest.raises(DomainError):
        point_oscillation(builtin("power", 0.5), -1.0, 0.1, F)
    with pytest.raises(DomainError):
        point_oscillation(builtin("power", 0.5), 0.0, 0.1, B)


def test_profiles_of_monotone_functions():
    p = oscillation_profile(builtin("identity"), 0.0, LADDER, F)
    assert np.array_equal(p.omega, LADDER.values)
    p = oscillation_profile(builtin("power", 0.5), 0.0, LADDER, F)
    assert np.array_equal(p.omega, np.sqrt(LADDER.values))
    f = parse_expression("exp(x)")
    p = oscillation_profile(f, 0.2, LADDER, B)
    assert np.array_equal(p.omega, np.abs(p.delta))


def test_oscillation_limits():
    est = oscillation_limit(oscillation_profile(builtin("sin"), 0.7, LADDER, F))
    assert est.converged and abs(est.value) <= 1e-6
    est = oscillation_limit(oscillation_profile(builtin("step", 0.0), 0.0, LADDER, B))
    assert est.converged and est.value == 1
    est = oscillation_limit(oscillation_profile(builtin("xsin1x"), 0.0, LADDER, F))
    assert est.converged and abs(est.value) <= 1e-6


@pytest.mark.parametrize("x, side, limit", [(0.5, F, 0.0), (0.5, B, 1.0), (0.3, B, 0.0),
                                            (0.7, F, 0.0)])
def test_oscillation_limit_matches_one_sided_continuity(x, side, limit):
    est = oscillation_limit(oscillation_profile(builtin("step", 0.5), x, LADDER, side))
    assert est.converged and est.value == limit


def test_total_variation_examples():
    f = parse_expression("x^3")
    for n in (1, 7, 100):
        assert total_variation(f, (-1, 2), n) == pytest.approx(9.0, abs=1e-12)
    assert total_variation(builtin("abs"), (-1, 1), 10) == 2
    assert total_variation(builtin("sin"), (0, 2 * math.pi), 4096) == pytest.approx(4, abs=1e-4)


@given(st.integers(1, 200))
def test_total_variation_grows_under_refinement(n):
    f = weierstrass(0.5, 3, 8)
    assert total_variation(f, (0, 1), 2 * n) >= total_variation(f, (0, 1), n) - 1e-12


def test_detect_single_jump():
    found = detect_discontinuities(builtin("step", 0.5), (0, 1), 1001, 0.5)
    assert len(found) == 1 and found[0].x == 0.5
    assert found[0].osc == pytest.approx(1.0, abs=1e-9)


def test_detect_continuous_is_empty():
    assert detect_discontinuities(builtin("sin"), (0, 1), 101, 1e-3) == []


def test_detect_staircase_threshold():
    f = RealFunction.from_callable(
        lambda x: 0.5 * (x >= 0.5) + 0.25 * (x >= 0.25) + 0.125 * (x >= 0.125),
        (0.0, 1.0), "stairs")
    found = detect_discontinuities(f, (0, 1), 1001, 0.2)
    assert [d.x for d in found] == [0.25, 0.5]
    assert [d.osc for d in found] == [0.25, 0.5]


def test_detect_independent_of_workers():
    f = builtin("step", 0.5)
    a = detect_discontinuities(f, (0, 1), 201, 0.5, workers=1)
    b = detect_discontinuities(f, (0, 1), 201, 0.5, workers=4)
    assert a == b


def test_two_sided_limit_at_domain_end():
    est = two_sided_limit(builtin("power", 0.5), 0.0, LADDER)
    assert est.converged and abs(est.value) < 1e-3


# --- properties -------------------------------------------------------------

@given(st.sampled_from(sorted(CORPUS)), st.floats(0.05, 0.95), st.floats(1e-6, 0.04),
       st.sampled_from([F, B]))
def test_majorization_chain(name, x, eps, side):
    f = CORPUS[name]
    assert majorization_holds(f, x, eps, side)
    s = scan(f, x, [eps], side)
    assert s.osc[0] >= s.omega[0] >= abs(s.delta[0])


@given(st.sampled_from(sorted(CORPUS)), st.floats(0.1, 0.9), st.sampled_from([F, B]))
def test_profile_invariants(name, x, side):
    p = oscillation_profile(CORPUS[name], x, LADDER, side, resolution=256)
    w = p.omega
    assert np.all(w >= 0)
    assert np.all(w[:-1] >= w[1:])
    for e in p.entries:
        lo, hi = sorted((x, x + side.sign * e.eps))
        assert lo - 1e-15 <= e.sup_witness <= hi + 1e-15
        assert lo - 1e-15 <= e.inf_witness <= hi + 1e-15


@given(st.floats(1e-4, 0.5), st.floats(1e-4, 0.5))
def test_super_additive_oscillation_lemma(a, b):
    for f in (builtin("cubic"), parse_expression("x^2")):
        lhs = directed_oscillation(f, 0, a, F) + directed_oscillation(f, 0, b, F)
        assert lhs <= directed_oscillation(f, 0, a + b, F) * (1 + 1e-12)


@given(st.floats(1e-4, 0.5), st.floats(1e-4, 0.5))
def test_sub_additive_oscillation_lemma(a, b):
    for f in (builtin("power", 0.5), builtin("power", 0.3), cantor_function(20)):
        lhs = directed_oscillation(f, 0, a, F) + directed_oscillation(f, 0, b, F)
        assert lhs >= directed_oscillation(f, 0, a + b, F) * (1 - 1e-12)


def test_refinement_catches_narrow_spike():
    # a spike narrower than the coarse grid spacing but wider than the midpoint gap
    f = RealFunction.from_callable(lambda x: np.where(np.abs(x - 0.5 / 7) < 0.02, 1.0, 0.0),
                                   (0.0, 1.0), "spike")
    s = scan(f, 0.0, [1.0], F, resolution=8)
    assert s.sup[0] == 1.0 and s.resolution[0] == 15
