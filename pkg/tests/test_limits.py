from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modderiv.errors import RangeError
from modderiv.limits import EpsilonLadder, LimitConfig, Side, Status, estimate_limit


def test_default_ladder():
    lad = EpsilonLadder()
    v = lad.values
    assert len(v) == 24 and v[0] == 0.1
    assert np.all(np.diff(v) < 0)
    assert v[-1] >= lad.floor


@pytest.mark.parametrize("kw", [dict(eps0=0), dict(ratio=1.0), dict(ratio=0), dict(steps=2),
                                dict(steps=40)])
def test_ladder_validation(kw):
    with pytest.raises(RangeError):
        EpsilonLadder(**kw)


def test_ladder_to_floor_and_clamp():
    lad = EpsilonLadder.to_floor(1.0, 0.1, 1e-9)
    assert lad.steps == 10
    c = EpsilonLadder().clamped(0.01)
    assert c.eps0 == 0.01 and c.steps == 24 and c.values[-1] >= c.floor
    assert EpsilonLadder().clamped(1.0) == EpsilonLadder()


def test_side_parse():
    assert Side.parse("+") is Side.Forward and Side.parse("Backward") is Side.Backward
    assert Side.Backward.sign == -1


def test_constant_sequence_converges_by_spread():
    est = estimate_limit([3.0] * 10)
    assert est.status is Status.Converged and est.value == 3.0 and est.method == "spread"


def test_geometric_extrapolation():
    eps = 0.1 * 0.5 ** np.arange(24)
    est = estimate_limit(5 + np.sqrt(eps), eps)
    assert est.converged and est.method == "geometric"
    assert est.value == pytest.approx(5.0, abs=1e-9)


def test_power_growth_diverges():
    eps = 0.1 * 0.5 ** np.arange(24)
    est = estimate_limit(eps ** -0.25, eps)
    assert est.status is Status.Diverged and est.value == math.inf
    est = estimate_limit(-(eps ** -0.5), eps)
    assert est.status is Status.Diverged and est.value == -math.inf


def test_cap_divergence():
    est = estimate_limit([1e8, 1e9, 1e10, 1e11, 1e12, 1e13])
    assert est.status is Status.Diverged and est.method in ("cap", "growth")


def test_oscillating():
    eps = 0.1 * 0.5 ** np.arange(24)
    est = estimate_limit(np.sin(1 / eps), eps)
    assert est.status is Status.Oscillating


def test_noise_widens_spread():
    v = [1.0, 1.0 + 4e-6, 1.0, 1.0 + 4e-6]
    assert estimate_limit(v, config=LimitConfig(fit_window=4)).status is not Status.Converged
    assert estimate_limit(v, noise=[3e-6] * 4).converged


@given(st.floats(-1e6, 1e6, allow_nan=False), st.floats(0.05, 0.9), st.floats(-10, 10))
def test_geometric_sequences_recover_limit(L, rho, c):
    n = np.arange(24)
    v = L + c * rho ** n
    est = estimate_limit(v)
    assert est.converged
    assert abs(est.value - L) <= 1e-6 + 1e-9 * abs(L)


@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=4, max_size=30))
def test_spread_converged_means_small_tail(values):
    est = estimate_limit(values)
    if est.converged and est.method == "spread":
        assert est.tail_spread <= LimitConfig().tol_conv
        assert np.ptp(values[-4:]) <= LimitConfig().tol_conv
