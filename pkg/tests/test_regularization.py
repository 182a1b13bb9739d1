"""Finite-cutoff interiors: delta maps, rectangles, shifted Coulomb."""

from __future__ import annotations

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings, strategies as st

from coulomb1d import regularization as r
from coulomb1d.connection import ConnectionParams, Family
from coulomb1d.errors import DegenerateParametersError, DomainError, PoleError
from coulomb1d.matcher import q_exact

PI = math.pi


# ---------------------------------------------------------------- forward map

def test_forward_symmetric_example():
    minus, plus = r.delta_forward(r.DeltaRegularization(0.01, 5.0, 100.0, 5.0))
    assert (minus.R, plus.R) == (-1.0, 1.0)
    assert minus.Q == pytest.approx(110.0, rel=1e-14)
    # 2u + 1/(d + 1/v) = 10 + 1/0.02
    assert plus.Q == pytest.approx(60.0, rel=1e-14)
    assert minus.family is Family.MINUS and plus.family is Family.PLUS


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-5, 1e-2), st.floats(-1e4, 1e4), st.floats(-1e6, 1e6))
def test_forward_symmetric_parity(d, u, v):
    assume(abs(1 + d * v) > 1e-6)
    minus, plus = r.delta_forward(r.DeltaRegularization(d, u, v, u))
    assert minus.R == -1.0 and plus.R == 1.0
    assert minus.Q == pytest.approx(2 * u + 1 / d, rel=1e-9, abs=1e-6)
    assert plus.Q == pytest.approx(2 * u + 1 / (d + 1 / v) if v != 0 else 2 * u, rel=1e-9, abs=1e-6)


def _symbolic_straight_line():
    """Quotients of ψ linear on (-d,0) and (0,d) with the three jumps, derived symbolically."""
    d, u1, v, u2, R, Q = sp.symbols("d u1 v u2 R Q")
    # psi(d) = 1, psi'(d+) = Q; left exterior psi(-d) = R, psi'(-d-) = -R Q
    s_left = -R * Q + 2 * u1 * R          # slope on (-d, 0)
    psi0 = R + d * s_left
    s_right = s_left + 2 * v * psi0       # slope on (0, d)
    eqs = [psi0 + d * s_right - 1, s_right + 2 * u2 * 1 - Q]
    return (d, u1, v, u2), sp.solve(eqs, [R, Q], dict=True)


def test_forward_matches_symbolic_derivation():
    (d, u1, v, u2), sols = _symbolic_straight_line()
    vals = {d: sp.Rational(1, 200), u1: 3, v: -40, u2: sp.Rational(17, 2)}
    pairs = sorted((float(s[sp.Symbol("R")].subs(vals)), float(s[sp.Symbol("Q")].subs(vals))) for s in sols)
    minus, plus = r.delta_forward(r.DeltaRegularization(0.005, 3.0, -40.0, 8.5))
    assert minus.R == pytest.approx(pairs[0][0], rel=1e-12) and minus.Q == pytest.approx(pairs[0][1], rel=1e-12)
    assert plus.R == pytest.approx(pairs[1][0], rel=1e-12) and plus.Q == pytest.approx(pairs[1][1], rel=1e-12)


def test_forward_guards():
    with pytest.raises(DomainError):
        r.delta_forward(r.DeltaRegularization(0.05, 1.0, 1.0, 1.0))
    r.delta_forward(r.DeltaRegularization(0.05, 1.0, 1.0, 1.0), max_d=None)
    with pytest.raises(DegenerateParametersError):
        r.delta_forward(r.DeltaRegularization(0.01, 1.0, -100.0, 2.0))
    with pytest.raises(DomainError):
        r.DeltaRegularization(0.0, 1.0, 1.0, 1.0)


def test_straight_line_transfer_agrees_with_closed_form():
    reg = r.DeltaRegularization(1e-3, -400.0, 2500.0, -380.0)
    closed = r.delta_forward(reg)
    via_t = r.quotients_from_transfer(r.delta_transfer(reg, None))
    for a, b in zip(closed, via_t):
        assert a.R == pytest.approx(b.R, rel=1e-10) and a.Q == pytest.approx(b.Q, rel=1e-10)


def test_exact_interior_close_to_straight_line():
    params = ConnectionParams(0.6, -0.7, 1.2)
    reg = r.delta_inverse(params, 1e-4)
    for a, b in zip(r.delta_forward(reg), r.delta_boundary_exact(reg, 1.3)):
        assert a.R == pytest.approx(b.R, rel=1e-6) and a.Q == pytest.approx(b.Q, rel=1e-5)


# ---------------------------------------------------------------- inverse map

def test_inverse_example():
    reg = r.delta_inverse(ConnectionParams(PI / 4, -PI / 4, PI / 4), 1e-4)
    t = math.tan(PI / 8)
    assert reg.u1 == reg.u2
    assert reg.u1 == pytest.approx(-5000 + 4 * math.log(10) - 0.5 * t, rel=1e-14)
    assert reg.u1 == pytest.approx(-4990.997, abs=1e-3)
    assert reg.v == pytest.approx(-1e4 + 1e8 / (-2 * t), rel=1e-14)
    assert reg.v == pytest.approx(-1e4 - 1.20711e8, rel=1e-5)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, PI - 0.05), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_inverse_asymmetry(w, tm, tp):
    assume(abs(math.tan(tm / 2) - math.tan(tp / 2)) > 1e-3 and abs(math.sin(2 * w)) > 1e-3)
    reg = r.delta_inverse(ConnectionParams(w, tm, tp), 1e-4)
    # difference of the two strength formulas; only |u2 - u1| ~ |cos 2w| matters physically
    expected = -0.5 * math.cos(2 * w) * (math.tan(tm / 2) - math.tan(tp / 2))
    assert reg.u2 - reg.u1 == pytest.approx(expected, rel=1e-6, abs=1e-9)


def test_inverse_degenerate():
    with pytest.raises(DegenerateParametersError):
        r.delta_inverse(ConnectionParams(0.3, 0.4, 0.4), 1e-4)
    with pytest.raises(DegenerateParametersError):
        r.delta_inverse(ConnectionParams(0.0, 0.4, -0.4), 1e-4)
    with pytest.raises(DegenerateParametersError):
        r.delta_inverse(ConnectionParams(PI / 2, 0.4, -0.4), 1e-4)


@pytest.mark.parametrize("d", [1e-3, 1e-4, 1e-5])
@pytest.mark.parametrize("w, tm, tp", [(PI / 4, -PI / 4, PI / 4), (0.3, -2.0, 1.1), (1.2, 0.5, -2.5),
                                       (2.0, -2.0, 1.1), (2.8, 1.0, 0.2)])
def test_round_trip(d, w, tm, tp):
    params = ConnectionParams(w, tm, tp)
    quotients = r.delta_forward(r.delta_inverse(params, d))
    # the forward roots are ordered by R; the connection families by Omega
    for fam in (Family.MINUS, Family.PLUS):
        R_target = math.tan(params.weight_angle(fam))
        bq = min(quotients, key=lambda q: abs(math.atan(q.R) - math.atan(R_target)))
        assert math.atan(bq.R) == pytest.approx(params.weight_angle(fam), abs=1e-9)
        assert bq.Q == pytest.approx(math.tan(params.theta(fam) / 2) - 2 * math.log(d), abs=1e-6 * d / 1e-3 + 1e-8)


# ---------------------------------------------------------------- rectangles

def test_rect_boundary_forms():
    reg = r.RectRegularization(0.01, 50.0)
    alpha = 1.3
    k = math.sqrt(2 * (50.0 + 0.5 / alpha ** 2))
    odd, even = r.rect_boundary(reg, alpha)
    assert odd.R == -1.0 and even.R == 1.0
    assert odd.Q == pytest.approx(k / math.tanh(k * 0.01), rel=1e-14)
    assert even.Q == pytest.approx(k * math.tanh(k * 0.01), rel=1e-14)


def test_rect_boundary_hard_barrier_and_small_kd():
    odd, even = r.rect_boundary(r.RectRegularization(0.01, 1e8), 1.0)
    assert even.Q == pytest.approx(math.sqrt(2e8 + 1), rel=1e-9)
    reg = r.RectRegularization(1e-4, 3.0)
    k2 = 2 * (3.0 + 0.5)
    odd, even = r.rect_boundary(reg, 1.0)
    assert odd.Q == pytest.approx(1e4 + k2 * 1e-4 / 3, rel=1e-12)
    assert even.Q == pytest.approx(k2 * 1e-4, rel=1e-6)


def test_rect_boundary_oscillatory_continuation():
    reg = r.RectRegularization(0.01, -100.0)
    alpha = 1.0
    kap = math.sqrt(2 * (0.5 - 100.0) * -1)
    odd, even = r.rect_boundary(reg, alpha)
    assert odd.Q == pytest.approx(kap / math.tan(kap * 0.01), rel=1e-13)
    assert even.Q == pytest.approx(-kap * math.tan(kap * 0.01), rel=1e-13)
    # continuity across V = E
    a = 1 / math.sqrt(2 * 7.0)
    lo = r.rect_boundary(r.RectRegularization(0.01, -7.0 - 1e-9), a)
    hi = r.rect_boundary(r.RectRegularization(0.01, -7.0 + 1e-9), a)
    assert lo[0].Q == pytest.approx(hi[0].Q, rel=1e-7) and lo[1].Q == pytest.approx(hi[1].Q, abs=1e-7)


def test_rect_families():
    assert r.rect_family_v1(0.01).V == -100.0
    assert r.rect_family_v1(1e-4).V == pytest.approx(-1e4)
    assert r.rect_family_v2(0.0, 1e-3).V == pytest.approx(1e3 * 3 * math.log(10), rel=1e-14)
    with pytest.raises(PoleError):
        r.rect_family_v2(-PI, 1e-3)


def test_rect_asymptotic_examples():
    q_odd, q_even = r.rect_asymptotic(0.0, 1e-4)
    assert q_even == pytest.approx(-2 * math.log(1e-4), rel=1e-14)
    assert q_even == pytest.approx(18.4207, abs=1e-4)
    assert q_odd == pytest.approx(1e4 + (2 / 3) * 4 * math.log(10), rel=1e-14)
    assert q_odd == pytest.approx(10006.14, abs=1e-2)


@pytest.mark.parametrize("theta", [-3 * PI / 4, 0.0, PI / 2])
def test_rect_v2_matches_asymptotics(theta):
    d = 1e-6
    for alpha in (0.7, 1.5, 2.6):
        odd, even = r.rect_boundary(r.rect_family_v2(theta, d), alpha)
        q_odd, q_even = r.rect_asymptotic(theta, d)
        k = math.sqrt(2 * r.rect_family_v2(theta, d).V + 1 / alpha ** 2)
        # remainders are O((kd)^3 / d) relative to the leading terms
        assert abs(even.Q - q_even) <= 10 * (k * d) ** 3 / d + 1e-9 * q_even
        assert abs(odd.Q - q_odd) <= 10 * (k * d) ** 3 / d + 1e-9 * q_odd


@pytest.mark.parametrize("theta", [-3 * PI / 4, 0.0, PI / 2])
def test_rect_v2_relative_error_at_1e4(theta):
    d = 1e-4
    odd, even = r.rect_boundary(r.rect_family_v2(theta, d), 1.0)
    q_odd, q_even = r.rect_asymptotic(theta, d)
    assert abs(even.Q / q_even - 1) <= 0.01
    assert abs(odd.Q / q_odd - 1) <= 0.01


# ---------------------------------------------------------------- shifted Coulomb

def test_shifted_coulomb_residuals():
    d = 1e-3
    odd, even = r.shifted_coulomb_quotients(d)
    assert odd(1.3) == pytest.approx(q_exact(d, 1.3) + 2 + 1 / d, rel=1e-14)
    assert even(1.3) == pytest.approx(q_exact(d, 1.3), rel=1e-14)
    b = r.shifted_coulomb_boundary(d)
    assert b(Family.MINUS, 0.9) == (-1.0, -2.0 - 1 / d)
    assert b(Family.PLUS, 0.9) == (1.0, 0.0)


def test_ratio_markers():
    inf = r.InfiniteRatio(-1)
    assert float(inf) == -math.inf and float(-inf) == math.inf
    assert r.ratio_angle(inf) == -PI / 2 and r.ratio_angle(1.0) == pytest.approx(PI / 4)
