"""
Finite-cutoff interiors replacing the Coulomb singularity on [-d, d].

Every model is reduced to boundary data at x = +-d for two solution
families:

    R = psi(-d) / psi(d),    Q = psi'(d) / psi(d).

Delta strengths use the convention  H = -psi''/2 + u delta(x - x0) psi,
so psi' jumps by 2 u psi(x0) across x0.

Two delta-interior maps are provided: the closed-form straight-line
interior (`delta_forward`, exact up to O(d/alpha)) and the transfer-matrix
interior with exponential free solutions (`delta_boundary_exact`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun
from .connection import ConnectionParams, Family
from .errors import DegenerateParametersError, DomainError, PoleError

DEFAULT_MAX_D = 0.01


@dataclass(frozen=True)
class InfiniteRatio:
    """Tagged stand-in for R = +-inf (all weight on the left side)."""

    sign: int = 1

    def __float__(self) -> float:
        return math.copysign(math.inf, self.sign)

    def __neg__(self) -> "InfiniteRatio":
        return InfiniteRatio(-self.sign)


Ratio = float | InfiniteRatio


def ratio_angle(R: Ratio) -> float:
    """Omega = atan(R) in [-pi/2, pi/2], with the infinite marker mapped to +-pi/2."""
    if isinstance(R, InfiniteRatio):
        return math.copysign(0.5 * math.pi, R.sign)
    return math.atan(R)


@dataclass(frozen=True)
class BoundaryQuotients:
    R: Ratio
    Q: float
    family: Family


@dataclass(frozen=True)
class DeltaRegularization:
    """Deltas of strength u1, v, u2 at x = -d, 0, +d."""

    d: float
    u1: float
    v: float
    u2: float

    def __post_init__(self) -> None:
        if not (self.d > 0.0 and math.isfinite(self.d)):
            raise DomainError(f"d must be a positive finite length, got {self.d!r}")
        for name in ("u1", "v", "u2"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")


@dataclass(frozen=True)
class RectRegularization:
    """Constant potential V on [-d, d]."""

    d: float
    V: float

    def __post_init__(self) -> None:
        if not (self.d > 0.0 and math.isfinite(self.d)):
            raise DomainError(f"d must be a positive finite length, got {self.d!r}")
        if not math.isfinite(self.V):
            raise DomainError("V must be finite")


def _check_cutoff(d: float, max_d: float | None) -> None:
    if max_d is not None and d > max_d:
        raise DomainError(f"d = {d} exceeds the small-cutoff guard {max_d}; pass max_d=None to override")


# ---------------------------------------------------------------------------
# three deltas
# ---------------------------------------------------------------------------

def delta_forward(reg: DeltaRegularization, max_d: float | None = DEFAULT_MAX_D
                  ) -> tuple[BoundaryQuotients, BoundaryQuotients]:
    """(minus, plus) quotients of the straight-line three-delta interior.

    The plus entry is the root with R = A + sqrt(1 + A^2) > 0, where
    A = 2 d (1 + d v)(u2 - u1); the minus entry has R = -1/R_plus.
    """
    _check_cutoff(reg.d, max_d)
    d, u1, v, u2 = reg.d, reg.u1, reg.v, reg.u2
    s = 1.0 + d * v
    if s == 0.0:
        raise DegenerateParametersError("1 + d v = 0: the interior transfer is singular")
    A = 2.0 * d * s * (u2 - u1)
    root = math.hypot(1.0, A)
    base = 0.5 / d + u1 + u2
    out = []
    for family in (Family.MINUS, Family.PLUS):
        sgn = family.sign
        # A + root > 0 always; R_- = -1/R_+ avoids cancellation in A - root
        R = A + root if sgn > 0 else -1.0 / (A + root)
        Q = base + (d * v - sgn * root) / (2.0 * d * s)
        out.append(BoundaryQuotients(R, Q, family))
    return out[0], out[1]


def delta_inverse(params: ConnectionParams, d: float) -> DeltaRegularization:
    """Delta strengths whose d -> 0 limit is the given connection condition."""
    if not d > 0.0:
        raise DomainError(f"d must be > 0, got {d!r}")
    if params.theta_minus == -math.pi or params.theta_plus == -math.pi:
        raise DegenerateParametersError("theta = -pi needs infinite delta strengths")
    s2, c2 = math.sin(2.0 * params.omega), math.cos(2.0 * params.omega)
    if abs(s2) < 1e-14:
        raise DegenerateParametersError("omega in {0, pi/2}: half-line limit, v is unbounded")
    tm = math.tan(0.5 * params.theta_minus)
    tp = math.tan(0.5 * params.theta_plus)
    diff = tm - tp
    if abs(diff) <= 1e-14 * max(1.0, abs(tm), abs(tp)):
        raise DegenerateParametersError("tan(theta_-/2) = tan(theta_+/2): v is singular")
    base = -0.5 / d - math.log(d)
    u1 = base + 0.25 * (1.0 + s2 + c2) * tm + 0.25 * (1.0 - s2 - c2) * tp
    u2 = base + 0.25 * (1.0 + s2 - c2) * tm + 0.25 * (1.0 - s2 + c2) * tp
    v = -1.0 / d + 1.0 / (d * d * s2 * diff)
    return DeltaRegularization(d, u1, v, u2)


def _free_propagator(k: float, length: float) -> np.ndarray:
    """Transfer matrix of psi'' = k^2 psi over the given length."""
    kl = k * length
    sinhc = math.sinh(kl) / kl if kl > 1e-8 else 1.0 + kl * kl / 6.0
    return np.array([[math.cosh(kl), length * sinhc],
                     [k * math.sinh(kl), math.cosh(kl)]])


def _jump(u: float) -> np.ndarray:
    return np.array([[1.0, 0.0], [2.0 * u, 1.0]])


def quotients_from_transfer(T: np.ndarray) -> tuple[BoundaryQuotients, BoundaryQuotients]:
    """(minus, plus) boundary data for an interior with transfer matrix T.

    T maps (psi, psi') at -d to (psi, psi') at +d.  Matching to the decaying
    exterior on both sides gives T01 Q^2 - (T00 + T11) Q + T10 = 0 with
    R = 1 / (T00 - T01 Q); the root with larger R is labelled plus.
    """
    # the quadratic is homogeneous in T, so solve it on a rescaled copy
    scale = float(np.max(np.abs(T)))
    t00, t01, t10, t11 = (float(t) / scale for t in T.ravel())
    tr = t00 + t11
    if t01 == 0.0:
        raise DegenerateParametersError("interior transfer has T01 = 0")
    # tr^2 - 4 t01 t10 rewritten with det T = 1: never negative, no cancellation
    sq = math.sqrt((t00 - t11) ** 2 + 4.0 / (scale * scale))
    # numerically stable pair of roots
    big = 0.5 * (tr + math.copysign(sq, tr)) / t01
    small = t10 / (t01 * big) if big != 0.0 else 0.5 * (tr - math.copysign(sq, tr)) / t01
    pairs = []
    for Q in (big, small):
        den = (t00 - t01 * Q) * scale
        R: Ratio = 1.0 / den if den != 0.0 else InfiniteRatio(1)
        pairs.append((float(R), R, float(Q)))
    pairs.sort(key=lambda p: p[0])
    minus = BoundaryQuotients(pairs[0][1], pairs[0][2], Family.MINUS)
    plus = BoundaryQuotients(pairs[1][1], pairs[1][2], Family.PLUS)
    return minus, plus


def delta_transfer(reg: DeltaRegularization, alpha: float | None) -> np.ndarray:
    """Transfer matrix across [-d, d]; alpha=None gives the straight-line interior."""
    k = 0.0 if alpha is None else 1.0 / alpha
    P = _free_propagator(k, reg.d) if k > 0.0 else np.array([[1.0, reg.d], [0.0, 1.0]])
    return _jump(reg.u2) @ P @ _jump(reg.v) @ P @ _jump(reg.u1)


def delta_boundary_exact(reg: DeltaRegularization, alpha: float
                         ) -> tuple[BoundaryQuotients, BoundaryQuotients]:
    """(minus, plus) quotients with exponential interior solutions at energy -1/(2 alpha^2)."""
    if not alpha > 0.0:
        raise DomainError("alpha must be > 0")
    return quotients_from_transfer(delta_transfer(reg, alpha))


# ---------------------------------------------------------------------------
# rectangular wells and barriers
# ---------------------------------------------------------------------------

def rect_boundary(reg: RectRegularization, alpha: float) -> tuple[BoundaryQuotients, BoundaryQuotients]:
    """(odd, even) quotients of a constant interior at energy -1/(2 alpha^2).

    Odd solutions (R = -1) belong to the minus family and even ones (R = +1)
    to the plus family.  For V < E the interior is oscillatory and the
    hyperbolic forms continue to kappa cot(kappa d) and -kappa tan(kappa d).
    """
    if not alpha > 0.0:
        raise DomainError("alpha must be > 0")
    d = reg.d
    gap = 2.0 * (reg.V + 0.5 / (alpha * alpha))  # 2 (V - E)
    if gap > 0.0:
        k = math.sqrt(gap)
        kd = k * d
        q_odd = k / math.tanh(kd) if kd > 1e-8 else 1.0 / d + gap * d / 3.0
        q_even = k * math.tanh(kd)
    elif gap < 0.0:
        kap = math.sqrt(-gap)
        kd = kap * d
        q_odd = kap / math.tan(kd) if kd > 1e-8 else 1.0 / d + gap * d / 3.0
        q_even = -kap * math.tan(kd)
    else:
        q_odd, q_even = 1.0 / d, 0.0
    return (BoundaryQuotients(-1.0, q_odd, Family.MINUS),
            BoundaryQuotients(1.0, q_even, Family.PLUS))


def rect_family_v1(d: float) -> RectRegularization:
    """Well of depth 1/d on [-d, d]."""
    if not d > 0.0:
        raise DomainError("d must be > 0")
    return RectRegularization(d, -1.0 / d)


def rect_family_v2(theta: float, d: float) -> RectRegularization:
    """Barrier or well V = (-ln d + tan(theta/2)/2) / d, tuned to the even-family angle theta."""
    if not d > 0.0:
        raise DomainError("d must be > 0")
    if theta == -math.pi or theta == math.pi:
        raise PoleError("theta = +-pi is a pole of tan(theta/2); use rect_family_v1")
    return RectRegularization(d, (-math.log(d) + 0.5 * math.tan(0.5 * theta)) / d)


def rect_asymptotic(theta: float, d: float) -> tuple[float, float]:
    """Small-d (Q_odd, Q_even) of the tuned barrier family."""
    if not d > 0.0:
        raise DomainError("d must be > 0")
    t = math.tan(0.5 * theta)
    ln_d = math.log(d)
    return 1.0 / d - (2.0 / 3.0) * ln_d + t / 3.0, -2.0 * ln_d + t


# ---------------------------------------------------------------------------
# Coulomb tail shifted onto the cutoff
# ---------------------------------------------------------------------------

def _quotient(d: float, alpha: float) -> float:
    z = 2.0 * d / alpha
    return (2.0 / alpha) * specfun.whittaker_w_logderiv(alpha, z).value


def shifted_coulomb_quotients(d: float) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """Residual functions of alpha for the shifted-Coulomb interior.

    odd(alpha) = Q(d, alpha) + 2 + 1/d and even(alpha) = Q(d, alpha); their
    zeros are the odd and even levels.
    """
    if not d > 0.0:
        raise DomainError("d must be > 0")

    def odd(alpha: float) -> float:
        return _quotient(d, alpha) + 2.0 + 1.0 / d

    def even(alpha: float) -> float:
        return _quotient(d, alpha)

    return odd, even


def shifted_coulomb_boundary(d: float) -> Callable[[Family, float], tuple[Ratio, float]]:
    """The same conditions as targets (R, Q) for the regularized-spectrum solver."""
    if not d > 0.0:
        raise DomainError("d must be > 0")

    def boundary(family: Family, alpha: float) -> tuple[Ratio, float]:
        if Family(family) is Family.MINUS:
            return -1.0, -2.0 - 1.0 / d
        return 1.0, 0.0

    return boundary
