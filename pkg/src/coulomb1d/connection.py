"""
Point-interaction model of the 1D hydrogen atom.

Bound states of  -psi''/2 - psi/|x| = E psi  (atomic units) are

    psi(x) = N [sin(Omega) H(-x) + cos(Omega) H(x)] W_{alpha,1/2}(2|x|/alpha),
    alpha = 1/sqrt(-2E),

and the self-adjoint connection condition at the origin is labelled by
(omega, theta_minus, theta_plus).  Each family f in {minus, plus} has one
level per branch alpha in (n, n+1), fixed by

    g(alpha) = -1/alpha - 2 ln(2/alpha) - 2 psi_0(1-alpha) - 4 gamma = tan(theta_f / 2).

The plus family carries Omega = omega and the minus family
Omega = omega - pi/2.  This pairing is what the connection condition
(U - I) Psi + i (U + I) Psi' = 0 actually enforces (`verify_connection`
checks it numerically); for omega = pi/4 it makes the minus family odd and
the plus family even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from . import specfun
from .errors import DomainError, EvaluationError, PoleError, UnsupportedLevelError
from .specfun import EULER_GAMMA

TWO_PI = 2.0 * math.pi


class Family(str, Enum):
    MINUS = "minus"
    PLUS = "plus"

    @property
    def sign(self) -> int:
        return -1 if self is Family.MINUS else 1


FAMILIES = (Family.MINUS, Family.PLUS)


def wrap_theta(theta: float) -> float:
    """Reduce an angle into [-pi, pi)."""
    t = math.fmod(theta + math.pi, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    t -= math.pi
    # a tiny negative remainder can round up onto the excluded endpoint
    return -math.pi if t >= math.pi else t


def wrap_omega(omega: float) -> float:
    """Reduce an angle into [0, pi)."""
    w = math.fmod(omega, math.pi)
    if w < 0.0:
        w += math.pi
    return 0.0 if w >= math.pi else w


def wrap_weight(Omega: float) -> float:
    """Reduce a side-weight angle into [-pi/2, pi/2] (psi -> -psi is harmless)."""
    return Omega - math.pi * round(Omega / math.pi)


@dataclass(frozen=True)
class ConnectionParams:
    """Self-adjoint connection condition (omega, theta_minus, theta_plus).

    Angles are normalized on construction.  lambda_ must be zero: no other
    value admits bound states.
    """

    omega: float
    theta_minus: float
    theta_plus: float
    lambda_: float = 0.0

    def __post_init__(self) -> None:
        if self.lambda_ != 0.0:
            raise DomainError("only lambda = 0 connection conditions have bound states")
        for name in ("omega", "theta_minus", "theta_plus"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        object.__setattr__(self, "omega", wrap_omega(self.omega))
        object.__setattr__(self, "theta_minus", wrap_theta(self.theta_minus))
        object.__setattr__(self, "theta_plus", wrap_theta(self.theta_plus))

    def theta(self, family: Family) -> float:
        return self.theta_minus if Family(family) is Family.MINUS else self.theta_plus

    def weight_angle(self, family: Family) -> float:
        """Omega of the given family: omega for plus, omega - pi/2 for minus."""
        if Family(family) is Family.PLUS:
            return wrap_weight(self.omega)
        return wrap_weight(self.omega - 0.5 * math.pi)


@dataclass(frozen=True)
class SpectralLevel:
    """One bound state of the point-interaction Hamiltonian."""

    family: Family
    branch: int
    alpha: float
    energy: float
    Omega: float
    norm: float = 1.0
    divergent: bool = False


@dataclass(frozen=True)
class UnitaryDecomposition:
    theta_plus: float
    theta_minus: float
    omega: float
    lambda_: float
    D: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)


def energy(alpha: float) -> float:
    """E = -1/(2 alpha^2)."""
    if not alpha > 0.0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    return -0.5 / (alpha * alpha)


def spectral_function(alpha: float) -> float:
    """Left-hand side g(alpha) of the spectral equation g(alpha) = tan(theta/2)."""
    if not alpha > 0.0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    if alpha == math.floor(alpha):
        raise PoleError(f"spectral function has a pole at integer alpha = {alpha!r}")
    return (-1.0 / alpha - 2.0 * math.log(2.0 / alpha)
            - 2.0 * specfun.digamma(1.0 - alpha).value - 4.0 * EULER_GAMMA)


def spectral_function_general(alpha: float, beta: float) -> float:
    """Spectral equation right-hand side for an arbitrary auxiliary eigenvalue beta.

    Equals g(alpha) - g(beta); reduces to g(alpha) at the fixed beta.
    """
    def part(s: float) -> float:
        return -1.0 / s + 2.0 * math.log(s) - 2.0 * specfun.digamma(1.0 - s).value
    return part(alpha) - part(beta)


def _bracketed_root(f: Callable[[float], float], lo_edge: float, hi_edge: float) -> float:
    """Root of an increasing f on (lo_edge, hi_edge) with f -> -inf/+inf at the edges."""
    width = hi_edge - lo_edge
    floor = 4.0 * np.spacing(max(abs(lo_edge), abs(hi_edge), 1.0))
    d_lo = d_hi = 1e-3 * width
    while f(lo_edge + d_lo) > 0.0:
        d_lo *= 0.1
        if d_lo < floor:
            return lo_edge + floor
    while f(hi_edge - d_hi) < 0.0:
        d_hi *= 0.1
        if d_hi < floor:
            return hi_edge - floor
    return optimize.brentq(f, lo_edge + d_lo, hi_edge - d_hi,
                           xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=300)


def solve_alpha(theta: float, branch: int) -> float:
    """alpha on branch n, the unique root of g(alpha) = tan(theta/2) in (n, n+1).

    theta = -pi returns the Rydberg value alpha = n (0.0 on branch 0, the
    divergent ground state).  theta = +pi is accepted as the left limit and
    returns n + 1.
    """
    if branch < 0:
        raise DomainError(f"branch must be >= 0, got {branch}")
    if not -math.pi <= theta <= math.pi:
        raise DomainError(f"theta must lie in [-pi, pi], got {theta!r}")
    n = int(branch)
    if theta == -math.pi:
        return float(n)
    if theta == math.pi:
        return float(n + 1)
    target = math.tan(0.5 * theta)
    return _bracketed_root(lambda a: spectral_function(a) - target, float(n), float(n + 1))


def spectrum(params: ConnectionParams, n_max: int, normalized: bool = False) -> list[SpectralLevel]:
    """Levels of both families on branches 0..n_max.

    With normalized=False the norm field is left at 1.0.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    levels = []
    for family in FAMILIES:
        theta = params.theta(family)
        Omega = params.weight_angle(family)
        for n in range(n_max + 1):
            alpha = solve_alpha(theta, n)
            if alpha == 0.0:
                levels.append(SpectralLevel(family, n, 0.0, -math.inf, Omega, math.nan, True))
                continue
            level = SpectralLevel(family, n, alpha, energy(alpha), Omega)
            levels.append(normalize(level) if normalized else level)
    return levels


def _profile(alpha: float, x: float) -> float:
    if x == 0.0:
        return specfun.whittaker_w_origin(alpha)
    return specfun.whittaker_w(alpha, 0.5, 2.0 * abs(x) / alpha).value


def eigenfunction_eval(level: SpectralLevel, x: float) -> float:
    """psi(x) for the level, including its norm and side weights.

    At x = 0 the right-hand weight cos(Omega) is used with the z -> 0 limit
    of W.
    """
    if level.divergent:
        raise UnsupportedLevelError("the divergent ground state has no wavefunction")
    side = math.sin(level.Omega) if x < 0.0 else math.cos(level.Omega)
    if side == 0.0:
        return 0.0
    return level.norm * side * _profile(level.alpha, x)


def normalize(level: SpectralLevel) -> SpectralLevel:
    """Set the norm so that the integral of psi^2 over the whole line is 1.

    sin^2 + cos^2 = 1 makes the integral side independent, so only
    int_0^inf W(2x/alpha)^2 dx is needed.
    """
    if level.divergent or not math.isfinite(level.alpha):
        raise UnsupportedLevelError("cannot normalize the divergent ground state")
    alpha = level.alpha

    def w2(z: float) -> float:
        return specfun.whittaker_w(alpha, 0.5, z).value ** 2

    # W^2 ~ z^(2 alpha) e^-z: walk past the peak until it is negligible
    peak = max(w2(z) for z in np.linspace(0.25, 2.0 * alpha + 4.0, 24))
    z_max = 2.0 * alpha + 4.0
    while w2(z_max) > 1e-16 * peak or z_max < 4.0 * alpha + 20.0:
        z_max *= 1.25
    # nodes of W sit below ~4 alpha; split there so quad sees smooth pieces
    edges = np.linspace(0.0, min(z_max, 4.0 * alpha + 8.0), int(alpha) + 3)
    edges = list(edges) + ([z_max] if z_max > edges[-1] else [])
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = integrate.quad(w2, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
        if err > 1e-9 * max(val, 1e-300) and err > 1e-14:
            raise EvaluationError(f"normalization quadrature failed on [{lo}, {hi}]")
        total += val
    total *= 0.5 * alpha
    if not total > 0.0:
        raise EvaluationError("normalization integral vanished")
    return replace(level, norm=1.0 / math.sqrt(total))


# ---------------------------------------------------------------------------
# auxiliary functions and the connection condition itself
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuxiliaryPair:
    """Auxiliary eigenfunctions phi_1, phi_2 at eigenvalue beta, W[phi_1, phi_2] = 1."""

    beta: float

    @property
    def residual(self) -> float:
        return _beta_equation(self.beta)

    def phi1(self, x: float) -> float:
        # odd continuation: (beta/2) M_{beta,1/2}(2|x|/beta) sgn(x)
        b = self.beta
        m = specfun.whittaker_m(b, 0.5, 2.0 * abs(x) / b).value
        return math.copysign(0.5 * b * m, x)

    def phi2(self, x: float) -> float:
        b = self.beta
        if x == 0.0:
            return -1.0
        gamma_1mb = math.exp(specfun.log_gamma(1.0 - b).value)
        return -gamma_1mb * specfun.whittaker_w(b, 0.5, 2.0 * abs(x) / b).value


def _beta_equation(beta: float) -> float:
    return (1.0 / beta - 2.0 * math.log(beta) + 2.0 * specfun.digamma(1.0 - beta).value
            + 4.0 * EULER_GAMMA + 2.0 * math.log(2.0))


def solve_beta() -> AuxiliaryPair:
    """The beta in (0, 1) that removes the auxiliary terms from the spectral equation."""
    # h(1/2) = 2 + 2 gamma > 0 and h -> -inf as beta -> 1-
    hi = 1.0 - 1e-3
    while _beta_equation(hi) > 0.0:
        hi = 1.0 - 0.1 * (1.0 - hi)
    beta = optimize.brentq(_beta_equation, 0.5, hi, xtol=1e-16, rtol=4.0 * np.finfo(float).eps)
    return AuxiliaryPair(beta)


def build_unitary(params: ConnectionParams) -> UnitaryDecomposition:
    """U = V^-1 D V with D = diag(e^{-i theta_+}, e^{-i theta_-}) and V in SU(2)."""
    tp, tm, w, lam = params.theta_plus, params.theta_minus, params.omega, params.lambda_
    D = np.diag([np.exp(-1j * tp), np.exp(-1j * tm)])
    V = np.array([[np.exp(1j * lam) * math.cos(w), math.sin(w)],
                  [-math.sin(w), np.exp(-1j * lam) * math.cos(w)]], dtype=complex)
    U = np.linalg.inv(V) @ D @ V
    defect = np.linalg.norm(U @ U.conj().T - np.eye(2))
    if defect > 1e-12:
        raise EvaluationError(f"U is not unitary (defect {defect:.3e})")
    return UnitaryDecomposition(tp, tm, w, lam, D, V, U)


def _derivative(f: Callable[[float], float], x: float, h: float) -> float:
    # five-point central difference
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)


def wronskian(f: Callable[[float], float], g: Callable[[float], float], x: float, h: float) -> float:
    """W[f, g](x) = f g' - f' g with finite-difference derivatives."""
    return f(x) * _derivative(g, x, h) - _derivative(f, x, h) * g(x)


def boundary_vectors(level: SpectralLevel, beta: AuxiliaryPair, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """(Psi, Psi') from one-sided Wronskians at x = +-eps, extrapolated to eps -> 0."""
    if level.divergent:
        raise UnsupportedLevelError("the divergent ground state has no wavefunction")

    def psi(x: float) -> float:
        return eigenfunction_eval(level, x)

    def at(e: float) -> np.ndarray:
        h = e / 100.0
        return np.array([
            wronskian(psi, beta.phi1, e, h),
            wronskian(psi, beta.phi1, -e, h),
            wronskian(psi, beta.phi2, e, h),
            -wronskian(psi, beta.phi2, -e, h),
        ])

    w = 2.0 * at(0.5 * eps) - at(eps)
    return w[:2].astype(complex), w[2:].astype(complex)


def verify_connection(level: SpectralLevel, params: ConnectionParams,
                      beta: AuxiliaryPair | None = None, eps: float = 1e-5) -> float:
    """Relative residual of (U - I) Psi + i (U + I) Psi' = 0 for the level."""
    if not eps > 0.0:
        raise DomainError("eps must be > 0")
    beta = beta if beta is not None else solve_beta()
    U = build_unitary(params).U
    Psi, dPsi = boundary_vectors(level, beta, eps)
    eye = np.eye(2)
    res = (U - eye) @ Psi + 1j * (U + eye) @ dPsi
    scale = np.linalg.norm(Psi) + np.linalg.norm(dPsi)
    return float(np.linalg.norm(res) / scale)
