"""
Matching a finite-cutoff interior to the exterior Coulomb solution.

Outside [-d, d] every bound state is W_{alpha,1/2}(2|x|/alpha) on each side,
so its boundary data are R = tan(Omega) and

    Q(d, alpha) = psi'(d)/psi(d) = 1/alpha - alpha/d - W_{alpha+1,1/2}(z) / (d W_{alpha,1/2}(z)),
    z = 2d/alpha.

For small d, Q ~ g(alpha) - 2 ln d + O(d ln^2 d), which is how an interior
whose Q grows like -2 ln d + tan(theta/2) selects the connection angle theta.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize

from . import connection, regularization, specfun
from .connection import ConnectionParams, Family, FAMILIES, wrap_theta
from .errors import DomainError, PoleError
from .regularization import InfiniteRatio, Ratio, ratio_angle

log = logging.getLogger(__name__)

Boundary = Callable[[Family, float], tuple[Ratio, float]]

# energies below this are treated as off the bottom of a spectrum plot
VERY_LOW_ENERGY = -1.5
RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class RegularizedLevel:
    family: Family
    branch: int
    alpha: float
    Omega: float
    d: float
    residual: float

    @property
    def energy(self) -> float:
        return connection.energy(self.alpha)

    @property
    def very_low(self) -> bool:
        return self.energy < VERY_LOW_ENERGY


def is_very_low(energy: float) -> bool:
    return energy < VERY_LOW_ENERGY


def r_of_Omega(Omega: float) -> Ratio:
    """R = tan(Omega); Omega = +-pi/2 gives the infinite marker."""
    w = connection.wrap_weight(Omega)
    if abs(abs(w) - 0.5 * math.pi) < 1e-15:
        return InfiniteRatio(1 if w > 0.0 else -1)
    return math.tan(w)


def q_exact(d: float, alpha: float) -> float:
    """psi'(d)/psi(d) of the exterior solution W_{alpha,1/2}(2x/alpha)."""
    if not d > 0.0:
        raise DomainError(f"d must be > 0, got {d!r}")
    if not alpha > 0.0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    return (2.0 / alpha) * specfun.whittaker_w_logderiv(alpha, 2.0 * d / alpha).value


def q_asymptotic(d: float, alpha: float) -> float:
    """Small-d form g(alpha) - 2 ln d of the exterior quotient."""
    if not d > 0.0:
        raise DomainError(f"d must be > 0, got {d!r}")
    return connection.spectral_function(alpha) - 2.0 * math.log(d)


def connection_from_Q(Q_value: float, d: float) -> float:
    """theta = 2 atan(Q + 2 ln d), wrapped into [-pi, pi)."""
    if not d > 0.0:
        raise DomainError(f"d must be > 0, got {d!r}")
    s = Q_value + 2.0 * math.log(d)
    if math.isinf(s):
        return -math.pi
    return wrap_theta(2.0 * math.atan(s))


@dataclass(frozen=True)
class LimitClassification:
    """d -> 0 behaviour of Q + 2 ln d over a sweep."""

    theta: float
    rydberg: bool
    slope: float


def classify_connection_limit(q_of_d: Callable[[float], float], d_list: Sequence[float],
                              slope_tol: float = 0.1) -> LimitClassification:
    """Decide whether Q(d) + 2 ln d settles (theta = 2 atan(limit)) or runs off (theta = -pi).

    The shift s(d) = Q(d) + 2 ln d is regressed on ln d; a slope above
    slope_tol in magnitude means s diverges and the limit is Rydberg.
    """
    ds = np.asarray(sorted(d_list, reverse=True), dtype=float)
    if ds.size < 2 or np.any(ds <= 0.0):
        raise DomainError("need at least two positive cutoffs")
    s = np.array([q_of_d(d) + 2.0 * math.log(d) for d in ds])
    slope = float(np.polyfit(np.log(ds), s, 1)[0])
    # a 1/d term shows up as a steep, growing slope between the last two points
    last = (s[-1] - s[-2]) / (math.log(ds[-1]) - math.log(ds[-2]))
    if abs(slope) > slope_tol or abs(last) > slope_tol:
        return LimitClassification(-math.pi, True, slope)
    return LimitClassification(wrap_theta(2.0 * math.atan(s[-1])), False, slope)


# ---------------------------------------------------------------------------
# boundary adapters
# ---------------------------------------------------------------------------

def delta_boundary(reg: regularization.DeltaRegularization, exact_interior: bool = False,
                   max_d: float | None = regularization.DEFAULT_MAX_D) -> Boundary:
    """Targets (R, Q) of a three-delta interior, straight-line or exact."""
    if exact_interior:
        def boundary(family: Family, alpha: float) -> tuple[Ratio, float]:
            bq = regularization.delta_boundary_exact(reg, alpha)[FAMILIES.index(Family(family))]
            return bq.R, bq.Q
        return boundary
    fixed = regularization.delta_forward(reg, max_d=max_d)

    def boundary(family: Family, alpha: float) -> tuple[Ratio, float]:
        bq = fixed[FAMILIES.index(Family(family))]
        return bq.R, bq.Q
    return boundary


def rect_boundary(reg: regularization.RectRegularization) -> Boundary:
    """Targets (R, Q) of a rectangular interior; minus is odd, plus is even."""
    def boundary(family: Family, alpha: float) -> tuple[Ratio, float]:
        bq = regularization.rect_boundary(reg, alpha)[FAMILIES.index(Family(family))]
        return bq.R, bq.Q
    return boundary


# ---------------------------------------------------------------------------
# finite-d spectrum
# ---------------------------------------------------------------------------

def _scan_grid(d: float, n_max: int) -> np.ndarray:
    # log-spaced below 1/2 (deep levels), then a fine linear mesh offset from the integers
    lo = max(d / 200.0, 1e-8)
    head = np.geomspace(lo, 0.5, 80, endpoint=False)
    tail = np.arange(0.5 + 0.0123, n_max + 1.6, 0.025)
    return np.concatenate([head, tail])


def _matching_function(boundary: Boundary, family: Family, d: float) -> Callable[[float], float]:
    # (q_exact - Q_target) W_alpha scaled by d: continuous, no poles at nodes of W
    def F(alpha: float) -> float:
        _, Q_t = boundary(family, alpha)
        w0, w1, _ = specfun.whittaker_w_pair(alpha, 2.0 * d / alpha)
        return (d / alpha - alpha - d * Q_t) * w0 - w1
    return F


def _residual(boundary: Boundary, family: Family, d: float, alpha: float) -> float:
    _, Q_t = boundary(family, alpha)
    try:
        q = q_exact(d, alpha)
    except PoleError:
        return math.inf
    return abs(q - Q_t) / (1.0 + abs(Q_t))


def solve_regularized_spectrum(boundary: Boundary, d: float, n_max: int,
                               families: Iterable[Family] = FAMILIES) -> list[RegularizedLevel]:
    """All levels with alpha <= n_max + 1 for each family, ordered by energy.

    Sign changes of the matching function are located on a fixed alpha mesh
    and refined with Brent's method.  Crossings whose residual exceeds
    RESIDUAL_TOL are poles of the target Q and are dropped.  Branches that
    end up empty are logged, not raised.
    """
    if not d > 0.0:
        raise DomainError(f"d must be > 0, got {d!r}")
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    grid = _scan_grid(d, n_max)
    levels: list[RegularizedLevel] = []
    for family in families:
        family = Family(family)
        F = _matching_function(boundary, family, d)
        values = np.array([F(a) for a in grid])
        roots = [float(a) for a, fa in zip(grid, values) if fa == 0.0]
        for i in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0.0)[0]:
            roots.append(optimize.brentq(F, grid[i], grid[i + 1], xtol=1e-15,
                                         rtol=4.0 * np.finfo(float).eps, maxiter=300))
        found = set()
        for alpha in sorted(roots):
            branch = math.ceil(alpha) - 1
            if branch > n_max:
                continue
            res = _residual(boundary, family, d, alpha)
            if not res <= RESIDUAL_TOL:
                log.debug("dropping pole crossing at alpha=%.6g (%s, residual %.3g)", alpha, family.value, res)
                continue
            R, _ = boundary(family, alpha)
            levels.append(RegularizedLevel(family, branch, alpha, ratio_angle(R), d, res))
            found.add(branch)
        for n in range(n_max + 1):
            if n not in found:
                log.info("no %s level found on branch %d at d=%g", family.value, n, d)
    levels.sort(key=lambda lv: lv.alpha)
    return levels


def missing_levels(levels: Sequence[RegularizedLevel], n_max: int) -> list[tuple[Family, int]]:
    have = {(lv.family, lv.branch) for lv in levels}
    return [(f, n) for f in FAMILIES for n in range(n_max + 1) if (f, n) not in have]


# ---------------------------------------------------------------------------
# d -> 0 convergence
# ---------------------------------------------------------------------------

class Interior(str, Enum):
    DELTAS = "deltas"
    RECT_V1 = "rect_v1"
    RECT_V2 = "rect_v2"


@dataclass(frozen=True)
class ConvergenceRow:
    d: float
    family: Family
    branch: int
    alpha_reg: float
    alpha_ref: float
    E_reg: float
    E_ref: float
    rel_error: float


@dataclass
class ConvergenceTable:
    params: ConnectionParams
    interior: Interior
    rows: list[ConvergenceRow] = field(default_factory=list)
    exponents: dict[tuple[Family, int], float] = field(default_factory=dict)
    missing: list[tuple[float, Family, int]] = field(default_factory=list)

    def max_rel_error(self, d: float) -> float:
        errs = [r.rel_error for r in self.rows if r.d == d]
        return max(errs) if errs else math.nan


def interior_boundary(params: ConnectionParams, interior: Interior, d: float,
                      exact_interior: bool = False) -> Boundary:
    """Boundary targets of the chosen interior at cutoff d.

    deltas uses the strengths that reproduce params; rect_v1 ignores params;
    rect_v2 is tuned to params.theta_plus.
    """
    interior = Interior(interior)
    if interior is Interior.DELTAS:
        return delta_boundary(regularization.delta_inverse(params, d), exact_interior=exact_interior)
    if interior is Interior.RECT_V1:
        return rect_boundary(regularization.rect_family_v1(d))
    return rect_boundary(regularization.rect_family_v2(params.theta_plus, d))


def _reference_family(Omega: float, params: ConnectionParams) -> Family:
    # labels of a regularization need not agree with the connection families; match by Omega mod pi
    def dist(f: Family) -> float:
        return abs(connection.wrap_weight(Omega - params.weight_angle(f)))
    return min(FAMILIES, key=dist)


def convergence_study(params: ConnectionParams, interior: Interior, d_list: Sequence[float],
                      n_max: int = 2, exact_interior: bool = False) -> ConvergenceTable:
    """Regularized versus point-interaction energies over a cutoff sweep."""
    d_values = [float(d) for d in d_list]
    if not d_values:
        raise DomainError("d_list is empty")
    if any(not 0.0 < d <= regularization.DEFAULT_MAX_D for d in d_values):
        raise DomainError(f"cutoffs must lie in (0, {regularization.DEFAULT_MAX_D}]")
    if d_values != sorted(d_values, reverse=True):
        raise DomainError("d_list must be sorted in descending order")
    table = ConvergenceTable(params, Interior(interior))
    reference = {(lv.family, lv.branch): lv for lv in connection.spectrum(params, n_max)
                 if not lv.divergent}
    for d in d_values:
        levels = solve_regularized_spectrum(interior_boundary(params, interior, d, exact_interior), d, n_max)
        seen = set()
        for lv in levels:
            key = (_reference_family(lv.Omega, params), lv.branch)
            ref = reference.get(key)
            # first hit per key is the lowest level in that energy bracket
            if ref is None or key in seen:
                continue
            seen.add(key)
            table.rows.append(ConvergenceRow(d, key[0], key[1], lv.alpha, ref.alpha, lv.energy, ref.energy,
                                             abs(lv.energy - ref.energy) / abs(ref.energy)))
        table.missing.extend((d, f, n) for (f, n) in reference if (f, n) not in seen)
    for key in reference:
        pts = [(r.d, r.rel_error) for r in table.rows if (r.family, r.branch) == key and r.rel_error > 0.0]
        if len(pts) >= 2:
            x, y = np.log([p[0] for p in pts]), np.log([p[1] for p in pts])
            table.exponents[key] = float(np.polyfit(x, y, 1)[0])
    return table
