"""
Real-argument special functions in double precision.

Everything downstream (spectral equation, boundary quotients, eigenfunctions)
is built from the functions here:

    log_gamma, digamma          Gamma-function family
    kummer_m, tricomi_u         confluent hypergeometric M(a,b,z), U(a,b,z)
    whittaker_m, whittaker_w    M_{k,mu}(z), W_{k,mu}(z)
    whittaker_w_logderiv        d/dz ln W_{k,1/2}(z)
    laguerre                    L_n^{(a)}(z), used for integer-kappa closed forms

Whittaker functions follow the usual (DLMF 13.14) definitions

    M_{k,mu}(z) = exp(-z/2) z^(mu+1/2) M(mu-k+1/2, 1+2mu, z)
    W_{k,mu}(z) = exp(-z/2) z^(mu+1/2) U(mu-k+1/2, 1+2mu, z)

so that W_{n,1/2}(z) = (-1)^(n-1) (n-1)! exp(-z/2) z L_{n-1}^{(1)}(z) for
integer n >= 1.  This fixes the sign of W at integer kappa; only ratios and
normalized profiles are used downstream.

Tricomi U at b = 2 cannot be taken from the two-M connection formula (it
degenerates at integer b).  It is evaluated from the integral representation
for a >= 1, from Laguerre polynomials at a = 0, -1, -2, ..., and from the
three-term recurrence in a everywhere else.  Downward recurrence in a is the
stable direction for U.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

from scipy import integrate

from .errors import DomainError, EvaluationError, PoleError, RangeError

EULER_GAMMA = 0.57721566490153286060651209008240243
_EPS = 2.220446049250313e-16

# B_2k / (2k) for the digamma asymptotic series
_DIGAMMA_ASYMPT = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


class SpecialValue(NamedTuple):
    """A function value together with an estimate of its absolute error.

    The estimate tracks truncation and rounding in the method used; it is
    not a rigorous bound.
    """

    value: float
    abs_error_estimate: float

    def __float__(self) -> float:
        return self.value


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def log_gamma(x: float) -> SpecialValue:
    """Natural logarithm of Gamma(x) for x > 0."""
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    value = math.lgamma(x)
    return SpecialValue(value, 4.0 * _EPS * max(abs(value), 1.0 if x > 3.0 else abs(value)))


def _digamma(x: float) -> float:
    if _is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at x = {x!r}")
    if x < 0.0:
        # reflection; reduce the cotangent argument to [-1/2, 1/2]
        r = x - round(x)
        return _digamma(1.0 - x) - math.pi / math.tan(math.pi * r)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _DIGAMMA_ASYMPT:
        series += c * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - series


def digamma(x: float) -> SpecialValue:
    """Digamma function psi_0(x) = Gamma'(x)/Gamma(x).

    Upward recurrence to x >= 10 followed by the asymptotic series; the
    reflection formula handles negative arguments.
    """
    value = _digamma(x)
    scale = abs(value) + (1.0 / abs(x) if x != 0.0 else 0.0) + math.log(abs(x) + 10.0)
    return SpecialValue(value, 8.0 * _EPS * scale)


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), equal to zero at the poles of Gamma."""
    if _is_nonpositive_integer(x):
        return 0.0
    if x > 171.0:
        return 0.0
    return 1.0 / math.gamma(x)


# ---------------------------------------------------------------------------
# Confluent hypergeometric functions
# ---------------------------------------------------------------------------

def _kummer_series(a: float, b: float, z: float) -> tuple[float, float]:
    terms = [1.0]
    term = 1.0
    k = 0
    running = 1.0
    while True:
        term *= (a + k) / ((b + k) * (k + 1)) * z
        terms.append(term)
        running += term
        k += 1
        if term == 0.0:
            break
        if k > 5 and abs(term) <= 0.1 * _EPS * abs(running) and abs(z) < (k + 1):
            break
        if k > 20000:
            raise EvaluationError(f"Kummer series did not converge for a={a}, b={b}, z={z}")
    total = math.fsum(terms)
    if not math.isfinite(total):
        raise RangeError(f"M({a}, {b}, {z}) overflows")
    abs_sum = math.fsum(abs(t) for t in terms)
    return total, (4.0 + math.sqrt(k)) * _EPS * abs_sum + abs(term)


def _kummer_recurrence(a: float, b: float, z: float) -> tuple[float, float]:
    steps = math.ceil(-a)
    a0 = a + steps
    m_hi0, e_hi = _kummer_series(a0 + 1.0, b, z)
    m_cur0, e_cur = _kummer_series(a0, b, z)
    rel = max(e_hi / abs(m_hi0), e_cur / abs(m_cur0)) + 4.0 * (steps + 1) * _EPS

    def run(m_hi: float, m_cur: float) -> float:
        ca = a0
        for _ in range(steps):
            m_hi, m_cur = m_cur, (ca * m_hi - (2.0 * ca - b + z) * m_cur) / (b - ca)
            ca -= 1.0
        return m_cur

    value = run(m_hi0, m_cur0)
    if not math.isfinite(value):
        raise RangeError(f"M({a}, {b}, {z}) overflows")
    # sensitivity of the ladder to a relative perturbation of its start
    delta = 1e-6
    sens = max(abs(run(m_hi0 * (1.0 + delta), m_cur0) - value),
               abs(run(m_hi0, m_cur0 * (1.0 + delta)) - value)) / delta
    return value, rel * max(sens, abs(value))


def kummer_m(a: float, b: float, z: float) -> SpecialValue:
    """Kummer's confluent hypergeometric function M(a, b, z).

    The power series is used whenever it does not cancel (a >= 0 with
    z >= 0, or small |z|).  For a < 0 and z > 0 the terms alternate and the
    values at frac(a) and frac(a) + 1 are also carried down with

        (b-a) M(a-1) + (2a-b+z) M(a) - a M(a+1) = 0,

    keeping whichever route has the smaller error estimate.  Both routes
    lose accuracy for large negative a with large z (the function is much
    smaller than its series terms); the returned estimate says so.
    """
    if _is_nonpositive_integer(b):
        raise PoleError(f"M(a, b, z) has a pole at b = {b!r}")
    if z == 0.0:
        return SpecialValue(1.0, 0.0)
    value, err = _kummer_series(a, b, z)
    if a >= 0.0 or z < 0.0 or err <= 1e-13 * abs(value):
        return SpecialValue(value, err)
    rvalue, rerr = _kummer_recurrence(a, b, z)
    if rerr < err:
        return SpecialValue(rvalue, rerr)
    return SpecialValue(value, err)


@lru_cache(maxsize=4096)
def _u_integral(a: float, b: float, z: float) -> tuple[float, float]:
    """U(a,b,z) for a >= 1 from the Laplace-type integral representation.

    With t = u/z,

        U(a,b,z) = z^-a / Gamma(a) * int_0^inf e^-u u^(a-1) (1+u/z)^(b-a-1) du.
    """
    lg = math.lgamma(a)
    lz = math.log(z)
    p = a - 1.0
    q = b - a - 1.0

    def log_integrand(u: float) -> float:
        return p * math.log(u) - u + q * math.log1p(u / z)

    # stationary point of the log-integrand: u^2 - (p+q-z) u - p z = 0
    bq = p + q - z
    disc = math.sqrt(bq * bq + 4.0 * p * z)
    peak_u = 0.5 * (bq + disc) if bq >= 0.0 else 2.0 * p * z / (disc - bq)
    shift = log_integrand(peak_u) if peak_u > 0.0 else 0.0

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0 if p > 0.0 else math.exp(-shift)
        return math.exp(log_integrand(u) - shift)

    p_int = math.floor(p)
    p_frac = p - p_int

    def smooth_part(u: float) -> float:
        if u <= 0.0:
            return 0.0 if p_int > 0 else math.exp(-shift)
        return math.exp(p_int * math.log(u) + q * math.log1p(u / z) - u - shift)

    width = math.sqrt(a + abs(q) + 1.0)
    far = peak_u + 6.0 * width + 10.0
    # beyond `far` the integrand decays at least like e^-u/2; stop once its
    # value is below e^-45 of the peak and bound the remainder by twice that
    while log_integrand(far) - shift > -45.0:
        far += 10.0 + width
    cuts = {1.0, peak_u, peak_u + 6.0 * width + 10.0, far}
    c = z
    while c < 1.0:
        cuts.add(c)
        c *= 100.0
    edges = [0.0] + sorted(x for x in cuts if x > 0.0)
    # integrand is normalized to 1 at its peak, so 1e-16 absolute is negligible
    opts = dict(epsabs=1e-16, epsrel=1e-13, limit=200)
    # u^(a-1) endpoint behaviour handled by the algebraic-weight rule
    total, err = integrate.quad(smooth_part, 0.0, edges[1], weight="alg", wvar=(p_frac, 0.0), **opts)
    for lo, hi in zip(edges[1:-1], edges[2:]):
        if hi > 4.0 * lo:
            # spans decades: integrate in ln(u)
            val, e = integrate.quad(
                lambda s: math.exp(s + log_integrand(math.exp(s)) - shift),
                math.log(lo), math.log(hi), **opts,
            )
        else:
            val, e = integrate.quad(integrand, lo, hi, **opts)
        total += val
        err += e
    err += 2.0 * integrand(edges[-1])
    if not total > 0.0:
        raise EvaluationError(f"U integral vanished for a={a}, b={b}, z={z}")
    log_scale = shift - lg - a * lz
    if log_scale > 709.0:
        raise RangeError(f"U({a}, {b}, {z}) overflows")
    scale = math.exp(log_scale)
    rel_err = err / total + 16.0 * _EPS
    return total * scale, rel_err * total * scale


def _laguerre(n: int, a: float, z: float) -> float:
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + a - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - z) * cur - (k + a) * prev) / (k + 1)
    return cur


def laguerre(n: int, a: float, z: float) -> float:
    """Generalized Laguerre polynomial L_n^{(a)}(z) by the three-term recurrence."""
    if n < 0:
        raise DomainError(f"Laguerre degree must be >= 0, got {n}")
    return _laguerre(int(n), a, z)


def _u_laguerre(n: int, b: float, z: float) -> float:
    # U(-n, b, z) = (-1)^n n! L_n^{(b-1)}(z)
    return (-1.0) ** n * math.factorial(n) * _laguerre(n, b - 1.0, z)


def _tricomi_pair(a: float, b: float, z: float) -> tuple[float, float, float, float]:
    """Return (U(a), err, U(a-1), err) sharing one recurrence ladder."""
    lower = a - 1.0
    if _is_nonpositive_integer(lower):
        n = int(-lower)
        u_lo = _u_laguerre(n, b, z)
        if _is_nonpositive_integer(a):
            u_a = _u_laguerre(n - 1, b, z)
            e_a = 8.0 * n * _EPS * abs(u_a)
        else:
            u_a, e_a = _u_integral(a, b, z)
        return u_a, e_a, u_lo, 8.0 * (n + 1) * _EPS * abs(u_lo)
    if lower >= 1.0:
        u_a, e_a = _u_integral(a, b, z)
        u_lo, e_lo = _u_integral(lower, b, z)
        return u_a, e_a, u_lo, e_lo

    steps = math.ceil(1.0 - lower)
    a0 = lower + steps
    u_hi, e_hi = _u_integral(a0 + 1.0, b, z)
    u_cur, e_cur = _u_integral(a0, b, z)
    rel = max(e_hi / u_hi, e_cur / u_cur)
    biggest = max(abs(u_hi), abs(u_cur))
    ca = a0
    for _ in range(steps):
        # U(a-1) = (2a - b + z) U(a) - a (a - b + 1) U(a+1)
        u_lo = (2.0 * ca - b + z) * u_cur - ca * (ca - b + 1.0) * u_hi
        u_hi, u_cur = u_cur, u_lo
        biggest = max(biggest, abs(u_cur))
        ca -= 1.0
    if not (math.isfinite(u_cur) and math.isfinite(u_hi)):
        raise RangeError(f"U({a}, {b}, {z}) overflows")
    err = (rel + 4.0 * (steps + 1) * _EPS) * biggest
    return u_hi, err, u_cur, err


def tricomi_u(a: float, b: float, z: float) -> SpecialValue:
    """Tricomi's confluent hypergeometric function U(a, b, z), z > 0."""
    if not z > 0.0:
        raise DomainError(f"U(a, b, z) requires z > 0, got {z!r}")
    if _is_nonpositive_integer(a):
        n = int(-a)
        value = _u_laguerre(n, b, z)
        return SpecialValue(value, 8.0 * (n + 1) * _EPS * abs(value))
    if a >= 1.0:
        return SpecialValue(*_u_integral(a, b, z))
    # a + 1 >= 1 is never an integer <= 0 here, so the pair ladder applies
    u_hi, e_hi, u_a, e_a = _tricomi_pair(a + 1.0, b, z)
    return SpecialValue(u_a, e_a)


# ---------------------------------------------------------------------------
# Whittaker functions
# ---------------------------------------------------------------------------

def _prefactor(mu: float, z: float) -> float:
    return math.exp(-0.5 * z + (mu + 0.5) * math.log(z))


def whittaker_w(kappa: float, mu: float, z: float) -> SpecialValue:
    """Whittaker W_{kappa,mu}(z) for z > 0."""
    if not z > 0.0:
        raise DomainError(f"W_{{k,mu}}(z) requires z > 0, got {z!r}")
    u = tricomi_u(mu - kappa + 0.5, 1.0 + 2.0 * mu, z)
    f = _prefactor(mu, z)
    return SpecialValue(f * u.value, f * u.abs_error_estimate)


def whittaker_w_pair(kappa: float, z: float) -> tuple[float, float, float]:
    """(W_{kappa,1/2}(z), W_{kappa+1,1/2}(z), abs error of the first).

    Both values come from one recurrence ladder, which is what callers of
    the log-derivative need.
    """
    if not z > 0.0:
        raise DomainError(f"W_{{k,1/2}}(z) requires z > 0, got {z!r}")
    u_k, e_k, u_k1, _ = _tricomi_pair(1.0 - kappa, 2.0, z)
    f = _prefactor(0.5, z)
    return f * u_k, f * u_k1, f * e_k


def whittaker_w_origin(kappa: float) -> float:
    """Limit of W_{kappa,1/2}(z) as z -> 0+, i.e. 1/Gamma(1-kappa)."""
    return reciprocal_gamma(1.0 - kappa)


def whittaker_m(kappa: float, mu: float, z: float) -> SpecialValue:
    """Whittaker M_{kappa,mu}(z) for z >= 0."""
    if z < 0.0:
        raise DomainError(f"M_{{k,mu}}(z) requires z >= 0, got {z!r}")
    b = 1.0 + 2.0 * mu
    if _is_nonpositive_integer(b):
        raise PoleError(f"M_{{k,mu}} undefined for 1+2mu = {b!r}")
    if z == 0.0:
        if mu + 0.5 > 0.0:
            return SpecialValue(0.0, 0.0)
        raise DomainError("M_{k,mu}(0) diverges for mu <= -1/2")
    m = kummer_m(mu - kappa + 0.5, b, z)
    f = _prefactor(mu, z)
    return SpecialValue(f * m.value, f * m.abs_error_estimate)


def whittaker_w_logderiv(kappa: float, z: float) -> SpecialValue:
    """d/dz ln W_{kappa,1/2}(z).

    Uses W' = (1/2 - kappa/z) W_{kappa} - W_{kappa+1}/z, so that no numerical
    differentiation is involved.
    """
    w, w1, err = whittaker_w_pair(kappa, z)
    if w == 0.0 or abs(w) <= err:
        raise PoleError(f"W_{{{kappa},1/2}} has a node at z = {z!r}")
    ratio = w1 / w
    value = 0.5 - kappa / z - ratio / z
    rel = err / abs(w)
    return SpecialValue(value, (abs(ratio) / z) * 2.0 * rel + 4.0 * _EPS * abs(value))
