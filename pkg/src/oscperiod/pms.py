"""Principle of minimal sensitivity: stationary points of truncated series.

All searches run over s = lambda^2 (or lambda^2 / r0^3 for light
deflection), never over lambda itself.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .delta_core import QuadraticFamily, series_value
from .errors import DomainError, NoStationaryPointError

__all__ = [
    "PmsResult",
    "optimize",
    "default_bracket",
    "optimize_series",
    "lambda_pms_duffing",
    "lambda_pms_anharmonic",
    "lambda_pms_pendulum",
    "s_pms_deflection",
    "s_pms_precession",
    "anharmonic_ratio",
]

SCAN_INTERVALS = 256
FD_STEP = 1e-6


@dataclass(frozen=True)
class PmsResult:
    s_star: float
    value: float
    order: object
    residual: float
    bracket: tuple
    n_stationary: int = 1

    @property
    def lam(self):
        """lambda at the stationary point; imaginary when s_star < 0."""
        if self.s_star >= 0:
            return math.sqrt(self.s_star)
        return 1j * math.sqrt(-self.s_star)


def _derivative(objective, s):
    h = FD_STEP * max(1.0, abs(s))
    return (objective(s + h) - objective(s - h)) / (2.0 * h)


def _bisect(objective, lo, hi, d_lo):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= 1e-15 * max(1.0, abs(mid)):
            break
        d_mid = _derivative(objective, mid)
        if d_mid == 0.0:
            return mid
        if (d_mid > 0) == (d_lo > 0):
            lo, d_lo = mid, d_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimize(objective, bracket, order=None, n_scan=SCAN_INTERVALS, log_offset=None):
    """Locate s with d objective/ds = 0 inside ``bracket``.

    The central-difference derivative is sampled at the midpoints of
    ``n_scan`` equal subintervals; every sign change is refined by
    bisection and the stationary point of smallest |s| is returned.
    With ``log_offset`` the subintervals are equal in log(s - log_offset)
    instead, which resolves brackets that hug a lower bound.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise DomainError(f"empty bracket {bracket}")
    frac = (np.arange(n_scan) + 0.5) / n_scan
    if log_offset is None:
        grid = lo + (hi - lo) * frac
    else:
        if not lo > log_offset:
            raise DomainError(f"bracket {bracket} must lie above log_offset={log_offset}")
        grid = log_offset + np.exp(np.log(lo - log_offset) + np.log((hi - log_offset) / (lo - log_offset)) * frac)
    derivs = [_derivative(objective, s) for s in grid]
    roots = []
    for i in range(n_scan - 1):
        d0, d1 = derivs[i], derivs[i + 1]
        if d0 == 0.0:
            roots.append(grid[i])
        elif d0 * d1 < 0:
            roots.append(_bisect(objective, grid[i], grid[i + 1], d0))
    if derivs[-1] == 0.0:
        roots.append(grid[-1])
    if not roots:
        raise NoStationaryPointError(
            f"derivative keeps one sign on {bracket}: range [{min(derivs):.3g}, {max(derivs):.3g}]"
        )
    s_star = min(roots, key=abs)
    return PmsResult(
        s_star=float(s_star),
        value=float(objective(s_star)),
        order=order,
        residual=abs(_derivative(objective, s_star)),
        bracket=(lo, hi),
        n_stationary=len(roots),
    )


def default_bracket(s_min=-1.0, s_closed=None):
    if s_closed is not None:
        return (s_min + 1e-6, 10.0 * (1.0 + s_closed))
    return (s_min + 1e-6, 1e3)


def optimize_series(p, tp, order, bracket=None, s_closed=None):
    """PMS on the order-``order`` partial sum of the period expansion.

    The scan is logarithmic in 1 + s, the reference stiffness.
    """

    def objective(s):
        return series_value(p, QuadraticFamily(s), tp, order)

    if bracket is None:
        bracket = default_bracket(-1.0, s_closed)
    return optimize(objective, bracket, order=order, log_offset=-1.0)


def lambda_pms_duffing(mu, A):
    """sqrt(3 mu) A / 2."""
    if mu < 0 or A <= 0:
        raise DomainError("lambda_pms_duffing needs mu >= 0 and A > 0")
    return 0.5 * math.sqrt(3.0 * mu) * A


def anharmonic_ratio(N):
    """Gamma(N+1/2) / (sqrt(pi) Gamma(N+1)); 3/8 for N = 2."""
    return specfun.gamma(N + 0.5) / (math.sqrt(math.pi) * specfun.gamma(N + 1.0))


def lambda_pms_anharmonic(rho, N, A):
    if rho < 0 or N < 1 or int(N) != N or A <= 0:
        raise DomainError("lambda_pms_anharmonic needs rho >= 0, integer N >= 1, A > 0")
    return math.sqrt(2.0 * rho * anharmonic_ratio(N)) * A ** (N - 1)


def lambda_pms_pendulum(theta):
    """Returns s = lambda^2 = 2 J1(Theta)/Theta - 1, not lambda.

    The value is negative for every amplitude (lambda is imaginary) but
    stays above -1, so the reference stiffness 1 + s = 2 J1/Theta is positive.
    """
    if not 0.0 < theta < math.pi:
        raise DomainError(f"pendulum amplitude must be in (0, pi), got {theta}")
    return 2.0 * specfun.bessel_j1(theta) / theta - 1.0


def s_pms_deflection(gm, r0):
    """lambda^2 / r0^3 at the first-order optimum, -8 GM / (pi r0)."""
    return -8.0 * gm / (math.pi * r0)


def s_pms_precession(gm, L):
    """lambda^2 = 6 GM / L at the third-order optimum."""
    return 6.0 * gm / L
