"""Closed-form first-order periods and the all-order Duffing term.

These are direct formula evaluations, kept independent of the numerical
series engine so the two can be checked against each other.
"""

import math

from . import specfun
from .errors import DomainError
from .pms import anharmonic_ratio

__all__ = [
    "duffing_t_pms",
    "duffing_first_order",
    "duffing_series_term_closed",
    "anharmonic_first_order",
    "anharmonic_t_pms",
    "pendulum_first_order",
    "pendulum_t_pms",
]


def _check_s(s):
    if not 1.0 + s > 0.0:
        raise DomainError(f"s={s} needs 1+s > 0")


def duffing_t_pms(mu, A):
    """4 pi / sqrt(4 + 3 mu A^2)."""
    if mu < 0 or A <= 0:
        raise DomainError("duffing_t_pms needs mu >= 0 and A > 0")
    return 4.0 * math.pi / math.sqrt(4.0 + 3.0 * mu * A * A)


def duffing_first_order(mu, A, s):
    """Zeroth plus first order Duffing period at delta = 1, s = lambda^2."""
    _check_s(s)
    u = 1.0 + s
    return 2.0 * math.pi / math.sqrt(u) * (1.0 - (0.375 * mu * A * A - 0.5 * s) / u)


def duffing_series_term_closed(mu, A, s, n):
    """n-th Duffing term through the terminating 2F1 formula.

    At 2 s = mu A^2 the 2F1 argument has a pole that cancels in the
    product; the term is then computed by quadrature instead.
    """
    _check_s(s)
    if n < 0 or int(n) != n:
        raise DomainError("n must be a nonnegative integer")
    n = int(n)
    g = mu * A * A
    if n == 0:
        return 2.0 * math.pi / math.sqrt(1.0 + s)
    if 2.0 * s == g:
        from .delta_core import QuadraticFamily, series_term
        from .potential import duffing, turning_points_from_amplitude

        p = duffing(mu)
        return series_term(p, QuadraticFamily(s), turning_points_from_amplitude(p, A), n)
    u = 1.0 + s
    pref = (-1) ** n * math.pi * specfun.double_factorial_odd(n) / (2.0 ** (2 * n - 1) * math.factorial(n) * math.sqrt(u))
    return pref * ((g - 2.0 * s) / u) ** n * specfun.hyp2f1_terminating(0.5, n, 1.0, g / (2.0 * s - g))


def anharmonic_first_order(rho, N, A, s):
    """First-order period for V = x^2/2 + rho x^(2N)/(2N) at delta = 1."""
    _check_s(s)
    u = 1.0 + s
    c = rho * A ** (2 * (N - 1)) * anharmonic_ratio(N)
    return 2.0 * math.pi / math.sqrt(u) * (1.0 + (-c + 0.5 * s) / u)


def anharmonic_t_pms(rho, N, A):
    if rho < 0 or N < 1 or int(N) != N or A <= 0:
        raise DomainError("anharmonic_t_pms needs rho >= 0, integer N >= 1, A > 0")
    return 2.0 * math.pi / math.sqrt(1.0 + 2.0 * rho * A ** (2 * (N - 1)) * anharmonic_ratio(N))


def pendulum_first_order(theta, s):
    """First-order pendulum period at delta = 1 (contains J1(Theta)/Theta)."""
    _check_s(s)
    u = 1.0 + s
    j = specfun.bessel_j1(theta) / theta
    return 2.0 * math.pi / math.sqrt(u) * 1.5 - 2.0 * math.pi * j / u**1.5


def pendulum_t_pms(theta):
    """pi sqrt(2 Theta / J1(Theta))."""
    if not 0.0 < theta < math.pi:
        raise DomainError(f"pendulum amplitude must be in (0, pi), got {theta}")
    return math.pi * math.sqrt(2.0 * theta / specfun.bessel_j1(theta))
