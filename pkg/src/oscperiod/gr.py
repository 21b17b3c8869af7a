"""Light deflection and perihelion precession in the Schwarzschild metric.

Geometric units throughout: ``gm`` is G M / c^2 in meters, angles are
radians, and B(r) = 1/A(r) = 1 - 2 gm / r.

Light deflection.  With y = r0 / r the deflection integral becomes

    dphi = 2 integral_0^1 dy / sqrt((1 - y^2) - e (1 - y^3)) - pi,   e = 2 gm / r0,

and y = sin(phi) turns it into a smooth integral over (0, pi/2).  The
integrand is rewritten as 1 + (small correction) so that the subtraction
of pi never cancels digits in the weak field.

Perihelion precession.  With z = 1/r the radial integral has exactly the
Chebyshev weight on (z_minus, z_plus):

    dtheta = 2 integral w(z) dz / sqrt(1 - 2 gm (z + z_minus + z_plus)) - 2 pi.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .delta_core import series_coefficient
from .errors import DomainError, PhotonSphereError, QuadratureError
from .quadrature import DEFAULT_TOL, chebyshev_rule, integrate_converged

__all__ = [
    "GrScenario",
    "OrbitConstants",
    "orbit_constants",
    "deflection_exact",
    "deflection_first_order",
    "deflection_delta",
    "deflection_pms",
    "deflection_asymptotic",
    "photon_sphere_predicted",
    "photon_sphere_exact",
    "precession_exact",
    "precession_delta",
    "precession_pms",
    "precession_pms_rational",
    "precession_leading",
    "G_OVER_C2",
    "M_SUN",
    "GM_SUN",
    "R_SUN",
    "A_MERCURY",
    "ECC_MERCURY",
    "ARCSEC_PER_RAD",
]

G_OVER_C2 = 7.425e-30  # m / kg
M_SUN = 1.97e30  # kg
GM_SUN = G_OVER_C2 * M_SUN  # 14.62725 m
R_SUN = 6.95e8  # m
A_MERCURY = 5.971e10  # m
ECC_MERCURY = 0.2506
ARCSEC_PER_RAD = 206264.806

_LEGENDRE_MAX = 2**13


@dataclass(frozen=True)
class GrScenario:
    """Either a light ray (``r0``) or a bound orbit (``r_minus`` < ``r_plus``)."""

    gm: float
    r0: Optional[float] = None
    r_minus: Optional[float] = None
    r_plus: Optional[float] = None

    def __post_init__(self):
        if not self.gm >= 0:
            raise DomainError(f"gm must be nonnegative, got {self.gm}")
        if self.r0 is not None and not self.r0 > 2.0 * self.gm:
            raise DomainError(f"r0={self.r0} is inside the horizon 2 gm = {2 * self.gm}")
        if (self.r_minus is None) != (self.r_plus is None):
            raise DomainError("orbit needs both r_minus and r_plus")
        if self.r_minus is not None:
            if not 0 < self.r_minus < self.r_plus:
                raise DomainError(f"need 0 < r_minus < r_plus, got {self.r_minus}, {self.r_plus}")
            if not self.r_minus > 2.0 * self.gm:
                raise DomainError("perihelion inside the horizon")

    @classmethod
    def ray(cls, gm, r0):
        return cls(gm=float(gm), r0=float(r0))

    @classmethod
    def orbit(cls, gm, a, eccentricity):
        if not 0.0 < eccentricity < 1.0:
            raise DomainError(f"eccentricity must be in (0, 1), got {eccentricity}")
        return cls(gm=float(gm), r_minus=a * (1.0 - eccentricity), r_plus=a * (1.0 + eccentricity))

    def _need_orbit(self):
        if self.r_minus is None:
            raise DomainError("scenario has no orbit (r_minus, r_plus)")

    def _need_ray(self):
        if self.r0 is None:
            raise DomainError("scenario has no closest approach r0")

    @property
    def a(self):
        self._need_orbit()
        return 0.5 * (self.r_minus + self.r_plus)

    @property
    def semilatus(self):
        self._need_orbit()
        return 2.0 / (1.0 / self.r_plus + 1.0 / self.r_minus)

    @property
    def eccentricity(self):
        self._need_orbit()
        return (self.r_plus - self.r_minus) / (self.r_plus + self.r_minus)

    @property
    def z_minus(self):
        self._need_orbit()
        return 1.0 / self.r_plus

    @property
    def z_plus(self):
        self._need_orbit()
        return 1.0 / self.r_minus


@dataclass(frozen=True)
class OrbitConstants:
    energy: float
    j_squared: float
    z_minus: float
    z_plus: float


def orbit_constants(sc):
    """E and J^2 of the orbit through r_minus and r_plus.

    The defining differences of 1/B(r) are rearranged algebraically so
    the weak field does not cancel digits; no approximation is made.
    """
    sc._need_orbit()
    g, rm, rp = sc.gm, sc.r_minus, sc.r_plus
    dm, dp = rm - 2.0 * g, rp - 2.0 * g
    energy = (rp * rm - 2.0 * g * (rp * rp + rp * rm + rm * rm) / (rp + rm)) / (dp * dm)
    j2 = 2.0 * g * rp * rp * rm * rm / (dp * dm * (rp + rm))
    return OrbitConstants(energy, j2, 1.0 / rp, 1.0 / rm)


@lru_cache(maxsize=16)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _quarter_circle(f, tol, n_start=32):
    """integral_0^{pi/2} f(phi) dphi for smooth f, Gauss-Legendre with doubling."""

    def rule(n):
        x, w = _legendre(n)
        phi = 0.25 * math.pi * (x + 1.0)
        vals = f(phi)
        return 0.25 * math.pi * float(np.dot(w, vals)), 0.25 * math.pi * float(np.dot(w, np.abs(vals)))

    n = n_start
    prev, _ = rule(n)
    while n < _LEGENDRE_MAX:
        n *= 2
        cur, scale = rule(n)
        # relative to the integral of |f|: signed moments may vanish
        if abs(cur - prev) <= tol * scale:
            return cur
        prev = cur
    raise QuadratureError(
        f"deflection quadrature did not reach rel. tol {tol} with {n} nodes", previous=prev, last=cur
    )


def deflection_exact(sc, tol=DEFAULT_TOL):
    """Exact Schwarzschild light deflection for closest approach r0 > 3 gm."""
    sc._need_ray()
    if sc.gm == 0.0:
        return 0.0
    if not sc.r0 > 3.0 * sc.gm:
        raise PhotonSphereError(f"r0={sc.r0} is at or inside the photon sphere 3 gm = {3 * sc.gm}")
    e = 2.0 * sc.gm / sc.r0

    def f(phi):
        t = np.sin(phi)
        q = 1.0 + t + t * t
        one = 1.0 + t
        h = one - e * q
        # sqrt(one/h) - 1 without cancellation
        return e * q / (np.sqrt(h) * (np.sqrt(one) + np.sqrt(h)))

    return 2.0 * _quarter_circle(f, tol)


def deflection_first_order(sc, s, delta=1.0):
    """First-order delta expansion of the deflection; s = lambda^2 / r0^3."""
    sc._need_ray()
    if not 1.0 + s > 0.0:
        raise DomainError(f"s={s} needs 1+s > 0")
    u = 1.0 + s
    # -pi + [pi(2 + (2+delta)s) + 8 delta gm/r0] / (2 u^1.5), regrouped so the
    # pi's cancel analytically: (1+s)^1.5 - 1 - 1.5 s is formed via expm1/log1p
    curv = math.expm1(1.5 * math.log1p(s)) - 1.5 * s
    num = 2.0 * math.pi * (0.5 * (delta - 1.0) * s - curv) + 8.0 * delta * sc.gm / sc.r0
    return num / (2.0 * u**1.5)


def deflection_delta(sc, order, s, tol=1e-13):
    """Delta expansion of the deflection to any order at delta = 1.

    Reference V0 proportional to (1+s) z^2; with y = r0 z the ratio is
    Delta(y) = -(s + e q(y)) / (1+s), q(y) = y + 1/(1+y), e = 2 gm / r0, and
    each term integrates Delta^n against 1/sqrt(1-y^2) over (0, 1).
    """
    sc._need_ray()
    if not 1.0 + s > 0.0:
        raise DomainError(f"s={s} needs 1+s > 0")
    if order < 0:
        raise DomainError("order must be >= 0")
    e = 2.0 * sc.gm / sc.r0
    u = 1.0 + s
    su = math.sqrt(u)
    # order 0: pi/sqrt(1+s) - pi, written without cancellation
    total = -math.pi * s / (su * (1.0 + su))
    for n in range(1, order + 1):

        def f(phi, n=n):
            y = np.sin(phi)
            return (-(s + e * (y + 1.0 / (1.0 + y))) / u) ** n

        moment = _quarter_circle(f, tol)
        total += 2.0 / su * series_coefficient(n) * moment
    return total


def deflection_pms(sc):
    """First-order deflection at the stationary s = -8 gm / (pi r0).

    Substituting that s back into the first-order result gives
    pi / sqrt(1 - 8 gm/(pi r0)) - pi, which vanishes in flat space and
    diverges at r0 = 8 gm / pi.
    """
    sc._need_ray()
    x = 8.0 * sc.gm / (math.pi * sc.r0)
    if not x < 1.0:
        raise PhotonSphereError(f"r0={sc.r0} is at or inside the predicted photon sphere 8 gm/pi")
    root = math.sqrt(1.0 - x)
    return math.pi * x / (root * (1.0 + root))


def deflection_asymptotic(sc):
    """Leading weak-field deflection 4 gm / r0."""
    sc._need_ray()
    return 4.0 * sc.gm / sc.r0


def photon_sphere_predicted(gm):
    if not gm > 0:
        raise DomainError("gm must be positive")
    return 8.0 * gm / math.pi


def photon_sphere_exact(gm):
    if not gm > 0:
        raise DomainError("gm must be positive")
    return 3.0 * gm


def _orbit_check(sc):
    sc._need_orbit()
    if not sc.semilatus > 6.0 * sc.gm:
        raise DomainError(f"L={sc.semilatus} must exceed 6 gm = {6 * sc.gm}")


def precession_exact(sc, tol=DEFAULT_TOL):
    """Exact perihelion advance per orbit (radians)."""
    _orbit_check(sc)
    zm, zp = sc.z_minus, sc.z_plus
    g = sc.gm
    if 1.0 - 2.0 * g * (2.0 * zp + zm) <= 0.0:
        raise DomainError("1 - 2 gm (z + z_minus + z_plus) vanishes on the orbit")
    if g == 0.0:
        return 0.0

    def f(z):
        t = 2.0 * g * (z + zm + zp)
        r = np.sqrt(1.0 - t)
        # 2 (1/sqrt(1-t) - 1)
        return 2.0 * t / (r * (1.0 + r))

    value, _ = integrate_converged(f, (zm, zp), tol=tol)
    return value


def precession_delta(sc, order, s):
    """Delta expansion of the precession at delta = 1; s = lambda^2 < 1.

    Delta(z) = (s - 2 gm (z + z_minus + z_plus)) / (1 - s) is linear in z,
    so every term is a polynomial moment and the Chebyshev rule with
    order + 2 nodes integrates it exactly.
    """
    _orbit_check(sc)
    if not 1.0 - s > 0.0:
        raise DomainError(f"s={s} needs 1-s > 0")
    if order < 0:
        raise DomainError("order must be >= 0")
    zm, zp = sc.z_minus, sc.z_plus
    u = 1.0 - s
    su = math.sqrt(u)
    total = 2.0 * math.pi * s / (su * (1.0 + su))
    if order == 0:
        return total
    rule = chebyshev_rule(zm, zp, max(8, order + 2))
    d = (s - 2.0 * sc.gm * (rule.nodes + zm + zp)) / u
    for n in range(1, order + 1):
        total += 2.0 / su * series_coefficient(n) * rule.integrate(d**n)
    return total


def precession_pms(sc):
    """Third-order precession at the stationary s = 6 gm / L.

    Equals -2 P - 2 pi where P is the rational expression of
    ``precession_pms_rational``; evaluated here in the form
    2 pi [(1 + 3 gm^2 (1 - L/a) / (4 (L - 6 gm)^2)) / sqrt(1 - 6 gm/L) - 1].
    """
    _orbit_check(sc)
    g, L, a = sc.gm, sc.semilatus, sc.a
    x = 6.0 * g / L
    root = math.sqrt(1.0 - x)
    k = 3.0 * g * g * (1.0 - L / a) / (4.0 * (L - 6.0 * g) ** 2)
    return 2.0 * math.pi * (x / (root * (1.0 + root)) + k / root)


def precession_pms_rational(sc):
    """Third-order result as a single rational expression in gm, L and a.

    This is minus half of the bare z-integral, not the precession itself:
    its weak-field limit is -pi.  ``precession_pms`` converts it.
    """
    _orbit_check(sc)
    g, L, a = sc.gm, sc.semilatus, sc.a
    num = math.pi * (3.0 * g * g * L + a * (-4.0 * L * L + 48.0 * g * L - 147.0 * g * g))
    return num / (4.0 * a * (L - 6.0 * g) ** 2 * math.sqrt(1.0 - 6.0 * g / L))


def precession_leading(sc):
    """6 pi gm / L."""
    sc._need_orbit()
    return 6.0 * math.pi * sc.gm / sc.semilatus
