"""Chebyshev-Gauss quadrature for turning-point (inverse square root) singularities.

With x = c + h cos(theta) the weight 1/sqrt((x_plus - x)(x - x_minus))
becomes d(theta), so

    integral f(x) / sqrt((x_plus - x)(x - x_minus)) dx = integral_0^pi f(c + h cos theta) dtheta

and the n-point rule is the midpoint rule in theta: nodes at
theta_k = (2k - 1) pi / (2n), all weights pi / n.  No node ever sits on an
endpoint, which is what keeps the 0/0 of E - V(x_pm) out of the sums.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import specfun
from .errors import DomainError, QuadratureError
from .potential import reduced_kinetic, turning_points

__all__ = [
    "ChebyshevRule",
    "chebyshev_rule",
    "integrate_singular",
    "integrate_converged",
    "exact_period",
    "exact_pendulum_period",
    "exact_duffing_period",
    "DEFAULT_TOL",
    "MAX_NODES",
]

DEFAULT_TOL = 1e-10
MAX_NODES = 2**16


@lru_cache(maxsize=64)
def _unit_nodes(n):
    theta = (2.0 * np.arange(1, n + 1) - 1.0) * math.pi / (2.0 * n)
    nodes = np.cos(theta)
    nodes.setflags(write=False)
    return nodes


@dataclass(frozen=True)
class ChebyshevRule:
    """n-point rule on (x_minus, x_plus).

    ``weight`` is pi/n: the uniform weight pi*(x_plus - x_minus)/(2n) in x
    already divided by the square-root factor at each node.
    """

    n: int
    x_minus: float
    x_plus: float
    nodes: np.ndarray
    weight: float

    def integrate(self, values):
        return self.weight * float(np.sum(values))


def chebyshev_rule(x_minus, x_plus, n):
    if n < 1:
        raise DomainError(f"node count must be >= 1, got {n}")
    c = 0.5 * (x_plus + x_minus)
    h = 0.5 * (x_plus - x_minus)
    nodes = c + h * _unit_nodes(int(n))
    # guard against rounding pushing an extreme node onto an endpoint
    nodes = np.clip(nodes, np.nextafter(x_minus, x_plus), np.nextafter(x_plus, x_minus))
    return ChebyshevRule(int(n), float(x_minus), float(x_plus), nodes, math.pi / n)


def integrate_singular(f, tp, n):
    """integral of f(x)/sqrt((x_plus - x)(x - x_minus)) over the turning-point interval.

    ``tp`` is anything with ``x_minus``/``x_plus`` attributes, or a pair.
    ``f`` must accept a numpy array of nodes.
    """
    lo, hi = (tp.x_minus, tp.x_plus) if hasattr(tp, "x_minus") else tp
    rule = chebyshev_rule(lo, hi, n)
    return rule.integrate(f(rule.nodes))


def integrate_converged(f, tp, tol=DEFAULT_TOL, n_start=16, n_max=MAX_NODES):
    """Double the node count until successive estimates agree to ``tol`` (relative).

    Returns ``(value, n)``.
    """
    n = n_start
    prev = integrate_singular(f, tp, n)
    while n < n_max:
        n *= 2
        cur = integrate_singular(f, tp, n)
        if abs(cur - prev) <= tol * abs(cur):
            return cur, n
        prev = cur
    raise QuadratureError(
        f"no convergence to rel. tol {tol} with {n} nodes (last two: {prev!r}, {cur!r})",
        previous=prev,
        last=cur,
    )


def exact_period(p, E, tol=DEFAULT_TOL):
    """Period of a unit mass in ``p`` at energy ``E``.

    sqrt(E - V) is split as g(x) sqrt((x_plus - x)(x - x_minus)) and the
    smooth part sqrt(2)/g goes to the Chebyshev-Gauss rule.
    """
    tp = E if hasattr(E, "x_minus") else turning_points(p, E)

    def f(x):
        return math.sqrt(2.0) / np.sqrt(reduced_kinetic(p, tp, x))

    value, _ = integrate_converged(f, tp, tol=tol)
    return value


def exact_pendulum_period(theta):
    """4 K(sin(Theta/2)) for amplitude 0 < Theta < pi."""
    if not 0.0 < theta < math.pi:
        raise DomainError(f"pendulum amplitude must be in (0, pi), got {theta}")
    return 4.0 * specfun.elliptic_k(math.sin(0.5 * theta))


def exact_duffing_period(mu, A):
    """Elliptic closed form for V = x^2/2 + mu x^4/4 at amplitude A (mu >= 0)."""
    if mu < 0 or A <= 0:
        raise DomainError("exact_duffing_period needs mu >= 0 and A > 0")
    w2 = 1.0 + mu * A * A
    k = math.sqrt(mu * A * A / (2.0 * w2))
    return 4.0 * specfun.elliptic_k(k) / math.sqrt(w2)
