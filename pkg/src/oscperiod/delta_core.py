"""Delta expansion of the period around a quadratic reference potential.

The reference is V0(x) = (1+s)(x - c)^2 / 2 centred on the midpoint c of
the turning points, so it shares them with V and

    E0 - V0(x) = (1+s)/2 * (x_plus - x)(x - x_minus).

Writing Delta(x) = (E - E0 - V + V0)/(E0 - V0) the period becomes

    T = 2/sqrt(1+s) * sum_n c_n integral Delta^n w(x) dx,
    c_n = (-1)^n (2n-1)!! / (n! 2^n),

with w the Chebyshev weight.  s stands for lambda^2; only lambda^2 ever
appears, so imaginary lambda (s < 0) needs no complex arithmetic.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .potential import reduced_kinetic
from .quadrature import chebyshev_rule
from .specfun import double_factorial_odd

__all__ = [
    "QuadraticFamily",
    "DeltaSeries",
    "series_coefficient",
    "delta_ratio",
    "delta_moments",
    "series_term",
    "sum_series",
    "series_value",
    "sup_delta",
    "duffing_lambda0",
]

SUP_GRID = 2048
TERM_NODES = 64
TERM_TOL = 1e-11


@dataclass(frozen=True)
class QuadraticFamily:
    """V0(x) = (1+s)(x-c)^2/2; s = lambda^2 and must exceed ``s_min`` = -1."""

    s: float
    s_min: float = -1.0

    def __post_init__(self):
        if not 1.0 + self.s > 0.0:
            raise DomainError(f"interpolation parameter s={self.s} needs 1+s > 0")

    @classmethod
    def from_lambda(cls, lam):
        return cls(float(lam) ** 2)

    @property
    def stiffness(self):
        return 1.0 + self.s

    def v0(self, x, center=0.0):
        return 0.5 * self.stiffness * np.square(np.asarray(x, dtype=float) - center)


@dataclass(frozen=True)
class DeltaSeries:
    s: float
    order: int
    terms: tuple
    partial_sums: tuple
    sup_delta: float
    convergent: bool
    nodes: int

    @property
    def value(self):
        return self.partial_sums[-1]


@lru_cache(maxsize=None)
def series_coefficient(n):
    """(-1)^n (2n-1)!! / (n! 2^n), the binomial coefficient of (1+t)^(-1/2)."""
    return (-1) ** n * double_factorial_odd(n) / (math.factorial(n) * 2.0**n)


def delta_ratio(p, fam, tp, x):
    """Delta(x) at points strictly between the turning points."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= tp.x_minus) or np.any(x >= tp.x_plus):
        raise DomainError("Delta is 0/0 at the turning points; x must be strictly interior")
    return 2.0 * reduced_kinetic(p, tp, x) / fam.stiffness - 1.0


def delta_moments(p, fam, tp, order, n_start=TERM_NODES, tol=TERM_TOL, n_max=2**14):
    """Integrals of Delta^n against the Chebyshev weight for n = 0..order.

    The node count doubles until every moment is stable to ``tol``
    relative to the matching integral of |Delta|^n.  Returns
    ``(moments, n_nodes)``.
    """

    def moments_at(n):
        rule = chebyshev_rule(tp.x_minus, tp.x_plus, n)
        d = delta_ratio(p, fam, tp, rule.nodes)
        powers = np.vander(d, order + 1, increasing=True)
        return rule.weight * powers.sum(axis=0), rule.weight * np.abs(powers).sum(axis=0)

    n = n_start
    prev, _ = moments_at(n)
    while True:
        n *= 2
        cur, scale = moments_at(n)
        if np.all(np.abs(cur - prev) <= tol * scale) or n >= n_max:
            return cur, n
        prev = cur


def series_term(p, fam, tp, n, nodes=TERM_NODES):
    """n-th order term T^(n) of the expansion evaluated at delta = 1."""
    if n < 0:
        raise DomainError("order must be >= 0")
    moments, _ = delta_moments(p, fam, tp, n, n_start=nodes)
    return series_coefficient(n) * 2.0 / math.sqrt(fam.stiffness) * moments[n]


def sup_delta(p, fam, tp, grid=SUP_GRID):
    """max |Delta| over ``grid`` interior Chebyshev points."""
    rule = chebyshev_rule(tp.x_minus, tp.x_plus, grid)
    return float(np.max(np.abs(delta_ratio(p, fam, tp, rule.nodes))))


def sum_series(p, fam, tp, order):
    """Terms and partial sums of the expansion up to ``order`` at delta = 1.

    A non-convergent series (sup |Delta| >= 1) is still returned, flagged.
    """
    if order < 0:
        raise DomainError("order must be >= 0")
    moments, n_nodes = delta_moments(p, fam, tp, order)
    pref = 2.0 / math.sqrt(fam.stiffness)
    terms = tuple(float(series_coefficient(n) * pref * moments[n]) for n in range(order + 1))
    partial = tuple(float(v) for v in np.cumsum(terms))
    sup = sup_delta(p, fam, tp)
    return DeltaSeries(fam.s, order, terms, partial, sup, sup < 1.0, n_nodes)


def series_value(p, fam, tp, order):
    """Order-``order`` partial sum alone, without the sup |Delta| diagnostic."""
    if order < 0:
        raise DomainError("order must be >= 0")
    moments, _ = delta_moments(p, fam, tp, order)
    coeffs = np.array([series_coefficient(n) for n in range(order + 1)])
    return float(2.0 / math.sqrt(fam.stiffness) * np.dot(coeffs, moments))


def duffing_lambda0(mu, A):
    """Convergence threshold lambda_0 for the Duffing oscillator, or None.

    Returns None when mu A^2 < 1: the threshold expression is imaginary
    there and sup |Delta| < 1 has to be checked directly.
    """
    if mu <= 0 or A <= 0:
        raise DomainError("duffing_lambda0 needs mu > 0 and A > 0")
    g = mu * A * A
    if g < 1.0:
        return None
    return math.sqrt(0.5 * g) * math.sqrt(1.0 - 1.0 / g)
