"""One-dimensional potentials, turning points and energy bookkeeping.

A unit mass moves in ``V(x)``; every catalog potential is even with its
minimum ``V(0) = 0``.  Besides ``V`` itself each catalog entry carries an
exact expression for the *reduced kinetic factor*

    (E - V(x)) / ((x_plus - x) (x - x_minus)),    E = V(x_plus),

which stays finite at the turning points and is what the quadrature
actually integrates.  Evaluating it from ``E - V(x)`` directly loses
digits next to the endpoints, so the analytic forms are preferred.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, UnboundMotionError

__all__ = [
    "Potential",
    "TurningPoints",
    "harmonic",
    "duffing",
    "anharmonic",
    "pendulum",
    "custom",
    "energy_from_amplitude",
    "turning_points",
    "turning_points_from_amplitude",
    "reduced_kinetic",
    "parse_potential",
]


@dataclass(frozen=True)
class Potential:
    kind: str
    params: dict
    V: Callable = field(repr=False, compare=False)
    x_min: float = 0.0
    even: bool = False
    # closest positions the root search may reach on either side of x_min
    search_limit: float = math.inf
    escape_energy: float = math.inf
    reduced: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __call__(self, x):
        return self.V(x)

    @property
    def label(self):
        if not self.params:
            return self.kind
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.kind}:{args}"


@dataclass(frozen=True)
class TurningPoints:
    x_minus: float
    x_plus: float
    energy: float

    def __post_init__(self):
        if not self.x_minus < self.x_plus:
            raise DomainError(f"need x_minus < x_plus, got {self.x_minus}, {self.x_plus}")

    @property
    def center(self):
        return 0.5 * (self.x_plus + self.x_minus)

    @property
    def half_width(self):
        return 0.5 * (self.x_plus - self.x_minus)

    @property
    def symmetric(self):
        return self.x_minus == -self.x_plus


def harmonic(stiffness=1.0):
    """V = stiffness * x^2 / 2."""
    k = float(stiffness)
    if k <= 0:
        raise DomainError("harmonic stiffness must be positive")
    return Potential(
        kind="harmonic",
        params={"k": k} if k != 1.0 else {},
        V=lambda x: 0.5 * k * np.square(x),
        even=True,
        reduced=lambda x, A: np.full_like(np.asarray(x, dtype=float), 0.5 * k),
    )


def duffing(mu):
    """V = x^2/2 + mu x^4/4."""
    mu = float(mu)
    if mu < 0:
        raise DomainError("duffing needs mu >= 0 (single well)")

    def V(x):
        x2 = np.square(x)
        return 0.5 * x2 + 0.25 * mu * x2 * x2

    return Potential(
        kind="duffing",
        params={"mu": mu},
        V=V,
        even=True,
        reduced=lambda x, A: 0.5 + 0.25 * mu * (A * A + np.square(x)),
    )


def anharmonic(rho, N):
    """V = x^2/2 + rho x^(2N) / (2N)."""
    rho = float(rho)
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    N = int(N)
    if rho < 0:
        raise DomainError("anharmonic needs rho >= 0 (single well)")

    def V(x):
        x2 = np.square(x)
        return 0.5 * x2 + rho * x2**N / (2 * N)

    def reduced(x, A):
        # (A^2N - x^2N)/(A^2 - x^2) summed as a geometric series
        x2 = np.square(np.asarray(x, dtype=float))
        a2 = A * A
        acc = np.zeros_like(x2)
        for j in range(N):
            acc = acc + a2**j * x2 ** (N - 1 - j)
        return 0.5 + rho / (2 * N) * acc

    return Potential(
        kind="anharmonic",
        params={"rho": rho, "N": N},
        V=V,
        even=True,
        reduced=reduced,
    )


def pendulum():
    """V = 1 - cos(theta), librations only (E < 2)."""

    def V(x):
        # 2 sin^2(x/2) avoids cancellation at small angles
        return 2.0 * np.square(np.sin(0.5 * np.asarray(x, dtype=float)))

    def reduced(x, A):
        # cos x - cos A = 2 sin((A+x)/2) sin((A-x)/2)
        u = 0.5 * (A + np.asarray(x, dtype=float))
        v = 0.5 * (A - np.asarray(x, dtype=float))
        return 0.5 * np.sinc(u / np.pi) * np.sinc(v / np.pi)

    return Potential(
        kind="pendulum",
        params={},
        V=V,
        even=True,
        search_limit=math.pi,
        escape_energy=2.0,
        reduced=reduced,
    )


def custom(V, x_min=0.0, name="custom", even=False):
    """Wrap an arbitrary single-well ``V``; the caller supplies its minimum."""
    return Potential(kind=name, params={}, V=V, x_min=float(x_min), even=even)


def energy_from_amplitude(p, A):
    if A <= 0:
        raise DomainError(f"amplitude must be positive, got {A}")
    return float(p.V(p.x_min + A))


def turning_points_from_amplitude(p, A):
    """Turning points of an even potential at amplitude A, exactly (-A, A)."""
    if not p.even:
        raise DomainError(f"{p.kind} is not even; use turning_points(p, E)")
    if A > p.search_limit or (A == p.search_limit and p.escape_energy < math.inf):
        raise UnboundMotionError(f"amplitude {A} is beyond the libration range of {p.kind}")
    E = energy_from_amplitude(p, A)
    return TurningPoints(-float(A), float(A), E)


def _root_on_side(p, E, direction):
    x0 = p.x_min
    limit = p.search_limit
    lo = 0.0
    step = 1.0
    # geometric bracket expansion, never past the search limit
    for _ in range(200):
        hi = min(step, limit)
        if float(p.V(x0 + direction * hi)) - E >= 0.0:
            break
        if hi >= limit:
            raise UnboundMotionError(f"no turning point for E={E} in {p.kind} within |x|<{limit}")
        lo = hi
        step *= 2.0
    else:
        raise UnboundMotionError(f"no turning point for E={E} in {p.kind}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if float(p.V(x0 + direction * mid)) - E >= 0.0:
            hi = mid
        else:
            lo = mid
    # the closer of the two bracket ends
    if abs(float(p.V(x0 + direction * lo)) - E) < abs(float(p.V(x0 + direction * hi)) - E):
        return x0 + direction * lo
    return x0 + direction * hi


def turning_points(p, E):
    """Solve E = V(x) on both sides of the minimum by bracketing and bisection."""
    E = float(E)
    vmin = float(p.V(p.x_min))
    if not E > vmin:
        raise DomainError(f"energy {E} is not above the minimum {vmin} of {p.kind}")
    if E >= p.escape_energy:
        raise UnboundMotionError(f"energy {E} reaches the escape threshold {p.escape_energy} of {p.kind}")
    x_plus = _root_on_side(p, E, +1.0)
    if p.even and p.x_min == 0.0:
        x_minus = -x_plus
    else:
        x_minus = _root_on_side(p, E, -1.0)
    return TurningPoints(x_minus, x_plus, E)


def reduced_kinetic(p, tp, x):
    """(E - V(x)) / ((x_plus - x)(x - x_minus)) at interior points ``x``."""
    x = np.asarray(x, dtype=float)
    if p.reduced is not None and tp.symmetric and p.x_min == 0.0:
        return p.reduced(x, tp.x_plus)
    return (tp.energy - p.V(x)) / ((tp.x_plus - x) * (x - tp.x_minus))


def parse_potential(text):
    """Build a catalog potential from strings like ``duffing:mu=1``."""
    kind, _, rest = text.strip().partition(":")
    kwargs = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"malformed potential parameter {item!r}")
            kwargs[key.strip()] = float(value)
    factories = {
        "harmonic": (harmonic, {"k": "stiffness"}),
        "duffing": (duffing, {"mu": "mu"}),
        "anharmonic": (anharmonic, {"rho": "rho", "N": "N", "n": "N"}),
        "pendulum": (pendulum, {}),
    }
    if kind not in factories:
        raise ValueError(f"unknown potential kind {kind!r}; expected one of {sorted(factories)}")
    factory, names = factories[kind]
    args = {}
    for key, value in kwargs.items():
        if key not in names:
            raise ValueError(f"unknown parameter {key!r} for {kind}")
        args[names[key]] = value
    if kind == "anharmonic" and "N" in args:
        if args["N"] != int(args["N"]):
            raise ValueError("anharmonic N must be an integer")
        args["N"] = int(args["N"])
    try:
        return factory(**args)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind}: {exc}") from None
