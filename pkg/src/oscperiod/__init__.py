"""Periods of one-dimensional oscillators and Schwarzschild orbit observables
from a delta expansion with minimal-sensitivity optimisation, checked
against exact singular quadrature."""

from .errors import (
    DomainError,
    NoStationaryPointError,
    PhotonSphereError,
    QuadratureError,
    UnboundMotionError,
)
from .potential import (
    Potential,
    TurningPoints,
    anharmonic,
    custom,
    duffing,
    energy_from_amplitude,
    harmonic,
    pendulum,
    turning_points,
    turning_points_from_amplitude,
)
from .quadrature import exact_duffing_period, exact_pendulum_period, exact_period, integrate_singular
from .delta_core import DeltaSeries, QuadraticFamily, delta_ratio, series_term, sum_series
from .pms import PmsResult, optimize, optimize_series

__version__ = "0.1.0"
