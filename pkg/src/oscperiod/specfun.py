"""Special functions used by the closed-form period formulas.

Everything here is written against the ``math`` module only, so the
closed forms can be checked against independent library implementations
in the test suite.

The complete elliptic integral uses the *modulus* convention::

    K(k) = integral_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta)

(not the parameter m = k^2 used by scipy/mpmath ``ellipk``).
"""

import math

from .errors import DomainError

__all__ = [
    "double_factorial_odd",
    "gamma",
    "bessel_j0",
    "bessel_j1",
    "hyp2f1_terminating",
    "elliptic_k",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_BESSEL_SWITCH = 12.0


def double_factorial_odd(n):
    """Return (2n-1)!! as a float, with (-1)!! = 1.

    Raises OverflowError once the product no longer fits in a double.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    prod = 1
    for k in range(1, 2 * int(n), 2):
        prod *= k
    try:
        return float(prod)
    except OverflowError:
        raise OverflowError(f"(2n-1)!! overflows a double for n={n}") from None


def gamma(x):
    """Euler gamma function for real ``x`` (Lanczos, reflection below 1/2)."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def _bessel_series(nu, x):
    half = 0.5 * x
    term = half**nu / math.factorial(nu)
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if k > half and abs(term) <= 1e-17 * abs(total):
            return total


def _bessel_asymptotic(nu, x):
    # Hankel expansion truncated at its smallest term.
    mu = 4.0 * nu * nu
    p, q = 0.0, 0.0
    a = 1.0
    prev = math.inf
    k = 0
    while True:
        contrib = a / x**k
        if abs(contrib) >= prev:
            break
        prev = abs(contrib)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * contrib
        else:
            q += sign * contrib
        k += 1
        a *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
        if a == 0.0:
            break
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j0(x):
    """Bessel J0; only needed to cross-check J1 through d/dx[x J1] = x J0."""
    x = abs(float(x))
    if x <= _BESSEL_SWITCH:
        return _bessel_series(0, x)
    return _bessel_asymptotic(0, x)


def bessel_j1(x):
    """Bessel function of the first kind of order one.

    Power series up to |x| = 12, Hankel asymptotic expansion beyond.
    """
    x = float(x)
    ax = abs(x)
    if ax <= _BESSEL_SWITCH:
        val = _bessel_series(1, ax)
    else:
        val = _bessel_asymptotic(1, ax)
    return -val if x < 0 else val


def hyp2f1_terminating(a, n, c, z):
    """2F1(a, -n; c; z) as the exact sum of its n+1 terms.

    Each term is obtained from the previous one by a rational factor, so
    no Pochhammer symbol is ever formed explicitly.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    for k in range(n):
        if c + k == 0:
            raise DomainError(f"c={c} makes a denominator vanish before the series terminates")
    term = 1.0
    total = 1.0
    for k in range(n):
        term *= (a + k) * (k - n) / ((c + k) * (k + 1)) * z
        total += term
    return total


def elliptic_k(k):
    """Complete elliptic integral of the first kind, modulus ``k``, via the AGM."""
    k = float(k)
    if not 0.0 <= abs(k) < 1.0:
        raise DomainError(f"elliptic_k needs |k| < 1, got {k}")
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(64):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)
