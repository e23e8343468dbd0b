"""Asymptotic-series utilities: verification, optimal truncation, Borel sums.

A series sum a_n (x-a)^n is asymptotic to f at a when the order-N remainder
vanishes faster than (x-a)^N as x -> a+.  ``verify_asymptotic`` checks that
numerically on a decreasing grid.  The flat function exp(-z^-beta) has all
right-derivatives zero at 0, so adding it to f never changes the verdict:
asymptotic expansions do not pin down the function.

For factorial-type remainders R_N ~ N! alpha^N the best truncation order
sits at N ~ 1/alpha; ``optimal_truncation`` finds the exact discrete argmin.
``borel_sum`` evaluates (1/x) integral_0^inf e^(-z/x) B(z) dz with
B(z) = sum a_n z^n / n!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import BorelSummabilityError
from .quadrature import integrate

__all__ = [
    "CoefficientOracle",
    "AsymptoticCheck",
    "verify_asymptotic",
    "flat_function",
    "flat_derivative_probe",
    "optimal_truncation",
    "borel_sum",
    "gyro_partial",
]


@dataclass(frozen=True)
class CoefficientOracle:
    """Coefficients a_n with a declared growth class for tail control.

    ``exp_rate`` is a constant c with |B(z)| <= M e^(c z) for the Borel
    transform B(z) = sum a_n z^n / n! (0 for bounded transforms, r for
    geometric coefficients r^n).  ``borel_transform``, when supplied, is the
    closed form of B and is used instead of partial summation.
    """

    a: Callable[[int], float]
    label: str = ""
    exp_rate: float = 0.0
    borel_transform: Optional[Callable[[float], float]] = None


class AsymptoticCheck(NamedTuple):
    passed: bool
    residuals: List[float]
    grid: List[float]


def verify_asymptotic(f: Callable[[float], float], coeffs: CoefficientOracle,
                      a: float, N: int, grid: Sequence[float]) -> AsymptoticCheck:
    """Check that sum_{n<=N} a_n (x-a)^n is asymptotic to f of order N at a.

    Evaluates r(x) = (f(x) - partial(x)) / (x-a)^N on the grid (strictly
    decreasing towards a) and passes when |r| falls by at least 10x from the
    first to the last point.  Failure is a verdict, not an error.
    """
    grid = [float(x) for x in grid]
    if len(grid) < 2:
        raise ValueError("grid needs at least 2 points")
    if any(x <= a for x in grid) or any(y >= x for x, y in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly decreasing towards a from the right")
    an = [float(coeffs.a(n)) for n in range(N + 1)]
    residuals = []
    for x in grid:
        dx = x - a
        # fsum keeps the big cancellation f - partial down to one rounding
        # of f(x) itself; the term list is exact to float precision.
        r = math.fsum([float(f(x))] + [-c * dx**n for n, c in enumerate(an)])
        residuals.append(r / dx**N)
    passed = abs(residuals[-1]) <= abs(residuals[0]) / 10.0
    return AsymptoticCheck(passed, residuals, grid)


def flat_function(beta: float, z: float) -> float:
    """f0(z) = exp(-z^-beta), 0 < beta < 1: positive, yet flat at 0+."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must be in (0, 1), got {beta}")
    if z <= 0.0:
        if z == 0.0:
            return 0.0
        raise ValueError(f"flat_function requires z >= 0, got {z}")
    return math.exp(-(z**-beta))


def flat_derivative_probe(beta: float, n: int, z_grid: Sequence[float]) -> List[float]:
    """Divided-difference estimates of the n-th right derivative of f0 at 0.

    For each scale h in z_grid the forward difference
    sum_j (-1)^(n-j) C(n,j) f0(j h) / h^n is returned; every entry tends to
    0 as h -> 0, witnessing that all right-derivatives vanish.
    """
    if n < 0:
        raise ValueError(f"derivative order must be >= 0, got {n}")
    out = []
    for h in z_grid:
        h = float(h)
        if h <= 0:
            raise ValueError("z_grid entries must be positive")
        acc = 0.0
        for j in range(n + 1):
            val = flat_function(beta, j * h) if j > 0 else 0.0
            acc += (-1) ** (n - j) * math.comb(n, j) * val
        out.append(acc / h**n)
    return out


def optimal_truncation(alpha) -> int:
    """Exact argmin over N >= 1 of the remainder model N! alpha^N.

    ``alpha`` in (0, 1) as a float, Fraction, or string like "1/137"; floats
    are dyadic rationals, so the scan runs in exact arithmetic either way.
    Ties (exact when 1/alpha is an integer: the terms at N and N+1 coincide)
    resolve to the larger index, the plateau end.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    limit = int(1 / alpha) + 5
    best_n = 1
    best = alpha  # 1! alpha^1
    term = alpha
    for n in range(2, limit + 1):
        term = term * n * alpha
        if term <= best:
            best = term
            best_n = n
        elif term > best:
            break
    return best_n


def borel_sum(coeffs: CoefficientOracle, x: float, tol: float) -> float:
    """(1/x) integral_0^inf e^(-z/x) B(z) dz, B the Borel transform of coeffs.

    The integration range truncates at z_max where the declared growth bound
    makes the neglected tail below tol/10.  The transform is evaluated from
    its closed form when the oracle carries one, else by adaptive partial
    sums with a ratio-based tail bound.  A growth rate at or above 1/x means
    the integrand does not decay: reported as ``BorelSummabilityError``.
    """
    if x <= 0:
        raise ValueError(f"borel_sum requires x > 0, got {x}")
    if tol <= 0:
        raise ValueError(f"borel_sum requires tol > 0, got {tol}")
    decay = 1.0 / x - coeffs.exp_rate
    if decay <= 0:
        raise BorelSummabilityError(
            f"Borel transform of {coeffs.label!r} grows like exp({coeffs.exp_rate} z), "
            f"not integrable against exp(-z/{x})"
        )
    z_max = math.log(10.0 / (tol * decay)) / decay + 5.0

    if coeffs.borel_transform is not None:
        transform = np.vectorize(coeffs.borel_transform, otypes=[float])
    else:
        def transform(z):
            z = np.atleast_1d(z)
            out = np.zeros_like(z)
            term = np.ones_like(z)  # a_0 z^0 / 0!
            out += coeffs.a(0) * term
            # stopping is safe only once the term ratio ~ c z / n is < 1/2,
            # i.e. past n ~ 2 c max(z); then the tail is geometric.
            n_safe = 10 + int(2.0 * abs(coeffs.exp_rate) * float(np.max(z)))
            for n in range(1, 100_000):
                term = term * z / n
                contrib = coeffs.a(n) * term
                out += contrib
                if n >= n_safe and np.all(np.abs(contrib) <= 1e-4 * tol):
                    break
            else:
                raise BorelSummabilityError(
                    f"partial sums of the Borel transform of {coeffs.label!r} "
                    "did not converge within the term budget"
                )
            return out

    res = integrate(lambda z: np.exp(-z / x) * transform(z), 0.0, z_max, tol=tol * x / 2.0)
    return res.value / x


def gyro_partial(alpha: float, order: int) -> float:
    """Leading partial sums of the electron gyromagnetic anomaly series.

    order 1: (1/2)(alpha/pi); order 2 subtracts 0.328 (alpha/pi)^2.  Only
    these two published coefficients are wired; higher orders are rejected.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if order not in (1, 2):
        raise ValueError(f"only orders 1 and 2 are available, got {order}")
    ratio = alpha / math.pi
    value = 0.5 * ratio
    if order == 2:
        value -= 0.328 * ratio**2
    return value
