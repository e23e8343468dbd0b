"""Series catalog: described sequences n -> a_n with exact and float terms.

Catalog keys (used by the CLI and tests):

    "S0"           a_n = 1
    "S1"           a_n = n
    "grandi"       a_n = (-1)^(n-1)
    "monomial:s"   a_n = n^s,               integer s >= 0
    "alt-zeta:s"   a_n = (-1)^(n-1) n^(-s), integer s
    "geometric:r"  a_n = r^n,               rational r ("1/2" or "0.5")
    "zero"         a_n = 0

Where the generating function f(t) = sum a_n t^n has a rational closed form
it is attached to the oracle (exact evaluation at rational t), obtained from
t/(1-t) resp. t/(1+t) by repeated application of t d/dt:

    sum n^m t^n          = Q_m(t) / (1-t)^(m+1),  Q_{m+1} = t [Q'(1-t) + (m+1) Q]
    sum (-1)^(n-1) n^m t^n = P_m(t) / (1+t)^(m+1),  P_{m+1} = t [P'(1+t) - (m+1) P]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

import numpy as np

__all__ = ["SeriesOracle", "get_series", "monomial_genfun", "alternating_genfun"]


@dataclass(frozen=True)
class SeriesOracle:
    """A deterministic sequence with exact and floating term evaluation."""

    label: str
    term_exact: Callable[[int], Fraction]
    term_array: Callable[[np.ndarray], np.ndarray]
    abel_closed_form: Optional[Callable[[Fraction], Fraction]] = None
    abel_closed_form_desc: Optional[str] = None
    diagnostics: dict = field(default_factory=dict)

    def term_float(self, n: int) -> float:
        return float(self.term_array(np.array([n], dtype=float))[0])

    def __repr__(self):
        return f"SeriesOracle({self.label!r})"


def _eval_ratio(num: List[Fraction], den_root: Fraction, power: int, t: Fraction) -> Fraction:
    """num(t) / (1 + den_root * t)^power at rational t."""
    acc = Fraction(0)
    for c in reversed(num):
        acc = acc * t + c
    return acc / (1 + den_root * t) ** power


def _tddt(coeffs: List[Fraction], sign: int, m: int) -> List[Fraction]:
    """One step Q -> t [Q' (1 + sign*t) + (m+1) * (-sign) * Q].

    With sign = -1 this is the (1-t)-denominator recurrence, with sign = +1
    the (1+t) one. Index = power of t.
    """
    deriv = [i * coeffs[i] for i in range(1, len(coeffs))] or [Fraction(0)]
    out = [Fraction(0)] * (len(coeffs) + 2)
    for i, c in enumerate(deriv):
        out[i + 1] += c
        out[i + 2] += sign * c
    for i, c in enumerate(coeffs):
        out[i + 1] += -(sign) * (m + 1) * c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def monomial_genfun(m: int) -> Callable[[Fraction], Fraction]:
    """Closed form of sum_{n>=1} n^m t^n as an exact rational function of t."""
    coeffs = [Fraction(0), Fraction(1)]  # Q_0 = t
    for k in range(m):
        coeffs = _tddt(coeffs, -1, k)

    def f(t: Fraction) -> Fraction:
        t = Fraction(t)
        if abs(t) >= 1:
            raise ZeroDivisionError("generating function pole at |t| >= 1")
        return _eval_ratio(coeffs, Fraction(-1), m + 1, t)

    return f


def alternating_genfun(m: int) -> Callable[[Fraction], Fraction]:
    """Closed form of sum_{n>=1} (-1)^(n-1) n^m t^n, exact rational in t."""
    coeffs = [Fraction(0), Fraction(1)]  # P_0 = t
    for k in range(m):
        coeffs = _tddt(coeffs, +1, k)

    def f(t: Fraction) -> Fraction:
        return _eval_ratio(coeffs, Fraction(1), m + 1, Fraction(t))

    return f


def _monomial_series(s: int) -> SeriesOracle:
    return SeriesOracle(
        label=f"monomial:{s}" if s not in (0, 1) else ("S0" if s == 0 else "S1"),
        term_exact=lambda n, s=s: Fraction(n) ** s,
        term_array=lambda n, s=s: np.asarray(n, dtype=float) ** s,
        abel_closed_form=monomial_genfun(s),
        abel_closed_form_desc=f"rational function with denominator (1-t)^{s + 1}",
    )


def _alt_zeta_series(s: int) -> SeriesOracle:
    if s <= 0:
        m = -s
        closed = alternating_genfun(m)
        desc = f"rational function with denominator (1+t)^{m + 1}"
    else:
        closed = None
        desc = None

    def term_exact(n: int, s=s) -> Fraction:
        return Fraction((-1) ** (n - 1)) * Fraction(1, n**s) if s > 0 else (
            Fraction((-1) ** (n - 1)) * Fraction(n) ** (-s))

    def term_array(n, s=s):
        n = np.asarray(n, dtype=float)
        signs = np.where(np.asarray(n, dtype=np.int64) % 2 == 1, 1.0, -1.0)
        return signs * n ** (-float(s))

    return SeriesOracle(
        label=f"alt-zeta:{s}",
        term_exact=term_exact,
        term_array=term_array,
        abel_closed_form=closed,
        abel_closed_form_desc=desc,
    )


def _grandi() -> SeriesOracle:
    return SeriesOracle(
        label="grandi",
        term_exact=lambda n: Fraction((-1) ** (n - 1)),
        term_array=lambda n: np.where(np.asarray(n, dtype=np.int64) % 2 == 1, 1.0, -1.0),
        abel_closed_form=lambda t: Fraction(t) / (1 + Fraction(t)),
        abel_closed_form_desc="t/(1+t)",
    )


def _geometric(r: Fraction) -> SeriesOracle:
    def closed(t: Fraction) -> Fraction:
        t = Fraction(t)
        if abs(r * t) >= 1:
            raise ZeroDivisionError("geometric generating function pole at |r t| >= 1")
        return r * t / (1 - r * t)

    return SeriesOracle(
        label=f"geometric:{r}",
        term_exact=lambda n, r=r: r**n,
        term_array=lambda n, r=float(r): r ** np.asarray(n, dtype=float),
        abel_closed_form=closed,
        abel_closed_form_desc="r t/(1 - r t)",
    )


def _zero() -> SeriesOracle:
    return SeriesOracle(
        label="zero",
        term_exact=lambda n: Fraction(0),
        term_array=lambda n: np.zeros_like(np.asarray(n, dtype=float)),
        abel_closed_form=lambda t: Fraction(0),
        abel_closed_form_desc="0",
    )


def get_series(key: str) -> SeriesOracle:
    """Resolve a catalog key; unknown keys raise KeyError before any compute."""
    key = key.strip()
    if key == "S0":
        return _monomial_series(0)
    if key == "S1":
        return _monomial_series(1)
    if key == "grandi":
        return _grandi()
    if key == "zero":
        return _zero()
    if key.startswith("monomial:"):
        s = int(key.split(":", 1)[1])
        if s < 0:
            raise KeyError(f"monomial exponent must be >= 0, got {s}")
        return _monomial_series(s)
    if key.startswith("alt-zeta:"):
        return _alt_zeta_series(int(key.split(":", 1)[1]))
    if key.startswith("geometric:"):
        return _geometric(Fraction(key.split(":", 1)[1]))
    raise KeyError(f"unknown series key {key!r}")
