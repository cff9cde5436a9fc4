"""Closed-form constants, the saddle-point main term for ``a_k(n)`` and
finite-n diagnostics against exact coefficients.

With ``alpha = 1/k`` and ``A = 2^{-(k+1)/k} / k``:

    a_k(n) ~ C n^{-(alpha+2)/(2(alpha+1))} exp(n^{alpha/(alpha+1)} (1 + 1/alpha) K^{1/(alpha+1)})

where ``K = A Gamma(alpha+1) zeta(alpha+1)``.  Large quantities are carried
as logarithms throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np
from scipy.special import gamma, zeta

from .counting import count_by_parts_mod
from .partsets import kth_powers
from .series import expand_Gk

__all__ = [
    "AsymptoticModel",
    "asymptotic_model",
    "dirichlet_D",
    "dirichlet_D_partial",
    "D_AT_ZERO",
    "D_prime_at_zero",
    "saddle_y",
    "saddle_objective",
    "int_log",
    "main_term",
    "log_Gk_main",
    "log_Gk_series",
    "Lemma1Report",
    "lemma1_residuals",
    "equidistribution_ratio",
    "beta",
    "beta_window",
    "kappa1",
    "DELTA_DEFAULT",
]

DELTA_DEFAULT = 1 / 3
D_AT_ZERO = 0.0


def D_prime_at_zero(k: int) -> float:
    return -(k - 1) * math.log(2) / 2


@dataclass(frozen=True)
class AsymptoticModel:
    k: int
    alpha: float
    A: float
    B: float
    C_front: float
    exponent_const: float
    power: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha": self.alpha,
            "A": self.A,
            "B": self.B,
            "C_front": self.C_front,
            "exponent_const": self.exponent_const,
            "power": self.power,
        }


def asymptotic_model(k: int) -> AsymptoticModel:
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    alpha = 1 / k
    A = 2 ** (-(k + 1) / k) / k
    K = A * gamma(alpha + 1) * zeta(alpha + 1)
    B = A * gamma(alpha) * zeta(alpha + 1)
    C_front = (2**k * (alpha + 1) * math.pi) ** -0.5 * K ** (1 / (2 * (alpha + 1)))
    exponent_const = (1 + 1 / alpha) * K ** (1 / (alpha + 1))
    power = -(alpha + 2) / (2 * (alpha + 1))
    return AsymptoticModel(k, alpha, A, float(B), float(C_front), float(exponent_const), power)


def dirichlet_D(k: int, s: float) -> float:
    """``(1 + 2^{-s(k+1)} - 2^{1-sk}) zeta(ks)``, the Dirichlet series of the
    exponents of ``G_k``."""
    if k * s <= 1:
        raise ValueError(f"need k*s > 1, got k={k}, s={s}")
    return float((1 + 2 ** (-s * (k + 1)) - 2 ** (1 - s * k)) * zeta(k * s))


def dirichlet_D_partial(k: int, s: float, terms: int) -> float:
    """``sum_{n <= terms} (n^{-ks} + (2^{k+1} n^k)^{-s} - 2 (2^k n^k)^{-s})``."""
    n = np.arange(1, terms + 1, dtype=float)
    base = n ** (-k * s)
    vals = base * (1 + 2 ** (-s * (k + 1)) - 2 * 2 ** (-s * k))
    return math.fsum(vals[::-1])


def saddle_y(k: int, n: float) -> float:
    """Stationary point of ``B y^{-alpha} + n y``: ``(alpha B / n)^{1/(alpha+1)}``."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    m = asymptotic_model(k)
    K = m.A * gamma(m.alpha + 1) * zeta(m.alpha + 1)
    return float(n ** (-1 / (m.alpha + 1)) * K ** (1 / (m.alpha + 1)))


def saddle_objective(k: int, n: float, y: float) -> float:
    m = asymptotic_model(k)
    return m.B * y ** (-m.alpha) + n * y


def int_log(x: int) -> float:
    """Natural log of a positive integer of any size, keeping ~53 bits."""
    if x <= 0:
        raise ValueError(f"need a positive integer, got {x}")
    shift = max(x.bit_length() - 60, 0)
    return math.log(x >> shift) + shift * math.log(2)


def main_term(k: int, n: int) -> tuple[float, Optional[float]]:
    """``(log M(n), M(n))`` with ``M(n)`` the saddle-point main term; the second
    entry is None once ``M(n)`` overflows a double."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    m = asymptotic_model(k)
    log_value = (
        math.log(m.C_front)
        + m.power * math.log(n)
        + m.exponent_const * n ** (m.alpha / (m.alpha + 1))
    )
    value = math.exp(log_value) if log_value < 709 else None
    return log_value, value


def log_Gk_main(k: int, tau: complex) -> complex:
    """``B tau^{-1/k} - ((k-1)/2) log 2`` on the wedge ``|Arg tau| <= pi/4``."""
    tau = complex(tau)
    if tau == 0 or abs(cmath.phase(tau)) > math.pi / 4:
        raise ValueError(f"tau={tau} is outside |Arg tau| <= pi/4")
    m = asymptotic_model(k)
    return m.B * tau ** (-1 / k) - (k - 1) / 2 * math.log(2)


def log_Gk_series(k: int, y: float, N: Optional[int] = None, dps: int = 40) -> mpmath.mpf:
    """``log G_k(e^{-y})`` from exact coefficients, summed at ``dps`` digits.

    The default order N keeps ``p_k``-dominated tail terms below ``e^{-60}``.
    """
    if y <= 0:
        raise ValueError(f"need y > 0, got {y}")
    if N is None:
        N = _order_for(k, y)
    coeffs = expand_Gk(k, N).coeffs
    with mpmath.workdps(dps):
        x = mpmath.exp(-mpmath.mpf(y))
        total = mpmath.mpf(0)
        xn = mpmath.mpf(1)
        for c in coeffs:
            if c:
                total += c * xn
            xn *= x
        return mpmath.log(total)


def _order_for(k: int, y: float) -> int:
    # a_k(n) <= p_k(n) <= exp(c n^{1/(k+1)}); stop once n y outweighs that by 60
    m = asymptotic_model(k)
    N = 64
    while N * y - 3 * m.exponent_const * N ** (1 / (k + 1)) < 60:
        N *= 2
    return N


@dataclass(frozen=True)
class Lemma1Report:
    k: int
    ys: tuple[float, ...]
    residuals: tuple[float, ...]
    slope: float

    @property
    def decreasing(self) -> bool:
        return all(a > b for a, b in zip(self.residuals, self.residuals[1:]))

    @property
    def passed(self) -> bool:
        return self.decreasing and self.slope > 0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "y": list(self.ys),
            "residual": list(self.residuals),
            "loglog_slope": self.slope,
            "strictly_decreasing": self.decreasing,
        }


def lemma1_residuals(k: int, ys: Sequence[float] = (0.2, 0.1, 0.05, 0.02), dps: int = 40) -> Lemma1Report:
    """``|log G_k(e^{-y}) - main(y)|`` on a grid of y together with the
    least-squares slope of log residual against log y."""
    ys = tuple(sorted(ys, reverse=True))
    res = []
    for y in ys:
        exact = log_Gk_series(k, y, dps=dps)
        res.append(float(abs(exact - log_Gk_main(k, y).real)))
    if any(r <= 0 for r in res):
        slope = float("nan")
    else:
        slope = float(np.polyfit(np.log(ys), np.log(res), 1)[0])
    return Lemma1Report(k, ys, tuple(res), slope)


def equidistribution_ratio(k: int, n: int) -> tuple[Fraction, float]:
    """``p_k(0,2,n) / p_k(n)`` exactly, and its deviation from 1/2 as a float."""
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    prof = count_by_parts_mod(kth_powers(k), 2, n)
    even, odd = prof.column(n)
    ratio = Fraction(even, even + odd)
    return ratio, float(ratio - Fraction(1, 2))


def beta(k: int, delta: float = DELTA_DEFAULT) -> float:
    """``1 + (alpha/2)(1 - delta/2)`` for ``0 < delta < 2/3``."""
    if not 0 < delta < 2 / 3:
        raise ValueError(f"need 0 < delta < 2/3, got {delta}")
    return 1 + (1 / k) / 2 * (1 - delta / 2)


def beta_window(k: int) -> tuple[float, float]:
    """Open interval that ``beta`` must lie in."""
    return (3 * k + 1) / (3 * k), (2 * k + 1) / (2 * k)


def kappa1(k: int, c0: float, delta: float = DELTA_DEFAULT) -> float:
    """Relative error exponent ``min(k c0 - delta/4, 1/2 - delta) / (k+1)``; report only."""
    if not 0 < c0 < 1:
        raise ValueError(f"need 0 < c0 < 1, got {c0}")
    return min(k * c0 - delta / 4, 1 / 2 - delta) / (k + 1)
