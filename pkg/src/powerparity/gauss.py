"""Gauss sums ``S_k(a, b)`` and the series built from them.

Angles are formed from exact integer residues ``a * n**k mod b`` so the only
floating-point error is one rounding per term.  The upper series

    Lambda_{a,b} = Gamma(1 + 1/k) / b * sum_{m >= 1} S_k(m a, b) / m^{1 + 1/k}

converges like ``M**(-1/k)``; partial sums are returned with a certified
bound on the discarded tail.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma, zeta

__all__ = [
    "STECHKIN",
    "STECHKIN_BOUND",
    "TruncationCapError",
    "GaussData",
    "gauss_sum",
    "gauss_sums_mod",
    "stechkin_ratio",
    "stechkin_scan",
    "truncation_for_tol",
    "lambda_upper",
    "lambda_small",
    "lemma4_bound",
    "lemma4_bound_proof_form",
    "lemma4_scan",
    "gauss_multiplicativity_check",
    "gauss_data",
    "reduce_index",
]

STECHKIN = 4.709236
STECHKIN_BOUND = 4.709237  # printed digits rounded up, for <= assertions

M_CAP = 10**120
DIRECT_SUM_LIMIT = 200_000
ROUNDING_FACTOR = 64 * 2.0**-52


class TruncationCapError(ValueError):
    """The requested tolerance needs more terms than the hard cap allows."""


@lru_cache(maxsize=4096)
def _residue_counts(k: int, b: int) -> np.ndarray:
    counts = np.zeros(b, dtype=np.int64)
    for n in range(1, b + 1):
        counts[pow(n, k, b)] += 1
    return counts


def gauss_sum(k: int, a: int, b: int) -> complex:
    """``S_k(a, b) = sum_{n=1}^{b} exp(2 pi i a n^k / b)``."""
    if b < 1:
        raise ValueError(f"modulus must be positive, got {b}")
    counts = _residue_counts(k, b)
    r = np.nonzero(counts)[0]
    angles = 2 * np.pi * ((a * r) % b) / b
    return complex(np.sum(counts[r] * np.exp(1j * angles)))


@lru_cache(maxsize=4096)
def gauss_sums_mod(k: int, b: int) -> np.ndarray:
    """``S_k(x, b)`` for every ``x = 0 .. b-1`` (read-only array)."""
    counts = _residue_counts(k, b)
    r = np.nonzero(counts)[0]
    x = np.arange(b)
    phase = np.exp(2j * np.pi * (np.outer(x, r) % b) / b)
    out = phase @ counts[r].astype(float)
    out.setflags(write=False)
    return out


def stechkin_ratio(k: int, a: int, b: int) -> float:
    """``|S_k(a, b)| / b^(1 - 1/k)``."""
    if b < 2 or k < 2:
        raise ValueError("need b >= 2 and k >= 2")
    if math.gcd(a, b) != 1:
        raise ValueError(f"a={a} and b={b} are not coprime")
    return abs(gauss_sum(k, a, b)) / b ** (1 - 1 / k)


def _scan_one(kb: tuple[int, int]) -> list[tuple[int, int, int, float, float]]:
    k, b = kb
    S = gauss_sums_mod(k, b)
    scale = b ** (1 - 1 / k)
    rows = []
    for a in range(1, b):
        if math.gcd(a, b) == 1:
            mag = abs(S[a])
            rows.append((k, a, b, float(mag), float(mag / scale)))
    return rows


def stechkin_scan(kmax: int, bmax: int, kmin: int = 2, bmin: int = 2, threads: int = 1):
    """Rows ``(k, a, b, |S|, ratio)`` for every coprime ``a`` with ``1 <= a < b``,
    sorted by ``(k, b, a)``."""
    jobs = [(k, b) for k in range(kmin, kmax + 1) for b in range(max(bmin, 2), bmax + 1)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_scan_one, jobs, chunksize=16))
    else:
        chunks = [_scan_one(job) for job in jobs]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r[0], r[2], r[1]))
    return rows


def truncation_for_tol(k: int, tol: float, cap: int = M_CAP) -> int:
    """Smallest M whose certified tail bound ``Gamma(1+1/k) k M^(-1/k)`` is <= tol."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    M = math.ceil((gamma(1 + 1 / k) * k / tol) ** k)
    if M > cap:
        raise TruncationCapError(f"tolerance {tol} for k={k} needs M={M:.3e} > cap {cap:.1e}")
    return max(M, 1)


def _check_pair(a: int, b: int) -> None:
    if b < 1 or not 0 <= a < b:
        raise ValueError(f"need 0 <= a < b, got a={a}, b={b}")
    if math.gcd(a, b) != 1:
        raise ValueError(f"a={a} and b={b} are not coprime")


def _partial_direct(k: int, a: int, b: int, M: int) -> tuple[complex, float]:
    S = gauss_sums_mod(k, b)
    m = np.arange(1, M + 1)
    terms = S[(m * a) % b] * m ** (-(1 + 1 / k))
    size = math.fsum(np.abs(terms))
    return complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag)), size


def _partial_hurwitz(k: int, a: int, b: int, M: int) -> complex:
    # S_k(m a, b) only depends on m mod b: sum each residue class j + b t, t < T_j,
    # as a difference of Hurwitz zeta values
    s = 1 + 1 / k
    S = gauss_sums_mod(k, b)
    j = np.arange(1, b + 1)
    T = np.array([(M - jj) // b + 1 if jj <= M else 0 for jj in range(1, b + 1)], dtype=float)
    head, tail = zeta(s, j / b), zeta(s, j / b + T)
    terms = S[(j * a) % b] * b ** (-s) * (head - tail)
    size = math.fsum(np.abs(S[(j * a) % b]) * b ** (-s) * (head + tail))
    return complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag)), size


def lambda_upper(k: int, a: int, b: int, M: int, method: str = "auto") -> tuple[complex, float]:
    """Partial sum of ``Lambda_{a,b}`` through ``m = M`` and a bound on its
    distance to the full series (the tail plus a floating-point allowance).

    ``method="direct"`` adds the M terms one by one; ``"hurwitz"`` groups them
    by ``m mod b`` and is O(b) for any M.  Both compute the same finite sum.
    """
    _check_pair(a, b)
    if M < 1:
        raise ValueError(f"truncation index must be >= 1, got {M}")
    if method == "auto":
        method = "direct" if M <= DIRECT_SUM_LIMIT else "hurwitz"
    if method == "direct":
        partial, size = _partial_direct(k, a, b, M)
    elif method == "hurwitz":
        partial, size = _partial_hurwitz(k, a, b, M)
    else:
        raise ValueError(f"unknown method {method!r}")
    g = gamma(1 + 1 / k)
    # analytic tail plus an allowance for rounding in the summed terms
    err = g * k * float(M) ** (-1 / k) + ROUNDING_FACTOR * g / b * size
    return g / b * partial, err


def reduce_index(a: int, b: int, c: int) -> tuple[int, int]:
    """The pair ``(c a / (c, b), b / (c, b))`` with the numerator reduced mod the new modulus."""
    g = math.gcd(c, b)
    b2 = b // g
    return (c * a // g) % b2, b2


def lambda_small(k: int, a: int, b: int, M: int, method: str = "auto") -> tuple[complex, float]:
    """``lambda_{a,b} = Lambda_{a,b} + 2^{-(k+1)/k} Lambda' - Lambda''`` with the
    primed indices reduced by ``2^{k+1}`` and ``2^k``; errors add."""
    _check_pair(a, b)
    w = 2 ** (-(k + 1) / k)
    L0, e0 = lambda_upper(k, a, b, M, method)
    L1, e1 = lambda_upper(k, *reduce_index(a, b, 2 ** (k + 1)), M, method)
    L2, e2 = lambda_upper(k, *reduce_index(a, b, 2**k), M, method)
    return L0 + w * L1 - L2, e0 + w * e1 + e2


def _divisors(b: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(b) + 1) if b % d == 0]
    return sorted(set(small + [b // d for d in small]))


def lemma4_bound(k: int, b: int) -> float:
    """``3 A Gamma(1+1/k) zeta(1+1/k) b^(-1/k) sum_{d | b} 1/d`` with A Stechkin's constant."""
    if b < 2:
        raise ValueError(f"need b >= 2, got {b}")
    div_sum = math.fsum(1 / d for d in _divisors(b))
    return 3 * STECHKIN * gamma(1 + 1 / k) * zeta(1 + 1 / k) * b ** (-1 / k) * div_sum


def lemma4_bound_proof_form(k: int, b: int) -> float:
    """Same bound with ``sum 1/d^k`` in place of ``sum 1/d``; reported, never asserted."""
    if b < 2:
        raise ValueError(f"need b >= 2, got {b}")
    div_sum = math.fsum(d ** (-k) for d in _divisors(b))
    return 3 * STECHKIN * gamma(1 + 1 / k) * zeta(1 + 1 / k) * b ** (-1 / k) * div_sum


def _lemma4_one(job: tuple[int, int, float]) -> list[tuple[int, int, int, float, float, float]]:
    k, b, tol = job
    M = truncation_for_tol(k, tol)
    bound = lemma4_bound(k, b)
    rows = []
    for a in range(1, b):
        if math.gcd(a, b) == 1:
            lam, err = lambda_small(k, a, b, M)
            rows.append((k, a, b, abs(lam), err, bound))
    return rows


def lemma4_scan(kmax: int, bmax: int, kmin: int = 2, bmin: int = 2, tol: float = 1e-6, threads: int = 1):
    """Rows ``(k, a, b, |lambda_{a,b}|, certified error, bound)`` sorted by ``(k, b, a)``."""
    jobs = [(k, b, tol) for k in range(kmin, kmax + 1) for b in range(max(bmin, 2), bmax + 1)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_lemma4_one, jobs, chunksize=8))
    else:
        chunks = [_lemma4_one(job) for job in jobs]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r[0], r[2], r[1]))
    return rows


def gauss_multiplicativity_check(k: int, m: int, a: int, b: int) -> bool:
    """``S_k(m a, b) == d S_k(m a / d, b / d)`` with ``d = (m, b)``, to 1e-10 b."""
    if math.gcd(a, b) != 1:
        raise ValueError(f"a={a} and b={b} are not coprime")
    d = math.gcd(m, b)
    lhs = gauss_sum(k, m * a, b)
    rhs = d * gauss_sum(k, m * a // d, b // d)
    return abs(lhs - rhs) <= 1e-10 * b


@dataclass(frozen=True)
class GaussData:
    k: int
    a: int
    b: int
    M: int
    S: complex
    Lambda: complex
    Lambda_error: float
    lambda_small: complex
    lambda_small_error: float

    def to_dict(self) -> dict:
        def c(z):
            return [z.real, z.imag]

        return {
            "k": self.k,
            "a": self.a,
            "b": self.b,
            "M": str(self.M),
            "S": c(self.S),
            "abs_S": abs(self.S),
            "Lambda": {"value": c(self.Lambda), "error_bound": self.Lambda_error},
            "lambda": {"value": c(self.lambda_small), "error_bound": self.lambda_small_error},
        }


def gauss_data(k: int, a: int, b: int, M: int | None = None, tol: float = 1e-8) -> GaussData:
    if M is None:
        M = truncation_for_tol(k, tol)
    L, eL = lambda_upper(k, a, b, M)
    lam, elam = lambda_small(k, a, b, M)
    return GaussData(k, a, b, M, gauss_sum(k, a, b), L, eL, lam, elam)
