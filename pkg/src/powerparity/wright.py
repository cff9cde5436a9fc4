"""Wright's modular transformation for ``H_k(q) = prod_n (1 - q^{n^k})^{-1}``.

Near the root of unity ``e^{2 pi i a/b}`` write ``q = e^{2 pi i a/b - tau'}``
with ``Re tau' > 0``.  Then

    H_k(q) = C_{a,b} sqrt(tau') e^{j tau'} exp(Lambda_{a,b} / tau'^{1/k}) P_{a,b}(tau')

where ``P_{a,b}`` is a convergent triple product over ``h = 1..b``,
``s = 1..k`` and ``l >= 0``.  Conventions used here, each checked against
direct summation of the partition series (see tests/test_wright.py):

* ``d_h = a h^k mod b``;
* ``b1`` is the least positive integer with ``b | b1^k`` and ``b2 = b / b1``;
* for odd k, ``omega_{a,b} = exp(pi i (sum_h h d_h / b^2 - (b - b2) / 4))``;
* the s-th direction in ``g(h, l, s)`` is ``exp(pi i (2s + k - 1) / (2k))``,
  which keeps every ``|g| < 1`` for real ``tau' > 0``.

All roots are principal branches.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.special import gamma, gammaincc, zeta

from .counting import count_partitions
from .gauss import lambda_small, lambda_upper, reduce_index, truncation_for_tol, TruncationCapError
from .partsets import kth_powers
from .series import expand_Gk

__all__ = [
    "DivergentProductError",
    "WrightConstants",
    "TransformEvaluation",
    "least_power_multiple",
    "least_square_multiple",
    "wright_constants",
    "mu",
    "decay_rate",
    "P_tail_envelope",
    "choose_L",
    "log_P_ab",
    "P_ab",
    "H_direct",
    "G_direct",
    "H_via_transform",
    "G_via_transform",
    "G_constant",
    "G_exponent",
    "wright_check",
]

TWO_PI = 2 * math.pi
L_CAP = 50_000_000


class DivergentProductError(ArithmeticError):
    """Some factor of the triple product has ``|g| >= 1``."""


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def least_power_multiple(b: int, k: int) -> int:
    """Least ``x >= 1`` with ``b | x**k``."""
    if b < 1 or k < 1:
        raise ValueError("need b >= 1 and k >= 1")
    x = 1
    for p, e in _factorize(b).items():
        x *= p ** (-(-e // k))
    return x


def least_square_multiple(b: int) -> int:
    """Least ``x >= 1`` with ``b | x**2``."""
    return least_power_multiple(b, 2)


@dataclass(frozen=True)
class WrightConstants:
    k: int
    a: int
    b: int
    b1: int
    b2: int
    d: tuple[int, ...]  # d[h - 1] = a h^k mod b
    omega: complex
    j: float
    C: complex

    def d_h(self, h: int) -> int:
        return self.d[h - 1]


@lru_cache(maxsize=1024)
def wright_constants(k: int, a: int, b: int, root_power: Optional[int] = None) -> WrightConstants:
    """Constants of the transformation at ``a/b``.

    ``root_power`` (default k) is the exponent used both in ``d_h = a h^r mod b``
    and in the minimality condition ``b | b1^r``.  Passing ``root_power=2`` for
    odd k reproduces the square-based reading, which disagrees with direct
    summation once ``b >= 3``; it exists so that discrepancy can be measured.
    """
    r = k if root_power is None else root_power
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if b < 1 or not 0 <= a < b or math.gcd(a, b) != 1:
        raise ValueError(f"need coprime 0 <= a < b, got a={a}, b={b}")
    b1 = least_power_multiple(b, r)
    b2 = b // b1
    d = tuple((a * pow(h, r, b)) % b for h in range(1, b + 1))
    if k % 2 == 0:
        omega, j = 1 + 0j, 0.0
    else:
        hd = sum(h * dh for h, dh in enumerate(d, start=1))
        omega = cmath.exp(1j * math.pi * (hd / b**2 - (b - b2) / 4))
        j = (-1) ** ((k + 1) // 2) / TWO_PI ** (k + 1) * gamma(k + 1) * zeta(k + 1)
    C = (b1 / TWO_PI) ** (k / 2) * omega
    return WrightConstants(k, a, b, b1, b2, d, omega, float(j), C)


def mu(h: int, s: int, constants: WrightConstants) -> float:
    """``d_h / b`` for odd s, ``(b - d_h) / b`` for even s, and 1 when ``d_h = 0``."""
    b = constants.b
    if not 1 <= h <= b or not 1 <= s <= constants.k:
        raise ValueError(f"need 1 <= h <= {b} and 1 <= s <= {constants.k}")
    dh = constants.d_h(h)
    if dh == 0:
        return 1.0
    return dh / b if s % 2 == 1 else (b - dh) / b


def _check_tau(tau_prime: complex) -> complex:
    tau_prime = complex(tau_prime)
    if not tau_prime.real > 0:
        raise ValueError(f"need Re(tau') > 0, got {tau_prime}")
    return tau_prime


def _directions(constants: WrightConstants, tau_prime: complex) -> np.ndarray:
    # z_s with g(h, l, s) = exp(z_s (l + mu)^{1/k} - 2 pi i h / b)
    k, b = constants.k, constants.b
    root = tau_prime ** (1 / k)  # principal branch
    s = np.arange(1, k + 1)
    return TWO_PI ** ((k + 1) / k) * np.exp(1j * np.pi * (2 * s + k - 1) / (2 * k)) / (b * root)


def decay_rate(constants: WrightConstants, tau_prime: complex) -> float:
    """``c = min_s -Re(z_s)``; every factor satisfies ``|g| <= exp(-c (l + mu)^{1/k})``."""
    tau_prime = _check_tau(tau_prime)
    return float(np.min(-_directions(constants, tau_prime).real))


def _mu_table(constants: WrightConstants) -> np.ndarray:
    return np.array(
        [[mu(h, s, constants) for s in range(1, constants.k + 1)] for h in range(1, constants.b + 1)]
    )


def P_tail_envelope(constants: WrightConstants, tau_prime: complex, L: int) -> float:
    """Bound on ``|log P - log P_L|`` where ``P_L`` keeps ``l <= L``.

    Uses ``|log(1 - g)| <= |g| / (1 - |g|)`` and
    ``sum_{l > L} e^{-c l^{1/k}} <= int_L^inf e^{-c x^{1/k}} dx = k c^{-k} Gamma(k, c L^{1/k})``.
    """
    k, b = constants.k, constants.b
    c = decay_rate(constants, tau_prime)
    if c <= 0:
        raise DivergentProductError(f"no decay at tau'={tau_prime}: c={c}")
    g_max = math.exp(-c * float(_mu_table(constants).min()) ** (1 / k))
    x = c * L ** (1 / k)
    integral = k * c ** (-k) * gamma(k) * gammaincc(k, x)
    return float(k * b * integral / (1 - g_max))


def choose_L(constants: WrightConstants, tau_prime: complex, tol: float) -> int:
    """Smallest power-of-two-bracketed L whose tail envelope is below ``tol``."""
    hi = 16
    while P_tail_envelope(constants, tau_prime, hi) > tol:
        hi *= 2
        if hi > L_CAP:
            raise DivergentProductError(f"product needs more than {L_CAP} terms for tol={tol}")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if P_tail_envelope(constants, tau_prime, mid) > tol:
            lo = mid
        else:
            hi = mid
    return hi


def log_P_ab(
    k: int, a: int, b: int, tau_prime: complex, L: int, root_power: Optional[int] = None
) -> complex:
    """``log P_{a,b}(tau')`` with the product truncated at ``l <= L``."""
    tau_prime = _check_tau(tau_prime)
    if L < 1:
        raise ValueError(f"need L >= 1, got {L}")
    consts = wright_constants(k, a, b, root_power)
    z = _directions(consts, tau_prime)
    mus = _mu_table(consts)
    ell = np.arange(L + 1, dtype=float)
    total = 0j
    for h in range(1, b + 1):
        phase = -2j * math.pi * h / b
        for s in range(k):
            expo = z[s] * (ell + mus[h - 1, s]) ** (1 / k) + phase
            if np.max(expo.real) >= 0:
                raise DivergentProductError(
                    f"|g(h={h}, l, s={s + 1})| >= 1 at tau'={tau_prime}"
                )
            g = np.exp(expo)
            terms = -np.log1p(-g)
            total += math.fsum(terms.real) + 1j * math.fsum(terms.imag)
    return complex(total)


def P_ab(
    k: int, a: int, b: int, tau_prime: complex, L: int, root_power: Optional[int] = None
) -> complex:
    return cmath.exp(log_P_ab(k, a, b, tau_prime, L, root_power))


@lru_cache(maxsize=64)
def _pk_floats(k: int, N: int) -> np.ndarray:
    return np.array([float(v) for v in count_partitions(kth_powers(k), N)])


def _series_length(k: int, r: float, tol: float) -> int:
    """N with ``sum_{n > N} p_k(n) r^n <= tol * sum_{n <= N} p_k(n) r^n``.

    The tail is bounded geometrically using the largest ratio
    ``p_k(n) / p_k(n-1)`` over the upper half of the computed range.
    """
    if not 0 <= r < 1:
        raise ValueError(f"need |q| < 1, got {r}")
    if r == 0:
        return 0
    N = 64
    while True:
        p = _pk_floats(k, N)
        n = np.arange(N + 1)
        terms = p * np.exp(n * math.log(r))
        ratios = p[N // 2 + 1 :] / p[N // 2 : -1]
        rho = r * float(np.max(ratios))
        if rho < 1:
            tail = terms[-1] * rho / (1 - rho)
            if tail <= tol * math.fsum(terms):
                return N
        N *= 2
        if N > 2**22:
            raise ValueError(f"series at |q|={r} needs more than {N} terms")


def H_direct(k: int, q: complex, tol: float = 1e-15) -> complex:
    """``sum_n p_k(n) q^n``, truncated once the estimated tail is below ``tol``
    relative to the partial sum."""
    q = complex(q)
    if abs(q) >= 1:
        raise ValueError(f"need |q| < 1, got {q}")
    if q == 0:
        return 1 + 0j
    N = _series_length(k, abs(q), tol)
    p = _pk_floats(k, N)
    terms = p * np.exp(np.arange(N + 1) * cmath.log(q))
    return complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))


def G_direct(k: int, q: complex, tol: float = 1e-15) -> complex:
    """``sum_n a_k(n) q^n``; ``|a_k(n)| <= p_k(n)`` so H's truncation rule applies."""
    q = complex(q)
    if abs(q) >= 1:
        raise ValueError(f"need |q| < 1, got {q}")
    if q == 0:
        return 1 + 0j
    N = _series_length(k, abs(q), tol)
    a = np.array([float(v) for v in expand_Gk(k, N).coeffs])
    terms = a * np.exp(np.arange(N + 1) * cmath.log(q))
    return complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))


def _default_M(k: int, tau_prime: complex, tol: float) -> int:
    # Lambda enters through exp(Lambda / tau'^{1/k}): relative error ~ dLambda / |tau'|^{1/k}
    target = tol * abs(tau_prime) ** (1 / k)
    try:
        return truncation_for_tol(k, target)
    except TruncationCapError:
        return truncation_for_tol(k, 1e-14)


def _log_H_transform(k, a, b, tau_prime, L, M, tol, root_power=None):
    tau_prime = _check_tau(tau_prime)
    consts = wright_constants(k, a, b, root_power)
    if M is None:
        M = _default_M(k, tau_prime, tol)
    if L is None:
        L = choose_L(consts, tau_prime, tol)
    Lam, _ = lambda_upper(k, a, b, M)
    log_value = (
        cmath.log(consts.C)
        + 0.5 * cmath.log(tau_prime)
        + consts.j * tau_prime
        + Lam / tau_prime ** (1 / k)
        + log_P_ab(k, a, b, tau_prime, L, root_power)
    )
    return log_value, L, M


def H_via_transform(
    k: int,
    a: int,
    b: int,
    tau_prime: complex,
    L: Optional[int] = None,
    M: Optional[int] = None,
    tol: float = 1e-12,
) -> complex:
    """Right-hand side of the transformation at ``q = e^{2 pi i a/b - tau'}``.

    ``L`` and ``M`` default to truncations meeting ``tol`` in relative terms.
    """
    log_value, _, _ = _log_H_transform(k, a, b, tau_prime, L, M, tol)
    return cmath.exp(log_value)


def _shifted(k: int, a: int, b: int, factor: int, tau_prime: complex):
    a2, b2 = reduce_index(a, b, factor)
    return a2, b2, factor * tau_prime


def G_via_transform(
    k: int,
    a: int,
    b: int,
    tau_prime: complex,
    L: Optional[int] = None,
    M: Optional[int] = None,
    tol: float = 1e-12,
) -> complex:
    """``G_k = H(q) H(q^{2^{k+1}}) / H(q^{2^k})^2`` with each factor transformed
    at its own reduced rational point."""
    tau_prime = _check_tau(tau_prime)
    logs = []
    for factor in (1, 2 ** (k + 1), 2**k):
        a2, b2, t2 = _shifted(k, a, b, factor, tau_prime)
        logs.append(_log_H_transform(k, a2, b2, t2, L, M, tol)[0])
    return cmath.exp(logs[0] + logs[1] - 2 * logs[2])


def G_constant(k: int, a: int, b: int) -> complex:
    """The constant collecting ``C`` and ``sqrt`` prefactors when the three
    transformed factors of ``G_k`` are combined; ``G = const * e^{j tau'}
    exp(lambda_{a,b} / tau'^{1/k}) P P' / P''^2``."""
    c0 = wright_constants(k, a, b).C
    c1 = wright_constants(k, *reduce_index(a, b, 2 ** (k + 1))).C
    c2 = wright_constants(k, *reduce_index(a, b, 2**k)).C
    return c0 * c1 * math.sqrt(2 ** (k + 1)) / (c2**2 * 2**k)


def G_exponent(k: int, a: int, b: int, tau_prime: complex, M: int) -> complex:
    """``lambda_{a,b} / tau'^{1/k}`` at truncation ``M``."""
    lam, _ = lambda_small(k, a, b, M)
    return lam / complex(tau_prime) ** (1 / k)


@dataclass(frozen=True)
class TransformEvaluation:
    k: int
    a: int
    b: int
    tau_prime: complex
    L: int
    M: int
    value: complex
    direct: complex
    residual: float

    def __post_init__(self):
        if not self.tau_prime.real > 0:
            raise ValueError("Re(tau') must be positive")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "a": self.a,
            "b": self.b,
            "tau_prime": [self.tau_prime.real, self.tau_prime.imag],
            "L": self.L,
            "M": str(self.M),
            "transform": [self.value.real, self.value.imag],
            "direct": [self.direct.real, self.direct.imag],
            "relative_residual": self.residual,
        }


def wright_check(
    k: int,
    a: int,
    b: int,
    tau_prime: complex,
    tol: float = 1e-12,
    root_power: Optional[int] = None,
) -> TransformEvaluation:
    """Evaluate both sides of the transformation and their relative discrepancy."""
    tau_prime = _check_tau(tau_prime)
    log_value, L, M = _log_H_transform(k, a, b, tau_prime, None, None, tol, root_power)
    value = cmath.exp(log_value)
    q = cmath.exp(2j * math.pi * a / b - tau_prime)
    direct = H_direct(k, q, tol=min(tol, 1e-15))
    return TransformEvaluation(k, a, b, tau_prime, L, M, value, direct, abs(value - direct) / abs(direct))
