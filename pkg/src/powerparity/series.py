"""Exact truncated power series over Python integers.

A series is stored densely: ``coeffs[n]`` is the coefficient of ``q**n`` and
nothing above the order ``N`` is ever computed.  Infinite products of the
shape ``prod (1 - q**e)**c`` are expanded one binomial factor at a time.
"""

from __future__ import annotations

import json
import operator
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable

__all__ = [
    "TruncatedSeries",
    "series_one",
    "apply_binomial_factor",
    "expand_factored_product",
    "gk_factors",
    "expand_Gk",
]


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in ``q`` known modulo ``q**(order + 1)``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a truncated series needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        N = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [0] * (N + 1)
        for i in range(N + 1):
            ai = a[i]
            if ai:
                for j in range(N + 1 - i):
                    out[i + j] += ai * b[j]
        return TruncatedSeries(tuple(out))

    def to_json(self) -> str:
        # decimal strings: coefficients leave the 64-bit range quickly
        return json.dumps({"order": self.order, "coeffs": [str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text: str) -> "TruncatedSeries":
        data = json.loads(text)
        coeffs = tuple(int(c) for c in data["coeffs"])
        if len(coeffs) != int(data["order"]) + 1:
            raise ValueError("order does not match the number of coefficients")
        return cls(coeffs)


def series_one(N: int) -> TruncatedSeries:
    if N < 0:
        raise ValueError(f"order must be non-negative, got {N}")
    return TruncatedSeries((1,) + (0,) * N)


def _divide_inplace(s: list[int], e: int) -> None:
    # s <- s / (1 - q^e), i.e. s[n] += s[n - e] for increasing n
    N = len(s) - 1
    if e > N:
        return
    if e * e <= N:
        for r in range(e):
            s[r::e] = accumulate(s[r::e])
    else:
        for start in range(e, N + 1, e):
            stop = min(start + e, N + 1)
            s[start:stop] = map(operator.add, s[start:stop], s[start - e : stop - e])


def _multiply_inplace(s: list[int], e: int) -> None:
    # s <- s * (1 - q^e); both slices are copies of the old values
    if e >= len(s):
        return
    s[e:] = map(operator.sub, s[e:], s[:-e])


def _apply(s: list[int], e: int, c: int) -> None:
    if e < 1:
        raise ValueError(f"factor exponent must be >= 1, got {e}")
    if c == 0:
        raise ValueError("factor power must be nonzero")
    step = _divide_inplace if c < 0 else _multiply_inplace
    for _ in range(abs(c)):
        step(s, e)


def apply_binomial_factor(s: TruncatedSeries, e: int, c: int) -> TruncatedSeries:
    """Return ``s * (1 - q**e)**c`` truncated to the order of ``s``.

    Negative ``c`` divides exactly, one geometric factor at a time.
    """
    out = list(s.coeffs)
    _apply(out, e, c)
    return TruncatedSeries(tuple(out))


def expand_factored_product(factors: Iterable[tuple[int, int]], N: int) -> TruncatedSeries:
    """Expand ``prod (1 - q**e)**c`` over ``factors`` up to ``q**N``."""
    if N < 0:
        raise ValueError(f"order must be non-negative, got {N}")
    factors = list(factors)
    for e, c in factors:
        if e < 1 or c == 0:
            raise ValueError(f"invalid factor (e={e}, c={c})")
    s = [1] + [0] * N
    for e, c in factors:
        if e <= N:
            _apply(s, e, c)
    return TruncatedSeries(tuple(s))


def gk_factors(k: int, N: int) -> list[tuple[int, int]]:
    """Factors of ``G_k(q) = prod (1-q^{2^k n^k})^2 / ((1-q^{2^{k+1} n^k})(1-q^{n^k}))``
    that can touch coefficients up to ``q**N``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    out = []
    n = 1
    while n**k <= N:
        e = n**k
        out.append((e, -1))
        if 2**k * e <= N:
            out.append((2**k * e, 2))
        if 2 ** (k + 1) * e <= N:
            out.append((2 ** (k + 1) * e, -1))
        n += 1
    return out


def expand_Gk(k: int, N: int) -> TruncatedSeries:
    """Coefficient stream ``a_k(0..N)`` of ``G_k``, the signed parity difference
    ``(-1)^n (p_k(0,2,n) - p_k(1,2,n))``."""
    if N < 0:
        raise ValueError(f"order must be non-negative, got {N}")
    return expand_factored_product(gk_factors(k, N), N)

