"""Part sets ``S = {f(n)}`` and the structural checks the combinatorial
parity argument needs: ``f(1) = 1``, odd values at odd arguments, and
``f(2n) = 2 * alpha * f(n)`` for one fixed integer ``alpha``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

__all__ = [
    "PartSetError",
    "PartSetSpec",
    "HypothesisReport",
    "kth_powers",
    "tabulated",
    "explicit",
    "parse_spec",
    "validate_theorem2_hypotheses",
    "parts_up_to",
    "odd_index_subset",
]


class PartSetError(ValueError):
    """Raised for malformed part sets or queries a part set cannot answer."""


@dataclass(frozen=True)
class PartSetSpec:
    kind: str  # "powers" | "table" | "explicit"
    k: Optional[int] = None
    values: tuple[int, ...] = ()  # f(1), f(2), ... for "table"; the parts for "explicit"

    def __post_init__(self):
        if self.kind == "powers":
            if self.k is None or self.k < 1:
                raise PartSetError(f"k-th powers need k >= 1, got {self.k}")
        elif self.kind in ("table", "explicit"):
            vals = self.values
            if not vals:
                raise PartSetError(f"{self.kind} part set is empty")
            if any(not isinstance(v, int) or v < 1 for v in vals):
                raise PartSetError("parts must be positive integers")
            if any(x >= y for x, y in zip(vals, vals[1:])):
                raise PartSetError("values must be strictly increasing")
        else:
            raise PartSetError(f"unknown part-set kind {self.kind!r}")

    def f(self, n: int) -> int:
        """The n-th element (1-based) of S."""
        if n < 1:
            raise PartSetError(f"index must be >= 1, got {n}")
        if self.kind == "powers":
            return n**self.k
        if n > len(self.values):
            raise PartSetError(f"table ends at n={len(self.values)}, asked for f({n})")
        return self.values[n - 1]

    def describe(self) -> str:
        if self.kind == "powers":
            return f"powers:k={self.k}"
        if self.kind == "table":
            return "table:" + ",".join(map(str, self.values))
        return "explicit:" + ",".join(map(str, self.values))


def kth_powers(k: int) -> PartSetSpec:
    return PartSetSpec("powers", k=k)


def tabulated(values) -> PartSetSpec:
    """Part set given by ``f(1), f(2), ...`` listed in order, or a mapping ``n -> f(n)``."""
    if isinstance(values, dict):
        items = sorted((int(n), int(v)) for n, v in values.items())
        if [n for n, _ in items] != list(range(1, len(items) + 1)):
            raise PartSetError("table must define f(n) for n = 1..n_max without gaps")
        values = [v for _, v in items]
    return PartSetSpec("table", values=tuple(int(v) for v in values))


def explicit(parts) -> PartSetSpec:
    return PartSetSpec("explicit", values=tuple(int(v) for v in parts))


def parse_spec(text: str) -> PartSetSpec:
    """Parse ``powers:k=3``, ``table:@file.json`` or ``explicit:1,4,9``."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise PartSetError(f"part-set spec needs a kind prefix: {text!r}")
    kind = kind.strip().lower()
    rest = rest.strip()
    try:
        if kind == "powers":
            key, _, val = rest.partition("=")
            if key.strip() != "k":
                raise PartSetError(f"expected powers:k=<int>, got {text!r}")
            return kth_powers(int(val))
        if kind == "table":
            if rest.startswith("@"):
                data = json.loads(Path(rest[1:]).read_text())
            else:
                data = [int(v) for v in rest.split(",") if v.strip()]
            return tabulated(data)
        if kind == "explicit":
            return explicit(int(v) for v in rest.split(",") if v.strip())
    except (OSError, json.JSONDecodeError) as exc:
        raise PartSetError(f"cannot read part-set table: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, PartSetError):
            raise
        raise PartSetError(f"malformed part-set spec {text!r}: {exc}") from exc
    raise PartSetError(f"unknown part-set kind {kind!r}")


@dataclass(frozen=True)
class HypothesisReport:
    f1_is_1: bool
    odd_at_odds: bool
    doubling_alpha: Optional[int]  # None when no single alpha fits
    increasing: bool
    checked_up_to: int

    @property
    def all_hold(self) -> bool:
        return (
            self.f1_is_1
            and self.odd_at_odds
            and self.doubling_alpha is not None
            and self.increasing
        )


def validate_theorem2_hypotheses(spec: PartSetSpec, n_max: int) -> HypothesisReport:
    """Check f(1) = 1, odd values at odd n, doubling and monotonicity on ``1 <= n <= n_max``.

    For k-th powers ``alpha = 2**(k-1)`` is known in closed form; the finite
    check is still run and must agree.  For tables alpha is read off the
    first pair, ``f(2) = 2 alpha f(1)``, then verified for every ``2n <= n_max``.
    """
    if spec.kind == "explicit":
        raise PartSetError("an explicit part list has no index function to test f(2n) = 2 alpha f(n)")
    if n_max < 1:
        raise PartSetError(f"n_max must be >= 1, got {n_max}")
    f = [None] + [spec.f(n) for n in range(1, n_max + 1)]

    f1_is_1 = f[1] == 1
    odd_at_odds = all(f[n] % 2 == 1 for n in range(1, n_max + 1, 2))
    increasing = all(f[n] < f[n + 1] for n in range(1, n_max))

    if spec.kind == "powers":
        alpha: Optional[int] = 2 ** (spec.k - 1)
    elif n_max >= 2 and f[2] % (2 * f[1]) == 0 and f[2] // (2 * f[1]) >= 1:
        alpha = f[2] // (2 * f[1])
    else:
        alpha = None
    if alpha is not None and any(f[2 * n] != 2 * alpha * f[n] for n in range(1, n_max // 2 + 1)):
        alpha = None
    return HypothesisReport(f1_is_1, odd_at_odds, alpha, increasing, n_max)


def parts_up_to(spec: PartSetSpec, N: int) -> list[int]:
    if N < 0:
        raise PartSetError(f"N must be non-negative, got {N}")
    if spec.kind == "explicit":
        return [v for v in spec.values if v <= N]
    if spec.kind == "table" and spec.values[-1] <= N:
        raise PartSetError(
            f"table ends at f({len(spec.values)})={spec.values[-1]} <= N={N}; "
            "later parts may be missing"
        )
    out = []
    n = 1
    while (v := spec.f(n)) <= N:
        out.append(v)
        n += 1
    return out


def odd_index_subset(spec: PartSetSpec, N: int) -> list[int]:
    """``{f(2n-1) : f(2n-1) <= N}`` in ascending order."""
    if spec.kind == "explicit":
        return [v for i, v in enumerate(spec.values) if i % 2 == 0 and v <= N]
    return parts_up_to(spec, N)[::2]
