"""Exact dynamic-programming counts for partitions into a part set.

Everything here is integer arithmetic and deliberately independent of
``powerparity.series``; the two are cross-checked against each other.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .partsets import (
    PartSetError,
    PartSetSpec,
    odd_index_subset,
    parts_up_to,
    validate_theorem2_hypotheses,
)

__all__ = [
    "ResidueProfile",
    "AlternatingStream",
    "OrderingReport",
    "ParityReport",
    "count_partitions",
    "count_by_parts_mod",
    "count_bounded_multiplicity",
    "count_distinct",
    "alternating_direct",
    "alternating_via_convolution",
    "glaisher_odd_distinct",
    "ordering_sequence",
    "cyclic_pattern_report",
    "parity_report",
]


@dataclass(frozen=True)
class ResidueProfile:
    """``table[a][n]`` = number of partitions of n into parts from S whose
    number of parts is congruent to a mod m."""

    m: int
    N: int
    table: tuple[tuple[int, ...], ...]

    def __getitem__(self, an: tuple[int, int]) -> int:
        a, n = an
        return self.table[a][n]

    def column(self, n: int) -> tuple[int, ...]:
        return tuple(row[n] for row in self.table)

    def totals(self) -> list[int]:
        return [sum(col) for col in zip(*self.table)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + [f"p_S({a},{self.m},n)" for a in range(self.m)])
        for n in range(self.N + 1):
            w.writerow([n] + [str(v) for v in self.column(n)])
        return buf.getvalue()


@dataclass(frozen=True)
class AlternatingStream:
    """``a[n] = (-1)^n (p_S(0,2,n) - p_S(1,2,n))``."""

    N: int
    a: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"N": self.N, "a": [str(v) for v in self.a]}


def count_partitions(spec: PartSetSpec, N: int) -> list[int]:
    """``p_S(0..N)`` by the unbounded knapsack recurrence."""
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    p = [1] + [0] * N
    for s in parts_up_to(spec, N):
        for n in range(s, N + 1):
            p[n] += p[n - s]
    return p


def count_by_parts_mod(spec: PartSetSpec, m: int, N: int) -> ResidueProfile:
    """Partition counts split by the number of parts modulo ``m``.

    The DP state is (weight, parts mod m); one more copy of part s sends
    (n, a) to (n + s, a + 1 mod m).
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    T = [[0] * (N + 1) for _ in range(m)]
    T[0][0] = 1
    rows = range(m)
    for s in parts_up_to(spec, N):
        for n in range(s, N + 1):
            # read every residue at n - s before any write at n
            prev = [T[(a - 1) % m][n - s] for a in rows]
            for a in rows:
                T[a][n] += prev[a]
    return ResidueProfile(m, N, tuple(tuple(row) for row in T))


def count_bounded_multiplicity(spec: PartSetSpec, alpha: int, N: int) -> list[int]:
    """Partitions of n into parts of S, each part used fewer than ``alpha``
    times: the coefficients of ``prod_s (1 - x^{alpha s}) / (1 - x^s)``."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    c = [1] + [0] * N
    for s in parts_up_to(spec, N):
        new = [0] * (N + 1)
        for n in range(N + 1):
            acc = 0
            for j in range(alpha):
                if n - j * s < 0:
                    break
                acc += c[n - j * s]
            new[n] = acc
        c = new
    return c


def count_distinct(parts: Sequence[int], N: int) -> list[int]:
    """Number of subsets of ``parts`` with sum n (0/1 knapsack)."""
    if any(x >= y for x, y in zip(parts, parts[1:])):
        raise ValueError("parts must be strictly increasing")
    d = [1] + [0] * N
    for s in parts:
        for n in range(N, s - 1, -1):
            d[n] += d[n - s]
    return d


def alternating_direct(spec: PartSetSpec, N: int) -> AlternatingStream:
    prof = count_by_parts_mod(spec, 2, N)
    even, odd = prof.table
    a = tuple((even[n] - odd[n]) if n % 2 == 0 else (odd[n] - even[n]) for n in range(N + 1))
    return AlternatingStream(N, a)


def alternating_via_convolution(spec: PartSetSpec, N: int) -> AlternatingStream:
    """``a_S(n) = sum_j c(j) d(n - 2j)``.

    ``c`` counts partitions into S with multiplicities below alpha, indexed by
    its weight in ``q**2``; ``d`` counts partitions into distinct parts
    ``f(1), f(3), f(5), ...``.
    """
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    n_max = _index_bound(spec, N)
    report = validate_theorem2_hypotheses(spec, n_max)
    if not report.all_hold:
        raise PartSetError(f"part set fails the doubling hypotheses: {report}")
    c = count_bounded_multiplicity(spec, report.doubling_alpha, N // 2)
    d = count_distinct(odd_index_subset(spec, N), N)
    a = tuple(sum(c[j] * d[n - 2 * j] for j in range(n // 2 + 1)) for n in range(N + 1))
    return AlternatingStream(N, a)


def _index_bound(spec: PartSetSpec, N: int) -> int:
    # enough indices that f(n) > N, so every part <= N is covered by the check
    if spec.kind == "explicit":
        raise PartSetError("an explicit part list has no index function; use powers: or table:")
    if spec.kind == "table":
        return len(spec.values)
    n = 1
    while spec.f(n) <= N:
        n += 1
    return max(2 * n, 2)


def glaisher_odd_distinct(N: int) -> list[int]:
    """Partitions of n into distinct odd parts."""
    return count_distinct(list(range(1, N + 1, 2)), N)


@dataclass(frozen=True)
class OrderingReport:
    m: int
    N: int
    sequence: tuple[tuple[int, ...], ...]  # sequence[n - 1] = u_n
    preperiod: Optional[int]
    period: Optional[int]

    @property
    def periodic(self) -> bool:
        return self.period is not None

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "N": self.N,
            "u": [list(u) for u in self.sequence],
            "preperiod": self.preperiod,
            "period": self.period,
            "status": (
                f"eventually periodic: preperiod {self.preperiod}, period {self.period}"
                if self.periodic
                else f"no period detected up to N={self.N}"
            ),
        }


def _order(column: Sequence[int]) -> tuple[int, ...]:
    # non-increasing counts; equal counts keep the smaller residue first
    return tuple(sorted(range(len(column)), key=lambda a: (-column[a], a)))


def _detect_period(seq: Sequence, max_period: int) -> tuple[Optional[int], Optional[int]]:
    """Smallest period p, then smallest preperiod t, with ``seq[i] == seq[i + p]``
    for every ``i >= t``; the periodic tail must cover half the horizon and at
    least two full periods."""
    L = len(seq)
    for p in range(1, max_period + 1):
        # last index where the shift-by-p comparison fails
        t = 0
        for i in range(L - p - 1, -1, -1):
            if seq[i] != seq[i + p]:
                t = i + 1
                break
        if L - t >= max(2 * p, (L + 1) // 2):
            return t, p
    return None, None


def ordering_sequence(
    spec: PartSetSpec, m: int, N: int, profile: Optional[ResidueProfile] = None
) -> OrderingReport:
    """The permutations ``u_n`` (1 <= n <= N) ranking the residue classes by count,
    together with an observational periodicity verdict."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if profile is None:
        profile = count_by_parts_mod(spec, m, N)
    seq = tuple(_order(profile.column(n)) for n in range(1, N + 1))
    pre, per = _detect_period(seq, N // 2)
    return OrderingReport(m, N, seq, pre, per)


def cyclic_pattern_report(profile: ResidueProfile) -> dict:
    """Test the cyclic pattern ``p(n mod m) > p(n+1 mod m) > ... > p(n+m-1 mod m)``.

    For m = 2 this is the parity inequality; for m = 3 it is the conjectured
    mod-3 ordering.  Reports the first stretch on which the pattern holds
    strictly and the first violation after it.
    """
    m, N = profile.m, profile.N
    holds = []
    for n in range(1, N + 1):
        col = profile.column(n)
        want = [(n + i) % m for i in range(m)]
        holds.append(all(col[want[i]] > col[want[i + 1]] for i in range(m - 1)))
    start = next((n for n in range(1, N + 1) if holds[n - 1]), None)
    first_violation = None
    if start is not None:
        first_violation = next((n for n in range(start, N + 1) if not holds[n - 1]), None)
    end = (first_violation - 1) if first_violation is not None else (N if start else None)
    early = [n for n in range(1, (start or N + 1)) if not holds[n - 1]]
    total_violations = sum(1 for h in holds if not h)
    return {
        "m": m,
        "N": N,
        "segment_start": start,
        "segment_end": end,
        "first_violation": first_violation,
        "violations_before_segment": early,
        "violations_total": total_violations,
        "confirmed_to_horizon": start is not None and first_violation is None,
    }


@dataclass(frozen=True)
class ParityReport:
    N: int
    last_zero: Optional[int]
    min_positive: Optional[int]
    min_positive_at: Optional[int]
    negatives: tuple[int, ...]
    stream: AlternatingStream = field(repr=False)

    @property
    def passed(self) -> bool:
        a = self.stream.a
        start = (self.last_zero or 0) + 1
        return not self.negatives and all(a[n] > 0 for n in range(max(start, 1), self.N + 1))

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "last_zero": self.last_zero,
            "min_positive_after_last_zero": (
                None if self.min_positive is None else str(self.min_positive)
            ),
            "min_positive_at": self.min_positive_at,
            "negative_indices": list(self.negatives),
        }


def parity_report(spec: PartSetSpec, N: int, stream: Optional[AlternatingStream] = None) -> ParityReport:
    """Locate the last index where the parity difference vanishes and confirm
    it is positive (and never negative) elsewhere up to N."""
    if stream is None:
        stream = alternating_direct(spec, N)
    a = stream.a
    zeros = [n for n in range(1, N + 1) if a[n] == 0]
    last_zero = zeros[-1] if zeros else None
    tail = range((last_zero or 0) + 1, N + 1)
    min_pos, min_at = None, None
    for n in tail:
        if a[n] > 0 and (min_pos is None or a[n] < min_pos):
            min_pos, min_at = a[n], n
    negatives = tuple(n for n in range(N + 1) if a[n] < 0)
    return ParityReport(N, last_zero, min_pos, min_at, negatives, stream)

