"""Stirling numbers of the second kind, Bell (Touchard) polynomials, and the
Poisson raw-moment polynomials built from them.

Stirling numbers are built with the additive recurrence in exact integer
arithmetic; the explicit alternating-sum formula cancels catastrophically in
floating point and is avoided. Orders above MAX_ORDER are refused rather
than silently losing precision on conversion to float.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_ORDER = 20


@dataclass(frozen=True)
class StirlingTable:
    max_order: int
    values: tuple[tuple[int, ...], ...]  # values[n][i] = S(n, i), exact

    def s(self, n: int, i: int) -> int:
        if not 0 <= n <= self.max_order:
            raise ValueError(f"order {n} outside table range 0..{self.max_order}")
        if not 0 <= i <= n:
            return 0
        return self.values[n][i]


@lru_cache(maxsize=None)
def stirling_table(max_order: int = MAX_ORDER) -> StirlingTable:
    """Triangular table of S(n, i) for 0 <= i <= n <= max_order."""
    if not 0 <= max_order <= MAX_ORDER:
        raise ValueError(f"max_order must be in 0..{MAX_ORDER}, got {max_order}")
    rows: list[tuple[int, ...]] = [(1,)]
    for n in range(1, max_order + 1):
        prev = rows[n - 1]
        row = [0] * (n + 1)
        for i in range(1, n + 1):
            # S(n, i) = i * S(n-1, i) + S(n-1, i-1)
            row[i] = i * (prev[i] if i <= n - 1 else 0) + prev[i - 1]
        rows.append(tuple(row))
    return StirlingTable(max_order=max_order, values=tuple(rows))


def bell_polynomial(n: int, v: float) -> float:
    """B_n(v) = sum_i S(n, i) v^i; B_n(1) is the n-th Bell number."""
    table = stirling_table()
    if not 0 <= n <= table.max_order:
        raise ValueError(f"order {n} outside supported range 0..{table.max_order}")
    acc = 0.0
    power = 1.0
    for i in range(n + 1):
        acc += table.values[n][i] * power
        power *= v
    return acc


def p_n(n: int, lambda_bs: float) -> float:
    """n-th raw moment E[N^n] of N ~ Poisson(lambda_bs)."""
    if lambda_bs < 0:
        raise ValueError(f"lambda_bs must be >= 0, got {lambda_bs}")
    return bell_polynomial(n, lambda_bs)
