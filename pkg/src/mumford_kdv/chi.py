"""Coefficients of the odd exponential series.

``exp(sum_i a_i t^(2i-1)) = sum_n chi_n t^n``, truncated to ``a_1..a_g``.
Differentiating in ``t`` gives the recurrence

    n chi_n = sum_{i=1}^{min(g, ceil(n/2))} (2i-1) a_i chi_{n-2i+1},

which is what :func:`chi` evaluates.  Tables are memoized per genus and only
ever grow.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .exact import MPoly, a_vars

_tables: dict[int, list] = {}
_lock = threading.Lock()


@dataclass(frozen=True)
class ChiTable:
    genus: int
    entries: tuple

    def __getitem__(self, n: int) -> MPoly:
        if n < 0:
            return MPoly.const(0, a_vars(self.genus))
        return self.entries[n]

    def __len__(self):
        return len(self.entries)

    def series(self, n_terms: int) -> list:
        """Coefficients chi_0..chi_{n_terms-1}."""
        return [self[n] for n in range(n_terms)]


def _extend(g: int, N: int) -> list:
    vars = a_vars(g)
    with _lock:
        table = _tables.setdefault(g, [MPoly.const(1, vars)])
        a = [MPoly.var(v, vars) for v in vars]
        while len(table) <= N:
            n = len(table)
            acc = MPoly.const(0, vars)
            for i in range(1, min(g, (n + 1) // 2) + 1):
                acc = acc + (a[i - 1] * table[n - 2 * i + 1]).scale(2 * i - 1)
            table.append(acc.scale(Fraction(1, n)))
        return table


def chi(n: int, g: int) -> MPoly:
    """chi_n as a polynomial in ``a1..ag``; zero for negative ``n``."""
    if g < 1:
        raise ValueError("genus must be positive")
    if n < 0:
        return MPoly.const(0, a_vars(g))
    return _extend(g, n)[n]


def chi_table(N: int, g: int) -> ChiTable:
    """chi_0..chi_N for genus ``g``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if g < 1:
        raise ValueError("genus must be positive")
    return ChiTable(g, tuple(_extend(g, N)[:N + 1]))


def truncated_exponential(g: int) -> list:
    """Coefficients of f_g(t) = sum_{n=0}^{2g-1} chi_n t^n."""
    return chi_table(2 * g - 1, g).series(2 * g)
