"""Closed-form query bounds used for assertions.

``m`` is the order of the hidden subgroup; the algorithms never see it, so
these are evaluated by the harness.
"""

from __future__ import annotations

import math

from .groups import FiniteGroup
from .subgroups import enumerate_subgroups

ABELIAN_CONSTANT = 12 * (1 + math.sqrt(2))


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def simon_queries(k: int) -> int:
    return 2 ** (k // 2) + 2 ** (k - k // 2)


def detect_abelian_bound(n: int) -> float:
    return 4 * math.sqrt(n)


def detect_general_bound(n: int) -> float:
    return 2 * math.ceil(math.sqrt(n * math.log(n))) if n > 1 else 2.0


def find_collision_abelian_bound(n: int, m: int) -> float:
    return ABELIAN_CONSTANT * math.sqrt(n / max(m, 2))


def find_collision_general_bound(n: int, m: int, kappa: float) -> float:
    """Non-abelian bound with ``kappa``; for ``m = 1`` pass the ``m = 2`` kappa."""
    if m == 1:
        return find_collision_general_bound(n, 2, kappa) + detect_general_bound(n)
    x = kappa * n / m
    return 6 + 3 * math.log2(x) + 3 * (2 + math.sqrt(2)) * math.sqrt(2 * x * math.log(2 * x))


def find_abelian_subgroup_bound(n: int, m: int) -> float:
    return (ceil_log2(m) + 1) * ABELIAN_CONSTANT * math.sqrt(n / m)


def find_subgroup_bound(n: int, m: int, abelian: bool, kappa: float = 1.0) -> float:
    """Per-call bound times the number of calls (at most ceil(log2 m) + 1)."""
    calls = ceil_log2(m) + 1
    if abelian:
        return calls * find_collision_abelian_bound(n, m)
    return calls * find_collision_general_bound(n, m, kappa)


def kappa(G: FiniteGroup, m: int) -> float:
    """Smallest ``n1 / (n/m)`` over subgroup orders ``n1 >= n/m``.

    Abelian groups have a subgroup of every order dividing ``n``, so the
    answer is 1 there. ``m = 1`` is evaluated at ``m = 2``, matching the
    convention in :func:`find_collision_general_bound`.
    """
    n = G.order
    m = max(m, 2)
    if G.is_abelian or n % m:
        return 1.0
    orders = {H.order for H in enumerate_subgroups(G)}
    n1 = min(o for o in orders if o * m >= n)
    return n1 * m / n
