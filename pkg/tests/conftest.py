"""Shared brute-force references.

These helpers avoid the package's own closure, coset and enumeration code so
that tests compare two independent computations.
"""

from __future__ import annotations

import itertools

import pytest

ACCEPTANCE_LINES: list[str] = []


def brute_mul(G):
    """Multiplication as a function, recomputed from digits or permutations."""
    if G.moduli:
        def mul(a, b):
            da, db = G.digits(a), G.digits(b)
            return G.encode([(x + y) % m for x, y, m in zip(da, db, G.moduli)])
        return mul
    if G.degree:
        def mul(a, b):
            pa, pb = G.perm(a), G.perm(b)
            return G.index_of_perm(tuple(pa[pb[i]] for i in range(len(pb))))
        return mul
    table = G.table
    return lambda a, b: int(table[a, b])


def brute_subgroups(G) -> set[frozenset]:
    """Every subset closed under multiplication (n <= 12)."""
    n = G.order
    assert n <= 12
    mul = brute_mul(G)
    prod = [[mul(a, b) for b in range(n)] for a in range(n)]
    found = set()
    others = list(range(1, n))
    for r in range(n):
        for combo in itertools.combinations(others, r):
            S = (0,) + combo
            Sset = set(S)
            if all(prod[a][b] in Sset for a in S for b in S):
                found.add(frozenset(S))
    return found


def brute_closure(G, gens) -> frozenset:
    mul = brute_mul(G)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def brute_left_cosets(G, H) -> set[frozenset]:
    mul = brute_mul(G)
    return {frozenset(mul(g, h) for h in H) for g in range(G.order)}


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
