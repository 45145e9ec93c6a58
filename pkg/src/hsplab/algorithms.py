"""Deterministic hidden subgroup algorithms plus a randomized baseline.

Every algorithm talks to its oracle through ``query`` only.  The iteration
plans of Find-Collision and Find-New-Collision do not depend on the oracle,
so they are cached on the group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import bounds
from .errors import InstanceError, UnsupportedGroupError
from .genpair import GeneratingPair, abelian_pair, best_pair
from .groups import ABELIAN_PRODUCT, FiniteGroup
from .oracle import QuotientOracle, cached_quotient
from .subgroups import (
    Subgroup,
    as_subgroup,
    enumerate_subgroups,
    generated_subgroup,
    set_product,
    subgroup_of_order,
    trivial_subgroup,
)

INJECTIVE = "injective"
COLLISION = "collision"
GENERATORS = "generators"
NO_NEW_COLLISION = "no-new-collision"
INCONCLUSIVE = "inconclusive"


@dataclass
class AlgorithmReport:
    algorithm: str
    group: str
    outcome: str
    queries: int
    bound: float | None = None
    collision: tuple[int, int] | None = None
    generators: tuple[int, ...] | None = None
    trace: list[dict] = field(default_factory=list)
    seed: int | None = None
    params: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        """Number of trace records that produced a collision."""
        return sum(1 for t in self.trace if t.get("collision"))

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "group": self.group,
            "outcome": self.outcome,
            "collision": list(self.collision) if self.collision else None,
            "generators": list(self.generators) if self.generators is not None else None,
            "queries": self.queries,
            "bound": self.bound,
            "seed": self.seed,
            "params": self.params,
            "flags": list(self.flags),
            "trace": self.trace,
        }


def _first_collision(G: FiniteGroup, R: Sequence[int], labels: dict[int, int], avoid: Subgroup | None = None):
    """First sorted pair ``(z, y)``, ``z < y``, with equal labels.

    With ``avoid``, pairs where ``z^-1 y`` lies in that subgroup are skipped.
    """
    mask = avoid.mask if avoid is not None and not avoid.is_trivial else None
    by_label: dict[int, list[int]] = {}
    for z in sorted(R):
        by_label.setdefault(labels[z], []).append(z)
    best = None
    for members in by_label.values():
        if len(members) < 2:
            continue
        for i, z in enumerate(members):
            zi = G.inv(z)
            for y in members[i + 1:]:
                if mask is not None and mask[G.mul(zi, y)]:
                    continue
                if best is None or (z, y) < best:
                    best = (z, y)
                break
    return best


def _query_all(oracle, elems: Iterable[int]) -> dict[int, int]:
    return {z: oracle.query(z) for z in elems}


# ---------------------------------------------------------------------------
# Simon


def simon_solve(k: int, oracle) -> AlgorithmReport:
    """Split ``Z2^k`` as ``Z2^l x Z2^(k-l)`` and query both axes.

    The zero element is queried on both axes, so exactly
    ``2^floor(k/2) + 2^ceil(k/2)`` queries are made.
    """
    G = oracle.group
    if k < 1 or G.kind != ABELIAN_PRODUCT or G.moduli != (2,) * k:
        raise InstanceError(f"simon_solve needs Z2^{k}, got {G.name}")
    l = k // 2
    start = oracle.count
    seen: dict[int, int] = {}
    hit = None
    for x in [u << (k - l) for u in range(2**l)] + list(range(2 ** (k - l))):
        lab = oracle.query(x)
        other = seen.setdefault(lab, x)
        if other != x and hit is None:
            hit = (min(other, x), max(other, x))
    rep = AlgorithmReport("simon", G.name, INJECTIVE, oracle.count - start,
                          bound=float(bounds.simon_queries(k)), params={"k": k, "l": l})
    if hit is not None:
        rep.outcome = GENERATORS
        rep.collision = hit
        rep.generators = (hit[0] ^ hit[1],)
    return rep


# ---------------------------------------------------------------------------
# detection with one generating pair


def _detect(G: FiniteGroup, oracle, pair: GeneratingPair, name: str, bound: float) -> AlgorithmReport:
    start = oracle.count
    inv_s1 = [G.inv(x) for x in pair.s1]
    R = sorted(set(inv_s1) | set(pair.s2))
    labels = _query_all(oracle, R)
    rep = AlgorithmReport(name, G.name, INJECTIVE, 0, bound=bound, seed=pair.seed,
                          params={"pair": pair.provenance, "pair_sizes": list(pair.sizes)})
    coll = _first_collision(G, R, labels)
    if coll is not None:
        found = {G.mul(x, y) for x, xi in zip(pair.s1, inv_s1) for y in pair.s2 if labels[xi] == labels[y]}
        rep.outcome = GENERATORS
        rep.collision = coll
        rep.generators = tuple(sorted(found))
    rep.queries = oracle.count - start
    return rep


def detect_abelian(G: FiniteGroup, oracle) -> AlgorithmReport:
    """Query ``-S1`` and ``S2`` of the abelian pair; output every ``x + y`` with
    ``f(-x) = f(y)``, which is all of ``H``."""
    if not G.is_abelian:
        raise UnsupportedGroupError(f"{G.name} is not abelian; use detect_general")
    if G.order == 1:
        return AlgorithmReport("detect-abelian", G.name, INJECTIVE, 0, bound=bounds.detect_abelian_bound(1))
    return _detect(G, oracle, abelian_pair(G), "detect-abelian", bounds.detect_abelian_bound(G.order))


def detect_general(G: FiniteGroup, oracle, seed: int = 0) -> AlgorithmReport:
    if G.order == 1:
        return AlgorithmReport("detect-general", G.name, INJECTIVE, 0, bound=bounds.detect_general_bound(1))
    return _detect(G, oracle, best_pair(G, seed=seed), "detect-general", bounds.detect_general_bound(G.order))


# ---------------------------------------------------------------------------
# Find-Collision / Find-New-Collision


@dataclass(frozen=True)
class _Step:
    k: int
    window: tuple[float, float]
    sub: Subgroup | None
    pair: GeneratingPair | None = None
    g: int = 0
    base: tuple[int, ...] = ()  # S1^-1 u S2
    R: tuple[int, ...] = ()

    def record(self) -> dict:
        rec = {"k": self.k, "window": [self.window[0], self.window[1]]}
        if self.sub is None:
            rec["g1_order"] = None
            return rec
        rec.update(g1_order=self.sub.order, pair=self.pair.provenance,
                   pair_sizes=list(self.pair.sizes), g=self.g, queried=len(self.R))
        return rec


def _top_k(n: int) -> int:
    # the l with n in (2^l, 2^(l+1)]
    return (n - 1).bit_length() - 1


def _in_window(d: int, n: int, k: int) -> bool:
    lo_ok = d * 2 ** (k + 1) >= n if k >= -1 else True
    floor_pow = 2**k if k >= 0 else 0
    return lo_ok and d * (floor_pow + 1) <= n


def _window(n: int, k: int) -> tuple[float, float]:
    return (n / 2 ** (k + 1), n / ((2**k if k >= 0 else 0) + 1))


def _pick_subgroup(G: FiniteGroup, k: int, avoid: Subgroup | None) -> Subgroup | None:
    n = G.order
    if G.is_abelian and (avoid is None or avoid.is_trivial):
        for d in sorted((d for d in range(1, n + 1) if n % d == 0), reverse=True):
            if _in_window(d, n, k):
                return subgroup_of_order(G, d)
        return None
    best = None
    amask = avoid.mask if avoid is not None and not avoid.is_trivial else None
    for H in enumerate_subgroups(G):
        if not _in_window(H.order, n, k):
            continue
        if amask is not None and int(amask[H.array].sum()) != 1:
            continue
        # list is sorted by (order, elements): keep the first of the largest order
        if best is None or H.order > best.order:
            best = H
    return best


def _plan(G: FiniteGroup, k0: int, seed: int, H1: Subgroup | None) -> list[_Step]:
    n = G.order
    steps = []
    for k in range(_top_k(n), k0 - 1, -1):
        sub = _pick_subgroup(G, k, H1)
        if sub is None:
            steps.append(_Step(k, _window(n, k), None))
            continue
        pair = best_pair(G, within=sub, seed=seed)
        if H1 is None or H1.is_trivial:
            cover = sub.elementset
        else:
            cover = set_product(G, sub.elements, H1.elements)
        g = 0 if len(cover) == n else next(x for x in range(n) if x not in cover)
        inv_s1 = [G.inv(x) for x in pair.s1]
        base = set(inv_s1) | set(pair.s2)
        R = base | {G.mul(x, g) for x in inv_s1}
        steps.append(_Step(k, _window(n, k), sub, pair, g, tuple(sorted(base)), tuple(sorted(R))))
    return steps


def _cached_plan(G: FiniteGroup, k0: int, seed: int, H1: Subgroup | None) -> list[_Step]:
    if H1 is not None and H1.is_trivial:
        H1 = None
    key = ("plan", k0, None if G.is_abelian else seed, None if H1 is None else H1.key())
    with G.cache_lock:
        plan = G.cache.get(key)
        if plan is None:
            plan = _plan(G, k0, seed, H1)
            G.cache[key] = plan
    return plan


def _run_plan(G, oracle, plan, rep: AlgorithmReport, avoid: Subgroup | None) -> tuple[int, int] | None:
    for step in plan:
        rec = step.record()
        rep.trace.append(rec)
        if step.sub is None:
            continue
        labels = _query_all(oracle, step.R)
        coll = _first_collision(G, step.R, labels, avoid)
        rec["collision"] = list(coll) if coll else None
        if coll:
            inside = coll[0] in step.base and coll[1] in step.base
            rec["via"] = "pair" if inside else "shifted"
            return coll
    return None


def find_collision(G: FiniteGroup, oracle, seed: int = 0) -> AlgorithmReport:
    """Shrinking-window search for one collision.

    For ``k`` from the top down to ``k0`` (0 for abelian groups, -1 otherwise)
    take the largest subgroup ``G1`` with order in
    ``[n/2^(k+1), n/(floor(2^k)+1)]``, a generating pair ``S1, S2`` of it and
    ``g`` outside ``G1`` (or ``e``), then query ``S1^-1 u S2 u S1^-1 g``.
    """
    n = G.order
    k0 = 0 if G.is_abelian else -1
    rep = AlgorithmReport("find-collision", G.name, INJECTIVE, 0,
                          seed=None if G.is_abelian else seed,
                          params={"k_top": _top_k(n) if n > 1 else None, "k0": k0})
    if n == 1:
        return rep
    start = oracle.count
    coll = _run_plan(G, oracle, _cached_plan(G, k0, seed, None), rep, None)
    if coll:
        rep.outcome = COLLISION
        rep.collision = coll
        rep.params["l"] = rep.trace[-1]["k"]
    rep.queries = oracle.count - start
    return rep


def find_new_collision(G: FiniteGroup, H1, oracle, seed: int = 0) -> AlgorithmReport:
    """Like :func:`find_collision`, restricted to ``G1`` meeting ``H1`` trivially,
    accepting only collisions ``z, y`` with ``z^-1 y`` outside ``H1``."""
    H1 = as_subgroup(G, H1)
    n = G.order
    m1 = max(2, H1.order) if G.is_abelian else H1.order
    k0 = bounds.ceil_log2(m1) - 1
    rep = AlgorithmReport("find-new-collision", G.name, NO_NEW_COLLISION, 0,
                          seed=None if G.is_abelian else seed,
                          params={"k_top": _top_k(n) if n > 1 else None, "k0": k0, "h1_order": H1.order})
    if n == 1:
        return rep
    start = oracle.count
    coll = _run_plan(G, oracle, _cached_plan(G, k0, seed, H1), rep, H1)
    if coll:
        rep.outcome = COLLISION
        rep.collision = coll
        rep.params["l"] = rep.trace[-1]["k"]
    rep.queries = oracle.count - start
    return rep


# ---------------------------------------------------------------------------
# finding the whole subgroup


def find_abelian_subgroup(G: FiniteGroup, oracle, seed: int = 0) -> AlgorithmReport:
    """Grow ``S`` one collision at a time, running Find-Collision on ``G/<S>``."""
    if not G.is_abelian:
        raise UnsupportedGroupError(f"{G.name} is not abelian; use find_subgroup")
    start = oracle.count
    rep = AlgorithmReport("find-abelian-subgroup", G.name, INJECTIVE, 0)
    S: list[int] = []
    H1 = trivial_subgroup(G)
    while True:
        if H1.order == G.order:
            rep.trace.append({"h1_order": H1.order, "quotient_order": 1, "queries": 0, "collision": None})
            break
        Q, _ = cached_quotient(G, H1)
        qo = QuotientOracle(oracle, H1, check=False)
        inner = find_collision(Q, qo, seed=seed)
        rec = {"h1_order": H1.order, "quotient_order": Q.order, "queries": inner.queries,
               "collision": None, "inner": inner.trace}
        rep.trace.append(rec)
        if inner.outcome != COLLISION:
            break
        g1, g2 = (qo.representative(q) for q in inner.collision)
        rec["collision"] = [g1, g2]
        S.append(G.mul(G.inv(g1), g2))
        H1 = generated_subgroup(G, S)
    if S:
        rep.outcome = GENERATORS
        rep.generators = tuple(S)
    rep.queries = oracle.count - start
    return rep


def find_subgroup(G: FiniteGroup, oracle, seed: int = 0) -> AlgorithmReport:
    """Repeat Find-New-Collision with ``H1 = <S>`` until no new collision."""
    start = oracle.count
    rep = AlgorithmReport("find-subgroup", G.name, INJECTIVE, 0, seed=None if G.is_abelian else seed)
    S: list[int] = []
    H1 = trivial_subgroup(G)
    while True:
        inner = find_new_collision(G, H1, oracle, seed=seed)
        rec = {"h1_order": H1.order, "queries": inner.queries, "collision": None, "inner": inner.trace}
        rep.trace.append(rec)
        if inner.outcome != COLLISION:
            break
        a, b = inner.collision
        rec["collision"] = [a, b]
        S.append(G.mul(G.inv(a), b))
        H1 = generated_subgroup(G, S)
    if S:
        rep.outcome = GENERATORS
        rep.generators = tuple(S)
    rep.queries = oracle.count - start
    return rep


# ---------------------------------------------------------------------------
# randomized comparison


def randomized_baseline(G: FiniteGroup, oracle, seed: int = 0, budget: int | None = None) -> AlgorithmReport:
    """Uniform sampling with replacement until two distinct samples collide."""
    n = G.order
    if budget is None:
        budget = math.ceil(2 * math.sqrt(n))
    start = oracle.count
    rep = AlgorithmReport("randomized-baseline", G.name, INCONCLUSIVE, 0, bound=float(budget), seed=seed,
                          params={"budget": budget})
    seen: dict[int, int] = {}
    for x in np.random.default_rng(seed).integers(0, n, size=budget).tolist():
        lab = oracle.query(x)
        other = seen.setdefault(lab, x)
        if other != x:
            rep.outcome = COLLISION
            rep.collision = (min(other, x), max(other, x))
            break
    rep.queries = oracle.count - start
    return rep

