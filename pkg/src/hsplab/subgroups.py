"""Subgroups, cosets, quotients and set products.

Subgroups are stored as sorted tuples of element indices together with a
generator witness.  Subgroups of abelian groups built by
``subgroup_of_order`` additionally carry a prime-power basis so generating
pairs can be built for them without materializing anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityError,
    DomainError,
    InvalidDivisorError,
    NormalityError,
    NotASubgroupError,
    UnsupportedGroupError,
)
from .groups import ABELIAN_PRODUCT, CAYLEY, FiniteGroup

ENUMERATION_CAP = 512


@dataclass(frozen=True, eq=False)
class Subgroup:
    group: FiniteGroup
    elements: tuple[int, ...]
    generators: tuple[int, ...] = ()
    # ((element, prime-power order), ...) giving a direct-sum decomposition
    basis: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.group.order // self.order

    @cached_property
    def elementset(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.array] = True
        return m

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    @property
    def is_whole(self) -> bool:
        return len(self.elements) == self.group.order

    def __contains__(self, g) -> bool:
        return g in self.elementset

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group is other.group and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((id(self.group), self.elements))

    def __repr__(self) -> str:
        shown = self.elements if len(self.elements) <= 8 else self.elements[:8] + ("...",)
        return f"Subgroup({self.group.name}, order={self.order}, elements={shown})"

    def key(self) -> bytes:
        return self.mask.tobytes()


@dataclass(frozen=True)
class CosetPartition:
    """``rep[g]`` is the smallest index in the coset containing ``g``."""

    group: FiniteGroup
    subgroup: Subgroup
    rep: tuple[int, ...]
    representatives: tuple[int, ...]
    side: str = "left"

    @property
    def count(self) -> int:
        return len(self.representatives)

    def same_coset(self, x: int, y: int) -> bool:
        return self.rep[x] == self.rep[y]

    def cosets(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {r: [] for r in self.representatives}
        for g, r in enumerate(self.rep):
            out[r].append(g)
        return out


# ---------------------------------------------------------------------------
# closure and construction


def _closure(G: FiniteGroup, gens: Sequence[int], start: Iterable[int] = (0,), limit: int | None = None) -> list[int]:
    """Elements generated by ``gens`` together with the subgroup ``start``.

    Stops early and returns ``None`` once more than ``limit`` elements appear.
    """
    seen = set(start)
    seen.add(0)
    frontier = list(seen)
    mul = G.rows.__getitem__ if G.has_table else None
    while frontier:
        nxt = []
        for x in frontier:
            row = mul(x) if mul else None
            for s in gens:
                y = row[s] if row is not None else G.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if limit is not None and len(seen) > limit:
            return None
        frontier = nxt
    return sorted(seen)


def _check_members(G: FiniteGroup, elems: Iterable[int]) -> list[int]:
    out = []
    for g in elems:
        if isinstance(g, bool) or not isinstance(g, (int, np.integer)) or not 0 <= g < G.order:
            raise DomainError(f"{g!r} is not an element of {G.name}")
        out.append(int(g))
    return out


def generated_subgroup(G: FiniteGroup, seeds: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seeds``; the witness drops redundant seeds."""
    seeds = sorted(set(_check_members(G, seeds)))
    current = [0]
    current_set = {0}
    witness = []
    for s in seeds:
        if s in current_set:
            continue
        current = _closure(G, witness + [s], start=current)
        current_set = set(current)
        witness.append(s)
    return Subgroup(G, tuple(current), tuple(witness))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (0,), ())


def whole_group(G: FiniteGroup) -> Subgroup:
    key = "whole"
    sub = G.cache.get(key)
    if sub is None:
        sub = Subgroup(G, tuple(range(G.order)), _greedy_generators(G, range(G.order)))
        G.cache[key] = sub
    return sub


def _greedy_generators(G: FiniteGroup, elements: Iterable[int]) -> tuple[int, ...]:
    elements = sorted(elements)
    target = len(elements)
    current: set[int] = {0}
    gens: list[int] = []
    # prefer high-order elements so witnesses stay short
    by_order = sorted(elements, key=lambda g: (-G.element_order(g), g)) if target <= 4096 else elements
    for g in by_order:
        if len(current) == target:
            break
        if g not in current:
            gens.append(g)
            current = set(_closure(G, gens, start=current))
    return tuple(sorted(gens))


def is_subgroup(G: FiniteGroup, elements: Iterable[int]) -> bool:
    elems = set(_check_members(G, elements))
    if 0 not in elems:
        return False
    for a in elems:
        if G.inv(a) not in elems:
            return False
        for b in elems:
            if G.mul(a, b) not in elems:
                return False
    return True


def make_subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Wrap an explicit element set, verifying closure."""
    elems = sorted(set(_check_members(G, elements)))
    if not is_subgroup(G, elems):
        raise NotASubgroupError(f"elements {elems[:10]} do not form a subgroup of {G.name}")
    return Subgroup(G, tuple(elems), _greedy_generators(G, elems))


def as_subgroup(G: FiniteGroup, H) -> Subgroup:
    if isinstance(H, Subgroup):
        if H.group is not G:
            raise DomainError(f"subgroup belongs to {H.group.name}, not {G.name}")
        return H
    return make_subgroup(G, H)


def check_subgroup(H: Subgroup) -> None:
    """Exhaustive closure and inverse check; raises NotASubgroupError."""
    if not is_subgroup(H.group, H.elements):
        raise NotASubgroupError(f"{H!r} is not closed")


# ---------------------------------------------------------------------------
# enumeration


def enumerate_subgroups(G: FiniteGroup, cap: int = ENUMERATION_CAP) -> list[Subgroup]:
    """All subgroups sorted by (order, element tuple). Cached per group."""
    if G.order > cap:
        raise CapacityError(
            f"{G.name}: order {G.order} exceeds enumeration cap {cap}; "
            "use subgroup_of_order for abelian groups"
        )
    cached = G.cache.get("subgroups")
    if cached is not None:
        return cached
    with G.cache_lock:
        cached = G.cache.get("subgroups")
        if cached is None:
            found = _enumerate_abelian(G) if G.is_abelian else _enumerate_general(G)
            cached = sorted(found, key=lambda s: (s.order, s.elements))
            G.cache["subgroups"] = cached
    return cached


def _orders_mod(G: FiniteGroup, mask: np.ndarray, exponent: int) -> np.ndarray:
    """For every element x, the least j >= 1 with j*x in the subgroup ``mask``."""
    t = G.table
    n = G.order
    ar = np.arange(n)
    out = np.zeros(n, dtype=np.int64)
    pw = ar.copy()
    for j in range(1, exponent + 1):
        hit = mask[pw] & (out == 0)
        out[hit] = j
        if out.all():
            break
        pw = t[pw, ar]
    return out


def _exponent(G: FiniteGroup) -> int:
    e = G.cache.get("exponent")
    if e is None:
        e = math.lcm(*element_orders(G))
        G.cache["exponent"] = e
    return e


def element_orders(G: FiniteGroup) -> list[int]:
    orders = G.cache.get("element_orders")
    if orders is None:
        if G.has_table:
            t = G.table
            n = G.order
            ar = np.arange(n)
            out = np.zeros(n, dtype=np.int64)
            pw = ar.copy()
            j = 1
            while not out.all():
                out[(pw == 0) & (out == 0)] = j
                pw = t[pw, ar]
                j += 1
            orders = out.tolist()
        else:
            orders = G.element_orders()
        G.cache["element_orders"] = orders
    return orders


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def _enumerate_abelian(G: FiniteGroup) -> list[Subgroup]:
    # Every subgroup is reached from the trivial one by steps of prime index.
    t = G.table
    exponent = _exponent(G)
    triv = trivial_subgroup(G)
    seen: dict[bytes, Subgroup] = {triv.key(): triv}
    frontier = [triv]
    while frontier:
        nxt = []
        for S in frontier:
            orders = _orders_mod(G, S.mask, exponent)
            covered = S.mask.copy()
            for r in np.nonzero(~covered)[0].tolist():
                if covered[r] or not _is_prime(int(orders[r])):
                    continue
                p = int(orders[r])
                mults = [0]
                for _ in range(p - 1):
                    mults.append(int(t[mults[-1], r]))
                elems = t[np.array(mults)][:, S.array].ravel()
                mask = np.zeros(G.order, dtype=bool)
                mask[elems] = True
                covered |= mask
                key = mask.tobytes()
                if key not in seen:
                    sub = Subgroup(G, tuple(np.nonzero(mask)[0].tolist()), S.generators + (r,))
                    seen[key] = sub
                    nxt.append(sub)
        frontier = nxt
    return list(seen.values())


def _smallest_prime_factor(n: int) -> int:
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            return p
    return n


def _enumerate_general(G: FiniteGroup) -> list[Subgroup]:
    n = G.order
    whole = whole_group(G)
    # a subgroup larger than n/p for the least prime p dividing n is G itself
    proper_limit = n // _smallest_prime_factor(n) if n > 1 else 1
    seen: dict[tuple[int, ...], Subgroup] = {}
    cyclic_gens: list[int] = []
    for x in range(n):
        elems = tuple(_closure(G, [x]))
        if elems not in seen:
            seen[elems] = Subgroup(G, elems, (x,) if x else ())
            cyclic_gens.append(x)
    seen.setdefault(whole.elements, whole)
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for S in frontier:
            members = S.elementset
            for x in cyclic_gens:
                if x in members:
                    continue
                elems = _closure(G, list(S.generators) + [x], start=S.elements, limit=proper_limit)
                key = whole.elements if elems is None else tuple(elems)
                if key not in seen:
                    sub = Subgroup(G, key, S.generators + (x,))
                    seen[key] = sub
                    nxt.append(sub)
        frontier = nxt
    return list(seen.values())


# ---------------------------------------------------------------------------
# abelian structure


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def prime_power_split(x: int, order: int, G: FiniteGroup) -> list[tuple[int, int]]:
    """Split a cyclic factor ``<x>`` of the given order into prime-power factors."""
    out = []
    for p, k in _factorize(order):
        q = p**k
        out.append((G.power(x, order // q), q))
    return out


def abelian_basis(G: FiniteGroup) -> tuple[tuple[int, int], ...]:
    """Prime-power basis ``((g_1, q_1), ...)`` with ``G = <g_1> (+) ... (+) <g_r>``.

    Factors are sorted by (prime, order, element).  For abelian-product
    groups the basis is read off the moduli; otherwise it is recovered by
    repeatedly splitting off a cyclic factor of maximal order and lifting the
    basis of the quotient.
    """
    cached = G.cache.get("abelian_basis")
    if cached is not None:
        return cached
    if not G.is_abelian:
        raise UnsupportedGroupError(f"{G.name} is not abelian")
    if G.order == 1:
        basis: list[tuple[int, int]] = []
    elif G.kind == ABELIAN_PRODUCT:
        basis = []
        for w, m in zip(G._weights, G.moduli):
            for p, k in _factorize(m):
                q = p**k
                # CRT idempotent, so a cyclic factor maps onto itself identically
                e = (m // q) * pow(m // q, -1, q) % m
                basis.append((e * w, q))
    else:
        basis = []
        for y, e in _cyclic_decomposition(G):
            basis.extend(prime_power_split(y, e, G))
    basis.sort(key=lambda be: (_factorize(be[1])[0][0], be[1], be[0]))
    basis = tuple(basis)
    _verify_basis(G, basis)
    G.cache["abelian_basis"] = basis
    return basis


def _cyclic_decomposition(G: FiniteGroup) -> list[tuple[int, int]]:
    t = G.table
    n = G.order
    exponent = _exponent(G)
    levels = []
    K = np.zeros(n, dtype=bool)
    K[0] = True
    while not K.all():
        orders = _orders_mod(G, K, exponent)
        x = int(np.argmax(orders))  # first index of maximal order mod K
        N = int(orders[x])
        levels.append((x, N, K.copy()))
        mults = [0]
        for _ in range(N - 1):
            mults.append(int(t[mults[-1], x]))
        K = np.zeros(n, dtype=bool)
        K[t[np.array(mults)][:, np.nonzero(levels[-1][2])[0]].ravel()] = True
    basis: list[tuple[int, int]] = []
    for x, N, Kmask in reversed(levels):
        lifted = [(x, N)]
        xm = [0]
        for _ in range(N - 1):
            xm.append(int(t[xm[-1], x]))
        for y, e in basis:
            ey = G.power(y, e)
            # e*y = c*x modulo K; c is a multiple of e since x has maximal order
            c = next(c for c in range(N) if Kmask[t[ey, G.inv(xm[c])]])
            assert c % e == 0
            lifted.append((G.mul(y, G.inv(xm[c // e])), e))
        basis = lifted
    return basis


def _verify_basis(G: FiniteGroup, basis) -> None:
    if math.prod(q for _, q in basis) != G.order:
        raise AssertionError(f"basis orders {basis} do not multiply to {G.order}")
    if G.order <= 4096 and len(embed_all(G, basis)) != G.order:
        raise AssertionError(f"basis {basis} is not independent in {G.name}")


def basis_multiples(G: FiniteGroup, basis) -> list[list[int]]:
    out = []
    for g, q in basis:
        m = [0]
        for _ in range(q - 1):
            m.append(G.mul(m[-1], g))
        out.append(m)
    return out


def embed(G: FiniteGroup, multiples: list[list[int]], coords: Sequence[int]) -> int:
    """``sum_i coords[i] * g_i`` given the multiples table of a basis."""
    x = 0
    for m, c in zip(multiples, coords):
        x = G.mul(x, m[c % len(m)])
    return x


def embed_all(G: FiniteGroup, basis) -> set[int]:
    elems = np.zeros(1, dtype=np.int64)
    t = G.table if G.has_table else None
    for m in basis_multiples(G, basis):
        if t is not None:
            elems = t[np.ix_(elems, np.array(m))].ravel()
        else:
            elems = np.array([G.mul(int(a), b) for a in elems for b in m])
    return set(elems.tolist())


def subgroup_of_order(G: FiniteGroup, d: int) -> Subgroup:
    """A subgroup of order ``d`` of the abelian group ``G``, built from its basis.

    For each prime ``p`` the ``p``-part of ``d`` is taken greedily from the
    basis factors in ascending order, using ``p**(k-b) * g`` (order ``p**b``)
    from a factor ``<g>`` of order ``p**k``.
    """
    if not G.is_abelian:
        raise UnsupportedGroupError(f"{G.name} is not abelian; use enumerate_subgroups")
    if d < 1 or G.order % d:
        raise InvalidDivisorError(f"{d} does not divide {G.order}")
    key = ("subgroup_of_order", d)
    cached = G.cache.get(key)
    if cached is not None:
        return cached
    need = dict(_factorize(d))
    sub_basis = []
    for g, q in abelian_basis(G):
        p, k = _factorize(q)[0]
        b = min(k, need.get(p, 0))
        if b:
            need[p] -= b
            sub_basis.append((G.power(g, p ** (k - b)), p**b))
    elems = tuple(sorted(embed_all(G, sub_basis)))
    sub = Subgroup(G, elems, tuple(sorted(g for g, _ in sub_basis)), basis=tuple(sub_basis))
    G.cache[key] = sub
    return sub


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# cosets and quotients


def left_cosets(G: FiniteGroup, H) -> CosetPartition:
    """Partition into left cosets ``gH`` with minimum-index representatives."""
    return _cosets(G, as_subgroup(G, H), "left")


def right_cosets(G: FiniteGroup, H) -> CosetPartition:
    return _cosets(G, as_subgroup(G, H), "right")


def _cosets(G: FiniteGroup, H: Subgroup, side: str) -> CosetPartition:
    if G.has_table:
        t = G.table
        if side == "left":
            rep = t[:, H.array].min(axis=1)
        else:
            rep = t[H.array, :].min(axis=0)
        rep = rep.tolist()
    else:
        rep = [
            min(G.mul(g, h) if side == "left" else G.mul(h, g) for h in H.elements) for g in range(G.order)
        ]
    reps = tuple(sorted(set(rep)))
    if len(reps) * H.order != G.order:
        raise NotASubgroupError(f"{H!r} does not partition {G.name} into cosets")
    return CosetPartition(G, H, tuple(rep), reps, side)


def coset_representatives(G: FiniteGroup, H, side: str = "left") -> tuple[int, ...]:
    return _cosets(G, as_subgroup(G, H), side).representatives


def is_normal(G: FiniteGroup, H) -> bool:
    try:
        check_normal(G, as_subgroup(G, H))
    except NormalityError:
        return False
    return True


def check_normal(G: FiniteGroup, H: Subgroup) -> None:
    if G.is_abelian or H.is_trivial or H.is_whole:
        return
    gens = H.generators or H.elements
    inv = G.inverses
    mask = H.mask
    for h in gens:
        if G.has_table:
            t = G.table
            g_all = np.arange(G.order)
            conj = t[t[g_all, h], inv]
            bad = np.nonzero(~mask[conj])[0]
            if len(bad):
                raise NormalityError(int(bad[0]), h)
        else:
            for g in range(G.order):
                if G.mul(G.mul(g, h), G.inv(g)) not in H:
                    raise NormalityError(g, h)


def quotient_group(G: FiniteGroup, H) -> tuple[FiniteGroup, tuple[int, ...]]:
    """``G/H`` on canonical coset representatives, plus the projection map.

    Quotient element ``i`` is the coset whose minimum representative is the
    ``i``-th smallest; ``Q.labels[i]`` holds that representative.
    """
    H = as_subgroup(G, H)
    check_normal(G, H)
    if H.is_trivial:
        return G, tuple(range(G.order))
    part = left_cosets(G, H)
    reps = np.array(part.representatives, dtype=np.int64)
    index_of = np.full(G.order, -1, dtype=np.int64)
    index_of[reps] = np.arange(len(reps))
    proj = index_of[np.array(part.rep)]
    if G.has_table:
        table = proj[G.table[np.ix_(reps, reps)]]
    else:
        table = np.array([[proj[G.mul(int(a), int(b))] for b in reps] for a in reps])
    Q = FiniteGroup(CAYLEY, len(reps), f"{G.name}/<{','.join(map(str, H.generators))}>",
                    table=table.astype(np.int32), labels=reps.tolist())
    Q._is_abelian = True if G.is_abelian else None
    return Q, tuple(proj.tolist())


# ---------------------------------------------------------------------------
# set operations


def set_product(G: FiniteGroup, S1: Iterable[int], S2: Iterable[int]) -> frozenset[int]:
    """``{x y : x in S1, y in S2}``."""
    a = np.array(sorted(set(S1)), dtype=np.int64)
    b = np.array(sorted(set(S2)), dtype=np.int64)
    if len(a) == 0 or len(b) == 0:
        return frozenset()
    if G.has_table:
        return frozenset(np.unique(G.table[np.ix_(a, b)]).tolist())
    return frozenset(G.mul(int(x), int(y)) for x in a for y in b)


def intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    if H.group is not K.group:
        raise DomainError("subgroups of different groups")
    elems = tuple(sorted(H.elementset & K.elementset))
    return Subgroup(H.group, elems, _greedy_generators(H.group, elems))


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    if H.group is not K.group:
        raise DomainError("subgroups of different groups")
    return generated_subgroup(H.group, H.generators + K.generators)


def subgroup_as_group(G: FiniteGroup, H: Subgroup) -> FiniteGroup:
    """``H`` as a standalone Cayley group; element ``i`` is ``H.elements[i]``."""
    key = ("as_group", H.key())
    sub = G.cache.get(key)
    if sub is None:
        pos = {g: i for i, g in enumerate(H.elements)}
        arr = H.array
        if G.has_table:
            table = np.vectorize(pos.__getitem__, otypes=[np.int32])(G.table[np.ix_(arr, arr)])
        else:
            table = np.array([[pos[G.mul(a, b)] for b in H.elements] for a in H.elements], dtype=np.int32)
        sub = FiniteGroup(CAYLEY, H.order, f"{G.name}[{H.order}]", table=table, labels=list(H.elements))
        if G.is_abelian:
            sub._is_abelian = True
        G.cache[key] = sub
    return sub
