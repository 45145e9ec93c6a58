"""Generating pairs: subsets ``S1, S2`` of a group with ``S1 S2 = G``.

Constructions:

* ``cyclic_pair``: division-algorithm pair for ``Z_n`` (sizes ``ceil(sqrt n)``
  and at most ``n // ceil(sqrt n) + 1``).
* ``odd_prime_power_pair``: exact ``sqrt(|G|)`` pair for ``Z_{p^k} x Z_{p^l}``,
  ``k, l`` odd.
* ``product_pair``: componentwise pair over a direct product.
* ``abelian_pair``: recursion over the prime-power decomposition, sizes at
  most ``2 sqrt n``.
* ``random_pair``: Las Vegas pair with sizes ``ceil(sqrt(n ln n))``.
* ``coset_pair``: a subgroup together with right coset representatives.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapacityError, InvalidSpecError, UnluckySeedError, UnsupportedGroupError
from .groups import FiniteGroup, direct_product, make_abelian_product
from .subgroups import (
    ENUMERATION_CAP,
    Subgroup,
    _factorize,
    abelian_basis,
    as_subgroup,
    basis_multiples,
    coset_representatives,
    embed,
    enumerate_subgroups,
    set_product,
    subgroup_as_group,
)

PROVENANCES = (
    "trivial",
    "cyclic",
    "odd-prime-power",
    "product",
    "abelian-recursive",
    "randomized",
    "coset",
    "exhaustive-minimal",
)
DEFAULT_RETRY_CAP = 64
EXHAUSTIVE_CAP = 24


@dataclass(frozen=True)
class GeneratingPair:
    """``S1 S2`` equals ``subgroup`` (or the whole group when it is None).

    ``bound`` is the size bound the construction guarantees for both sets.
    """

    group: FiniteGroup
    s1: tuple[int, ...]
    s2: tuple[int, ...]
    provenance: str
    bound: float
    subgroup: Subgroup | None = field(default=None, compare=False)
    seed: int | None = None
    attempts: int | None = None

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.s1), len(self.s2)

    @property
    def max_size(self) -> int:
        return max(self.sizes)

    @property
    def target_order(self) -> int:
        return self.group.order if self.subgroup is None else self.subgroup.order

    def verify(self) -> bool:
        target = None if self.subgroup is None else self.subgroup.elements
        return verify_pair(self.group, self.s1, self.s2, target)

    def to_dict(self) -> dict:
        out = {
            "group": self.group.name,
            "s1": list(self.s1),
            "s2": list(self.s2),
            "provenance": self.provenance,
            "bound": self.bound,
        }
        if self.seed is not None:
            out["seed"] = self.seed
            out["attempts"] = self.attempts
        return out


def _pair(G, s1, s2, provenance, bound, **kw) -> GeneratingPair:
    return GeneratingPair(G, tuple(sorted(set(s1))), tuple(sorted(set(s2))), provenance, bound, **kw)


def verify_pair(G: FiniteGroup, S1: Sequence[int], S2: Sequence[int], target: Sequence[int] | None = None) -> bool:
    """True iff ``S1 S2`` equals ``target`` (default: all of ``G``)."""
    prod = set_product(G, S1, S2)
    if target is None:
        return len(prod) == G.order
    return prod == frozenset(target)


# ---------------------------------------------------------------------------
# explicit constructions


def cyclic_pair(n: int, group: FiniteGroup | None = None) -> GeneratingPair:
    if n < 2:
        raise InvalidSpecError(f"cyclic pair needs n >= 2, got {n}")
    G = group if group is not None else make_abelian_product([n])
    m = math.isqrt(n - 1) + 1  # ceil(sqrt(n))
    s1 = range(m)
    s2 = range(0, n, m)
    return _pair(G, s1, s2, "cyclic", float(m))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def odd_prime_power_pair(p: int, k: int, l: int) -> GeneratingPair:
    """Pair for ``Z_{p^k} x Z_{p^l}`` with both sizes ``p^((k+l)/2)``."""
    if not _is_prime(p):
        raise InvalidSpecError(f"{p} is not prime")
    if k < 1 or l < 1 or k % 2 == 0 or l % 2 == 0:
        raise InvalidSpecError(f"exponents must be positive and odd, got {k}, {l}")
    G = make_abelian_product([p**k, p**l])
    swap = k < l
    big, small = (l, k) if swap else (k, l)
    q = p ** ((k + l) // 2)
    n_big, n_small = p**big, p**small
    first = [(a, 0) for a in range(q)]
    second = [(i * q, b) for i in range(n_big // q) for b in range(n_small)]
    if swap:
        first = [(b, a) for a, b in first]
        second = [(b, a) for a, b in second]
    return _pair(G, (G.encode(d) for d in first), (G.encode(d) for d in second), "odd-prime-power", float(q))


def product_pair(A: GeneratingPair, B: GeneratingPair) -> GeneratingPair:
    """``(S1 x T1), (S2 x T2)`` over ``A.group x B.group``."""
    G = direct_product(A.group, B.group)
    n2 = B.group.order
    s1 = [a * n2 + b for a in A.s1 for b in B.s1]
    s2 = [a * n2 + b for a in A.s2 for b in B.s2]
    return _pair(G, s1, s2, "product", A.bound * B.bound)


def trivial_pair(G: FiniteGroup) -> GeneratingPair:
    return _pair(G, [0], [0], "trivial", 1.0)


# ---------------------------------------------------------------------------
# abelian groups


def _blocks(basis) -> list[tuple[GeneratingPair, list[int], str]]:
    """Split a sorted prime-power basis into the blocks of the recursion.

    Returns (pair over the block group, factor positions, block kind).
    """
    info = []
    for pos, (_, q) in enumerate(basis):
        p, k = _factorize(q)[0]
        info.append((p, k, pos))
    blocks = []
    odd: dict[int, list[tuple[int, int]]] = {}
    for p, k, pos in info:
        if k % 2 == 0:
            blocks.append((cyclic_pair(p**k), [pos], "even"))
        else:
            odd.setdefault(p, []).append((k, pos))
    remainder = []
    for p in sorted(odd):
        items = odd[p]
        for (k1, a), (k2, b) in zip(items[0::2], items[1::2]):
            blocks.append((odd_prime_power_pair(p, k1, k2), [a, b], "odd"))
        if len(items) % 2:
            remainder.append(items[-1][1])
    if remainder:
        N = math.prod(basis[pos][1] for pos in remainder)
        blocks.append((cyclic_pair(N), remainder, "crt"))
    return blocks


def _abelian_sets(G: FiniteGroup, basis) -> tuple[list[int], list[int]]:
    """Build the recursive pair on the abstract product and embed it into G."""
    blocks = _blocks(basis)
    combined = blocks[0][0]
    for pair, _, _ in blocks[1:]:
        combined = product_pair(combined, pair)
    P = combined.group
    mults = basis_multiples(G, basis)
    orders = [q for _, q in basis]

    def to_group(index: int) -> int:
        digits = P.digits(index)
        coords = [0] * len(basis)
        at = 0
        for pair, positions, kind in blocks:
            if kind == "even":
                coords[positions[0]] = digits[at]
                at += 1
            elif kind == "odd":
                coords[positions[0]], coords[positions[1]] = digits[at], digits[at + 1]
                at += 2
            else:  # Chinese remainder map Z_N -> prod Z_q
                c = digits[at]
                for pos in positions:
                    coords[pos] = c % orders[pos]
                at += 1
        return embed(G, mults, coords)

    return [to_group(i) for i in combined.s1], [to_group(i) for i in combined.s2]


def abelian_pair(G: FiniteGroup) -> GeneratingPair:
    """Generating pair for a non-trivial abelian group with sizes <= 2 sqrt(n)."""
    if not G.is_abelian:
        raise UnsupportedGroupError(f"{G.name} is not abelian")
    if G.order < 2:
        raise InvalidSpecError("abelian_pair needs a non-trivial group")
    cached = G.cache.get("abelian_pair")
    if cached is None:
        s1, s2 = _abelian_sets(G, abelian_basis(G))
        cached = _pair(G, s1, s2, "abelian-recursive", 2 * math.sqrt(G.order))
        G.cache["abelian_pair"] = cached
    return cached


def _subgroup_abelian_pair(G: FiniteGroup, H: Subgroup) -> GeneratingPair:
    if H.order == 1:
        return _pair(G, [0], [0], "trivial", 1.0, subgroup=H)
    s1, s2 = _abelian_sets(G, H.basis)
    return _pair(G, s1, s2, "abelian-recursive", 2 * math.sqrt(H.order), subgroup=H)


# ---------------------------------------------------------------------------
# general groups


def random_pair_size(n: int) -> int:
    return min(n, math.ceil(math.sqrt(n * math.log(n)))) if n > 1 else 1


def random_pair(G: FiniteGroup, seed: int = 0, retry_cap: int = DEFAULT_RETRY_CAP) -> GeneratingPair:
    """``S1`` = the ``t`` smallest indices, ``S2`` a seeded random ``t``-subset,
    resampled until the pair verifies (``t = ceil(sqrt(n ln n))``)."""
    n = G.order
    if n < 2:
        raise InvalidSpecError("random_pair needs n >= 2")
    key = ("random_pair", seed, retry_cap)
    cached = G.cache.get(key)
    if cached is not None:
        return cached
    t = random_pair_size(n)
    rng = np.random.default_rng(seed)
    s1 = list(range(t))
    for attempt in range(1, retry_cap + 1):
        s2 = rng.choice(n, size=t, replace=False).tolist()
        if verify_pair(G, s1, s2):
            pair = _pair(G, s1, s2, "randomized", float(t), seed=seed, attempts=attempt)
            G.cache[key] = pair
            return pair
    raise UnluckySeedError(f"no generating pair for {G.name} after {retry_cap} attempts with seed {seed}")


def coset_pair(G: FiniteGroup, H) -> GeneratingPair:
    """``S1 = H`` and ``S2`` = minimum representatives of the right cosets ``Hg``."""
    H = as_subgroup(G, H)
    reps = coset_representatives(G, H, side="right")
    return _pair(G, H.elements, reps, "coset", float(max(H.order, len(reps))))


def _coset_candidate(G: FiniteGroup) -> GeneratingPair | None:
    if G.order > ENUMERATION_CAP:
        return None
    root = math.sqrt(G.order)
    best = min(
        enumerate_subgroups(G),
        key=lambda H: (max(H.order, G.order // H.order), abs(H.order - root)),
    )
    return coset_pair(G, best)


def best_pair(G: FiniteGroup, within: Subgroup | None = None, seed: int = 0) -> GeneratingPair:
    """Best available construction (not an exact minimizer).

    Abelian groups use ``abelian_pair``; other groups take the smaller of a
    coset pair (when the subgroup lattice is enumerable) and ``random_pair``.
    With ``within`` the pair covers that subgroup, in ``G``'s indices.
    """
    if within is not None and not within.is_whole:
        within = as_subgroup(G, within)
        key = ("best_pair", within.key(), seed)
        cached = G.cache.get(key)
        if cached is not None:
            return cached
        if within.basis is not None:
            pair = _subgroup_abelian_pair(G, within)
        else:
            sub = subgroup_as_group(G, within)
            inner = best_pair(sub, seed=seed)
            lab = sub.labels
            pair = GeneratingPair(
                G,
                tuple(sorted(lab[i] for i in inner.s1)),
                tuple(sorted(lab[i] for i in inner.s2)),
                inner.provenance,
                inner.bound,
                subgroup=within,
                seed=inner.seed,
                attempts=inner.attempts,
            )
        G.cache[key] = pair
        return pair

    key = ("best_pair", None, seed)
    cached = G.cache.get(key)
    if cached is not None:
        return cached
    n = G.order
    if n == 1:
        pair = trivial_pair(G)
    else:
        candidates = []
        if G.is_abelian:
            candidates.append(abelian_pair(G))
        else:
            coset = _coset_candidate(G)
            if coset is not None:
                candidates.append(coset)
        if not candidates or min(c.max_size for c in candidates) > random_pair_size(n):
            candidates.append(random_pair(G, seed=seed))
        pair = min(candidates, key=lambda c: c.max_size)
    G.cache[key] = pair
    return pair


def exhaustive_minimal_pair(G: FiniteGroup, cap: int = EXHAUSTIVE_CAP) -> GeneratingPair:
    """A pair minimizing ``max(|S1|, |S2|)`` by exhaustive search (diagnostic).

    Both sets may be assumed to contain the identity, since ``(g S1) S2`` and
    ``S1 (S2 g)`` are generating pairs whenever ``S1 S2`` is.
    """
    n = G.order
    if n > cap:
        raise CapacityError(f"exhaustive search limited to order <= {cap}, got {n}")
    if n == 1:
        return _pair(G, [0], [0], "exhaustive-minimal", 1.0)
    full = (1 << n) - 1
    rows = G.rows
    inv = [G.inv(g) for g in range(n)]

    def cover(s1, covered, picks, chosen, shift):
        if covered == full:
            return chosen
        if picks == 0 or bin(full & ~covered).count("1") > picks * len(s1):
            return None
        z = (~covered & full & -(~covered & full)).bit_length() - 1
        for x in s1:
            y = rows[inv[x]][z]  # x * y = z
            got = cover(s1, covered | shift[y], picks - 1, chosen + [y], shift)
            if got is not None:
                return got
        return None

    for s in range(math.isqrt(n - 1) + 1, n + 1):
        for rest in itertools.combinations(range(1, n), s - 1):
            s1 = (0,) + rest
            shift = [sum(1 << rows[x][y] for x in s1) for y in range(n)]
            found = cover(s1, shift[0], s - 1, [0], shift)
            if found is not None:
                return _pair(G, s1, found, "exhaustive-minimal", float(s))
    raise AssertionError("unreachable: (G, {e}) is always a generating pair")
