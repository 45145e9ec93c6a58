"""Query-counting oracles for hidden subgroup instances.

Algorithms only ever call ``query``; the hidden subgroup and the label map
are private to the oracle (the test harness reads ``hidden_subgroup``).
"""

from __future__ import annotations

import json

from .errors import DomainError, InstanceError
from .groups import FiniteGroup
from .subgroups import Subgroup, as_subgroup, left_cosets, quotient_group, trivial_subgroup


class HiddenSubgroupOracle:
    """``f(g)`` = smallest index in the left coset ``gH``.

    With ``dedupe`` enabled repeated queries are answered from a memo and
    not counted.
    """

    def __init__(self, group: FiniteGroup, hidden: Subgroup, *, dedupe: bool = False):
        self.group = group
        self._hidden = hidden
        self._labels = left_cosets(group, hidden).rep
        self.dedupe = dedupe
        self._memo: dict[int, int] = {}
        self.count = 0
        self.transcript: list[tuple[int, int]] = []

    def __repr__(self) -> str:
        return f"HiddenSubgroupOracle({self.group.name}, queries={self.count})"

    @property
    def hidden_subgroup(self) -> Subgroup:
        """Ground truth, for harness validation only."""
        return self._hidden

    def query(self, g: int) -> int:
        if isinstance(g, bool) or not isinstance(g, int) or not 0 <= g < self.group.order:
            raise DomainError(f"{g!r} is not an element of {self.group.name}")
        if self.dedupe and g in self._memo:
            return self._memo[g]
        label = self._labels[g]
        self.count += 1
        self.transcript.append((g, label))
        if self.dedupe:
            self._memo[g] = label
        return label

    def reset(self) -> None:
        self.count = 0
        self.transcript.clear()
        self._memo.clear()

    def transcript_records(self) -> list[dict]:
        return [{"element": g, "label": lab} for g, lab in self.transcript]

    def transcript_json(self) -> str:
        return json.dumps(self.transcript_records())


class QuotientOracle:
    """``f1(g H1) = f(rep(g H1))`` on ``G/H1``; each query costs one base query."""

    def __init__(self, base: HiddenSubgroupOracle, H1: Subgroup, *, check: bool = True):
        G = base.group
        H1 = as_subgroup(G, H1)
        if check and not H1.elementset <= base.hidden_subgroup.elementset:
            raise InstanceError("H1 is not contained in the hidden subgroup")
        self.base = base
        self.known = H1
        self.group, self.projection = cached_quotient(G, H1)
        self._reps = self.group.labels if self.group is not G else None
        self.count = 0
        self.transcript: list[tuple[int, int]] = []

    def __repr__(self) -> str:
        return f"QuotientOracle({self.group.name}, queries={self.count})"

    @property
    def hidden_subgroup(self) -> Subgroup:
        """Image of the hidden subgroup in the quotient (harness only)."""
        H = self.base.hidden_subgroup
        elems = sorted({self.projection[h] for h in H.elements})
        return Subgroup(self.group, tuple(elems))

    def representative(self, q: int) -> int:
        return q if self._reps is None else self._reps[q]

    def query(self, q: int) -> int:
        if isinstance(q, bool) or not isinstance(q, int) or not 0 <= q < self.group.order:
            raise DomainError(f"{q!r} is not an element of {self.group.name}")
        label = self.base.query(self.representative(q))
        self.count += 1
        self.transcript.append((q, label))
        return label

    def reset(self) -> None:
        self.count = 0
        self.transcript.clear()

    def transcript_records(self) -> list[dict]:
        return [{"element": g, "label": lab} for g, lab in self.transcript]


def cached_quotient(G: FiniteGroup, H1: Subgroup):
    key = ("quotient", H1.key())
    hit = G.cache.get(key)
    if hit is None:
        hit = quotient_group(G, H1)
        G.cache[key] = hit
    return hit


def make_hiding_oracle(G: FiniteGroup, H=None, *, dedupe: bool = False) -> HiddenSubgroupOracle:
    """Oracle hiding ``H`` (a Subgroup or element set; None means trivial)."""
    H = trivial_subgroup(G) if H is None else as_subgroup(G, H)
    return HiddenSubgroupOracle(G, H, dedupe=dedupe)


def make_quotient_oracle(base: HiddenSubgroupOracle, H1, *, check: bool = True) -> QuotientOracle:
    return QuotientOracle(base, H1, check=check)


def query(oracle, g: int) -> int:
    return oracle.query(g)


def query_count(oracle) -> int:
    return oracle.count


def reset(oracle) -> None:
    oracle.reset()
