"""Instance construction, correctness checks, bound assertions and sweeps."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache

from . import algorithms as alg
from . import bounds
from .errors import CapacityError, ParseError, UnsupportedGroupError
from .genpair import abelian_pair, best_pair, coset_pair, random_pair, random_pair_size
from .groups import FiniteGroup, parse_group
from .oracle import make_hiding_oracle
from .subgroups import (
    Subgroup,
    _factorize,
    enumerate_subgroups,
    generated_subgroup,
    trivial_subgroup,
)

CSV_HEADER = ("group", "n", "m", "algorithm", "outcome", "queries", "bound",
              "bound_ratio", "kappa", "seed", "wall_ms")
SCHEMA_VERSION = 1
ALGORITHM_NAMES = ("simon", "detect-abelian", "detect-general", "find-collision",
                   "find-abelian-subgroup", "find-subgroup", "randomized-baseline")
SWEEP_ONLY = ("subgroup-orders",)
ABELIAN_SWEEP_CAP = 256

# status codes, worst wins
OK = "ok"
BOUND_EXCEEDED = "bound-exceeded"
WRONG = "wrong-outcome"
UNCERTIFIED = "hypothesis-not-certified"
CAPACITY = "capacity-error"


@lru_cache(maxsize=None)
def load_group(spec: str) -> FiniteGroup:
    """Cached ``parse_group`` so sweeps share subgroup lattices and pairs."""
    return parse_group(spec)


# ---------------------------------------------------------------------------
# instance specs


def split_elements(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    out.append("".join(cur))
    return [t.strip() for t in out if t.strip()]


def parse_hidden(G: FiniteGroup, text: str | None) -> Subgroup:
    if text is None or text.strip() in ("", "trivial"):
        return trivial_subgroup(G)
    return generated_subgroup(G, [G.parse_element(tok) for tok in split_elements(text)])


@dataclass
class InstanceSpec:
    group: str
    hidden: str = "trivial"
    algorithm: str = "find-collision"
    seed: int = 0
    dedupe: bool = False
    assert_bounds: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHM_NAMES:
            raise ParseError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHM_NAMES)}")

    def to_args(self) -> list[str]:
        args = ["--group", self.group, "--hidden", self.hidden, "--alg", self.algorithm, "--seed", str(self.seed)]
        if self.dedupe:
            args.append("--dedupe")
        if self.assert_bounds:
            args.append("--assert-bounds")
        return args


@dataclass
class BenchRow:
    group: str
    n: int
    m: int | None
    algorithm: str
    outcome: str
    queries: int | None
    bound: float | None
    bound_ratio: float | None
    kappa: float | None
    seed: int | None
    wall_ms: float | None = None
    status: str = OK
    flags: list[str] = field(default_factory=list)

    def csv_values(self) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return f"{v:.6g}"
            return str(v)
        return [fmt(getattr(self, c)) for c in CSV_HEADER]

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# checks


def certify_find_subgroup(G: FiniteGroup, H: Subgroup) -> bool | None:
    """Is there ``G0`` of order ``n/m`` meeting ``H`` only in ``e``?

    ``None`` when the lattice is too large to enumerate.
    """
    target = G.order // H.order
    if H.is_trivial:
        return True
    try:
        subs = enumerate_subgroups(G)
    except CapacityError:
        return None
    mask = H.mask
    return any(K.order == target and int(mask[K.array].sum()) == 1 for K in subs)


def check_outcome(G: FiniteGroup, H: Subgroup, name: str, rep: alg.AlgorithmReport) -> bool:
    m = H.order
    if name == "randomized-baseline":
        if rep.outcome == alg.INCONCLUSIVE:
            return True
        return _valid_collision(G, H, rep.collision)
    if m == 1:
        return rep.outcome == alg.INJECTIVE
    if rep.outcome == alg.INJECTIVE:
        return False
    if name in ("detect-abelian", "detect-general"):
        return set(rep.generators) == H.elementset
    if name == "find-collision":
        return rep.outcome == alg.COLLISION and _valid_collision(G, H, rep.collision)
    if name == "simon":
        return rep.generators is not None and set(rep.generators) | {0} == H.elementset
    return rep.generators is not None and generated_subgroup(G, rep.generators) == H


def _valid_collision(G, H, pair) -> bool:
    if pair is None:
        return False
    a, b = pair
    return a != b and G.mul(G.inv(a), b) in H.elementset


def theoretical_bound(G: FiniteGroup, H: Subgroup, name: str, rep: alg.AlgorithmReport):
    """Return ``(bound, kappa)`` for assertions; bound is None when no bound applies."""
    n, m = G.order, H.order
    if name in ("simon", "detect-abelian", "detect-general", "randomized-baseline"):
        return rep.bound, None
    if name == "find-collision":
        if G.is_abelian:
            return bounds.find_collision_abelian_bound(n, m), None
        kap = bounds.kappa(G, m)
        return bounds.find_collision_general_bound(n, m, kap), kap
    if name == "find-abelian-subgroup":
        return bounds.find_abelian_subgroup_bound(n, m), None
    if name == "find-subgroup":
        if G.is_abelian:
            return bounds.find_subgroup_bound(n, m, True), None
        kap = bounds.kappa(G, 1) if m == 1 else 1.0
        return bounds.find_subgroup_bound(n, m, False, kap), kap
    raise ParseError(f"unknown algorithm {name!r}")


# ---------------------------------------------------------------------------
# running


def run_algorithm(G: FiniteGroup, oracle, name: str, seed: int = 0, budget: int | None = None) -> alg.AlgorithmReport:
    if name == "simon":
        k = len(G.moduli) if G.moduli else 0
        return alg.simon_solve(k, oracle)
    if name == "detect-abelian":
        return alg.detect_abelian(G, oracle)
    if name == "detect-general":
        return alg.detect_general(G, oracle, seed=seed)
    if name == "find-collision":
        return alg.find_collision(G, oracle, seed=seed)
    if name == "find-abelian-subgroup":
        return alg.find_abelian_subgroup(G, oracle, seed=seed)
    if name == "find-subgroup":
        return alg.find_subgroup(G, oracle, seed=seed)
    if name == "randomized-baseline":
        return alg.randomized_baseline(G, oracle, seed=seed, budget=budget)
    raise ParseError(f"unknown algorithm {name!r}")


def run_instance(G: FiniteGroup, H: Subgroup, name: str, *, seed: int = 0, dedupe: bool = False,
                 assert_bounds: bool = False, timing: bool = False, group_label: str | None = None):
    """Run one algorithm on ``(G, H)``; returns ``(row, report, oracle)``."""
    oracle = make_hiding_oracle(G, H, dedupe=dedupe)
    t0 = time.perf_counter()
    rep = run_algorithm(G, oracle, name, seed=seed)
    wall = (time.perf_counter() - t0) * 1000 if timing else None
    bound, kap = theoretical_bound(G, H, name, rep)
    flags = []
    status = OK
    if name == "find-subgroup":
        cert = certify_find_subgroup(G, H)
        if not cert:
            flags.append(UNCERTIFIED)
            rep.flags.append(UNCERTIFIED)
            bound = None
    if rep.queries != oracle.count:
        status = WRONG
        flags.append("query-count-mismatch")
    if not check_outcome(G, H, name, rep):
        if UNCERTIFIED in flags:
            flags.append("wrong-outcome-allowed")
        else:
            status = WRONG
    ratio = rep.queries / bound if bound else None
    if status == OK and assert_bounds and bound is not None and rep.queries > bound + 1e-9:
        status = BOUND_EXCEEDED
    rep.bound = bound
    row = BenchRow(group_label or G.name, G.order, H.order, name, rep.outcome, rep.queries, bound, ratio,
                   kap, rep.seed if rep.seed is not None else None, wall, status, flags)
    return row, rep, oracle


def run_spec(spec: InstanceSpec, timing: bool = False):
    G = load_group(spec.group)
    H = parse_hidden(G, spec.hidden)
    return run_instance(G, H, spec.algorithm, seed=spec.seed, dedupe=spec.dedupe,
                        assert_bounds=spec.assert_bounds, timing=timing, group_label=spec.group)


# ---------------------------------------------------------------------------
# families


def _partitions(e: int, largest: int | None = None):
    largest = e if largest is None else largest
    if e == 0:
        yield []
        return
    for first in range(min(e, largest), 0, -1):
        for rest in _partitions(e - first, first):
            yield [first] + rest


def abelian_moduli(n: int) -> list[tuple[int, ...]]:
    """Every abelian group of order ``n`` as prime-power moduli, one per isomorphism type."""
    per_prime = []
    for p, e in _factorize(n):
        per_prime.append([tuple(sorted(p**a for a in part)) for part in _partitions(e)])
    out = [tuple(itertools.chain.from_iterable(choice)) for choice in itertools.product(*per_prime)]
    return sorted(out)


def abelian_name(moduli: tuple[int, ...]) -> str:
    return "x".join(f"Z{q}" for q in moduli)


def abelian_family(N: int) -> list[str]:
    if N > ABELIAN_SWEEP_CAP:
        raise CapacityError(f"all-abelian sweeps are capped at order {ABELIAN_SWEEP_CAP}")
    return [abelian_name(mod) for n in range(2, N + 1) for mod in abelian_moduli(n)]


def dihedral_family(N: int) -> list[str]:
    return [f"D{k}" for k in range(3, N // 2 + 1)]


def nonabelian_family(N: int) -> list[str]:
    names = dihedral_family(N)
    if N >= 8:
        names.append("Q8")
    k = 3
    while math.factorial(k) <= N:
        names.append(f"S{k}")
        k += 1
    k = 4
    while math.factorial(k) // 2 <= N:
        names.append(f"A{k}")
        k += 1
    return names


def parse_family(text: str) -> list[str]:
    """``abelian:N``, ``dihedral:N``, ``nonabelian:N`` or a comma list of group specs."""
    text = text.strip()
    if not text:
        return []
    out: list[str] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        kind, _, arg = part.partition(":")
        if kind in ("abelian", "dihedral", "nonabelian"):
            try:
                N = int(arg)
            except ValueError:
                raise ParseError(f"bad family bound in {part!r}") from None
            out.extend({"abelian": abelian_family, "dihedral": dihedral_family,
                        "nonabelian": nonabelian_family}[kind](N))
        else:
            out.append(part)
    return out


# ---------------------------------------------------------------------------
# sweeps


def sweep(family: list[str], algorithms: list[str], *, seed: int = 0, dedupe: bool = False,
          assert_bounds: bool = False, timing: bool = False) -> list[BenchRow]:
    """One row per (group, subgroup, algorithm); algorithms that do not apply
    to a group (for example detect-abelian on a non-abelian group) are skipped."""
    rows: list[BenchRow] = []
    for spec in family:
        G = load_group(spec)
        if "subgroup-orders" in algorithms:
            rows.append(subgroup_orders_row(G, spec))
        names = [a for a in algorithms if a != "subgroup-orders"]
        if not names:
            continue
        try:
            subs = enumerate_subgroups(G)
        except CapacityError as exc:
            rows.extend(_capacity_row(G, spec, a, str(exc)) for a in names)
            continue
        for H in subs:
            for name in names:
                if not _applies(G, H, name):
                    continue
                try:
                    row, _, _ = run_instance(G, H, name, seed=seed, dedupe=dedupe,
                                             assert_bounds=assert_bounds, timing=timing, group_label=spec)
                except CapacityError as exc:
                    row = _capacity_row(G, spec, name, str(exc), H.order)
                rows.append(row)
    return rows


def _applies(G: FiniteGroup, H: Subgroup, name: str) -> bool:
    if name in ("detect-abelian", "find-abelian-subgroup"):
        return G.is_abelian
    if name == "simon":
        return bool(G.moduli) and set(G.moduli) == {2} and H.order <= 2
    return G.order > 1


def _capacity_row(G, spec, name, msg, m=None) -> BenchRow:
    return BenchRow(spec, G.order, m if m is not None else 0, name, CAPACITY, None, None, None, None, None,
                    None, CAPACITY, [msg])


def subgroup_orders(G: FiniteGroup) -> list[int]:
    return sorted({H.order for H in enumerate_subgroups(G)})


def subgroup_orders_row(G: FiniteGroup, spec: str) -> BenchRow:
    try:
        orders = subgroup_orders(G)
    except CapacityError as exc:
        return _capacity_row(G, spec, "subgroup-orders", str(exc))
    return BenchRow(spec, G.order, None, "subgroup-orders", "{" + " ".join(map(str, orders)) + "}",
                    None, None, None, None, None, flags=[f"count={len(enumerate_subgroups(G))}"])


def summarize(rows: list[BenchRow]) -> dict:
    ratios = [r.bound_ratio for r in rows if r.bound_ratio is not None]
    failures = [r for r in rows if r.status in (WRONG, BOUND_EXCEEDED)]
    return {
        "rows": len(rows),
        "max_bound_ratio": max(ratios) if ratios else None,
        "failures": len(failures),
        "wrong": sum(r.status == WRONG for r in rows),
        "bound_exceeded": sum(r.status == BOUND_EXCEEDED for r in rows),
        "capacity": sum(r.status == CAPACITY for r in rows),
        "uncertified": sum(UNCERTIFIED in r.flags for r in rows),
    }


# ---------------------------------------------------------------------------
# generating pair verification


PAIR_CONSTRUCTIONS = ("abelian-recursive", "randomized", "best", "coset")


def verify_pairs(family: list[str], construction: str, seeds: int = 1) -> list[dict]:
    """Check ``S1 S2 = G`` and the construction's size bound for every group."""
    if construction not in PAIR_CONSTRUCTIONS:
        raise ParseError(f"unknown construction {construction!r}")
    out = []
    for spec in family:
        G = load_group(spec)
        n = G.order
        for seed in range(seeds if construction in ("randomized", "best") else 1):
            if construction == "abelian-recursive":
                if not G.is_abelian:
                    raise UnsupportedGroupError(f"{spec} is not abelian")
                pair, limit = abelian_pair(G), 2 * math.sqrt(n)
            elif construction == "randomized":
                pair, limit = random_pair(G, seed=seed), float(random_pair_size(n))
            elif construction == "best":
                pair = best_pair(G, seed=seed)
                limit = 2 * math.sqrt(n) if G.is_abelian else float(random_pair_size(n))
            else:
                pair = _best_coset_pair(G)
                limit = pair.bound
            verified = pair.verify()
            out.append({
                "group": spec, "n": n, "construction": pair.provenance, "seed": pair.seed,
                "s1": len(pair.s1), "s2": len(pair.s2), "limit": limit,
                "verified": verified, "within_limit": pair.max_size <= limit + 1e-9,
            })
    return out


def _best_coset_pair(G: FiniteGroup):
    root = math.sqrt(G.order)
    H = min(enumerate_subgroups(G), key=lambda K: (max(K.order, G.order // K.order), abs(K.order - root)))
    return coset_pair(G, H)


# ---------------------------------------------------------------------------
# plot data


def plotdata(rows: list[dict]) -> list[dict]:
    """Aggregate sweep rows into ``(algorithm, n/m)`` series of mean queries and mean bound."""
    buckets: dict[tuple[str, float], list[dict]] = {}
    for r in rows:
        if r.get("queries") in (None, "") or not r.get("m") or int(r["m"]) == 0:
            continue
        key = (r["algorithm"], int(r["n"]) / int(r["m"]))
        buckets.setdefault(key, []).append(r)
    out = []
    for (name, ratio), rs in sorted(buckets.items()):
        qs = [float(r["queries"]) for r in rs]
        bs = [float(r["bound"]) for r in rs if r.get("bound") not in (None, "")]
        out.append({
            "algorithm": name,
            "n_over_m": ratio,
            "mean_queries": sum(qs) / len(qs),
            "max_queries": max(qs),
            "mean_bound": sum(bs) / len(bs) if bs else None,
            "count": len(rs),
        })
    return out


