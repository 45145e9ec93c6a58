"""Finite groups with canonical element indices ``0..n-1``.

Three representations are supported:

* ``abelian-product``: ``Z_{m1} x ... x Z_{mr}``; index ``i`` is the
  mixed-radix encoding of the digit vector with the first factor most
  significant.
* ``cayley-table``: an explicit ``n x n`` composition table.
* ``permutation``: a materialized permutation group; elements are indexed by
  the lexicographic rank of their image tuples within the group.

The identity is always index 0.  Permutations compose right to left:
``compose(a, b)`` applies ``b`` first.
"""

from __future__ import annotations

import itertools
import math
import re
import threading
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, CatalogError, DomainError, InvalidSpecError, NotAGroupError, ParseError

ORDER_CAP = 5040
# Groups up to this order get a materialized numpy composition table.
TABLE_CAP = 2048

ABELIAN_PRODUCT = "abelian-product"
CAYLEY = "cayley-table"
PERMUTATION = "permutation"


class FiniteGroup:
    """Immutable finite group addressed by integer indices.

    Use the ``make_*`` constructors rather than instantiating directly.
    Instances carry a private cache for derived structure (subgroup lattice,
    abelian basis, generating pairs); the cache never changes group
    semantics.
    """

    def __init__(
        self,
        kind: str,
        order: int,
        name: str,
        *,
        moduli: Sequence[int] | None = None,
        table: np.ndarray | None = None,
        perms: np.ndarray | None = None,
        generators: Sequence[tuple[int, ...]] = (),
        labels: Sequence[int] | None = None,
    ):
        self.kind = kind
        self.order = order
        self.name = name
        self.moduli = tuple(moduli) if moduli is not None else None
        self.generators = tuple(tuple(g) for g in generators)
        # Original index of each element when a Cayley table was relabelled.
        self.labels = tuple(labels) if labels is not None else None
        self._table = table
        self._rows: list[list[int]] | None = None
        self._inverses: np.ndarray | None = None
        self._inv_list: list[int] | None = None
        self._is_abelian: bool | None = True if kind == ABELIAN_PRODUCT else None
        self._perms = perms
        self._perm_keys: dict[bytes, int] | None = None
        self._perm_index: dict[tuple[int, ...], int] | None = None
        if kind == ABELIAN_PRODUCT:
            weights = []
            w = 1
            for m in reversed(self.moduli):
                weights.append(w)
                w *= m
            self._weights = tuple(reversed(weights))
        self.cache: dict = {}
        self.cache_lock = threading.RLock()

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order}, kind={self.kind!r})"

    def __len__(self) -> int:
        return self.order

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    @property
    def degree(self) -> int | None:
        return None if self._perms is None else int(self._perms.shape[1])

    # -- structure -----------------------------------------------------------

    @property
    def table(self) -> np.ndarray:
        """Full composition table, ``table[a, b] = compose(a, b)``."""
        if self._table is None:
            if self.order > TABLE_CAP:
                raise CapacityError(f"{self.name}: order {self.order} exceeds table cap {TABLE_CAP}")
            self._table = self._build_table()
        return self._table

    @property
    def has_table(self) -> bool:
        return self._table is not None or self.order <= TABLE_CAP

    def _build_table(self) -> np.ndarray:
        n = self.order
        dtype = np.int32
        out = np.empty((n, n), dtype=dtype)
        if self.kind == ABELIAN_PRODUCT:
            digits = self.digit_array()
            mod = np.array(self.moduli, dtype=np.int64)
            w = np.array(self._weights, dtype=np.int64)
            for a in range(n):
                out[a] = ((digits[a] + digits) % mod) @ w
        elif self.kind == PERMUTATION:
            perms = self._perms
            lookup = self._byte_index()
            width = perms.shape[1] * perms.itemsize
            for a in range(n):
                raw = perms[a][perms].tobytes()  # a after b, for every b
                out[a] = [lookup[raw[i:i + width]] for i in range(0, len(raw), width)]
        else:  # pragma: no cover - Cayley groups always carry a table
            raise AssertionError("cayley group without table")
        return out

    @property
    def rows(self) -> list[list[int]]:
        """The composition table as nested Python lists (fast scalar access)."""
        if self._rows is None:
            self._rows = self.table.tolist()
        return self._rows

    @property
    def inverses(self) -> np.ndarray:
        if self._inverses is None:
            if self.has_table:
                self._inverses = np.argmin(self.table, axis=1).astype(np.int32)
            else:
                self._inverses = np.array([self._invert_slow(a) for a in range(self.order)], dtype=np.int32)
        return self._inverses

    @property
    def is_abelian(self) -> bool:
        if self._is_abelian is None:
            if self.has_table:
                t = self.table
                self._is_abelian = bool(np.array_equal(t, t.T))
            else:
                gens = [self.index_of_perm(g) for g in self.generators]
                self._is_abelian = all(
                    self.compose(a, b) == self.compose(b, a) for a, b in itertools.combinations(gens, 2)
                )
        return self._is_abelian

    # -- group law -----------------------------------------------------------

    def _check(self, a) -> int:
        if isinstance(a, (bool, np.bool_)) or not isinstance(a, (int, np.integer)):
            raise DomainError(f"{a!r} is not an element index of {self.name}")
        if not 0 <= a < self.order:
            raise DomainError(f"element {a} does not belong to {self.name} (order {self.order})")
        return int(a)

    def compose(self, a: int, b: int) -> int:
        a, b = self._check(a), self._check(b)
        return self.mul(a, b)

    def invert(self, a: int) -> int:
        return self.inv(self._check(a))

    def mul(self, a: int, b: int) -> int:
        """Unchecked composition for hot loops."""
        if self.has_table:
            return self.rows[a][b]
        if self.kind == PERMUTATION:
            p = self._perms
            return self.index_of_perm(tuple(p[a][p[b]].tolist()))
        da, db = self.digits(a), self.digits(b)
        return self.encode([(x + y) % m for x, y, m in zip(da, db, self.moduli)])

    def inv(self, a: int) -> int:
        if self._inv_list is None:
            self._inv_list = self.inverses.tolist()
        return self._inv_list[a]

    def _invert_slow(self, a: int) -> int:
        if self.kind == PERMUTATION:
            p = self._perms[a]
            q = np.empty_like(p)
            q[p] = np.arange(len(p), dtype=p.dtype)
            return self.index_of_perm(tuple(q.tolist()))
        return self.encode([(-x) % m for x, m in zip(self.digits(a), self.moduli)])

    def power(self, a: int, k: int) -> int:
        a = self._check(a)
        if k < 0:
            a, k = self.inv(a), -k
        result, base = 0, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        a = self._check(a)
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def element_orders(self) -> list[int]:
        return [self.element_order(a) for a in range(self.order)]

    # -- abelian-product encoding -------------------------------------------

    def digits(self, i: int) -> tuple[int, ...]:
        if self.kind != ABELIAN_PRODUCT:
            raise DomainError(f"{self.name} is not an abelian product")
        out = []
        for w, m in zip(self._weights, self.moduli):
            out.append((i // w) % m)
        return tuple(out)

    def encode(self, digits: Sequence[int]) -> int:
        if self.kind != ABELIAN_PRODUCT:
            raise DomainError(f"{self.name} is not an abelian product")
        if len(digits) != len(self.moduli):
            raise DomainError(f"expected {len(self.moduli)} digits, got {len(digits)}")
        return sum((d % m) * w for d, m, w in zip(digits, self.moduli, self._weights))

    def digit_array(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        w = np.array(self._weights, dtype=np.int64)
        m = np.array(self.moduli, dtype=np.int64)
        return (idx[:, None] // w[None, :]) % m[None, :]

    # -- permutations --------------------------------------------------------

    def _byte_index(self) -> dict[bytes, int]:
        if self._perm_keys is None:
            self._perm_keys = {row.tobytes(): i for i, row in enumerate(self._perms)}
        return self._perm_keys

    def perm(self, i: int) -> tuple[int, ...]:
        if self.kind != PERMUTATION:
            raise DomainError(f"{self.name} is not a permutation group")
        return tuple(self._perms[self._check(i)].tolist())

    def index_of_perm(self, p: Sequence[int]) -> int:
        if self.kind != PERMUTATION:
            raise DomainError(f"{self.name} is not a permutation group")
        if self._perm_index is None:
            self._perm_index = {tuple(row): i for i, row in enumerate(self._perms.tolist())}
        try:
            return self._perm_index[tuple(p)]
        except KeyError:
            raise DomainError(f"permutation {tuple(p)} is not in {self.name}") from None

    # -- presentation --------------------------------------------------------

    def format_element(self, i: int) -> str:
        i = self._check(i)
        if self.kind == ABELIAN_PRODUCT:
            if len(self.moduli) == 1:
                return str(i)
            return "(" + ",".join(map(str, self.digits(i))) + ")"
        if self.kind == PERMUTATION:
            return format_cycles(self.perm(i))
        return str(i)

    def parse_element(self, text: str) -> int:
        """Parse an index, a digit tuple ``(1,0)`` or a ``perm:(1 2)(3 4)`` literal."""
        text = text.strip()
        if text.startswith("perm:"):
            if self.kind != PERMUTATION:
                raise ParseError(f"permutation literal given for non-permutation group {self.name}")
            return self.index_of_perm(parse_cycles(text[5:], self.degree))
        if text.startswith("(") and self.kind == ABELIAN_PRODUCT:
            try:
                digits = [int(t) for t in text.strip("()").split(",")]
            except ValueError:
                raise ParseError(f"bad digit tuple {text!r}") from None
            if len(digits) != len(self.moduli) or any(not 0 <= d < m for d, m in zip(digits, self.moduli)):
                raise ParseError(f"digit tuple {text!r} does not fit moduli {self.moduli}")
            return self.encode(digits)
        try:
            value = int(text)
        except ValueError:
            raise ParseError(f"cannot parse element {text!r}") from None
        if not 0 <= value < self.order:
            raise ParseError(f"element {value} out of range for {self.name}")
        return value


# ---------------------------------------------------------------------------
# constructors


def make_abelian_product(moduli: Sequence[int], name: str | None = None) -> FiniteGroup:
    moduli = [int(m) for m in moduli]
    if not moduli:
        raise InvalidSpecError("abelian product needs at least one modulus")
    if any(m < 2 for m in moduli):
        raise InvalidSpecError(f"moduli must be >= 2, got {moduli}")
    n = math.prod(moduli)
    if name is None:
        name = "x".join(f"Z{m}" for m in moduli)
    return FiniteGroup(ABELIAN_PRODUCT, n, name, moduli=moduli)


def trivial_group() -> FiniteGroup:
    return make_cayley([[0]], name="1")


def make_cayley(table, name: str = "cayley", *, check_limit: int = 64, samples: int = 10_000) -> FiniteGroup:
    """Build a group from a composition table after validating the axioms.

    The identity is relabelled to index 0 (by swapping it with the element
    currently at 0); ``group.labels[i]`` gives the input index of element ``i``.
    """
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotAGroupError("shape", detail="table must be a non-empty square matrix")
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        raise NotAGroupError("shape", detail="entries must be integers")
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        a, b = map(int, bad[0])
        raise NotAGroupError("closure", (a, b), f"entry {int(t[a, b])} out of range")
    t = t.astype(np.int32)
    full = np.arange(n)
    for a in range(n):
        if len(np.unique(t[a])) != n:
            b1, b2 = _first_repeat(t[a])
            raise NotAGroupError("latin-square", (a, b1, b2), "row repeats an entry")
    for b in range(n):
        if len(np.unique(t[:, b])) != n:
            a1, a2 = _first_repeat(t[:, b])
            raise NotAGroupError("latin-square", (a1, a2, b), "column repeats an entry")
    ids = [e for e in range(n) if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
    if not ids:
        raise NotAGroupError("identity", detail="no two-sided identity")
    e = ids[0]
    sigma = np.arange(n)
    sigma[[0, e]] = sigma[[e, 0]]
    t = sigma[t[np.ix_(sigma, sigma)]].astype(np.int32)
    _check_associative(t, check_limit, samples)
    return FiniteGroup(CAYLEY, n, name, table=t, labels=sigma.tolist())


def _first_repeat(row) -> tuple[int, int]:
    seen: dict[int, int] = {}
    for i, v in enumerate(row.tolist()):
        if v in seen:
            return seen[v], i
        seen[v] = i
    raise AssertionError("no repeat")


def _check_associative(t: np.ndarray, limit: int, samples: int, seed: int = 0) -> None:
    n = t.shape[0]
    if n <= limit:
        left = t[t, :]  # left[a, b, c] = (ab)c
        right = t[:, t]  # right[a, b, c] = a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            raise NotAGroupError("associativity", tuple(map(int, bad[0])))
        return
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    bad = np.nonzero(t[t[a, b], c] != t[a, t[b, c]])[0]
    if len(bad):
        i = bad[0]
        raise NotAGroupError("associativity", (int(a[i]), int(b[i]), int(c[i])))


def check_axioms(G: FiniteGroup, exhaustive_limit: int = 64, samples: int = 10_000, seed: int = 0) -> None:
    """Verify identity, inverses and associativity; raise NotAGroupError on failure."""
    n = G.order
    rng = np.random.default_rng(seed)
    if G.has_table:
        t = G.table
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise NotAGroupError("identity", detail="index 0 is not the identity")
        inv = G.inverses
        if not (np.all(t[np.arange(n), inv] == 0) and np.all(t[inv, np.arange(n)] == 0)):
            raise NotAGroupError("inverse")
        _check_associative(t, exhaustive_limit, samples, seed)
        return
    for a, b, c in rng.integers(0, n, size=(samples, 3)).tolist():
        if G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)):
            raise NotAGroupError("associativity", (a, b, c))
        if G.mul(a, G.inv(a)) != 0 or G.mul(0, a) != a:
            raise NotAGroupError("inverse", (a,))


def make_permutation_group(perms: Iterable[Sequence[int]], name: str, generators=()) -> FiniteGroup:
    rows = sorted({tuple(int(x) for x in p) for p in perms})
    if not rows:
        raise InvalidSpecError("empty permutation list")
    arr = np.array(rows, dtype=np.int16 if len(rows[0]) > 127 else np.int8)
    if arr.shape[1] and not np.array_equal(arr[0], np.arange(arr.shape[1])):
        raise NotAGroupError("identity", detail="identity permutation missing")
    return FiniteGroup(PERMUTATION, len(rows), name, perms=arr, generators=generators)


def _dihedral(n: int) -> FiniteGroup:
    rot = [tuple((x + k) % n for x in range(n)) for k in range(n)]
    ref = [tuple((k - x) % n for x in range(n)) for k in range(n)]
    return make_permutation_group(rot + ref, f"D{n}", generators=[rot[1], ref[0]])


def _is_even(p: Sequence[int]) -> bool:
    seen = [False] * len(p)
    swaps = 0
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            swaps += length - 1
    return swaps % 2 == 0


def _symmetric(n: int) -> FiniteGroup:
    gens = []
    if n >= 2:
        gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return make_permutation_group(itertools.permutations(range(n)), f"S{n}", generators=gens)


def _alternating(n: int) -> FiniteGroup:
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    perms = [p for p in itertools.permutations(range(n)) if _is_even(p)]
    return make_permutation_group(perms, f"A{n}", generators=gens)


def _quaternion() -> FiniteGroup:
    # units 1, i, j, k with signs; element (s, u) is (-1)^s * unit[u]
    mult = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }  # fmt: skip
    elems = [(s, u) for s in (0, 1) for u in range(4)]

    def times(x, y):
        s, u = mult[(x[1], y[1])]
        return ((x[0] + y[0] + s) % 2, u)

    left = [tuple(elems.index(times(a, x)) for x in elems) for a in elems]
    return make_permutation_group(left, "Q8", generators=[left[1], left[2]])


BUILTIN_FAMILIES = ("dihedral", "symmetric", "alternating", "quaternion")


def make_builtin(family: str, parameter: int, order_cap: int = ORDER_CAP) -> FiniteGroup:
    """Dihedral ``D_n`` (order 2n, n >= 3), ``S_n``, ``A_n`` or ``Q8``."""
    if family == "dihedral":
        if parameter < 3:
            raise CatalogError("dihedral groups need n >= 3 (D1, D2 are abelian: use Z2, Z2xZ2)")
        order = 2 * parameter
    elif family == "symmetric":
        if parameter < 1:
            raise CatalogError("symmetric groups need degree >= 1")
        order = math.factorial(parameter)
    elif family == "alternating":
        if parameter < 1:
            raise CatalogError("alternating groups need degree >= 1")
        order = max(1, math.factorial(parameter) // 2)
    elif family == "quaternion":
        if parameter != 8:
            raise CatalogError("only the quaternion group Q8 is in the catalog")
        order = 8
    else:
        raise CatalogError(f"unknown family {family!r}")
    if order > order_cap:
        raise CatalogError(f"{family}({parameter}) has order {order} > cap {order_cap}")
    if family == "dihedral":
        return _dihedral(parameter)
    if family == "symmetric":
        return _symmetric(parameter)
    if family == "alternating":
        return _alternating(parameter)
    return _quaternion()


def direct_product(G1: FiniteGroup, G2: FiniteGroup, order_cap: int = ORDER_CAP) -> FiniteGroup:
    """``G1 x G2`` with element index ``i1 * |G2| + i2``."""
    n = G1.order * G2.order
    if n > order_cap:
        raise CapacityError(f"direct product order {n} exceeds cap {order_cap}")
    name = f"{G1.name}x{G2.name}"
    if G1.kind == ABELIAN_PRODUCT and G2.kind == ABELIAN_PRODUCT:
        return make_abelian_product(G1.moduli + G2.moduli, name=name)
    if G1.order == 1:
        return G2
    if G2.order == 1:
        return G1
    t1 = G1.table.astype(np.int64)
    t2 = G2.table.astype(np.int64)
    n2 = G2.order
    t = (t1[:, None, :, None] * n2 + t2[None, :, None, :]).reshape(n, n).astype(np.int32)
    G = FiniteGroup(CAYLEY, n, name, table=t)
    G._is_abelian = G1.is_abelian and G2.is_abelian
    return G


# ---------------------------------------------------------------------------
# cycle notation and spec strings


def format_cycles(p: Sequence[int]) -> str:
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = p[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def parse_cycles(text: str, degree: int | None) -> tuple[int, ...]:
    """Parse 1-based cycle notation such as ``(1 2 3)(4 5)``.

    Cycles are applied right to left, matching ``compose``.
    """
    text = text.strip()
    if not re.fullmatch(r"(\(\s*(\d+(\s+\d+)*)?\s*\)\s*)+", text):
        raise ParseError(f"bad cycle notation {text!r}")
    cycles = [[int(x) - 1 for x in c.split()] for c in re.findall(r"\(([^)]*)\)", text)]
    largest = max((max(c) + 1 for c in cycles if c), default=0)
    if degree is None:
        degree = largest
    if largest > degree or any(x < 0 for c in cycles for x in c):
        raise ParseError(f"cycle {text!r} moves points outside 1..{degree}")
    result = list(range(degree))
    for cyc in reversed(cycles):
        if len(set(cyc)) != len(cyc):
            raise ParseError(f"cycle repeats a point in {text!r}")
        step = list(range(degree))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            step[a] = b
        result = [step[x] for x in result]
    return tuple(result)


def read_cayley_file(path: str | Path, name: str | None = None) -> FiniteGroup:
    """Read ``n`` then ``n`` rows of ``n`` whitespace-separated 0-based indices."""
    path = Path(path)
    try:
        lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        n = int(lines[0])
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except (ValueError, IndexError):
        raise ParseError(f"{path}: malformed Cayley table file") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ParseError(f"{path}: expected {n} rows of {n} entries")
    return make_cayley(rows, name=name or f"cayley:{path}")


def write_cayley_file(G: FiniteGroup, path: str | Path) -> None:
    rows = [" ".join(map(str, r)) for r in G.table.tolist()]
    Path(path).write_text(f"{G.order}\n" + "\n".join(rows) + "\n")


_TOKEN = re.compile(r"^(Z|D|S|A|Q)(\d+)(?:\^(\d+))?$")


def parse_group(spec: str, order_cap: int = ORDER_CAP) -> FiniteGroup:
    """Parse ``Z8``, ``Z4xZ2xZ2``, ``Z2^3``, ``D4``, ``S4``, ``A4``, ``Q8``,
    products such as ``D4xZ2``, or ``cayley:<path>``."""
    spec = spec.strip()
    if spec.startswith("cayley:"):
        return read_cayley_file(spec[len("cayley:"):], name=spec)
    if not spec:
        raise ParseError("empty group spec")
    factors: list[FiniteGroup] = []
    pending: list[int] = []

    def flush():
        if pending:
            factors.append(make_abelian_product(pending))
            pending.clear()

    for token in spec.split("x"):
        m = _TOKEN.match(token.strip())
        if not m:
            raise ParseError(f"cannot parse group token {token!r} in {spec!r}")
        letter, value, exp = m.group(1), int(m.group(2)), m.group(3)
        reps = int(exp) if exp else 1
        if exp and letter != "Z":
            raise ParseError(f"exponent only allowed on cyclic factors: {token!r}")
        if letter == "Z":
            if value < 2:
                raise ParseError(f"cyclic factor needs order >= 2: {token!r}")
            pending.extend([value] * reps)
            continue
        flush()
        family = {"D": "dihedral", "S": "symmetric", "A": "alternating", "Q": "quaternion"}[letter]
        factors.append(make_builtin(family, value, order_cap))
    flush()
    G = factors[0]
    for H in factors[1:]:
        G = direct_product(G, H, order_cap)
    if math.prod(f.order for f in factors) > order_cap:
        raise CapacityError(f"{spec}: order exceeds cap {order_cap}")
    G.name = spec
    return G
