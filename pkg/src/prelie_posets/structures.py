"""Finite posets and finite topologies stored as closed order relations.

A finite topology is the same thing as a quasi-order (reflexive, transitive);
a poset is a T0 topology, i.e. a quasi-order that is also antisymmetric.
Both are represented by :class:`Topology`.  Row ``i`` of the relation is kept
as a bitmask ``up[i]`` whose bit ``j`` is set iff ``i <= j``.

Open sets of the topology are the upper sets of the quasi-order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence


class OrderError(ValueError):
    """Raised when a relation is not a valid quasi-order / partial order."""


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def _close(up: list[int]) -> list[int]:
    # Warshall on bitmask rows
    n = len(up)
    up = list(up)
    for k in range(n):
        bk = 1 << k
        rk = up[k]
        for i in range(n):
            if up[i] & bk:
                up[i] |= rk
    return up


def transitive_closure(rel: Sequence[Sequence[bool]]) -> list[list[bool]]:
    """Smallest transitive relation containing ``rel``.

    >>> transitive_closure([[1, 1, 0], [0, 1, 1], [0, 0, 1]])[0]
    [True, True, True]
    """
    n = len(rel)
    rows = [mask_of(j for j in range(n) if rel[i][j]) for i in range(n)]
    rows = _close(rows)
    return [[bool(rows[i] >> j & 1) for j in range(n)] for i in range(n)]


def _down_masks(up: Sequence[int]) -> tuple[int, ...]:
    down = [0] * len(up)
    for i, row in enumerate(up):
        for j in bits(row):
            down[j] |= 1 << i
    return tuple(down)


def _restrict(up: Sequence[int], mask: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Relation restricted to ``mask``, re-indexed densely, plus the index map."""
    idx = tuple(bits(mask))
    pos = {v: k for k, v in enumerate(idx)}
    out = []
    for v in idx:
        row = 0
        for w in bits(up[v] & mask):
            row |= 1 << pos[w]
        out.append(row)
    return tuple(out), idx


@dataclass(frozen=True)
class Topology:
    """A finite quasi-ordered set (equivalently a finite topological space).

    ``up[i]`` is the bitmask of elements ``j`` with ``i <= j``.  ``names`` is
    display-only and takes no part in equality or hashing.
    """

    up: tuple[int, ...]
    names: tuple[str, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.up)
        full = (1 << n) - 1
        for i, row in enumerate(self.up):
            if not row >> i & 1:
                raise OrderError(f"relation is not reflexive at {i}")
            if row & ~full:
                raise OrderError(f"row {i} refers to elements outside the carrier")
            for j in bits(row):
                if self.up[j] & ~row:
                    raise OrderError(f"relation is not transitive through {j}")
        if self.names is not None and len(self.names) != n:
            raise OrderError("names must label every element")

    # -- construction -------------------------------------------------

    @classmethod
    def from_matrix(cls, rel: Sequence[Sequence[bool]], names: Sequence[str] | None = None,
                    close: bool = True) -> "Topology":
        n = len(rel)
        rows = [mask_of(j for j in range(n) if rel[i][j]) | (1 << i) for i in range(n)]
        if close:
            rows = _close(rows)
        return cls(tuple(rows), tuple(names) if names is not None else None)

    @classmethod
    def from_relations(cls, elements: int | Sequence[str],
                       relations: Iterable[tuple]) -> "Topology":
        """Build from <=-pairs, closing reflexively and transitively.

        ``elements`` is either a count (elements are then ``0..n-1``) or a
        sequence of names, in which case relations refer to names.
        """
        if isinstance(elements, int):
            names = None
            n = elements
            index = {i: i for i in range(n)}
        else:
            names = tuple(str(e) for e in elements)
            n = len(names)
            index = {e: k for k, e in enumerate(names)}
            if len(index) != n:
                raise OrderError("duplicate element names")
        rows = [1 << i for i in range(n)]
        for a, b in relations:
            try:
                rows[index[a]] |= 1 << index[b]
            except KeyError as exc:
                raise OrderError(f"unknown element {exc.args[0]!r}") from None
        return cls(tuple(_close(rows)), names)

    # -- basic queries ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.up)

    def __len__(self) -> int:
        return len(self.up)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.up)) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        return _down_masks(self.up)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def lt(self, i: int, j: int) -> bool:
        """Strictly below: ``i <= j`` and not ``j <= i``."""
        return self.leq(i, j) and not self.leq(j, i)

    def matrix(self) -> list[list[bool]]:
        return [[self.leq(i, j) for j in range(self.n)] for i in range(self.n)]

    @cached_property
    def is_t0(self) -> bool:
        return all(self.up[i] & self.down[i] == 1 << i for i in range(self.n))

    def label(self, i: int) -> str:
        return self.names[i] if self.names is not None else str(i)

    def bag_mask(self, i: int) -> int:
        return self.up[i] & self.down[i]

    def min_mask(self) -> int:
        m = 0
        for i in range(self.n):
            if self.down[i] == self.bag_mask(i):
                m |= 1 << i
        return m

    def max_mask(self) -> int:
        m = 0
        for i in range(self.n):
            if self.up[i] == self.bag_mask(i):
                m |= 1 << i
        return m

    def restrict(self, mask: int) -> "Topology":
        rows, idx = _restrict(self.up, mask)
        names = tuple(self.names[i] for i in idx) if self.names is not None else None
        return Topology(rows, names)

    def relabel(self, perm: Sequence[int]) -> "Topology":
        """Image under the bijection ``i -> perm[i]``."""
        n = self.n
        rows = [0] * n
        for i in range(n):
            rows[perm[i]] = mask_of(perm[j] for j in bits(self.up[i]))
        names = None
        if self.names is not None:
            names = [""] * n
            for i in range(n):
                names[perm[i]] = self.names[i]
            names = tuple(names)
        return Topology(tuple(rows), names)

    def __str__(self) -> str:
        cover = ", ".join(f"{self.label(a)}<{self.label(b)}" for a, b in sorted(hasse(self)))
        kind = "Poset" if self.is_t0 else "Topology"
        eq = []
        seen = 0
        for i in range(self.n):
            b = self.bag_mask(i)
            if not seen & b and popcount(b) > 1:
                eq.append("~".join(self.label(j) for j in bits(b)))
            seen |= b
        extra = (" | " + ", ".join(eq)) if eq else ""
        return f"{kind}({self.n}: {cover}{extra})"


Poset = Topology
"""Alias used where an argument is expected to be T0."""

EMPTY = Topology(())
POINT = Topology((1,))


def poset(elements: int | Sequence[str], relations: Iterable[tuple] = ()) -> Topology:
    """Poset from <=-pairs; rejects inputs whose closure is not antisymmetric."""
    t = Topology.from_relations(elements, relations)
    if not t.is_t0:
        raise OrderError("relations close to a quasi-order with a cycle; load it as a topology")
    return t


def topology(elements: int | Sequence[str], relations: Iterable[tuple] = ()) -> Topology:
    """Finite topology (quasi-order) from <=-pairs; cycles allowed."""
    return Topology.from_relations(elements, relations)


def chain(n: int) -> Topology:
    return poset(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> Topology:
    return poset(n)


def require_poset(p: Topology) -> None:
    if not p.is_t0:
        raise OrderError("expected a poset (T0 topology)")


# -- poset-core operations ------------------------------------------------

def hasse(p: Topology) -> frozenset[tuple[int, int]]:
    """Cover pairs ``(i, j)``: ``i < j`` strictly with nothing strictly between.

    For a non-T0 input the covers are taken between elements of distinct bags.
    """
    edges = set()
    n = p.n
    for i in range(n):
        strict_up = p.up[i] & ~p.bag_mask(i)
        for j in bits(strict_up):
            between = strict_up & p.down[j] & ~p.bag_mask(j)
            if not between:
                edges.add((i, j))
    return frozenset(edges)


def min_set(p: Topology) -> frozenset[int]:
    """Minimal elements (for a topology: every member of a minimal bag)."""
    return frozenset(bits(p.min_mask()))


def max_set(p: Topology) -> frozenset[int]:
    return frozenset(bits(p.max_mask()))


def components_mask(p: Topology, mask: int | None = None) -> list[int]:
    """Connected components of the comparability graph restricted to ``mask``."""
    if mask is None:
        mask = p.full_mask
    down = p.down
    out = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= (p.up[v] | down[v]) & mask
            frontier = nxt & ~comp
            comp |= nxt
        out.append(comp)
        rest &= ~comp
    return out


def connected_components(p: Topology) -> list[frozenset[int]]:
    return [frozenset(bits(c)) for c in components_mask(p)]


def is_connected(p: Topology) -> bool:
    return p.n > 0 and len(components_mask(p)) == 1


def is_upper(p: Topology, mask: int) -> bool:
    return all(p.up[v] & ~mask == 0 for v in bits(mask))


def upper_ideal_masks(p: Topology) -> list[int]:
    return [m for m in range(1 << p.n) if is_upper(p, m)]


def upper_ideals(p: Topology) -> list[frozenset[int]]:
    """All upper sets (the open sets of the topology), including empty and full."""
    return [frozenset(bits(m)) for m in upper_ideal_masks(p)]


class Induced(NamedTuple):
    structure: Topology
    index_map: tuple[int, ...]


def induced(p: Topology, subset: Iterable[int]) -> Induced:
    """Restriction to ``subset``; ``index_map[k]`` is the original index of new element ``k``."""
    mask = mask_of(subset)
    if mask & ~p.full_mask:
        raise IndexError("subset is not contained in the carrier")
    rows, idx = _restrict(p.up, mask)
    names = tuple(p.names[i] for i in idx) if p.names is not None else None
    return Induced(Topology(rows, names), idx)


def order_reverse(p: Topology) -> Topology:
    return Topology(p.down, p.names)


class BagQuotient(NamedTuple):
    bags: list[frozenset[int]]
    quotient: Topology
    bag_of: tuple[int, ...]


def bags_and_quotient(t: Topology) -> BagQuotient:
    """Equivalence classes of ``x <= y <= x`` and the induced poset on them."""
    order: list[int] = []
    bag_of = [-1] * t.n
    for i in range(t.n):
        if bag_of[i] < 0:
            b = t.bag_mask(i)
            for j in bits(b):
                bag_of[j] = len(order)
            order.append(b)
    rows = []
    for b in order:
        rep = (b & -b).bit_length() - 1
        rows.append(mask_of(bag_of[j] for j in bits(t.up[rep])))
    return BagQuotient([frozenset(bits(b)) for b in order], Topology(tuple(rows)), tuple(bag_of))


def graft_at(p: Topology, v: int, q: Topology) -> Topology:
    """Graft ``p`` onto vertex ``v`` of ``q``: new covers from ``v`` to every minimal element of ``p``.

    The elements of ``q`` keep their indices; those of ``p`` are shifted by ``len(q)``.
    """
    if not 0 <= v < q.n:
        raise IndexError(f"vertex {v} is not an element of the base structure")
    nq = q.n
    p_all = p.full_mask << nq
    rows = []
    for x in range(nq):
        row = q.up[x]
        if q.up[x] >> v & 1:
            row |= p_all
        rows.append(row)
    rows.extend(r << nq for r in p.up)
    names = None
    if p.names is not None or q.names is not None:
        names = tuple(q.label(i) for i in range(nq)) + tuple(p.label(i) for i in range(p.n))
        if len(set(names)) != len(names):
            names = None
    return Topology(tuple(rows), names)


def disjoint_union(p: Topology, q: Topology) -> Topology:
    rows = list(p.up) + [r << p.n for r in q.up]
    return Topology(tuple(rows))
