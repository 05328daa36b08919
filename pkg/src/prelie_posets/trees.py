"""Rooted trees: grafting pre-Lie product, NAP coproduct and dimension counts.

This is an independent model of the free pre-Lie algebra used to cross-check
the poset structures.  Trees are canonical nested tuples, so equal trees are
equal values.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

from .linear import FormalSum, TensorSum
from .structures import Topology


class RootedTree(NamedTuple):
    """``label`` is the decoration (grade/colour) of the root; children are sorted."""

    label: tuple = (1, 0)
    children: tuple = ()

    @property
    def n(self) -> int:
        """Total weight: sum of vertex grades."""
        return self.label[0] + sum(c.n for c in self.children)

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    def __repr__(self) -> str:
        lab = "" if self.label == (1, 0) else f"{self.label[0]}.{self.label[1]}"
        if not self.children:
            return f"B{lab}" if lab else "•"
        return f"B{lab}(" + ",".join(map(repr, self.children)) + ")"


DOT = RootedTree()


def B(*children: RootedTree, label: tuple = (1, 0)) -> RootedTree:
    return RootedTree(label, tuple(sorted(children)))


def chain_tree(n: int) -> RootedTree:
    t = DOT
    for _ in range(n - 1):
        t = B(t)
    return t


def _graft_sites(t: RootedTree, s: RootedTree) -> Iterator[RootedTree]:
    """t grafted on each vertex of s, one tree per vertex."""
    yield B(*s.children, t, label=s.label)
    for i, c in enumerate(s.children):
        rest = s.children[:i] + s.children[i + 1:]
        for g in _graft_sites(t, c):
            yield B(*rest, g, label=s.label)


@lru_cache(maxsize=None)
def tree_graft(t: RootedTree, s: RootedTree) -> FormalSum:
    """Sum over vertices s' of s of t grafted at s'."""
    acc: dict = {}
    for g in _graft_sites(t, s):
        acc[g] = acc.get(g, 0) + 1
    return FormalSum(acc)


@lru_cache(maxsize=None)
def tree_nap_coproduct(t: RootedTree) -> TensorSum:
    """delta(B(v, t1..tn)) = sum_k t_k (x) B(v, t1..^t_k..tn)."""
    acc: dict = {}
    for i, c in enumerate(t.children):
        key = (c, RootedTree(t.label, t.children[:i] + t.children[i + 1:]))
        acc[key] = acc.get(key, 0) + 1
    return TensorSum(acc)


def b_linear(label: tuple, children: Sequence[FormalSum]) -> FormalSum:
    """B(v, x1, ..., xn) extended multilinearly in the children."""
    acc: dict = {(): Fraction(1)}
    for x in children:
        nxt: dict = {}
        for kids, c in acc.items():
            for k, d in x.items():
                key = tuple(sorted(kids + (k,)))
                nxt[key] = nxt.get(key, 0) + c * d
        acc = nxt
    return FormalSum({RootedTree(label, kids): c for kids, c in acc.items()})


# -- enumeration and counting ----------------------------------------------

@lru_cache(maxsize=None)
def _trees_of_weight(n: int, gens: tuple[int, ...]) -> tuple[RootedTree, ...]:
    """All decorated trees of total weight n; a vertex of grade k takes one of gens[k-1] colours."""
    out: set[RootedTree] = set()
    for k in range(1, min(n, len(gens)) + 1):
        for colour in range(gens[k - 1]):
            for forest in _forests(n - k, gens, None):
                out.add(RootedTree((k, colour), forest))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _forests(n: int, gens: tuple[int, ...], bound: RootedTree | None) -> tuple[tuple, ...]:
    """Sorted multisets of trees of total weight n, each tree >= bound."""
    if n == 0:
        return ((),)
    out = []
    for w in range(1, n + 1):
        for t in _trees_of_weight(w, gens):
            if bound is not None and t < bound:
                continue
            for rest in _forests(n - w, gens, t):
                out.append((t,) + rest)
    return tuple(sorted(set(out)))


def rooted_trees(n: int) -> tuple[RootedTree, ...]:
    """Undecorated rooted trees with n vertices."""
    return _trees_of_weight(n, (1,))


def decorated_trees(gens: Sequence[int], n: int) -> tuple[RootedTree, ...]:
    return _trees_of_weight(n, tuple(gens))


def _euler_transform_step(a: list[int], b: list[int], m: int) -> int:
    # coefficient m of prod_k (1 - x^k)^(-a_k), given a[1..m] and b[0..m-1]
    total = 0
    for k in range(1, m + 1):
        c = sum(d * a[d] for d in range(1, k + 1) if k % d == 0)
        total += c * b[m - k]
    q, r = divmod(total, m)
    assert r == 0
    return q


def decorated_tree_counts(gens: Sequence[int], max_n: int) -> list[int]:
    """Counts of decorated rooted trees of weight 1..max_n.

    ``gens[k-1]`` is the number of generators of grade k.  Uses
    A(x) = G(x) * exp(sum_k A(x^k) / k), computed through the multiset
    (Euler) transform.
    """
    g = [0] + [int(x) for x in gens] + [0] * max(0, max_n - len(gens))
    if any(x < 0 for x in g):
        raise ValueError("generator dimensions must be nonnegative")
    a = [0] * (max_n + 1)
    b = [1] + [0] * max_n
    for n in range(1, max_n + 1):
        a[n] = sum(g[k] * b[n - k] for k in range(1, n + 1))
        b[n] = _euler_transform_step(a, b, n)
    return a[1:]


def rooted_tree_counts(max_n: int) -> list[int]:
    return decorated_tree_counts([1], max_n)


def solve_generator_dims(target: Sequence[int]) -> list[Fraction]:
    """Invert the decorated-tree count: generator dims g_k reproducing ``target`` counts."""
    gens: list[int] = []
    out: list[Fraction] = []
    for n in range(1, len(target) + 1):
        base = decorated_tree_counts(gens + [0], n)[n - 1]
        g = Fraction(target[n - 1] - base)
        out.append(g)
        gens.append(int(g) if g.denominator == 1 and g >= 0 else 0)
    return out


def tree_to_poset(t: RootedTree) -> Topology:
    """Root at the bottom; every vertex below its subtree."""
    rows: list[int] = []

    def walk(node: RootedTree) -> int:
        me = len(rows)
        rows.append(0)
        mask = 1 << me
        for c in node.children:
            first = len(rows)
            walk(c)
            mask |= ((1 << len(rows)) - 1) & ~((1 << first) - 1)
        rows[me] = mask
        return me

    walk(t)
    return Topology(tuple(rows))


class FreenessRow(NamedTuple):
    n: int
    connected: int
    primitives: int
    decorated_trees: int
    residual: int
    solved_generator: Fraction


def freeness_check(max_n: int) -> list[FreenessRow]:
    """Compare decorated-tree counts over the primitive dimensions with connected class counts.

    ``solved_generator`` is the generator dimension the counting equation
    forces at each grade given the connected counts; it must be a
    nonnegative integer equal to the primitive count.
    """
    from .enumeration import connected_keys, primitive_counts

    prims = primitive_counts(max_n)
    conn = [len(connected_keys(n)) for n in range(1, max_n + 1)]
    dec = decorated_tree_counts(prims, max_n)
    solved = solve_generator_dims(conn)
    return [FreenessRow(n, conn[n - 1], prims[n - 1], dec[n - 1], dec[n - 1] - conn[n - 1], solved[n - 1])
            for n in range(1, max_n + 1)]
