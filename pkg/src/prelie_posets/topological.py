"""NAP coproduct and duality on finite connected topologies (quasi-orders).

Branches are open sets hanging from one minimal bag.  The coproduct is
normalised by the number of minimal *elements* by default; ``"bags"``
normalisation is available so the two readings can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Literal

from .canon import ClassKey, automorphisms, class_key, pair, sigma
from .linear import FormalSum, TensorSum
from .operations import (
    LawResult,
    _law,
    _nap_k,
    _prelie_k,
    _require_connected,
    compatibility_residual,
    nap_coassoc_residual,
)
from .structures import Topology, bags_and_quotient, bits, components_mask, graft_at, popcount

Normalization = Literal["elements", "bags"]


@dataclass(frozen=True)
class TopBranch:
    subset: frozenset[int]
    anchor_bag: frozenset[int]


def _strictly_above_all(t: Topology, low: int) -> int:
    """{x : for all y in low, y <= x and not x <= y}."""
    out = t.full_mask
    for y in bits(low):
        out &= t.up[y] & ~t.down[y]
    return out


def top_branch_masks(t: Topology) -> list[tuple[int, int]]:
    out = []
    seen = 0
    for w in bits(t.min_mask()):
        if seen >> w & 1:
            continue
        bag = t.bag_mask(w)
        seen |= bag
        for comp in components_mask(t, _strictly_above_all(t, bag)):
            low = 0
            for y in bits(comp):
                low |= t.down[y]
            if low & ~comp == bag:
                out.append((comp, bag))
    return out


def top_branches(t: Topology) -> list[TopBranch]:
    _require_connected(t)
    return [TopBranch(frozenset(bits(c)), frozenset(bits(b))) for c, b in sorted(top_branch_masks(t))]


def top_branches_bruteforce(t: Topology) -> list[TopBranch]:
    """Every subset Y checked against the definition directly (oracle)."""
    out = []
    for y in range(1, 1 << t.n):
        low = 0
        for v in bits(y):
            low |= t.down[v]
        low &= ~y
        if not low:
            continue
        w = (low & -low).bit_length() - 1
        bag = t.bag_mask(w)
        if low & ~bag or not (t.min_mask() >> w & 1):
            continue
        region = _strictly_above_all(t, low)
        if y & ~region:
            continue
        if any(c == y for c in components_mask(t, region)):
            out.append(TopBranch(frozenset(bits(y)), frozenset(bits(low))))
    return sorted(out, key=lambda b: sorted(b.subset))


def min_count(t: Topology, normalization: Normalization = "elements") -> int:
    if normalization == "elements":
        return popcount(t.min_mask())
    return len({t.bag_mask(v) for v in bits(t.min_mask())})


def top_nap_coproduct(t: Topology, normalization: Normalization = "elements") -> TensorSum:
    """(1/|min T|) * sum over branches Y of  T|Y (x) T|(X minus Y)."""
    _require_connected(t)
    acc: dict = {}
    for comp, _ in top_branch_masks(t):
        key = (class_key(t.restrict(comp)), class_key(t.restrict(t.full_mask & ~comp)))
        acc[key] = acc.get(key, 0) + 1
    return TensorSum(acc) * Fraction(1, min_count(t, normalization))


@lru_cache(maxsize=None)
def _top_delta_k(k: ClassKey, normalization: Normalization = "elements") -> TensorSum:
    return top_nap_coproduct(k.structure(), normalization)


def _top_delta_bags(k: ClassKey) -> TensorSum:
    return _top_delta_k(k, "bags")


def top_nap_coassoc_check(t: Topology, normalization: Normalization = "elements") -> LawResult:
    _require_connected(t)
    delta = _top_delta_k if normalization == "elements" else _top_delta_bags
    return _law(nap_coassoc_residual(class_key(t), delta))


def top_compat_check(t1: Topology, t2: Topology, normalization: Normalization = "elements") -> LawResult:
    _require_connected(t1, t2)
    delta = _top_delta_k if normalization == "elements" else _top_delta_bags
    return _law(compatibility_residual(class_key(t1), class_key(t2), delta, _prelie_k))


@dataclass(frozen=True)
class TopDualityResult:
    lhs: Fraction
    rhs: Fraction
    n: Fraction | None
    equal: bool
    uniform_bag_size: bool | None = None


def top_duality_check(t: Topology, t1: Topology, t2: Topology) -> TopDualityResult:
    """<delta(T), T' (x) T''> against <T, T' . T''> / (n |min T|).

    ``n = |B| / |C|`` where B counts (minimal vertex v, isomorphism T -> T' grafted
    at v) and C counts (minimal bag, isomorphism).  When no grafting matches,
    ``n`` is ``None`` and both sides must vanish.
    """
    _require_connected(t, t1, t2)
    k, k1, k2 = class_key(t), class_key(t1), class_key(t2)
    lhs = pair(_top_delta_k(k), TensorSum({(k1, k2): 1}))
    s = sigma(k)
    b_count = 0
    matching_bags = []
    seen = 0
    for v in bits(t2.min_mask()):
        match = class_key(graft_at(t1, v, t2)) == k
        if match:
            b_count += s
        bag = t2.bag_mask(v)
        if not seen & bag:
            seen |= bag
            if match:
                matching_bags.append(popcount(bag))
    c_count = s * len(matching_bags)
    bracket = pair(FormalSum({k: 1}), _nap_k(k1, k2))
    if not c_count:
        return TopDualityResult(lhs, Fraction(0), None, lhs == 0 and bracket == 0)
    n = Fraction(b_count, c_count)
    rhs = bracket / (n * min_count(t))
    return TopDualityResult(lhs, rhs, n, lhs == rhs, len(set(matching_bags)) == 1)


# -- automorphisms of the quotient ----------------------------------------

@dataclass(frozen=True)
class QuotientGroupOrders:
    aut: int
    bag_fixing: int
    quotient_plain: int
    quotient_colored: int


def quotient_group_orders(t: Topology) -> QuotientGroupOrders:
    """|Aut(T)|, |G| (bag-fixing subgroup), and |Aut| of the quotient with and without bag sizes."""
    bq = bags_and_quotient(t)
    g = 1
    for b in bq.bags:
        g *= factorial(len(b))
    qa = automorphisms(bq.quotient)
    sizes = [len(b) for b in bq.bags]
    colored = sum(1 for perm in qa.elements if all(sizes[perm[i]] == sizes[i] for i in range(len(sizes))))
    return QuotientGroupOrders(automorphisms(t).order, g, qa.order, colored)
