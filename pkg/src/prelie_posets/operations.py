"""Graftings, pre-Lie and NAP products, NAP coproduct, and the identity checkers.

Operations come in two flavours.  The structure-level functions take labelled
:class:`~prelie_posets.structures.Topology` values; the ``*_lin`` functions take
formal sums over class keys and are the bilinear extensions used to state the
identities.  Class-level results are memoised by key.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Literal

from .canon import UNIT, ClassKey, class_key, pair, sigma
from .linear import (
    FormalSum,
    TensorSum,
    extend_bilinear,
    extend_linear,
    flip12,
    map_slot,
    tensor,
)
from .structures import (
    EMPTY,
    Topology,
    bits,
    components_mask,
    graft_at,
    is_connected,
    order_reverse,
    popcount,
    require_poset,
    upper_ideal_masks,
)

__all__ = [
    "graft_at", "prelie", "nap_product", "Branch", "branches", "nap_coproduct",
    "prelie_up", "nap_product_up", "nap_coproduct_down", "lie_bracket",
    "ck_coproduct", "searrow_coproduct", "compatibility_check", "nap_coassoc_check",
    "nap_alg_check", "prelie_check", "jacobi_check", "duality_check", "filtration_grade",
    "LawResult", "DualityResult",
]


def _key(x: Topology | ClassKey) -> ClassKey:
    return x if isinstance(x, ClassKey) else class_key(x)


def _struct(x: Topology | ClassKey) -> Topology:
    return x.structure() if isinstance(x, ClassKey) else x


def _require_connected(*ts: Topology) -> None:
    for t in ts:
        if not is_connected(t):
            raise ValueError("operation is defined on nonempty connected structures")


# -- products -------------------------------------------------------------

def prelie(p: Topology, q: Topology) -> FormalSum:
    """Sum of ``p`` grafted at every vertex of ``q``."""
    if q.n == 0 or p.n == 0:
        raise ValueError("grafting with the empty structure is not defined here")
    acc: dict = {}
    for v in range(q.n):
        k = class_key(graft_at(p, v, q))
        acc[k] = acc.get(k, 0) + 1
    return FormalSum(acc)


def nap_product(p: Topology, q: Topology) -> FormalSum:
    """Sum of ``p`` grafted at every minimal vertex of ``q``."""
    if q.n == 0 or p.n == 0:
        raise ValueError("grafting with the empty structure is not defined here")
    acc: dict = {}
    for v in bits(q.min_mask()):
        k = class_key(graft_at(p, v, q))
        acc[k] = acc.get(k, 0) + 1
    return FormalSum(acc)


@lru_cache(maxsize=None)
def _prelie_k(a: ClassKey, b: ClassKey) -> FormalSum:
    return prelie(a.structure(), b.structure())


@lru_cache(maxsize=None)
def _nap_k(a: ClassKey, b: ClassKey) -> FormalSum:
    return nap_product(a.structure(), b.structure())


prelie_lin = extend_bilinear(_prelie_k)
nap_lin = extend_bilinear(_nap_k)


def prelie_up(p: Topology, q: Topology) -> FormalSum:
    """Pre-Lie product conjugated by order reversal."""
    return _reverse_sum(prelie(order_reverse(p), order_reverse(q)))


def nap_product_up(p: Topology, q: Topology) -> FormalSum:
    """NAP product conjugated by order reversal."""
    return _reverse_sum(nap_product(order_reverse(p), order_reverse(q)))


@lru_cache(maxsize=None)
def _reverse_key(k: ClassKey) -> ClassKey:
    return class_key(order_reverse(k.structure()))


def _reverse_sum(x: FormalSum) -> FormalSum:
    out: dict = {}
    for k, c in x.items():
        if isinstance(k, tuple):
            rk = tuple(_reverse_key(f) for f in k)
        else:
            rk = _reverse_key(k)
        out[rk] = out.get(rk, 0) + c
    return type(x)(out)


def lie_bracket(p: Topology, q: Topology) -> FormalSum:
    return prelie(p, q) - prelie(q, p)


def bracket_lin(x: FormalSum, y: FormalSum) -> FormalSum:
    return prelie_lin(x, y) - prelie_lin(y, x)


# -- the NAP coproduct ----------------------------------------------------

@dataclass(frozen=True)
class Branch:
    """A removable piece ``I`` hanging from the single minimal vertex ``anchor``."""

    subset: frozenset[int]
    anchor: int

    @property
    def mask(self) -> int:
        m = 0
        for v in self.subset:
            m |= 1 << v
        return m


def _lower_shadow(p: Topology, mask: int) -> int:
    """Elements outside ``mask`` lying below some element of ``mask``."""
    below = 0
    for y in bits(mask):
        below |= p.down[y]
    return below & ~mask


def branch_masks(p: Topology) -> list[tuple[int, int]]:
    """Pairs (I, anchor) with I a component of the strict up-set of a minimal anchor and I_- = {anchor}."""
    out = []
    for w in bits(p.min_mask()):
        above = p.up[w] & ~(1 << w)
        for comp in components_mask(p, above):
            if _lower_shadow(p, comp) == 1 << w:
                out.append((comp, w))
    return out


def branches(p: Topology) -> list[Branch]:
    require_poset(p)
    _require_connected(p)
    return [Branch(frozenset(bits(m)), w) for m, w in sorted(branch_masks(p))]


def nap_coproduct(p: Topology) -> TensorSum:
    """(1/|min P|) * sum over branches I of  I (x) P minus I."""
    require_poset(p)
    _require_connected(p)
    acc: dict = {}
    for comp, _ in branch_masks(p):
        key = (class_key(p.restrict(comp)), class_key(p.restrict(p.full_mask & ~comp)))
        acc[key] = acc.get(key, 0) + 1
    return TensorSum(acc) * Fraction(1, popcount(p.min_mask()))


@lru_cache(maxsize=None)
def _delta_k(k: ClassKey) -> TensorSum:
    return nap_coproduct(k.structure())


delta_lin = extend_linear(_delta_k)


def nap_coproduct_down(p: Topology) -> TensorSum:
    """(rev (x) rev) . delta . rev"""
    return _reverse_sum(nap_coproduct(order_reverse(p)))


# -- coassociative coproducts ----------------------------------------------

def ck_coproduct(p: Topology) -> TensorSum:
    """Sum over upper ideals I of  P|(P minus I) (x) P|I.

    The slot orientation (complement on the left, ideal on the right) is a
    convention; the empty ideal gives ``P (x) 1``.
    """
    acc: dict = {}
    full = p.full_mask
    for m in upper_ideal_masks(p):
        key = (class_key(p.restrict(full & ~m)), class_key(p.restrict(m)))
        acc[key] = acc.get(key, 0) + 1
    return TensorSum(acc)


Admissibility = Literal["graft", "literal"]


def _admissible_graft(t: Topology, y: int) -> bool:
    # each component C of T|Y hangs off one bag x of X-Y: every c in C sees exactly down(x) outside Y
    for comp in components_mask(t, y):
        shadow = _lower_shadow(t, comp)
        if not shadow:
            continue
        tops = [x for x in bits(shadow) if t.down[x] == shadow & t.down[x] and shadow & ~t.down[x] == 0]
        if not tops:
            return False
        x = tops[0]
        mins = t.restrict(comp).min_mask()
        comp_idx = list(bits(comp))
        for k in bits(mins):
            if not t.leq(x, comp_idx[k]):
                return False
    return True


def _admissible_literal(t: Topology, y: int) -> bool:
    tmin = t.min_mask()
    rest = t.full_mask & ~y
    for comp in components_mask(t, y):
        sub = t.restrict(comp)
        comp_idx = list(bits(comp))
        mins = 0
        for k in bits(sub.min_mask()):
            mins |= 1 << comp_idx[k]
        if mins == tmin & comp:
            continue
        common = rest
        for m in bits(mins):
            common &= t.down[m]
        maximal_bags = {t.bag_mask(x) for x in bits(common)
                        if not (t.up[x] & common & ~t.bag_mask(x))}
        if len(maximal_bags) != 1:
            return False
    return True


def searrow_coproduct(t: Topology, admissibility: Admissibility = "graft") -> TensorSum:
    """Sum over admissible open sets Y of  T|Y (x) T|(X minus Y).

    ``"graft"`` admits Y when T is recovered by grafting every component of
    T|Y onto a single vertex of T|(X minus Y) (or leaving it unattached).
    ``"literal"`` uses the condition word for word: each component either has
    only minimal elements of T as its minima, or its minima have a unique
    maximal common lower bag outside Y.  Only ``"graft"`` is coassociative.
    """
    check = _admissible_graft if admissibility == "graft" else _admissible_literal
    acc: dict = {}
    full = t.full_mask
    for y in upper_ideal_masks(t):
        if check(t, y):
            key = (class_key(t.restrict(y)), class_key(t.restrict(full & ~y)))
            acc[key] = acc.get(key, 0) + 1
    return TensorSum(acc)


def coassociativity_residual(coproduct: Callable[[ClassKey], TensorSum], k: ClassKey) -> TensorSum:
    """(D (x) id) D - (id (x) D) D on a class, with D(1) = 1 (x) 1."""
    def d(key: ClassKey) -> TensorSum:
        if key == UNIT:
            return TensorSum({(UNIT, UNIT): 1})
        return coproduct(key)
    first = d(k)
    return map_slot(d, first, 0) - map_slot(d, first, 1)


# -- law checkers ---------------------------------------------------------

@dataclass(frozen=True)
class LawResult:
    holds: bool
    residual: FormalSum

    def __bool__(self) -> bool:
        return self.holds


def _law(residual: FormalSum) -> LawResult:
    return LawResult(not residual, residual)


def _graft_left(a: ClassKey) -> Callable[[ClassKey], FormalSum]:
    # x -> A grafted onto x, as a linear map on the class basis
    return lambda x: _prelie_k(a, x)


def compatibility_residual(p: ClassKey, q: ClassKey,
                           delta: Callable[[ClassKey], TensorSum] = _delta_k,
                           graft: Callable[[ClassKey, ClassKey], FormalSum] = _prelie_k) -> TensorSum:
    """delta(P -> Q) - P (x) Q - (P (x) 1 + 1 (x) P) -> delta(Q)."""
    lhs = extend_linear(delta)(graft(p, q))
    dq = delta(q)
    left = map_slot(lambda x: graft(p, x), dq, 0)
    right = map_slot(lambda x: graft(p, x), dq, 1)
    return lhs - TensorSum({(p, q): 1}) - left - right


def compatibility_check(p: Topology, q: Topology) -> LawResult:
    """delta(P -> Q) = P (x) Q + (P (x) 1 + 1 (x) P) -> delta(Q)."""
    require_poset(p)
    require_poset(q)
    _require_connected(p, q)
    return _law(compatibility_residual(class_key(p), class_key(q)))


def nap_coassoc_residual(k: ClassKey, delta: Callable[[ClassKey], TensorSum] = _delta_k) -> TensorSum:
    lhs = map_slot(delta, delta(k), 1)
    return lhs - flip12(lhs)


def nap_coassoc_check(p: Topology) -> LawResult:
    """(Id (x) delta) delta = tau12 (Id (x) delta) delta."""
    require_poset(p)
    _require_connected(p)
    return _law(nap_coassoc_residual(class_key(p)))


def nap_alg_residual(p: ClassKey, q: ClassKey, r: ClassKey,
                     nap: Callable[[ClassKey, ClassKey], FormalSum] = _nap_k) -> FormalSum:
    lin = extend_bilinear(nap)
    bp, bq, br = FormalSum.basis(p), FormalSum.basis(q), FormalSum.basis(r)
    return lin(bp, lin(bq, br)) - lin(bq, lin(bp, br))


def nap_alg_check(p: Topology, q: Topology, r: Topology) -> LawResult:
    """P . (Q . R) = Q . (P . R) for the NAP product."""
    _require_connected(p, q, r)
    return _law(nap_alg_residual(_key(p), _key(q), _key(r)))


def prelie_residual(p: ClassKey, q: ClassKey, r: ClassKey,
                    graft: Callable[[ClassKey, ClassKey], FormalSum] = _prelie_k) -> FormalSum:
    """Left pre-Lie associator difference (x>y)>z - x>(y>z) - (y>x)>z + y>(x>z)."""
    lin = extend_bilinear(graft)
    bp, bq, br = FormalSum.basis(p), FormalSum.basis(q), FormalSum.basis(r)
    return (lin(lin(bp, bq), br) - lin(bp, lin(bq, br))
            - lin(lin(bq, bp), br) + lin(bq, lin(bp, br)))


def prelie_check(p: Topology, q: Topology, r: Topology) -> LawResult:
    _require_connected(p, q, r)
    return _law(prelie_residual(_key(p), _key(q), _key(r)))


def jacobi_residual(p: ClassKey, q: ClassKey, r: ClassKey) -> FormalSum:
    bp, bq, br = FormalSum.basis(p), FormalSum.basis(q), FormalSum.basis(r)
    return (bracket_lin(bracket_lin(bp, bq), br) + bracket_lin(bracket_lin(bq, br), bp)
            + bracket_lin(bracket_lin(br, bp), bq))


def jacobi_check(p: Topology, q: Topology, r: Topology) -> LawResult:
    _require_connected(p, q, r)
    return _law(jacobi_residual(_key(p), _key(q), _key(r)))


@dataclass(frozen=True)
class DualityResult:
    lhs: Fraction
    rhs: Fraction
    equal: bool


def duality_check(p: Topology, q: Topology, r: Topology) -> DualityResult:
    """<delta(P), Q (x) R> against <P, Q . R> / |min P|."""
    require_poset(p)
    _require_connected(p, q, r)
    kp, kq, kr = class_key(p), class_key(q), class_key(r)
    lhs = pair(_delta_k(kp), TensorSum({(kq, kr): 1}))
    rhs = pair(FormalSum({kp: 1}), _nap_k(kq, kr)) / popcount(p.min_mask())
    return DualityResult(lhs, rhs, lhs == rhs)


# -- the coradical-type filtration ------------------------------------------

def _filtration_spaces(max_grade: int, upto: int, domain: Callable[[int], list[ClassKey]],
                       delta: Callable[[ClassKey], TensorSum]):
    from .linear import Subspace, kernel_basis, preimage

    spaces: dict[tuple[int, int], list[FormalSum]] = {}
    for a in range(1, max_grade + 1):
        spaces[(1, a)] = kernel_basis(domain(a), delta)
    for k in range(2, upto + 1):
        for a in range(1, max_grade + 1):
            vecs = []
            for j in range(1, k):
                for a1 in range(1, a):
                    left = spaces[(j, a1)]
                    right = spaces[(k - j, a - a1)]
                    vecs.extend(tensor(u, w) for u in left for w in right)
            spaces[(k, a)] = preimage(domain(a), delta, Subspace(vecs))
    return spaces


def filtration_grade(x: FormalSum, delta: Callable[[ClassKey], TensorSum] = _delta_k) -> int:
    """Least k with delta(x) in sum over 0<j<k of V_j (x) V_(k-j); 1 iff x is primitive."""
    from .enumeration import connected_keys
    from .linear import Subspace

    g = x.grade()
    if g is None:
        if not x:
            return 1
        raise ValueError("filtration_grade needs a homogeneous element")
    if not extend_linear(delta)(x):
        return 1
    spaces = _filtration_spaces(g, g, connected_keys, delta)
    for k in range(2, g + 1):
        if Subspace(spaces[(k, g)]).contains(x):
            return k
    raise ArithmeticError("element lies outside the filtration; the coalgebra is not connected here")


def as_sum(x: Topology | ClassKey | FormalSum) -> FormalSum:
    if isinstance(x, FormalSum):
        return x
    return FormalSum.basis(_key(x))
