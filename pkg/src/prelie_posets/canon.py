"""Isomorphism classes, automorphism groups, symmetry factors and the pairing.

Canonical forms are computed on the bag quotient of a topology, with bag sizes
as vertex colours: two finite topologies are homeomorphic iff their coloured
quotient posets are isomorphic.  The coloured poset is canonised by partition
refinement followed by a backtracking search over the remaining cells.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Hashable, Iterable, Sequence

from .structures import (
    Topology,
    bags_and_quotient,
    bits,
    graft_at,
    mask_of,
    popcount,
)

_KIND_POSET = ord("P")
_KIND_TOPOLOGY = ord("T")


@dataclass(frozen=True, order=True)
class ClassKey:
    """Canonical identifier of a homeomorphism (isomorphism) class.

    Orders by vertex count first, then by the canonical byte string, which
    gives a deterministic sort order for reports.
    """

    n: int
    code: bytes

    def hex(self) -> str:
        return self.code.hex()

    @classmethod
    def from_hex(cls, text: str) -> "ClassKey":
        code = bytes.fromhex(text)
        if len(code) < 3 or code[0] not in (_KIND_POSET, _KIND_TOPOLOGY):
            raise ValueError(f"not a class key: {text!r}")
        _split_code(code)
        return cls(code[1], code)

    @property
    def is_t0(self) -> bool:
        return self.code[0] == _KIND_POSET

    def structure(self) -> Topology:
        """A canonical representative of the class."""
        return _decode(self.code)

    def __repr__(self) -> str:
        return f"ClassKey({self.n}:{self.code[2:].hex()})"


def _refine(cells: list[list[int]], upm: Sequence[int], dnm: Sequence[int]) -> list[list[int]]:
    while True:
        cellmasks = [mask_of(c) for c in cells]
        out: list[list[int]] = []
        changed = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {
                v: tuple((popcount(upm[v] & cm), popcount(dnm[v] & cm)) for cm in cellmasks)
                for v in c
            }
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                out.append(c)
                continue
            changed = True
            for k in keys:
                out.append([v for v in c if sig[v] == k])
        cells = out
        if not changed:
            return cells


def _initial_cells(colors: Sequence[int], upm: Sequence[int], dnm: Sequence[int]) -> list[list[int]]:
    inv = {v: (colors[v], popcount(dnm[v]), popcount(upm[v])) for v in range(len(colors))}
    return [[v for v in range(len(colors)) if inv[v] == k] for k in sorted(set(inv.values()))]


def _canon_colored(colors: tuple[int, ...], upm: tuple[int, ...]) -> tuple[tuple[int, ...], list[int]]:
    """Canonical row code and vertex order of a coloured strict order ``upm``."""
    m = len(upm)
    dnm = [0] * m
    for i in range(m):
        for j in bits(upm[i]):
            dnm[j] |= 1 << i

    def twins(a: int, b: int) -> bool:
        ab = (1 << a) | (1 << b)
        if upm[a] & ab or upm[b] & ab:
            return False
        return upm[a] == upm[b] and dnm[a] == dnm[b]

    best: list = [None, None]

    def leaf(cells: list[list[int]]) -> None:
        order = [c[0] for c in cells]
        pos = [0] * m
        for k, v in enumerate(order):
            pos[v] = k
        code = tuple(mask_of(pos[w] for w in bits(upm[v])) for v in order)
        if best[0] is None or code < best[0]:
            best[0] = code
            best[1] = order

    def search(cells: list[list[int]]) -> None:
        cells = _refine(cells, upm, dnm)
        target = next((t for t, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            leaf(cells)
            return
        cell = cells[target]
        tried: list[int] = []
        for v in cell:
            if any(twins(v, w) for w in tried):
                continue
            tried.append(v)
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search(_initial_cells(colors, upm, dnm))
    return best[0], best[1]


@lru_cache(maxsize=None)
def _canonical(up: tuple[int, ...]) -> tuple[ClassKey, tuple[int, ...]]:
    t = Topology(up)
    n = t.n
    bq = bags_and_quotient(t)
    m = len(bq.bags)
    colors = tuple(len(b) for b in bq.bags)
    strict = tuple(bq.quotient.up[i] & ~(1 << i) for i in range(m))
    code_rows, order = _canon_colored(colors, strict) if m else ((), [])
    ordered_colors = [colors[b] for b in order]
    kind = _KIND_POSET if all(c == 1 for c in colors) else _KIND_TOPOLOGY
    width = _row_width(m)
    code = bytes([kind, n, m, *ordered_colors]) + b"".join(r.to_bytes(width, "little") for r in code_rows)
    perm = [0] * n
    k = 0
    for b in order:
        for v in sorted(bq.bags[b]):
            perm[v] = k
            k += 1
    return ClassKey(n, code), tuple(perm)


def _row_width(m: int) -> int:
    return max(1, (m + 7) // 8)


def _split_code(code: bytes) -> tuple[int, int, bytes, tuple[int, ...]]:
    """(n, m, bag sizes, strict quotient rows) from a key's bytes."""
    n, m = code[1], code[2]
    colors = code[3:3 + m]
    width = _row_width(m)
    body = code[3 + m:]
    if len(colors) != m or len(body) != width * m or sum(colors) != n:
        raise ValueError("corrupt class key")
    rows = tuple(int.from_bytes(body[i * width:(i + 1) * width], "little") for i in range(m))
    return n, m, colors, rows


@lru_cache(maxsize=None)
def _decode(code: bytes) -> Topology:
    n, m, colors, rows = _split_code(code)
    start = []
    k = 0
    for c in colors:
        start.append(k)
        k += c
    bag_mask = [((1 << colors[b]) - 1) << start[b] for b in range(m)]
    up = [0] * n
    for b in range(m):
        row = bag_mask[b]
        for c in bits(rows[b]):
            row |= bag_mask[c]
        for v in range(start[b], start[b] + colors[b]):
            up[v] = row
    return Topology(tuple(up))


def canonical_form(t: Topology) -> tuple[ClassKey, tuple[int, ...]]:
    """Class key and a relabelling ``perm`` with ``t.relabel(perm) == key.structure()``."""
    return _canonical(t.up)


def class_key(t: Topology) -> ClassKey:
    return _canonical(t.up)[0]


UNIT = class_key(Topology(()))
"""Key of the empty structure, the unit ``1``."""


def isomorphism(src: Topology, dst: Topology) -> tuple[int, ...] | None:
    """A homeomorphism ``src -> dst`` as an index map, or ``None``."""
    k1, p1 = canonical_form(src)
    k2, p2 = canonical_form(dst)
    if k1 != k2:
        return None
    c1 = k1.structure()
    if src.relabel(p1) != c1 or dst.relabel(p2) != c1:
        raise AssertionError("canonical relabelling does not reproduce the representative")
    inv2 = [0] * len(p2)
    for i, x in enumerate(p2):
        inv2[x] = i
    return tuple(inv2[p1[i]] for i in range(len(p1)))


def _full_code(up: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    n = len(up)
    rows = [0] * n
    for i in range(n):
        rows[perm[i]] = mask_of(perm[j] for j in bits(up[i]))
    return tuple(rows)


def canonical_form_bruteforce(t: Topology) -> tuple[int, ...]:
    """Lexicographically least relation code over all relabellings (oracle, small n)."""
    if t.n > 7:
        raise ValueError("brute-force canonisation is limited to 7 elements")
    return min(_full_code(t.up, p) for p in itertools.permutations(range(t.n)))


# -- automorphisms --------------------------------------------------------

@dataclass(frozen=True)
class PermGroupData:
    """Automorphism group listed element by element, with orbits and stabilisers."""

    elements: tuple[tuple[int, ...], ...]
    generators: tuple[tuple[int, ...], ...]
    orbits: tuple[frozenset[int], ...]
    stabilizer_orders: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def orbit_of(self, v: int) -> frozenset[int]:
        return next(o for o in self.orbits if v in o)

    def orbit_index(self, v: int) -> int:
        return next(k for k, o in enumerate(self.orbits) if v in o)


def _compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    # (a o b)(i) = a[b[i]]
    return tuple(a[i] for i in b)


def _closure(gens: Iterable[tuple[int, ...]], n: int) -> set[tuple[int, ...]]:
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    gens = list(gens)
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _compose(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def _enumerate_isos(src: Topology, dst: Topology) -> list[tuple[int, ...]]:
    n = src.n
    if dst.n != n:
        return []
    # invariant colouring of elements, refined; images must stay in matching cells
    def cells_of(t: Topology) -> list[list[int]]:
        upm = [t.up[i] & ~(1 << i) for i in range(n)]
        dnm = [t.down[i] & ~(1 << i) for i in range(n)]
        colors = [popcount(t.bag_mask(i)) for i in range(n)]
        return _refine(_initial_cells(colors, upm, dnm), upm, dnm)

    if src is dst or src.up == dst.up:
        cs = cd = cells_of(src)
    else:
        cs, cd = cells_of(src), cells_of(dst)
    if len(cs) != len(cd) or any(len(a) != len(b) for a, b in zip(cs, cd)):
        return []
    cell_index = {}
    for k, c in enumerate(cs):
        for v in c:
            cell_index[v] = k
    order = [v for c in cs for v in c]
    out: list[tuple[int, ...]] = []
    image = [-1] * n
    used = [False] * n

    def extend(depth: int) -> None:
        if depth == n:
            out.append(tuple(image))
            return
        x = order[depth]
        for y in cd[cell_index[x]]:
            if used[y]:
                continue
            ok = True
            for a in order[:depth]:
                fa = image[a]
                if src.leq(a, x) != dst.leq(fa, y) or src.leq(x, a) != dst.leq(y, fa):
                    ok = False
                    break
            if ok:
                image[x] = y
                used[y] = True
                extend(depth + 1)
                used[y] = False
                image[x] = -1

    extend(0)
    return out


class _Memo:
    """Lookup-or-compute table; one writer at a time."""

    def __init__(self, fn: Callable[[Hashable], object]):
        self._fn = fn
        self._table: dict = {}
        self._lock = threading.Lock()

    def __call__(self, key):
        with self._lock:
            if key in self._table:
                return self._table[key]
            value = self._fn(key)
            self._table[key] = value
            return value


def _group_data(up: tuple[int, ...]) -> PermGroupData:
    t = Topology(up)
    n = t.n
    elements = sorted(_enumerate_isos(t, t))
    gens: list[tuple[int, ...]] = []
    generated = {tuple(range(n))}
    for g in elements:
        if g not in generated:
            gens.append(g)
            generated = _closure(gens, n)
    orbits: list[frozenset[int]] = []
    seen = 0
    for v in range(n):
        if seen >> v & 1:
            continue
        orb = frozenset(g[v] for g in elements)
        orbits.append(orb)
        seen |= mask_of(orb)
    stab = tuple(sum(1 for g in elements if g[v] == v) for v in range(n))
    return PermGroupData(tuple(elements), tuple(gens), tuple(orbits), stab)


_group_memo = _Memo(_group_data)


def automorphisms(t: Topology) -> PermGroupData:
    return _group_memo(t.up)


@lru_cache(maxsize=None)
def _sigma_of_key(key: ClassKey) -> int:
    # |Aut(T)| = |coloured Aut of the quotient| * prod(bag size!)
    _, m, colors, rows = _split_code(key.code)
    quotient = Topology(tuple(rows[i] | (1 << i) for i in range(m)))
    count = 0
    for g in _enumerate_isos(quotient, quotient):
        if all(colors[g[i]] == colors[i] for i in range(m)):
            count += 1
    for c in colors:
        count *= factorial(c)
    return count


def sigma(t: Topology | ClassKey) -> int:
    """Symmetry factor: the order of the automorphism group."""
    key = t if isinstance(t, ClassKey) else class_key(t)
    return _sigma_of_key(key)


def pairing(q: Topology | ClassKey, r: Topology | ClassKey) -> int:
    """Number of isomorphisms ``q -> r``: ``sigma(q)`` if isomorphic, else 0."""
    kq = q if isinstance(q, ClassKey) else class_key(q)
    kr = r if isinstance(r, ClassKey) else class_key(r)
    return sigma(kq) if kq == kr else 0


def pair(x, y) -> Fraction:
    """Bilinear extension of :func:`pairing` to formal sums and tensor sums.

    Tensor keys are tuples of class keys; the pairing of two tensors is the
    product of the factorwise pairings.
    """
    total = Fraction(0)
    small, large = (x, y) if len(x) <= len(y) else (y, x)
    for key, c in small.items():
        d = large.coefficient(key)
        if not d:
            continue
        factors = key if isinstance(key, tuple) else (key,)
        weight = 1
        for f in factors:
            weight *= sigma(f)
        total += c * d * weight
    return total


# -- the partition index --------------------------------------------------

def _check_partition(blocks: Sequence[Iterable[Hashable]]) -> tuple[list[frozenset], frozenset]:
    bs = [frozenset(b) for b in blocks]
    ground: set = set()
    for b in bs:
        if not b:
            raise ValueError("partition blocks must be nonempty")
        if ground & b:
            raise ValueError("partition blocks must be disjoint")
        ground |= b
    return bs, frozenset(ground)


def j_index(pi: Sequence[Iterable[Hashable]], rho: Sequence[Iterable[Hashable]]) -> Fraction:
    """(1/|E|) * sum over blocks a of pi, b of rho of |a & b| * |b| / |a|."""
    pb, e1 = _check_partition(pi)
    rb, e2 = _check_partition(rho)
    if e1 != e2:
        raise ValueError("partitions are not of the same set")
    if not e1:
        raise ValueError("undefined index: empty ground set")
    total = Fraction(0)
    for a in pb:
        for b in rb:
            inter = len(a & b)
            if inter:
                total += Fraction(inter * len(b), len(a))
    return total / len(e1)


@dataclass(frozen=True)
class OrbitIndex:
    matches: frozenset[int]
    pi: tuple[frozenset[int], ...]
    rho: tuple[frozenset[int], ...]
    value: Fraction


def grafting_orbit_partitions(p: Topology, q: Topology, r: Topology) -> OrbitIndex | None:
    """E = {v in min(R) : P ~ Q grafted at v of R} with its Aut(P)- and Aut(R)-orbit partitions.

    A vertex ``v`` of ``E`` is carried into ``P`` through an isomorphism
    ``Q grafted at v -> P``; ``pi`` groups ``E`` by the Aut(P)-orbit of that
    image, which does not depend on the isomorphism chosen.  Returns ``None``
    when no grafting matches.
    """
    if p.n != q.n + r.n:
        return None
    kp = class_key(p)
    gp = automorphisms(p)
    gr = automorphisms(r)
    orbit_id: dict[int, int] = {}
    for v in bits(r.min_mask()):
        g = graft_at(q, v, r)
        if class_key(g) != kp:
            continue
        iso = isomorphism(g, p)
        orbit_id[v] = gp.orbit_index(iso[v])
    if not orbit_id:
        return None
    e = frozenset(orbit_id)
    pi = tuple(sorted((frozenset(v for v in e if orbit_id[v] == k) for k in set(orbit_id.values())),
                      key=min))
    rho = tuple(sorted((o & e for o in gr.orbits if o & e), key=min))
    return OrbitIndex(e, pi, rho, j_index(pi, rho))


def grafting_orbit_index(p: Topology, q: Topology, r: Topology) -> Fraction | None:
    """j(pi, rho) for the grafting matches of (P, Q, R); ``None`` if there are none."""
    res = grafting_orbit_partitions(p, q, r)
    return None if res is None else res.value
