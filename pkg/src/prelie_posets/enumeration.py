"""Isomorphism-class tables of posets and topologies, primitives, and count reports."""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from pathlib import Path

from .canon import ClassKey, class_key, sigma
from .linear import FormalSum, kernel_basis
from .structures import Topology, _close, bits, is_connected, upper_ideal_masks

FORMAT_VERSION = 1
MAX_POSET_N = 7
MAX_TOPOLOGY_N = 5
CACHE_ENV = "PRELIE_CACHE_DIR"


@dataclass(frozen=True)
class ClassRow:
    key: ClassKey
    sigma: int
    connected: bool

    @property
    def structure(self) -> Topology:
        return self.key.structure()


@dataclass(frozen=True)
class ClassTable:
    kind: str
    n: int
    rows: tuple[ClassRow, ...]

    @property
    def keys(self) -> list[ClassKey]:
        return [r.key for r in self.rows]

    @property
    def connected(self) -> list[ClassKey]:
        return [r.key for r in self.rows if r.connected]

    @property
    def labeled_count(self) -> int:
        """Number of labelled structures on n points, by orbit counting."""
        f = factorial(self.n)
        total = 0
        for r in self.rows:
            q, rem = divmod(f, r.sigma)
            if rem:
                raise ArithmeticError("symmetry factor does not divide n!")
            total += q
        return total

    def counts(self) -> dict[str, int]:
        return {"classes": len(self.rows), "connected": len(self.connected),
                "labeled": self.labeled_count}


def _extend_poset(t: Topology):
    """All posets obtained by adding one new maximal element over a down-closed set."""
    n = t.n
    full = t.full_mask
    new = 1 << n
    for upper in upper_ideal_masks(t):
        below = full & ~upper
        rows = [r | new if below >> i & 1 else r for i, r in enumerate(t.up)]
        rows.append(new)
        yield Topology(tuple(rows))


def _extend_topology(t: Topology):
    yield from _extend_poset(t)
    n = t.n
    new = 1 << n
    for x in range(n):
        if t.bag_mask(x) & ((1 << x) - 1):
            continue  # one clone per bag suffices
        rows = [r | new if r >> x & 1 else r for r in t.up]
        rows.append(t.up[x] | new)
        yield Topology(tuple(rows))


def _cache_path(kind: str, n: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"{kind}-n{n}-v{FORMAT_VERSION}.json"


def _table_to_json(table: ClassTable) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": table.kind,
        "n": table.n,
        "classes": [
            {"key": r.key.hex(), "sigma": r.sigma, "connected": r.connected,
             "structure": structure_json(r.structure)}
            for r in table.rows
        ],
    }


def _table_from_json(data: dict) -> ClassTable:
    rows = tuple(ClassRow(ClassKey.from_hex(c["key"]), int(c["sigma"]), bool(c["connected"]))
                 for c in data["classes"])
    return ClassTable(data["kind"], int(data["n"]), rows)


def write_table(table: ClassTable, path: Path) -> None:
    """Atomic write: temp file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name, dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(_table_to_json(table), fh, indent=1)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def structure_json(t: Topology) -> dict:
    names = [t.label(i) for i in range(t.n)]
    rel = [[names[i], names[j]] for i in range(t.n) for j in bits(t.up[i]) if i != j]
    return {"elements": names, "relations": rel}


_lock = threading.Lock()


def _build(kind: str, n: int) -> ClassTable:
    if n == 0:
        return ClassTable(kind, 0, (ClassRow(class_key(Topology(())), 1, False),))
    prev = _table(kind, n - 1)
    extend = _extend_poset if kind == "poset" else _extend_topology
    seen: dict[ClassKey, Topology] = {}
    for row in prev.rows:
        for t in extend(row.structure):
            k = class_key(t)
            if k not in seen:
                seen[k] = t
    rows = tuple(ClassRow(k, sigma(k), is_connected(seen[k])) for k in sorted(seen))
    return ClassTable(kind, n, rows)


@lru_cache(maxsize=None)
def _table(kind: str, n: int) -> ClassTable:
    path = _cache_path(kind, n)
    if path is not None and path.exists():
        with open(path) as fh:
            data = json.load(fh)
        if data.get("format_version") == FORMAT_VERSION:
            return _table_from_json(data)
    table = _build(kind, n)
    if path is not None:
        with _lock:
            write_table(table, path)
    return table


def enumerate_posets(n: int) -> ClassTable:
    if not 1 <= n <= MAX_POSET_N:
        raise ValueError(f"poset enumeration supports 1 <= n <= {MAX_POSET_N}, got {n}")
    return _table("poset", n)


def enumerate_topologies(n: int) -> ClassTable:
    if not 1 <= n <= MAX_TOPOLOGY_N:
        raise ValueError(f"topology enumeration supports 1 <= n <= {MAX_TOPOLOGY_N}, got {n}")
    return _table("topology", n)


def connected_keys(n: int) -> list[ClassKey]:
    return enumerate_posets(n).connected


def connected_topology_keys(n: int) -> list[ClassKey]:
    return enumerate_topologies(n).connected


def labeled_bruteforce(n: int, t0: bool = True) -> tuple[int, set[ClassKey]]:
    """Filter every relation on n points (oracle for n <= 4)."""
    if n > 4:
        raise ValueError("brute-force relation filtering is limited to n <= 4")
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    count = 0
    keys = set()
    for choice in product((0, 1), repeat=len(pairs)):
        rows = [1 << i for i in range(n)]
        for (i, j), c in zip(pairs, choice):
            if c:
                rows[i] |= 1 << j
        if _close(rows) != rows:
            continue
        t = Topology(tuple(rows))
        if t0 and not t.is_t0:
            continue
        count += 1
        keys.add(class_key(t))
    return count, keys


def primitive_classes(n: int) -> list[FormalSum]:
    """Basis of the kernel of the NAP coproduct on connected posets with n elements."""
    from .operations import _delta_k
    return kernel_basis(connected_keys(n), _delta_k)


def primitive_counts(max_n: int) -> list[int]:
    return [len(primitive_classes(n)) for n in range(1, max_n + 1)]


def counts_report(max_n: int) -> list[dict]:
    from .trees import decorated_tree_counts

    prims = primitive_counts(max_n)
    rows = []
    for n in range(1, max_n + 1):
        table = enumerate_posets(n)
        decorated = decorated_tree_counts(prims[:n], n)[n - 1]
        rows.append({
            "n": n,
            "classes": len(table.rows),
            "connected": len(table.connected),
            "labeled": table.labeled_count,
            "primitives": prims[n - 1],
            "decorated_trees": decorated,
            "residual": decorated - len(table.connected),
        })
    return rows


def orbit_count_check(table: ClassTable) -> Fraction:
    """Sum of 1/sigma over classes, times n!; equals the labelled count."""
    return sum((Fraction(1, r.sigma) for r in table.rows), Fraction(0)) * factorial(table.n)
