"""Exhaustive finite sweeps of the algebraic laws over isomorphism classes.

Each law declares how to list its instances, how to evaluate one, and how
many instances it expects; :func:`run_sweep` checks all of them and returns a
:class:`VerificationReport`.  Instances are tuples of hex class keys, so they
pickle cheaply for the process pool.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable

from .canon import ClassKey, grafting_orbit_index, pair
from .linear import FormalSum, TensorSum
from .enumeration import (
    MAX_POSET_N,
    MAX_TOPOLOGY_N,
    enumerate_posets,
    enumerate_topologies,
)
from .operations import (
    _delta_k,
    _nap_k,
    ck_coproduct,
    coassociativity_residual,
    compatibility_residual,
    jacobi_residual,
    nap_alg_residual,
    nap_coassoc_residual,
    nap_coproduct,
    branches,
    prelie_residual,
    searrow_coproduct,
)
from .structures import popcount
from .topological import _top_delta_k, top_branches, top_duality_check, top_nap_coproduct

KINDS = ("poset", "topology")


@dataclass
class VerificationReport:
    law: str
    kind: str
    range: dict
    instances: int
    predicted: int
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.instances == self.predicted

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


# -- instance generators ----------------------------------------------------

def _classes(kind: str, n: int, connected: bool = True) -> list[ClassKey]:
    table = enumerate_posets(n) if kind == "poset" else enumerate_topologies(n)
    return table.connected if connected else table.keys


def _limit(kind: str) -> int:
    return MAX_POSET_N if kind == "poset" else MAX_TOPOLOGY_N


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """Tuples of positive sizes with sum <= total."""
    if parts == 0:
        yield ()
        return
    for a in range(1, total - parts + 2):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def _tuples(kind: str, max_total: int, parts: int) -> list[tuple[str, ...]]:
    out = []
    for sizes in _compositions(max_total, parts):
        pools = [_classes(kind, s) for s in sizes]
        out.extend(tuple(k.hex() for k in combo) for combo in product(*pools))
    return out


def _count_tuples(kind: str, max_total: int, parts: int) -> int:
    # independent count from the class-count sequence, via a convolution
    c = [0] + [len(_classes(kind, n)) for n in range(1, max_total + 1)]
    ways = [1] + [0] * max_total
    for _ in range(parts):
        nxt = [0] * (max_total + 1)
        for s, w in enumerate(ways):
            if w:
                for a in range(1, max_total - s + 1):
                    nxt[s + a] += w * c[a]
        ways = nxt
    return sum(ways)


def _singles(kind: str, max_n: int, connected: bool = True) -> list[tuple[str, ...]]:
    return [(k.hex(),) for n in range(1, max_n + 1) for k in _classes(kind, n, connected)]


def _count_singles(kind: str, max_n: int, connected: bool = True) -> int:
    return sum(len(_classes(kind, n, connected)) for n in range(1, max_n + 1))


def _split_triples(kind: str, max_total: int) -> list[tuple[str, ...]]:
    """(P, Q, R) with |P| = |Q| + |R| <= max_total."""
    out = []
    for n in range(2, max_total + 1):
        for a in range(1, n):
            for p, q, r in product(_classes(kind, n), _classes(kind, a), _classes(kind, n - a)):
                out.append((p.hex(), q.hex(), r.hex()))
    return out


def _count_split_triples(kind: str, max_total: int) -> int:
    c = [0] + [len(_classes(kind, n)) for n in range(1, max_total + 1)]
    return sum(c[n] * c[a] * c[n - a] for n in range(2, max_total + 1) for a in range(1, n))


# -- evaluators: return None on success, else a printable residual ----------

def _keys(instance: tuple[str, ...]) -> list[ClassKey]:
    return [ClassKey.from_hex(h) for h in instance]


def _residual(r) -> str | None:
    return None if not r else repr(r)


def _eval_nap(inst, kind):
    return _residual(nap_alg_residual(*_keys(inst)))


def _eval_prelie(inst, kind):
    return _residual(prelie_residual(*_keys(inst)))


def _eval_jacobi(inst, kind):
    return _residual(jacobi_residual(*_keys(inst)))


def _delta_for(kind: str):
    return _delta_k if kind == "poset" else _top_delta_k


def _eval_nap_co(inst, kind):
    return _residual(nap_coassoc_residual(_keys(inst)[0], _delta_for(kind)))


def _eval_compat(inst, kind):
    p, q = _keys(inst)
    return _residual(compatibility_residual(p, q, _delta_for(kind)))


def _eval_duality(inst, kind):
    if kind == "poset":
        kp, kq, kr = _keys(inst)
        lhs = pair(_delta_k(kp), TensorSum({(kq, kr): 1}))
        rhs = pair(FormalSum({kp: 1}), _nap_k(kq, kr)) / popcount(kp.structure().min_mask())
    else:
        res = top_duality_check(*(k.structure() for k in _keys(inst)))
        if res.equal:
            return None
        lhs, rhs = res.lhs, res.rhs
    return None if lhs == rhs else f"lhs={lhs} rhs={rhs}"


def _eval_j_index(inst, kind):
    p, q, r = (k.structure() for k in _keys(inst))
    v = grafting_orbit_index(p, q, r)
    return None if v is None or v == 1 else f"j={v}"


def _eval_ck(inst, kind):
    k = _keys(inst)[0]
    return _residual(coassociativity_residual(lambda x: ck_coproduct(x.structure()), k))


def _eval_searrow(inst, kind):
    k = _keys(inst)[0]
    return _residual(coassociativity_residual(lambda x: searrow_coproduct(x.structure()), k))


def _eval_t0(inst, kind):
    t = _keys(inst)[0].structure()
    a = [(sorted(b.subset), sorted(b.anchor_bag)) for b in top_branches(t)]
    b = [(sorted(b.subset), [b.anchor]) for b in branches(t)]
    if a != b:
        return f"branches differ: {a} vs {b}"
    if top_nap_coproduct(t) != nap_coproduct(t):
        return "coproducts differ"
    return None


@dataclass(frozen=True)
class Law:
    name: str
    kinds: tuple[str, ...]
    instances: Callable[[str, int], list]
    predicted: Callable[[str, int], int]
    evaluate: Callable[[tuple, str], str | None]
    description: str


def _triples(kind, m):
    return _tuples(kind, m, 3)


def _pairs(kind, m):
    return _tuples(kind, m, 2)


LAWS: dict[str, Law] = {law.name: law for law in (
    Law("nap", KINDS, _triples, lambda k, m: _count_tuples(k, m, 3), _eval_nap,
        "P.(Q.R) = Q.(P.R) for the NAP product"),
    Law("prelie", KINDS, _triples, lambda k, m: _count_tuples(k, m, 3), _eval_prelie,
        "left pre-Lie identity for grafting"),
    Law("jacobi", KINDS, _triples, lambda k, m: _count_tuples(k, m, 3), _eval_jacobi,
        "Jacobi identity for the commutator bracket"),
    Law("nap-co", KINDS, lambda k, m: _singles(k, m), lambda k, m: _count_singles(k, m), _eval_nap_co,
        "NAP co-law of delta"),
    Law("compat", KINDS, _pairs, lambda k, m: _count_tuples(k, m, 2), _eval_compat,
        "delta of a grafting against P(x)Q + (P(x)1 + 1(x)P) grafted on delta(Q)"),
    Law("duality", KINDS, _split_triples, _count_split_triples, _eval_duality,
        "<delta P, Q(x)R> against the NAP-product pairing"),
    Law("j-index", ("poset",), _split_triples, _count_split_triples, _eval_j_index,
        "orbit-partition index equals 1 whenever a grafting matches"),
    Law("ck-coassoc", ("poset",), lambda k, m: _singles(k, m, False),
        lambda k, m: _count_singles(k, m, False), _eval_ck,
        "coassociativity of the upper-ideal coproduct"),
    Law("searrow-coassoc", ("poset",), lambda k, m: _singles(k, m, False),
        lambda k, m: _count_singles(k, m, False), _eval_searrow,
        "coassociativity of the graft-admissible coproduct"),
    Law("t0-consistency", ("poset",), lambda k, m: _singles(k, m), lambda k, m: _count_singles(k, m),
        _eval_t0, "topological branches and coproduct agree with the poset ones on posets"),
)}


def _run_chunk(law: str, kind: str, chunk: list[tuple[str, ...]]) -> list[dict]:
    ev = LAWS[law].evaluate
    out = []
    for inst in chunk:
        r = ev(inst, kind)
        if r is not None:
            out.append({"inputs": list(inst), "residual": r})
    return out


def run_sweep(law: str, max_total: int, kind: str = "poset", parallel: int = 1) -> VerificationReport:
    """Check ``law`` on every instance with total size <= max_total."""
    if law not in LAWS:
        raise ValueError(f"unknown law {law!r}; choose from {sorted(LAWS)}")
    entry = LAWS[law]
    if kind not in entry.kinds:
        raise ValueError(f"law {law!r} is not defined for {kind} inputs")
    if not 1 <= max_total <= _limit(kind):
        raise ValueError(f"{kind} sweeps support 1 <= max_total <= {_limit(kind)}")
    start = time.perf_counter()
    instances = entry.instances(kind, max_total)
    predicted = entry.predicted(kind, max_total)
    if parallel > 1 and len(instances) > 1:
        size = max(1, len(instances) // (parallel * 4))
        chunks = [instances[i:i + size] for i in range(0, len(instances), size)]
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            parts = pool.map(_run_chunk, [law] * len(chunks), [kind] * len(chunks), chunks)
            failures = [f for part in parts for f in part]
    else:
        failures = _run_chunk(law, kind, instances)
    failures.sort(key=lambda f: f["inputs"])
    return VerificationReport(law, kind, {"max_total": max_total}, len(instances), predicted,
                              failures, round(time.perf_counter() - start, 3))


def j_index_values(max_total: int) -> dict[Fraction, int]:
    """Histogram of grafting orbit indices over split triples (matches only)."""
    hist: dict[Fraction, int] = {}
    for inst in _split_triples("poset", max_total):
        p, q, r = (k.structure() for k in _keys(inst))
        v = grafting_orbit_index(p, q, r)
        if v is not None:
            hist[v] = hist.get(v, 0) + 1
    return hist


__all__ = ["LAWS", "Law", "VerificationReport", "run_sweep", "j_index_values"]
