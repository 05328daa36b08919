"""JSON and DOT input/output for structures, class keys and formal sums."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .canon import ClassKey, class_key
from .linear import FormalSum, TensorSum
from .structures import OrderError, Topology, chain, hasse, poset, topology


class InputError(ValueError):
    """Malformed structure input; the message carries the position when known."""


def structure_from_json(data: dict, as_topology: bool = False) -> Topology:
    """Build from ``{"elements": [...], "relations": [[a, b], ...]}`` (pairs a <= b).

    Cycles in the relations are only accepted when ``as_topology`` is true.
    """
    if not isinstance(data, dict) or "elements" not in data:
        raise InputError("expected an object with an 'elements' list")
    elements = data["elements"]
    relations = data.get("relations", [])
    if not isinstance(elements, list) or not isinstance(relations, list):
        raise InputError("'elements' and 'relations' must be lists")
    pairs = []
    for i, r in enumerate(relations):
        if not (isinstance(r, list) and len(r) == 2):
            raise InputError(f"relation #{i} must be a pair, got {r!r}")
        pairs.append((str(r[0]), str(r[1])))
    names = [str(e) for e in elements]
    try:
        if as_topology:
            return topology(names, pairs)
        return poset(names, pairs)
    except OrderError as exc:
        raise InputError(str(exc)) from None


def loads_structure(text: str, as_topology: bool = False) -> Topology:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return structure_from_json(data, as_topology)


def load_structure(path: str | Path, as_topology: bool = False) -> Topology:
    return loads_structure(Path(path).read_text(), as_topology)


def structure_to_json(t: Topology) -> dict:
    names = [t.label(i) for i in range(t.n)]
    rel = [[names[i], names[j]] for i in range(t.n) for j in range(t.n)
           if i != j and t.leq(i, j)]
    return {"elements": names, "relations": rel}


def to_dot(t: Topology, name: str = "P") -> str:
    """Hasse diagram, edges from covered to cover, drawn bottom to top.

    Bags of a non-T0 topology are drawn as one node each, labelled with all
    their members.
    """
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=circle];"]
    if t.is_t0:
        nodes = list(range(t.n))
        labels = {i: t.label(i) for i in nodes}
        edges = sorted(hasse(t))
    else:
        from .structures import bags_and_quotient

        bq = bags_and_quotient(t)
        labels = {b: ",".join(t.label(i) for i in sorted(bag)) for b, bag in enumerate(bq.bags)}
        nodes = list(labels)
        edges = sorted(hasse(bq.quotient))
    for v in nodes:
        lines.append(f'  n{v} [label="{labels[v]}"];')
    for a, b in edges:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- formal sums -------------------------------------------------------------

def _coeff_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def sum_to_json(x: FormalSum) -> list[dict]:
    out = []
    for key, c in x.items():
        factors = key if isinstance(key, tuple) and not hasattr(key, "_fields") else (key,)
        out.append({"coeff": _coeff_str(c), "factors": [f.hex() for f in factors]})
    return out


def sum_from_json(data: list[dict]) -> FormalSum:
    terms = []
    arities = set()
    for item in data:
        factors = tuple(ClassKey.from_hex(h) for h in item["factors"])
        arities.add(len(factors))
        terms.append((factors if len(factors) != 1 else factors[0], Fraction(item["coeff"])))
    if arities - {1}:
        return TensorSum(terms)
    return FormalSum(terms)


# -- human-readable class names ---------------------------------------------

def _named_classes() -> dict[ClassKey, str]:
    names = {class_key(chain(1)): "•", class_key(chain(2)): "chain2", class_key(chain(3)): "chain3",
             class_key(poset("abc", [("a", "c"), ("b", "c")])): "W",
             class_key(poset("abc", [("a", "b"), ("a", "c")])): "V",
             class_key(poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])): "diamond"}
    for n in range(4, 8):
        names.setdefault(class_key(chain(n)), f"chain{n}")
    return names


_NAMES: dict[ClassKey, str] | None = None


def class_name(k: ClassKey) -> str:
    """Short name for familiar shapes, else the structure written out."""
    global _NAMES
    if _NAMES is None:
        _NAMES = _named_classes()
    if k.n == 0:
        return "1"
    return _NAMES.get(k) or str(k.structure())


def format_sum(x: FormalSum) -> str:
    """E.g. ``1 · [W] ⊗ [•]``; ``0`` for the zero sum."""
    if not x:
        return "0"
    parts = []
    for key, c in x.items():
        factors = key if isinstance(key, tuple) and not hasattr(key, "_fields") else (key,)
        parts.append(f"{c} · " + " ⊗ ".join(f"[{class_name(f)}]" for f in factors))
    return " + ".join(parts)
