"""Branches and the NAP coproduct on four small posets.

A branch is a connected piece sitting strictly above one minimal vertex and
touching nothing else below.  The coproduct cuts each branch off and averages
over the minimal vertices.
"""

from prelie_posets import branches, nap_coproduct, poset
from prelie_posets.io import format_sum

shapes = {
    "W (two minima, one top)": poset("abc", [("a", "c"), ("b", "c")]),
    "V (one minimum, two tops)": poset("abc", [("a", "b"), ("a", "c")]),
    "N with a tail": poset("abcd", [("a", "c"), ("b", "c"), ("b", "d")]),
    "diamond": poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]),
}

for name, p in shapes.items():
    print(f"{name}: {p}")
    for b in branches(p):
        cut = "".join(p.label(i) for i in sorted(b.subset))
        print(f"  branch {{{cut}}} hanging from {p.label(b.anchor)}")
    print(f"  delta = {format_sum(nap_coproduct(p))}\n")
