"""Primitive elements and the free pre-Lie dimension count.

If connected posets form a free pre-Lie algebra on the primitives, the number
of connected classes on n points must equal the number of rooted trees whose
vertices are decorated by primitives, weighted by size.  We compute both.
"""

from prelie_posets import primitive_classes
from prelie_posets.io import format_sum, to_dot
from prelie_posets.trees import freeness_check

for n in range(1, 5):
    basis = primitive_classes(n)
    print(f"n={n}: {len(basis)} primitive(s)")
    for v in basis:
        print("  ", format_sum(v))

(first,) = primitive_classes(4)[:1]
(key,) = first
print("\nHasse diagram of the first 4-point primitive:")
print(to_dot(key.structure(), "claw"))

print("n  connected  primitives  decorated-trees  forced-generators")
for r in freeness_check(6):
    print(f"{r.n:<3}{r.connected:<11}{r.primitives:<12}{r.decorated_trees:<17}{r.solved_generator}")
