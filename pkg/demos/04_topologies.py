"""From posets to finite topologies.

A finite topology is a quasi-order; its equivalence classes (bags) collapse to
a poset.  The coproduct divides by the number of minimal elements, and the
duality acquires a factor equal to the size of the bag grafted on.
"""

from prelie_posets import (
    chain,
    quotient_group_orders,
    top_compat_check,
    top_duality_check,
    top_nap_coproduct,
    topology,
)
from prelie_posets.io import format_sum

bag = topology("ab", [("a", "b"), ("b", "a")])
bag_under_point = topology("abc", [("a", "b"), ("b", "a"), ("a", "c")])

print("delta(bag of two) =", format_sum(top_nap_coproduct(bag)))
print("delta(bag under a point) =", format_sum(top_nap_coproduct(bag_under_point)))
print(top_duality_check(bag_under_point, chain(1), bag))

print("\nnormalising by minimal bags instead of minimal elements breaks compatibility:")
print("  elements:", bool(top_compat_check(chain(1), bag)), " bags:", bool(top_compat_check(chain(1), bag, "bags")))

w = topology("abcd", [("a", "b"), ("c", "b"), ("d", "b"), ("c", "d"), ("d", "c")])
print("\nautomorphism orders for a wedge with one doubled minimum:", quotient_group_orders(w))
