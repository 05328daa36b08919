"""The coproduct is dual to the NAP product, up to the number of minima.

We pair delta(P) with Q (x) R, pair P with the NAP product of Q and R, and
compare.  Then we look at the orbit-partition index behind the proof.
"""

from fractions import Fraction

from prelie_posets import chain, duality_check, grafting_orbit_partitions, j_index, poset, run_sweep

V = poset("abc", [("a", "b"), ("a", "c")])
print("V, point, chain2:", duality_check(V, chain(1), chain(2)))

res = grafting_orbit_partitions(V, chain(1), chain(2))
print("matching graft sites:", set(res.matches), "index:", res.value)

# the index is not symmetric in its two partitions
pi, rho = [{1, 2}, {3, 4}], [{1, 2, 3}, {4}]
print("j(pi, rho) =", j_index(pi, rho), " j(rho, pi) =", j_index(rho, pi))
assert j_index(pi, rho) == Fraction(5, 4)

report = run_sweep("duality", 6)
print(f"\nexhaustive duality up to 6 points: {report.instances} triples, {len(report.failures)} failures")
