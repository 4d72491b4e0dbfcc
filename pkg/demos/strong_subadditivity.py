"""
Discarding part of a cluster never increases mutual information
===============================================================

Strong subadditivity says I(a; b) >= I(a; b') whenever b' is obtained from b
by discarding subsystems. We scan all such triples on random states, then
look at two cases where the inequality is saturated.
"""

import numpy as np

import ssalab as sl

###############################################################################
# Minimum excess over every admissible (a, b, discard) triple and 200
# random qubit-qutrit-qubit states.
rng = np.random.default_rng(7)
excess = [
    sl.ssa_excess(rho, a, b, d)
    for rho in (sl.random_density((2, 3, 2), rng=rng) for _ in range(200))
    for a, b, d in sl.ssa_triples(3)
]
print(f"{len(excess)} triples, min excess {min(excess):.4f} bits")

###############################################################################
# A product across the cut 12|3 makes subsystem 3 useless to subsystem 1:
# the excess of I(1;23) over I(1;2) vanishes.
rho = sl.product_state([sl.random_density((2, 2), rng=1), sl.random_density((2,), rng=2)])
print("product excess:", sl.ssa_excess(rho, 1, (2, 3), 3))

###############################################################################
# The GHZ state is far from equality: I(1;23) = 2 but I(1;2) = 1.
print("GHZ excess:", sl.ssa_excess(sl.named_state("ghz"), 1, (2, 3), 3))

###############################################################################
# For tripartite states the two excesses obtained by dropping subsystem 3
# from one side or the other are always equal.
r = sl.verify.verify_eq19_excess_pairing(sl.random_density((2, 2, 2), rng=3))
print(f"I(1;23) - I(1;2) = {r.lhs:.6f}   I(12;3) - I(2;3) = {r.rhs:.6f}")
