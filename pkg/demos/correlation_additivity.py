"""
Splitting total correlation over clusters
=========================================

The total correlation of a multipartite state splits exactly into the
correlation among a set of clusters plus the correlation inside each
cluster. Here we check that on a GHZ state and on a random four-qubit state.
"""

import numpy as np

import ssalab as sl

###############################################################################
# A GHZ state on three qubits: every single-qubit reduction is maximally
# mixed and the global state is pure, so the total correlation is 3 bits.
ghz = sl.named_state("ghz")
print(f"I(1;2;3) = {sl.correlation_information(ghz):.12f}")

###############################################################################
# Group qubits 2 and 3 together. The among-cluster part is I(1;23) = 2 bits
# and the only nontrivial cluster contributes I(2;3) = 1 bit.
p = sl.Partition.parse("{1}|{2,3}", 3)
among = sl.among_cluster_information(ghz, p)
within = [sl.within_cluster_information(ghz, c) for c in p.clusters]
print(f"{p}: among = {among:.3f}, within = {within}")

###############################################################################
# Every set partition of four subsystems gives the same total.
rho = sl.random_density((2, 2, 2, 2), rng=2024)
total = sl.correlation_information(rho)
for p in sl.set_partitions(4):
    split = sl.among_cluster_information(rho, p) + sum(sl.within_cluster_information(rho, c) for c in p.clusters)
    print(f"{str(p):<22} among + within = {split:.12f}   residual {abs(total - split):.1e}")

###############################################################################
# A binary tree of cuts turns the same total into a sum of bipartite mutual
# informations.
terms = sl.binary_decomposition(rho, ((1, 2), (3, 4)))
for label, value in terms:
    print(f"{label:<14} {value:.6f}")
print("sum =", np.round(sum(v for _, v in terms), 12), " total =", np.round(total, 12))
