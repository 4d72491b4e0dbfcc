"""Independent reference computations used by the tests.

Nothing here calls into ssalab: partial traces are explicit index loops,
spectra come from the general (non-Hermitian) eigensolver.
"""

import itertools

import numpy as np


def flat_index(multi, dims):
    idx = 0
    for i, d in zip(multi, dims):
        idx = idx * d + i
    return idx


def brute_ptrace(mat, dims, keep):
    """Loop over every (kept row, kept col, traced) multi-index."""
    keep = sorted(k - 1 for k in keep)
    traced = [k for k in range(len(dims)) if k not in keep]
    kdims = [dims[k] for k in keep]
    tdims = [dims[k] for k in traced]
    dk = int(np.prod(kdims))
    out = np.zeros((dk, dk), dtype=complex)
    for r in itertools.product(*(range(d) for d in kdims)):
        for c in itertools.product(*(range(d) for d in kdims)):
            acc = 0j
            for t in itertools.product(*(range(d) for d in tdims)):
                row = [0] * len(dims)
                col = [0] * len(dims)
                for pos, k in enumerate(keep):
                    row[k], col[k] = r[pos], c[pos]
                for pos, k in enumerate(traced):
                    row[k] = col[k] = t[pos]
                acc += mat[flat_index(row, dims), flat_index(col, dims)]
            out[flat_index(r, kdims), flat_index(c, kdims)] = acc
    return out


def entropy_bits(mat):
    lam = np.linalg.eigvals(np.asarray(mat)).real
    lam = lam[lam > 1e-14]
    return float(-np.sum(lam * np.log2(lam)))


def cluster_entropy(mat, dims, cluster):
    if sorted(cluster) == list(range(1, len(dims) + 1)):
        return entropy_bits(mat)
    return entropy_bits(brute_ptrace(mat, dims, cluster))


def mutual_info(mat, dims, a, b):
    return cluster_entropy(mat, dims, a) + cluster_entropy(mat, dims, b) - cluster_entropy(mat, dims, tuple(a) + tuple(b))


def set_partitions_brute(n):
    """Every labelling of 1..n, canonicalised; returns a set of frozensets."""
    seen = set()
    for labels in itertools.product(range(n), repeat=n):
        blocks = {}
        for i, lab in enumerate(labels, start=1):
            blocks.setdefault(lab, []).append(i)
        seen.add(frozenset(frozenset(b) for b in blocks.values()))
    return seen


BELL_NUMBERS = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203}
