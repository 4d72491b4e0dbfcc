"""Entropies and correlation information over clusters of subsystems.

Every functional takes a ``base`` argument: ``"bits"`` (default) or
``"nats"``.  Cluster arguments are iterables of 1-based subsystem labels.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import PreconditionError, SupportError
from .tensor import RANK_CUTOFF, DensityMatrix, partial_trace

#: Default tolerance for equality checks ``|X - Y| <= tol``.
EQ_TOL = 1e-8
#: Default slack for inequality checks ``X - Y <= tol``.
INEQ_TOL = 1e-9


class LogBase(enum.Enum):
    BITS = "bits"
    NATS = "nats"

    @classmethod
    def coerce(cls, value) -> "LogBase":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise PreconditionError(f"unknown log base {value!r}; use 'bits' or 'nats'") from None

    def log(self, x):
        return np.log2(x) if self is LogBase.BITS else np.log(x)


def _xlogx_sum(p: np.ndarray, base: LogBase) -> float:
    p = p[p > 0]
    s = -float(np.sum(p * base.log(p)))
    return s if s != 0.0 else 0.0


def von_neumann_entropy(rho: DensityMatrix, base="bits") -> float:
    """``-tr rho log rho`` from the clipped spectrum (``0 log 0 = 0``)."""
    return _xlogx_sum(rho.eigenvalues, LogBase.coerce(base))


def shannon_entropy(weights, base="bits") -> float:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise PreconditionError("weights must be a nonempty 1-d vector")
    if np.any(w < 0):
        raise PreconditionError(f"negative weight in {w.tolist()}")
    if abs(w.sum() - 1.0) > 1e-10:
        raise PreconditionError(f"weights sum to {w.sum()!r}, expected 1")
    return _xlogx_sum(w, LogBase.coerce(base))


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix, base="bits", cutoff=RANK_CUTOFF) -> float:
    """``S(rho || sigma) = tr rho log rho - tr rho log sigma``.

    Eigenvalues of ``sigma`` at or below ``cutoff`` count as zero.  If
    ``rho`` has weight outside the support of ``sigma`` a
    :class:`SupportError` is raised instead of returning infinity.
    """
    base = LogBase.coerce(base)
    if rho.total_dim != sigma.total_dim:
        raise PreconditionError(f"dimension mismatch {rho.total_dim} vs {sigma.total_dim}")
    spec = sigma.spectrum
    mask = spec.eigenvalues > cutoff
    v = spec.eigenvectors[:, mask]
    q = np.eye(sigma.total_dim) - v @ v.conj().T
    leak = float(np.linalg.norm(q @ rho.mat @ q))
    if leak > cutoff:
        raise SupportError(f"support not contained: weight {leak:.3e} of rho lies outside supp(sigma)")
    # <v_j| rho |v_j> over the support of sigma
    diag = np.einsum("ij,ik,kj->j", v.conj(), rho.mat, v).real
    cross = float(np.sum(diag * base.log(spec.eigenvalues[mask])))
    return -von_neumann_entropy(rho, base) - cross


# -- clusters and partitions -------------------------------------------------


def _cluster(c, n: int) -> tuple:
    if isinstance(c, (int, np.integer)):
        c = (c,)
    labels = tuple(sorted(set(int(k) for k in c)))
    if not labels:
        raise PreconditionError("cluster must be nonempty")
    bad = [k for k in labels if not 1 <= k <= n]
    if bad:
        raise PreconditionError(f"subsystem labels {bad} out of range 1..{n}")
    return labels


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty clusters covering ``{1 .. n_subsystems}``."""

    n_subsystems: int
    clusters: tuple

    def __post_init__(self):
        n = int(self.n_subsystems)
        clusters = tuple(_cluster(c, n) for c in self.clusters)
        seen = [k for c in clusters for k in c]
        if len(seen) != len(set(seen)):
            raise PreconditionError(f"clusters overlap: {clusters}")
        if set(seen) != set(range(1, n + 1)):
            missing = sorted(set(range(1, n + 1)) - set(seen))
            raise PreconditionError(f"clusters do not cover subsystems {missing}")
        object.__setattr__(self, "n_subsystems", n)
        object.__setattr__(self, "clusters", clusters)

    def __len__(self):
        return len(self.clusters)

    def __iter__(self):
        return iter(self.clusters)

    def __str__(self):
        return "|".join("{" + ",".join(map(str, c)) + "}" for c in self.clusters)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(n, tuple((k,) for k in range(1, n + 1)))

    @classmethod
    def parse(cls, text: str, n: int) -> "Partition":
        """Parse ``"{1}|{2,3}"`` (braces optional)."""
        return cls(n, tuple(parse_cluster(part) for part in text.split("|")))

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "Partition":
        k = max(rgs) + 1
        clusters = [[] for _ in range(k)]
        for i, b in enumerate(rgs, start=1):
            clusters[b].append(i)
        return cls(len(rgs), tuple(clusters))


def parse_cluster(text: str) -> tuple:
    body = text.strip().strip("{}").strip()
    if not body or not re.fullmatch(r"\d+(\s*,\s*\d+)*", body):
        raise PreconditionError(f"cannot parse cluster {text!r}")
    return tuple(int(x) for x in body.split(","))


def restricted_growth_strings(n: int) -> Iterator[tuple]:
    """All restricted growth strings of length ``n`` in lexicographic order.

    ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``; each string encodes one set
    partition of ``{1..n}`` (element ``i+1`` goes to block ``a[i]``).
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    a = [0] * n
    m = [0] * n  # m[i] = max(a[:i+1])
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] > m[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def set_partitions(n: int) -> Iterator[Partition]:
    for rgs in restricted_growth_strings(n):
        yield Partition.from_rgs(rgs)


# -- correlation functionals ---------------------------------------------------


def cluster_entropy(rho: DensityMatrix, cluster, base="bits") -> float:
    c = _cluster(cluster, rho.n_subsystems)
    return von_neumann_entropy(partial_trace(rho, c), base)


def _single_entropies(rho, labels, base):
    return [von_neumann_entropy(partial_trace(rho, (k,)), base) for k in labels]


def correlation_information(rho: DensityMatrix, base="bits") -> float:
    """``sum_n S_n - S_{1..N}``."""
    n = rho.n_subsystems
    return sum(_single_entropies(rho, range(1, n + 1), base)) - von_neumann_entropy(rho, base)


def within_cluster_information(rho: DensityMatrix, cluster, base="bits") -> float:
    c = _cluster(cluster, rho.n_subsystems)
    if len(c) == 1:
        return 0.0
    return sum(_single_entropies(rho, c, base)) - cluster_entropy(rho, c, base)


def among_cluster_information(rho: DensityMatrix, partition: Partition, base="bits") -> float:
    if partition.n_subsystems != rho.n_subsystems:
        raise PreconditionError(
            f"partition is over {partition.n_subsystems} subsystems, state has {rho.n_subsystems}"
        )
    return sum(cluster_entropy(rho, c, base) for c in partition) - von_neumann_entropy(rho, base)


def mutual_information(rho: DensityMatrix, cluster_a, cluster_b, base="bits") -> float:
    """``S_A + S_B - S_AB``; subsystems outside ``A u B`` are traced out first."""
    n = rho.n_subsystems
    a, b = _cluster(cluster_a, n), _cluster(cluster_b, n)
    if set(a) & set(b):
        raise PreconditionError(f"clusters {a} and {b} overlap")
    return cluster_entropy(rho, a, base) + cluster_entropy(rho, b, base) - cluster_entropy(rho, a + b, base)


def ssa_excess(rho: DensityMatrix, a, b, discard, base="bits") -> float:
    """``I(a; b) - I(a; b minus discard)``, nonnegative by strong subadditivity."""
    n = rho.n_subsystems
    a, b = _cluster(a, n), _cluster(b, n)
    d = set(_cluster(discard, n))
    if not d < set(b):
        raise PreconditionError(f"discard {sorted(d)} must be a proper subset of {b}")
    kept = tuple(k for k in b if k not in d)
    return mutual_information(rho, a, b, base) - mutual_information(rho, a, kept, base)


def ssa_triples(n: int) -> Iterator[tuple]:
    """All ``(a, b, discard)`` with ``a, b`` disjoint nonempty and ``discard``
    a nonempty proper subset of ``b``."""
    labels = range(1, n + 1)
    for amask in range(1, 2**n):
        a = tuple(k for k in labels if amask >> (k - 1) & 1)
        for bmask in range(1, 2**n):
            if amask & bmask:
                continue
            b = tuple(k for k in labels if bmask >> (k - 1) & 1)
            for dmask in range(1, 2 ** len(b) - 1):
                d = tuple(x for i, x in enumerate(b) if dmask >> i & 1)
                yield a, b, d


# -- binary split trees --------------------------------------------------------


def tree_leaves(tree) -> list:
    """Leaves of a nested binary tree.

    A leaf is an ``int`` or a one-element collection; an internal node is a
    pair ``(left, right)``.
    """
    if isinstance(tree, (int, np.integer)):
        return [int(tree)]
    items = list(tree)
    if len(items) == 1 and isinstance(items[0], (int, np.integer)):
        return [int(items[0])]
    if len(items) != 2 or isinstance(tree, (set, frozenset)):
        raise PreconditionError(f"malformed split tree node {tree!r}: expected a leaf or a pair")
    return tree_leaves(items[0]) + tree_leaves(items[1])


def _fmt(c) -> str:
    return ",".join(map(str, sorted(c)))


def binary_decomposition(rho: DensityMatrix, split_tree, base="bits") -> list:
    """Mutual information of each binary split in ``split_tree``.

    Returns ``[(label, value), ...]`` in pre-order; the values sum to the
    correlation information when the leaves are exactly ``{1..N}``.
    """
    n = rho.n_subsystems
    leaves = tree_leaves(split_tree)
    if sorted(leaves) != list(range(1, n + 1)):
        raise PreconditionError(f"tree leaves {sorted(leaves)} are not exactly 1..{n}")
    terms = []

    def walk(node):
        if len(tree_leaves(node)) == 1:
            return
        left, right = list(node)
        ll, rl = tree_leaves(left), tree_leaves(right)
        terms.append((f"I({_fmt(ll)};{_fmt(rl)})", mutual_information(rho, ll, rl, base)))
        walk(left)
        walk(right)

    walk(split_tree)
    return terms
