"""Seeded state generators.

Random generators take ``rng`` as either a :class:`numpy.random.Generator`
or an integer seed.  The block-structured families place component ``k``
on coordinates ``sum(blocks[:k]) .. sum(blocks[:k+1]) - 1`` of each
constrained subsystem, which is what makes their reductions mutually
orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, PreconditionError
from .tensor import MAX_TOTAL_DIM, DensityMatrix, block_embed, kron, partial_trace

#: Weights at or below this are rejected.
MIN_WEIGHT = 1e-12
#: Two sampled factor states closer than this (Frobenius) count as equal.
DISTINCT_TOL = 1e-6


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise PreconditionError("an explicit seed or Generator is required")
    return np.random.default_rng(int(rng))


def _hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def _check_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise PreconditionError("weights must be a nonempty 1-d vector")
    if np.any(w <= MIN_WEIGHT):
        raise PreconditionError(f"all weights must exceed {MIN_WEIGHT}, got {w.tolist()}")
    if abs(w.sum() - 1.0) > 1e-12:
        raise PreconditionError(f"weights sum to {w.sum()!r}, expected 1")
    return w


@dataclass(frozen=True)
class Mixture:
    """Convex combination ``sum_k w_k rho^k`` of states with equal dims."""

    weights: tuple
    components: tuple

    def __post_init__(self):
        w = _check_weights(self.weights)
        comps = tuple(self.components)
        if len(comps) != w.size:
            raise PreconditionError(f"{w.size} weights but {len(comps)} components")
        dims = {c.dims for c in comps}
        if len(dims) != 1:
            raise DimensionError(f"components have differing dims {sorted(dims)}")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "components", comps)

    def __len__(self):
        return len(self.components)

    @property
    def dims(self) -> tuple:
        return self.components[0].dims

    def mix(self) -> DensityMatrix:
        m = sum(w * c.mat for w, c in zip(self.weights, self.components))
        return DensityMatrix(self.dims, _hermitize(m))

    def ptrace(self, keep) -> "Mixture":
        """Same weights, each component reduced to ``keep``."""
        return Mixture(self.weights, tuple(partial_trace(c, keep) for c in self.components))


@dataclass(frozen=True)
class BlockAllocation:
    """Block sizes per constrained subsystem.

    ``blocks[s][k]`` is the dimension of block ``k`` on the ``s``-th
    constrained subsystem.
    """

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(int(b) for b in row) for row in self.blocks)
        if not blocks or len({len(r) for r in blocks}) != 1 or not blocks[0]:
            raise PreconditionError(f"every subsystem needs the same nonzero number of blocks: {self.blocks}")
        if any(b < 1 for r in blocks for b in r):
            raise PreconditionError(f"block dimensions must be >= 1: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks[0])

    def offsets(self, s: int) -> list:
        return [int(x) for x in np.cumsum((0,) + self.blocks[s][:-1])]

    def check_fits(self, dims: Sequence[int]) -> None:
        if len(dims) != len(self.blocks):
            raise PreconditionError(f"allocation covers {len(self.blocks)} subsystems, got dims {tuple(dims)}")
        for s, (d, row) in enumerate(zip(dims, self.blocks)):
            if sum(row) > d:
                raise DimensionError(f"blocks {row} overflow dimension {d} of constrained subsystem {s + 1}")

    @classmethod
    def uniform(cls, sizes: Sequence[int], n_subsystems: int = 2) -> "BlockAllocation":
        return cls(tuple(tuple(sizes) for _ in range(n_subsystems)))


# -- generic states ------------------------------------------------------------


def random_density(dims, rank=None, rng=None, *, max_dim=MAX_TOTAL_DIM) -> DensityMatrix:
    """``G G^H / tr(G G^H)`` with ``G`` a ``D x rank`` complex Gaussian matrix.

    ``rank`` defaults to the full dimension ``D``.
    """
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if total > max_dim:
        raise DimensionError(f"total dimension {total} exceeds cap {max_dim}")
    rank = total if rank is None else int(rank)
    if not 1 <= rank <= total:
        raise PreconditionError(f"rank {rank} outside 1..{total}")
    gen = as_rng(rng)
    g = gen.standard_normal((total, rank)) + 1j * gen.standard_normal((total, rank))
    m = g @ g.conj().T
    return DensityMatrix(dims, _hermitize(m / np.trace(m).real), max_dim=max_dim)


def random_pure(dims, rng=None) -> DensityMatrix:
    return random_density(dims, 1, rng)


def product_state(factors: Sequence[DensityMatrix]) -> DensityMatrix:
    """Tensor product with concatenated dims."""
    factors = list(factors)
    if not factors:
        raise PreconditionError("product_state needs at least one factor")
    dims = tuple(d for f in factors for d in f.dims)
    return DensityMatrix(dims, kron(*(f.mat for f in factors)))


def random_local_unitary(dims, rng) -> np.ndarray:
    """Haar-random ``U_1 (x) ... (x) U_N`` (QR of a Ginibre matrix, phase-fixed)."""
    gen = as_rng(rng)
    us = []
    for d in dims:
        z = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
        q, r = np.linalg.qr(z)
        ph = np.diag(r) / np.abs(np.diag(r))
        us.append(q * ph)
    return kron(*us)


def conjugate(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    return DensityMatrix(rho.dims, _hermitize(u @ rho.mat @ u.conj().T))


# -- block-structured families ---------------------------------------------------


def _embedded(state: DensityMatrix, dims, offsets, sizes) -> DensityMatrix:
    return DensityMatrix(tuple(dims), _hermitize(block_embed(state.mat, dims, offsets, sizes)))


def biorthogonal_mixture(dims_12, alloc: BlockAllocation, weights, rng=None, *, rank=None, scramble=False) -> Mixture:
    """Mixture of bipartite states whose 1- and 2-reductions are orthogonal
    across components.

    Component ``k`` is a random state on ``(block k of H_1) (x) (block k of
    H_2)``, full rank within the block unless ``rank`` caps it.  With
    ``scramble`` every component is conjugated by one shared Haar-random
    local unitary ``U_1 (x) U_2``, which hides the block layout but keeps
    the orthogonality of the reductions.
    """
    dims = tuple(int(d) for d in dims_12)
    if len(dims) != 2 or len(alloc.blocks) != 2:
        raise PreconditionError("biorthogonal_mixture is bipartite: need two dims and two block rows")
    alloc.check_fits(dims)
    w = _check_weights(weights)
    if w.size != alloc.n_blocks:
        raise PreconditionError(f"{w.size} weights for {alloc.n_blocks} blocks")
    gen = as_rng(rng)
    off1, off2 = alloc.offsets(0), alloc.offsets(1)
    comps = []
    for k in range(alloc.n_blocks):
        b1, b2 = alloc.blocks[0][k], alloc.blocks[1][k]
        r = b1 * b2 if rank is None else min(int(rank), b1 * b2)
        sigma = random_density((b1, b2), r, gen)
        comps.append(_embedded(sigma, dims, (off1[k], off2[k]), (b1, b2)))
    if scramble:
        u = random_local_unitary(dims, gen)
        comps = [conjugate(c, u) for c in comps]
    return Mixture(tuple(w), tuple(comps))


def monoorthogonal_mixture(
    dims_23, alloc: BlockAllocation, weights, rng=None, *, rank=None, identical_rho3=False, scramble=False
) -> Mixture:
    """Mixture of bipartite states whose first-subsystem reductions are
    mutually orthogonal; the second subsystem is unconstrained.

    With ``identical_rho3`` a single random state on ``C^b (x) H_3`` (``b``
    the smallest block) is copied into every block, so all components share
    the same reduction on the second subsystem while staying correlated.
    """
    dims = tuple(int(d) for d in dims_23)
    if len(dims) != 2 or len(alloc.blocks) != 1:
        raise PreconditionError("monoorthogonal_mixture needs two dims and one block row")
    alloc.check_fits(dims[:1])
    w = _check_weights(weights)
    if w.size != alloc.n_blocks:
        raise PreconditionError(f"{w.size} weights for {alloc.n_blocks} blocks")
    gen = as_rng(rng)
    offs = alloc.offsets(0)
    d3 = dims[1]
    comps = []
    if identical_rho3:
        b = min(alloc.blocks[0])
        r = b * d3 if rank is None else min(int(rank), b * d3)
        shared = random_density((b, d3), r, gen)
        for k in range(alloc.n_blocks):
            comps.append(_embedded(shared, dims, (offs[k], 0), (b, d3)))
    else:
        for k, b in enumerate(alloc.blocks[0]):
            r = b * d3 if rank is None else min(int(rank), b * d3)
            sigma = random_density((b, d3), r, gen)
            comps.append(_embedded(sigma, dims, (offs[k], 0), (b, d3)))
    if scramble:
        u = random_local_unitary(dims, gen)
        comps = [conjugate(c, u) for c in comps]
    return Mixture(tuple(w), tuple(comps))


def random_mixture(dims, n_components, rng=None, *, rank=None, weights=None) -> Mixture:
    """Generic (non-orthogonal) mixture; weights Dirichlet(1, ..., 1) unless given."""
    gen = as_rng(rng)
    k = int(n_components)
    if k < 1:
        raise PreconditionError("need at least one component")
    if weights is None:
        weights = gen.dirichlet(np.ones(k))
        weights = weights / weights.sum()
    comps = tuple(random_density(dims, rank, gen) for _ in range(k))
    return Mixture(tuple(weights), comps)


def orthogonal_mixture(dims, blocks: Sequence[int], weights, rng=None, *, rank=None) -> Mixture:
    """Mixture whose components live on disjoint blocks of the full space,
    so ``rho^k rho^k' = 0`` for ``k != k'``."""
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    alloc = BlockAllocation((tuple(blocks),))
    alloc.check_fits((total,))
    w = _check_weights(weights)
    if w.size != alloc.n_blocks:
        raise PreconditionError(f"{w.size} weights for {alloc.n_blocks} blocks")
    gen = as_rng(rng)
    comps = []
    for off, b in zip(alloc.offsets(0), alloc.blocks[0]):
        sigma = random_density((b,), b if rank is None else min(int(rank), b), gen)
        comps.append(DensityMatrix(dims, _hermitize(block_embed(sigma.mat, (total,), (off,), (b,)))))
    return Mixture(tuple(w), tuple(comps))


def _distinct(states) -> bool:
    return all(
        np.linalg.norm(a.mat - b.mat) > DISTINCT_TOL for i, a in enumerate(states) for b in states[i + 1 :]
    )


def theorem2_family(
    dims,
    alloc: BlockAllocation,
    weights,
    rng=None,
    distinct_rho3: bool = True,
    *,
    rho3_states=None,
    rank=None,
    rho3_rank=None,
    scramble=False,
):
    """Tripartite mixture ``sum_k w_k rho_12^k (x) rho_3^k`` with a
    biorthogonal 12-part; satisfies ``I_12 = I_{1,23}``.

    ``rho3_states`` supplies the factor states on subsystem 3 explicitly.
    Otherwise they are sampled, independently per ``k`` when
    ``distinct_rho3`` (resampled if two collide) and shared otherwise.

    Returns ``(rho_123, mixture)``.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3:
        raise PreconditionError(f"theorem2_family is tripartite, got dims {dims}")
    gen = as_rng(rng)
    bi = biorthogonal_mixture(dims[:2], alloc, weights, gen, rank=rank, scramble=scramble)
    k = len(bi)
    if rho3_states is not None:
        rho3 = list(rho3_states)
        if len(rho3) != k or any(r.dims != (dims[2],) for r in rho3):
            raise PreconditionError(f"need {k} factor states of dims ({dims[2]},)")
    elif distinct_rho3:
        for _ in range(8):
            rho3 = [random_density((dims[2],), rho3_rank, gen) for _ in range(k)]
            if _distinct(rho3):
                break
        else:
            raise PreconditionError("could not sample distinct factor states on subsystem 3")
    else:
        rho3 = [random_density((dims[2],), rho3_rank, gen)] * k
    comps = tuple(product_state([c, r]) for c, r in zip(bi.components, rho3))
    mixture = Mixture(bi.weights, comps)
    return mixture.mix(), mixture


# -- fixtures ---------------------------------------------------------------------


def named_state(name: str, *, n: int = 3, dims=None) -> DensityMatrix:
    """Textbook states.

    ``bell``  (|00> + |11>)/sqrt 2, dims (2, 2)
    ``ghz``   (|0..0> + |1..1>)/sqrt 2 on ``n`` qubits (default 3)
    ``w``     uniform superposition of the ``n`` single-excitation kets
    ``max_mixed``  identity / D on ``dims``
    """
    key = name.lower().replace("-", "_")
    if key == "bell":
        psi = np.zeros(4)
        psi[[0, 3]] = 1
        return DensityMatrix.from_ket(psi, (2, 2))
    if key == "ghz":
        psi = np.zeros(2**n)
        psi[[0, -1]] = 1
        return DensityMatrix.from_ket(psi, (2,) * n)
    if key in ("w", "w3"):
        psi = np.zeros(2**n)
        psi[[2**j for j in range(n)]] = 1
        return DensityMatrix.from_ket(psi, (2,) * n)
    if key == "max_mixed":
        if dims is None:
            raise PreconditionError("max_mixed needs dims")
        dims = tuple(int(d) for d in dims)
        total = int(np.prod(dims))
        return DensityMatrix(dims, np.eye(total) / total)
    raise PreconditionError(f"unknown named state {name!r}")
