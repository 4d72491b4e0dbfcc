"""Dense matrix algebra on multipartite Hilbert spaces.

Subsystems are labelled ``1 .. N``.  A composite basis index
``(i_1, ..., i_N)`` maps to the flat index ``sum_n i_n * prod_{m>n} d_m``
(big-endian, the same ordering as :func:`numpy.kron`).
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, InvalidStateError, NotHermitianError, PreconditionError

#: Relative Frobenius bound on ``A - A^H`` for a matrix to count as Hermitian.
HERMITIAN_TOL = 1e-12
#: Allowed deviation of the trace of a density matrix from one.
TRACE_TOL = 1e-10
#: Most negative eigenvalue tolerated in a density matrix.
PSD_TOL = 1e-10
#: Eigenvalues at or below this are outside the support.
RANK_CUTOFF = 1e-12
#: Largest total dimension accepted unless overridden.
MAX_TOTAL_DIM = 4096


def hermitian_defect(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - a.conj().T))


def _check_hermitian(a: np.ndarray) -> None:
    bound = HERMITIAN_TOL * max(1.0, float(np.linalg.norm(a)))
    defect = hermitian_defect(a)
    if defect > bound:
        raise NotHermitianError(defect, bound)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(a) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Raises
    ------
    NotHermitianError
        If ``||A - A^H||_F`` exceeds ``1e-12 * max(1, ||A||_F)``.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    _check_hermitian(a)
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    w, v = w[::-1].copy(), v[:, ::-1].copy()
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(w, v)


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not mats:
        raise PreconditionError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in mats))


@dataclass(frozen=True)
class DensityMatrix:
    """A state on ``H_1 (x) ... (x) H_N`` with local dimensions ``dims``.

    Construction validates Hermiticity, unit trace and positivity; the
    stored matrix is a read-only copy.  ``max_dim`` caps the total
    dimension (dense eigensolves are cubic in it).
    """

    dims: tuple
    mat: np.ndarray = field(repr=False)
    max_dim: InitVar[int] = MAX_TOTAL_DIM

    def __post_init__(self, max_dim):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"local dimensions must be >= 1, got {self.dims}")
        total = int(np.prod(dims))
        if total > max_dim:
            raise DimensionError(f"total dimension {total} exceeds cap {max_dim}")
        mat = np.array(self.mat, dtype=complex)
        if mat.shape != (total, total):
            raise DimensionError(f"matrix shape {mat.shape} does not match dims {dims}")
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

        try:
            _check_hermitian(mat)
        except NotHermitianError as exc:
            raise InvalidStateError(str(exc)) from None
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        lam_min = self.spectrum.eigenvalues[-1]
        if lam_min < -PSD_TOL:
            raise InvalidStateError(f"negative eigenvalue {lam_min:.3e}")

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return self.mat.shape[0]

    @cached_property
    def spectrum(self) -> SpectralDecomposition:
        return eig_hermitian(self.mat)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Spectrum with round-off negatives clipped to zero."""
        w = np.clip(self.spectrum.eigenvalues, 0.0, None)
        w.setflags(write=False)
        return w

    @property
    def rank(self) -> int:
        return int(np.sum(self.spectrum.eigenvalues > RANK_CUTOFF))

    def purity(self) -> float:
        return float(np.sum(self.eigenvalues**2))

    def ptrace(self, keep) -> "DensityMatrix":
        return partial_trace(self, keep)

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.mat, other.mat)

    __hash__ = None

    @classmethod
    def from_ket(cls, psi, dims) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(dims, np.outer(psi, psi.conj()))


def _labels(keep: Iterable[int], n: int) -> list[int]:
    labels = sorted(set(int(k) for k in keep))
    if not labels:
        raise PreconditionError("subsystem set must be nonempty")
    bad = [k for k in labels if not 1 <= k <= n]
    if bad:
        raise PreconditionError(f"subsystem labels {bad} out of range 1..{n}")
    return labels


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduce ``rho`` to the subsystems in ``keep`` (1-based labels).

    The kept subsystems retain their original relative order.
    """
    n = rho.n_subsystems
    kept = [k - 1 for k in _labels(keep, n)]
    if len(kept) == n:
        return rho
    traced = [k for k in range(n) if k not in kept]
    dims = rho.dims
    dk = int(np.prod([dims[k] for k in kept]))
    dt = int(np.prod([dims[k] for k in traced]))
    t = rho.mat.reshape(dims + dims)
    perm = kept + traced
    t = t.transpose(perm + [n + p for p in perm]).reshape(dk, dt, dk, dt)
    red = np.einsum("iaja->ij", t)
    return DensityMatrix(tuple(dims[k] for k in kept), red)


def range_projector(rho, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors with eigenvalue > cutoff."""
    if cutoff <= 0:
        raise PreconditionError("cutoff must be positive")
    spec = rho.spectrum if isinstance(rho, DensityMatrix) else eig_hermitian(rho)
    v = spec.eigenvectors[:, spec.eigenvalues > cutoff]
    return v @ v.conj().T


def support_contained(rho, sigma, cutoff: float = RANK_CUTOFF) -> bool:
    """True iff ``||(1 - P_sigma) rho (1 - P_sigma)||_F <= cutoff``."""
    r = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    s = sigma.mat if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    if r.shape != s.shape:
        raise DimensionError(f"shape mismatch {r.shape} vs {s.shape}")
    q = np.eye(s.shape[0]) - range_projector(sigma, cutoff)
    return bool(np.linalg.norm(q @ r @ q) <= cutoff)


def block_embed(mat: np.ndarray, dims: Sequence[int], offsets: Sequence[int], sizes: Sequence[int]) -> np.ndarray:
    """Place an operator on ``(x)_s C^{sizes[s]}`` into ``(x)_s C^{dims[s]}``.

    Subsystem ``s`` of the small space maps onto basis vectors
    ``offsets[s] .. offsets[s] + sizes[s] - 1`` of the large one.
    """
    isos = []
    for d, o, b in zip(dims, offsets, sizes):
        if o < 0 or o + b > d:
            raise DimensionError(f"block [{o}, {o + b}) does not fit dimension {d}")
        v = np.zeros((d, b))
        v[o : o + b, :] = np.eye(b)
        isos.append(v)
    v = kron(*isos)
    return v @ mat @ v.conj().T
