"""Entropy, correlation information and strong-subadditivity checks for
multipartite density matrices."""

__version__ = "0.1.0"

from .entropy import (
    EQ_TOL,
    INEQ_TOL,
    LogBase,
    Partition,
    among_cluster_information,
    binary_decomposition,
    cluster_entropy,
    correlation_information,
    mutual_information,
    relative_entropy,
    restricted_growth_strings,
    set_partitions,
    shannon_entropy,
    ssa_excess,
    ssa_triples,
    von_neumann_entropy,
    within_cluster_information,
)
from .errors import (
    DimensionError,
    InvalidStateError,
    NotHermitianError,
    PreconditionError,
    PremiseError,
    SsalabError,
    SupportError,
)
from .states import (
    BlockAllocation,
    Mixture,
    biorthogonal_mixture,
    monoorthogonal_mixture,
    named_state,
    product_state,
    orthogonal_mixture,
    random_density,
    random_mixture,
    random_pure,
    theorem2_family,
)
from .tensor import (
    DensityMatrix,
    SpectralDecomposition,
    eig_hermitian,
    kron,
    partial_trace,
    range_projector,
    support_contained,
)
from .verify import (
    VerificationReport,
    verify_corollary1,
    verify_corollary2,
    verify_eq19_excess_pairing,
    verify_lemma1,
    verify_lemma2,
    verify_lemma3,
    verify_lemma4,
    verify_lemma5,
    verify_mixing_property,
    verify_ssa,
    verify_theorem1,
    verify_theorem1_all_partitions,
    verify_theorem2,
)
