"""Numerical verifiers for correlation-additivity and SSA-equality results.

Each verifier returns a :class:`VerificationReport` (or a list of them).
A verifier whose hypothesis is not met by its input raises
:class:`~ssalab.errors.PremiseError` rather than emitting a failed report.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .entropy import (
    EQ_TOL,
    INEQ_TOL,
    Partition,
    among_cluster_information,
    binary_decomposition,
    correlation_information,
    mutual_information,
    relative_entropy,
    set_partitions,
    shannon_entropy,
    ssa_excess,
    von_neumann_entropy,
    within_cluster_information,
)
from .errors import PreconditionError, PremiseError
from .states import BlockAllocation, Mixture, product_state, theorem2_family
from .tensor import DensityMatrix, partial_trace, range_projector, support_contained

EQUALITY = "equality"
INEQUALITY = "inequality"

#: Largest N accepted by the all-partitions sweep (Bell number B_6 = 203).
MAX_PARTITION_N = 6


@dataclass
class VerificationReport:
    """Outcome of one numerical check.

    Equality checks have ``residual = |lhs - rhs|``; inequality checks read
    ``lhs <= rhs`` and have ``residual = max(0, lhs - rhs)``.  ``passed`` is
    ``residual <= tolerance``.
    """

    check_name: str
    kind: str
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool
    seed: Optional[int] = None
    context: dict = field(default_factory=dict)

    @classmethod
    def equality(cls, name, lhs, rhs, tol=EQ_TOL, seed=None, **context):
        lhs, rhs = float(lhs), float(rhs)
        res = abs(lhs - rhs)
        return cls(name, EQUALITY, lhs, rhs, res, float(tol), bool(res <= tol), seed, context)

    @classmethod
    def inequality(cls, name, lhs, rhs, tol=INEQ_TOL, seed=None, **context):
        lhs, rhs = float(lhs), float(rhs)
        res = max(0.0, lhs - rhs)
        return cls(name, INEQUALITY, lhs, rhs, res, float(tol), bool(res <= tol), seed, context)


def _max_cross_norm(mats) -> float:
    best = 0.0
    for a, b in itertools.combinations(mats, 2):
        best = max(best, float(np.linalg.norm(a @ b)), float(np.linalg.norm(b @ a)))
    return best


def _reduction_cross_norm(mixture: Mixture, s: int) -> float:
    return _max_cross_norm([partial_trace(c, (s,)).mat for c in mixture.components])


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise PremiseError(msg)


# -- correlation additivity ------------------------------------------------------


def verify_lemma1(rho: DensityMatrix, tol=None, *, product=False, base="bits", seed=None) -> VerificationReport:
    """Subadditivity ``S_{1..N} <= sum_n S_n``.

    With ``product=True`` (the caller built ``rho`` as a full product) the
    report is the equality case instead.
    """
    n = rho.n_subsystems
    if n < 2:
        raise PreconditionError("need at least two subsystems")
    s_total = von_neumann_entropy(rho, base)
    s_sum = sum(von_neumann_entropy(partial_trace(rho, (k,)), base) for k in range(1, n + 1))
    ctx = dict(dims=list(rho.dims), base=str(base))
    if product:
        return VerificationReport.equality("lemma1-equality", s_total, s_sum, tol or EQ_TOL, seed, **ctx)
    return VerificationReport.inequality("lemma1", s_total, s_sum, tol or INEQ_TOL, seed, **ctx)


def verify_theorem1(rho: DensityMatrix, partition: Partition, tol=EQ_TOL, *, base="bits", seed=None):
    """Cluster additivity: total = among-cluster + sum of within-cluster."""
    total = correlation_information(rho, base)
    among = among_cluster_information(rho, partition, base)
    within = [within_cluster_information(rho, c, base) for c in partition]
    return VerificationReport.equality(
        "theorem1",
        total,
        among + sum(within),
        tol,
        seed,
        dims=list(rho.dims),
        partition=str(partition),
        among=among,
        within=within,
    )


def verify_theorem1_all_partitions(rho: DensityMatrix, tol=EQ_TOL, *, base="bits", seed=None) -> list:
    n = rho.n_subsystems
    if n > MAX_PARTITION_N:
        raise PreconditionError(f"N = {n} exceeds the all-partitions cap {MAX_PARTITION_N}")
    return [verify_theorem1(rho, p, tol, base=base, seed=seed) for p in set_partitions(n)]


def verify_corollary1(rho: DensityMatrix, split_tree, tol=EQ_TOL, *, base="bits", seed=None):
    terms = binary_decomposition(rho, split_tree, base)
    return VerificationReport.equality(
        "corollary1",
        sum(v for _, v in terms),
        correlation_information(rho, base),
        tol,
        seed,
        dims=list(rho.dims),
        tree=repr(split_tree),
        terms=[[label, v] for label, v in terms],
    )


# -- strong subadditivity ----------------------------------------------------------


def verify_ssa(rho: DensityMatrix, a, b, discard, tol=None, *, equality=False, base="bits", seed=None):
    """``I(a; b minus discard) <= I(a; b)``.

    ``equality=True`` instead asks whether the excess is within ``tol`` of
    zero (SSA equality).  The raw excess is always in ``context``.
    """
    excess = ssa_excess(rho, a, b, discard, base)
    full = mutual_information(rho, a, b, base)
    reduced = full - excess
    ctx = dict(dims=list(rho.dims), a=sorted(a), b=sorted(b), discard=sorted(discard), excess=excess)
    if equality:
        return VerificationReport.equality("ssa-equality", reduced, full, tol or EQ_TOL, seed, **ctx)
    return VerificationReport.inequality("ssa", reduced, full, tol or INEQ_TOL, seed, **ctx)


def _tripartite_mis(rho, base):
    return dict(
        I12=mutual_information(rho, (1,), (2,), base),
        I23=mutual_information(rho, (2,), (3,), base),
        I1_23=mutual_information(rho, (1,), (2, 3), base),
        I12_3=mutual_information(rho, (1, 2), (3,), base),
    )


def verify_eq19_excess_pairing(rho: DensityMatrix, tol=EQ_TOL, *, base="bits", seed=None):
    """``I_{1,23} - I_12 = I_{12,3} - I_23``."""
    if rho.n_subsystems != 3:
        raise PreconditionError(f"excess pairing needs a tripartite state, got N = {rho.n_subsystems}")
    m = _tripartite_mis(rho, base)
    return VerificationReport.equality(
        "eq19-excess-pairing",
        m["I1_23"] - m["I12"],
        m["I12_3"] - m["I23"],
        tol,
        seed,
        dims=list(rho.dims),
        rewritten_lhs=m["I1_23"] + m["I23"],
        rewritten_rhs=m["I12_3"] + m["I12"],
        **m,
    )


def verify_corollary2(rho, m, k_cluster, l_cluster, l_prime, tol=EQ_TOL, *, base="bits", seed=None):
    """For ``rho = rho_{1..M} (x) rho_{M+1..N}``, discarding any of
    ``M+1..N`` from ``C_l`` leaves ``I(C_k; C_l)`` unchanged.

    Raises :class:`PremiseError` naming the failing containment, or if
    ``rho`` does not factor across the ``M | M+1`` cut.
    """
    n = rho.n_subsystems
    m = int(m)
    if not 1 <= m < n:
        raise PremiseError(f"split point M = {m} must satisfy 1 <= M < N = {n}")
    tail = set(range(m + 1, n + 1))
    ck, cl, clp = set(k_cluster), set(l_cluster), set(l_prime)
    problems = []
    if not tail <= cl:
        problems.append(f"C_l = {sorted(cl)} does not contain {{M+1..N}} = {sorted(tail)}")
    if not cl - tail:
        problems.append(f"C_l = {sorted(cl)} has no subsystem besides {sorted(tail)}")
    if ck & cl or not ck:
        problems.append(f"C_k = {sorted(ck)} must be nonempty and disjoint from C_l")
    if not (clp <= cl and cl - clp <= tail and cl - tail <= clp):
        problems.append(f"C_l' = {sorted(clp)} is not C_l minus a subset of {sorted(tail)}")
    if problems:
        raise PremiseError("; ".join(problems))
    head = tuple(range(1, m + 1))
    factored = product_state([partial_trace(rho, head), partial_trace(rho, tuple(sorted(tail)))])
    gap = float(np.linalg.norm(rho.mat - factored.mat))
    _require(gap <= tol, f"state does not factor across subsystems 1..{m} | {m + 1}..{n} (gap {gap:.3e})")
    return VerificationReport.equality(
        "corollary2",
        mutual_information(rho, ck, cl, base),
        mutual_information(rho, ck, clp, base),
        tol,
        seed,
        dims=list(rho.dims),
        M=m,
        C_k=sorted(ck),
        C_l=sorted(cl),
        C_l_prime=sorted(clp),
    )


# -- mixtures --------------------------------------------------------------------


def _require_biorthogonal(mixture: Mixture, tol, what="12-reductions"):
    for s in (1, 2):
        x = _reduction_cross_norm(mixture, s)
        _require(x <= tol, f"{what} are not biorthogonal: max ||rho_{s}^k rho_{s}^k'||_F = {x:.3e}")


def verify_lemma2(mixture: Mixture, tol=EQ_TOL, *, seed=None):
    """Biorthogonal 12-reductions imply orthogonal range projectors on 2
    and orthogonal 23-reductions."""
    if len(mixture.dims) != 3:
        raise PreconditionError(f"lemma2 needs tripartite components, got dims {mixture.dims}")
    _require_biorthogonal(mixture.ptrace((1, 2)), tol)
    proj = [range_projector(partial_trace(c, (2,))) for c in mixture.components]
    r_cross = _max_cross_norm(proj)
    rho23_cross = _reduction_pairs_23(mixture)
    rho1_cross = _reduction_cross_norm(mixture, 1)
    worst = max(r_cross, rho23_cross, rho1_cross)
    return VerificationReport.equality(
        "lemma2",
        worst,
        0.0,
        tol,
        seed,
        dims=list(mixture.dims),
        K=len(mixture),
        range_projector_cross=r_cross,
        rho23_cross=rho23_cross,
        rho1_cross=rho1_cross,
    )


def _reduction_pairs_23(mixture: Mixture) -> float:
    return _max_cross_norm([partial_trace(c, (2, 3)).mat for c in mixture.components])


def verify_lemma3(mixture: Mixture, tol=EQ_TOL, *, base="bits", seed=None):
    """Mutual information of a biorthogonal mixture is ``H(w)`` plus the
    weighted component mutual informations."""
    if len(mixture.dims) != 2:
        raise PreconditionError(f"lemma3 needs bipartite components, got dims {mixture.dims}")
    _require_biorthogonal(mixture, tol, "component reductions")
    rho = mixture.mix()
    h = shannon_entropy(mixture.weights, base)
    avg = sum(w * mutual_information(c, (1,), (2,), base) for w, c in zip(mixture.weights, mixture.components))
    return VerificationReport.equality(
        "lemma3",
        mutual_information(rho, (1,), (2,), base),
        h + avg,
        tol,
        seed,
        dims=list(mixture.dims),
        weights=list(mixture.weights),
        shannon=h,
        mean_component_mi=avg,
    )


def _relative_terms(mixture: Mixture, rho: DensityMatrix, base):
    for k, c in enumerate(mixture.components):
        _require(support_contained(c, rho), f"component {k} is not supported inside the mixture's support")
    return [relative_entropy(c, rho, base) for c in mixture.components]


def verify_lemma4(mixture: Mixture, tol=EQ_TOL, *, base="bits", seed=None):
    """``S(rho) = sum_k w_k S(rho^k || rho) + sum_k w_k S(rho^k)`` for any mixture."""
    rho = mixture.mix()
    w = mixture.weights
    rel = _relative_terms(mixture, rho, base)
    rel_avg = sum(wk * r for wk, r in zip(w, rel))
    ent_avg = sum(wk * von_neumann_entropy(c, base) for wk, c in zip(w, mixture.components))
    return VerificationReport.equality(
        "lemma4",
        von_neumann_entropy(rho, base),
        rel_avg + ent_avg,
        tol,
        seed,
        dims=list(mixture.dims),
        weights=list(w),
        mean_relative_entropy=rel_avg,
        mean_entropy=ent_avg,
        shannon=shannon_entropy(w, base),
    )


def verify_mixing_property(mixture: Mixture, tol=EQ_TOL, *, base="bits", seed=None):
    """Orthogonal mixtures: ``sum_k w_k S(rho^k || rho) = H(w)``, so that
    ``S(rho) = H(w) + sum_k w_k S(rho^k)``."""
    cross = _max_cross_norm([c.mat for c in mixture.components])
    _require(cross <= tol, f"components are not mutually orthogonal: max ||rho^k rho^k'||_F = {cross:.3e}")
    rho = mixture.mix()
    rel = _relative_terms(mixture, rho, base)
    return VerificationReport.equality(
        "mixing-property",
        sum(wk * r for wk, r in zip(mixture.weights, rel)),
        shannon_entropy(mixture.weights, base),
        tol,
        seed,
        dims=list(mixture.dims),
        weights=list(mixture.weights),
    )


def verify_lemma5(mixture: Mixture, tol=EQ_TOL, *, base="bits", seed=None):
    """Mixture of bipartite states orthogonal on the first subsystem:
    ``I = sum_k w_k S(rho_B^k || rho_B) + sum_k w_k I^k``."""
    if len(mixture.dims) != 2:
        raise PreconditionError(f"lemma5 needs bipartite components, got dims {mixture.dims}")
    x = _reduction_cross_norm(mixture, 1)
    _require(x <= tol, f"mixture is not monoorthogonal: max ||rho_2^k rho_2^k'||_F = {x:.3e}")
    rho = mixture.mix()
    red = mixture.ptrace((2,))
    rel = _relative_terms(red, red.mix(), base)
    w = mixture.weights
    rel_avg = sum(wk * r for wk, r in zip(w, rel))
    mi_avg = sum(wk * mutual_information(c, (1,), (2,), base) for wk, c in zip(w, mixture.components))
    return VerificationReport.equality(
        "lemma5",
        mutual_information(rho, (1,), (2,), base),
        rel_avg + mi_avg,
        tol,
        seed,
        dims=list(mixture.dims),
        weights=list(w),
        mean_relative_entropy=rel_avg,
        mean_component_mi=mi_avg,
    )


# -- SSA-equality family ---------------------------------------------------------


def verify_theorem2(dims, alloc: BlockAllocation, weights, rng, tol=EQ_TOL, *, base="bits", seed=None, **family_kw):
    """Build the SSA-equality family and check it end to end.

    Reports, in order: per-component ``I_12 = I_{1,23}``; the same for the
    mixed state; ``I_23`` positive (or, for a single component, zero);
    ``I_23 = I_{12,3}``; the induced ``{1}+{23}`` biorthogonality.
    """
    distinct = family_kw.pop("distinct_rho3", True)
    rho, mix = theorem2_family(dims, alloc, weights, rng, distinct, **family_kw)
    k = len(mix)
    ctx = dict(dims=list(rho.dims), K=k, weights=list(mix.weights), blocks=[list(r) for r in alloc.blocks])

    per = []
    for c in mix.components:
        per.append(mutual_information(c, (1,), (2,), base) - mutual_information(c, (1,), (2, 3), base))
    worst = max(abs(x) for x in per)
    reports = [VerificationReport.equality("theorem2-components", worst, 0.0, tol, seed, per_component=per, **ctx)]

    m = _tripartite_mis(rho, base)
    reports.append(VerificationReport.equality("theorem2-ssa-equality", m["I12"], m["I1_23"], tol, seed, **ctx))

    if k == 1:
        reports.append(VerificationReport.equality("theorem2-I23-zero", m["I23"], 0.0, tol, seed, **ctx))
    elif distinct or family_kw.get("rho3_states") is not None:
        # I23 >= tol, phrased as tol <= I23 with no slack
        reports.append(VerificationReport.inequality("theorem2-I23-positive", tol, m["I23"], 0.0, seed, I23=m["I23"], **ctx))
    else:
        red = mix.ptrace((2, 3))
        within = sum(w * mutual_information(c, (1,), (2,), base) for w, c in zip(red.weights, red.components))
        reports.append(VerificationReport.equality("theorem2-I23-within", m["I23"], within, tol, seed, **ctx))

    reports.append(VerificationReport.equality("theorem2-eq20", m["I23"], m["I12_3"], tol, seed, **ctx))
    lemma2 = verify_lemma2(mix, tol, seed=seed)
    lemma2.check_name = "theorem2-lemma2"
    reports.append(lemma2)
    return reports
