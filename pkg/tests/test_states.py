import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ssalab import (
    BlockAllocation,
    DensityMatrix,
    Mixture,
    biorthogonal_mixture,
    correlation_information,
    monoorthogonal_mixture,
    mutual_information,
    named_state,
    orthogonal_mixture,
    partial_trace,
    product_state,
    random_density,
    random_pure,
    shannon_entropy,
    theorem2_family,
    von_neumann_entropy,
)
from ssalab.errors import DimensionError, PreconditionError

seeds = st.integers(0, 2**32 - 1)
B22 = BlockAllocation.uniform((2, 2))


def cross(mats):
    return max(
        (np.linalg.norm(a @ b) for i, a in enumerate(mats) for j, b in enumerate(mats) if i != j), default=0.0
    )


def reduced_cross(mix, s):
    return cross([partial_trace(c, (s,)).mat for c in mix.components])


class TestRandom:
    def test_rank_one_is_pure(self):
        assert abs(von_neumann_entropy(random_density((2, 2), 1, 3))) <= 1e-9

    def test_full_rank_qubit(self):
        lam_min = [random_density((2,), 2, s).spectrum.eigenvalues[-1] for s in range(100)]
        assert sum(l > 1e-12 for l in lam_min) >= 99

    def test_deterministic(self):
        a, b = random_density((2, 3), None, 11), random_density((2, 3), None, 11)
        assert a.mat.tobytes() == b.mat.tobytes()

    @pytest.mark.parametrize("rank", [0, 7])
    def test_rank_range(self, rank):
        with pytest.raises(PreconditionError):
            random_density((2, 3), rank, 0)

    @given(seeds, st.integers(1, 6))
    @settings(max_examples=25, deadline=None)
    def test_requested_rank(self, seed, rank):
        assert random_density((3, 2), rank, seed).rank == rank

    def test_pure(self):
        rho = random_pure((2, 2), 9)
        assert abs(von_neumann_entropy(rho)) <= 1e-9
        assert abs(rho.purity() - 1) <= 1e-9
        assert random_pure((2, 2), 9) == rho


class TestProduct:
    def test_single_factor(self):
        r = random_density((3,), None, 1)
        assert product_state([r]) == r

    def test_product_cut(self):
        rho = product_state([random_density((2, 2), None, 1), random_density((2,), None, 2)])
        assert abs(mutual_information(rho, {1, 2}, {3})) <= 1e-9

    def test_full_product(self):
        factors = [random_density((d,), None, d) for d in (2, 3, 2)]
        rho = product_state(factors)
        assert abs(correlation_information(rho)) <= 1e-9
        for k, f in enumerate(factors, start=1):
            assert np.max(np.abs(partial_trace(rho, {k}).mat - f.mat)) <= 1e-12


class TestMixture:
    def test_rejects_zero_weight(self):
        r = random_density((2,), None, 0)
        with pytest.raises(PreconditionError):
            Mixture((1.0, 0.0), (r, r))

    def test_rejects_mismatched_dims(self):
        with pytest.raises(DimensionError):
            Mixture((0.5, 0.5), (random_density((2,), None, 0), random_density((3,), None, 0)))


class TestBiorthogonal:
    def test_single_block(self):
        mix = biorthogonal_mixture((3, 3), BlockAllocation(((3,), (3,))), (1.0,), 1)
        assert len(mix) == 1 and mix.components[0].rank == 9

    @given(seeds, st.booleans())
    @settings(max_examples=20, deadline=None)
    def test_reductions_orthogonal(self, seed, scramble):
        mix = biorthogonal_mixture((4, 4), B22, (0.5, 0.5), seed, scramble=scramble)
        assert reduced_cross(mix, 1) <= 1e-10
        assert reduced_cross(mix, 2) <= 1e-10

    @pytest.mark.parametrize("seed", range(5))
    def test_mixing_property_of_entropy(self, seed):
        w = (0.3, 0.7)
        mix = biorthogonal_mixture((4, 4), B22, w, seed)
        lhs = von_neumann_entropy(mix.mix())
        rhs = shannon_entropy(w) + sum(wk * von_neumann_entropy(c) for wk, c in zip(w, mix.components))
        assert abs(lhs - rhs) <= 1e-8
        assert abs(oracles.entropy_bits(mix.mix().mat) - rhs) <= 1e-8

    def test_overflow(self):
        with pytest.raises(DimensionError, match="overflow"):
            biorthogonal_mixture((3, 4), B22, (0.5, 0.5), 0)

    def test_weights_length(self):
        with pytest.raises(PreconditionError):
            biorthogonal_mixture((4, 4), B22, (1.0,), 0)


class TestMonoorthogonal:
    def test_single_block(self):
        mix = monoorthogonal_mixture((2, 3), BlockAllocation(((2,),)), (1.0,), 0)
        assert mix.dims == (2, 3)

    @given(seeds)
    @settings(max_examples=20, deadline=None)
    def test_first_reduction_orthogonal(self, seed):
        mix = monoorthogonal_mixture((5, 2), BlockAllocation(((2, 3),)), (0.4, 0.6), seed)
        assert reduced_cross(mix, 1) <= 1e-10
        # subsystem 3 stays unconstrained
        assert reduced_cross(mix, 2) > 1e-3

    def test_identical_rho3(self):
        mix = monoorthogonal_mixture((4, 2), BlockAllocation(((2, 2),)), (0.5, 0.5), 4, identical_rho3=True)
        r3 = [partial_trace(c, (2,)).mat for c in mix.components]
        assert np.max(np.abs(r3[0] - r3[1])) <= 1e-15
        i23 = mutual_information(mix.mix(), 1, 2)
        avg = sum(w * mutual_information(c, 1, 2) for w, c in zip(mix.weights, mix.components))
        assert avg > 1e-3
        assert abs(i23 - avg) <= 1e-8
        # independent path for the mixed state
        assert abs(oracles.mutual_info(mix.mix().mat, (4, 2), (1,), (2,)) - avg) <= 1e-8

    def test_overflow(self):
        with pytest.raises(DimensionError):
            monoorthogonal_mixture((3, 2), BlockAllocation(((2, 2),)), (0.5, 0.5), 0)


class TestTheorem2Family:
    def test_single_component_is_product_cut(self):
        rho, mix = theorem2_family((2, 2, 2), BlockAllocation(((2,), (2,))), (1.0,), 3)
        assert abs(mutual_information(rho, 1, 2) - mutual_information(rho, 1, (2, 3))) <= 1e-8
        assert abs(mutual_information(rho, 2, 3)) <= 1e-8

    def test_canonical_two_blocks(self):
        kets = [DensityMatrix((2,), np.diag([1.0, 0.0])), DensityMatrix((2,), np.diag([0.0, 1.0]))]
        rho, _ = theorem2_family((4, 4, 2), B22, (0.5, 0.5), 7, rho3_states=kets)
        dims = (4, 4, 2)
        i12 = oracles.mutual_info(rho.mat, dims, (1,), (2,))
        i1_23 = oracles.mutual_info(rho.mat, dims, (1,), (2, 3))
        i23 = oracles.mutual_info(rho.mat, dims, (2,), (3,))
        assert abs(i12 - i1_23) <= 1e-8
        assert i23 >= 0.5
        assert abs(mutual_information(rho, 2, 3) - i23) <= 1e-9

    def test_shared_rho3_product_components(self):
        rho, mix = theorem2_family((4, 4, 2), B22, (0.5, 0.5), 2, distinct_rho3=False)
        # every component is rho_12^k (x) rho_3 with the same rho_3: the mixture is a product cut
        assert abs(mutual_information(rho, 2, 3)) <= 1e-8
        assert abs(mutual_information(rho, 1, 2) - mutual_information(rho, 1, (2, 3))) <= 1e-8

    @given(seeds)
    @settings(max_examples=15, deadline=None)
    def test_23_reductions_orthogonal(self, seed):
        _, mix = theorem2_family((4, 4, 2), B22, (0.5, 0.5), seed)
        assert cross([partial_trace(c, (2, 3)).mat for c in mix.components]) <= 1e-10

    def test_deterministic(self):
        a, _ = theorem2_family((4, 4, 2), B22, (0.5, 0.5), 7)
        b, _ = theorem2_family((4, 4, 2), B22, (0.5, 0.5), 7)
        assert a.mat.tobytes() == b.mat.tobytes()

    def test_distinct_rho3(self):
        _, mix = theorem2_family((6, 6, 3), BlockAllocation.uniform((2, 2, 2)), (0.5, 0.3, 0.2), 1)
        r3 = [partial_trace(c, (3,)).mat for c in mix.components]
        assert min(np.linalg.norm(r3[i] - r3[j]) for i in range(3) for j in range(i + 1, 3)) > 1e-6

    def test_overflow(self):
        with pytest.raises(DimensionError):
            theorem2_family((3, 4, 2), B22, (0.5, 0.5), 0)


class TestNamed:
    def test_bell(self):
        rho = named_state("bell")
        psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        assert rho.dims == (2, 2)
        assert np.allclose(rho.mat, np.outer(psi, psi))

    def test_ghz(self):
        rho = named_state("ghz")
        assert rho.dims == (2, 2, 2)
        assert abs(von_neumann_entropy(rho)) <= 1e-9

    def test_max_mixed(self):
        rho = named_state("max_mixed", dims=(3,))
        assert np.allclose(rho.mat, np.eye(3) / 3)
        assert von_neumann_entropy(rho, "nats") == pytest.approx(np.log(3), abs=1e-12)

    def test_w(self):
        rho = named_state("w")
        assert rho.mat[1, 2] == pytest.approx(1 / 3)

    def test_unknown(self):
        with pytest.raises(PreconditionError):
            named_state("cat")


def test_orthogonal_mixture_components_orthogonal():
    mix = orthogonal_mixture((3,), (1, 2), (0.25, 0.75), 0)
    assert cross([c.mat for c in mix.components]) <= 1e-15
