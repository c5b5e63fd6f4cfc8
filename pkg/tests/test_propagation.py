import numpy as np
import pytest
from math import factorial, sqrt

from oracles import (
    distinguishable_bruteforce,
    fock_sector_matrix,
    random_unitary,
)
from pnrqrc.encoding import PolarisationState
from pnrqrc.fockspace import FockBasis
from pnrqrc.propagation import (
    InputState,
    PortStateSpec,
    build_input_state,
    fock_amplitude,
    intensity_expectation,
    propagate,
    propagate_distinguishable,
    trace_polarisation,
)

BALANCED = np.array(
    [[sqrt(0.5), sqrt(0.5)], [-sqrt(0.5), sqrt(0.5)]], dtype=complex
)


class TestPortStateSpec:
    def test_negative_photons_rejected(self):
        with pytest.raises(ValueError):
            PortStateSpec(n=-1)

    def test_distinguishable_coherent_rejected(self):
        with pytest.raises(ValueError):
            PortStateSpec(n=1, alpha=0.5, distinguishable=True)


class TestBuildInputState:
    def test_pure_fock_single_component(self):
        specs = [PortStateSpec(n=1)] * 4 + [PortStateSpec(n=0)]
        state = build_input_state(specs)
        assert len(state.components) == 1
        amp, occ = state.components[0]
        assert amp == pytest.approx(1.0)
        assert occ == (1, 0, 1, 0, 1, 0, 1, 0, 0, 0)
        assert state.truncation_mass == pytest.approx(0.0, abs=1e-12)

    def test_photon_added_laguerre_normalisation(self):
        # n = 1, alpha = 0.5: L_1(-0.25) = 1.25, so the lowest component
        # (k = 0, one photon) has amplitude e^{-0.125} / sqrt(1.25)
        state = build_input_state([PortStateSpec(n=1, alpha=0.5)], 1e-6)
        amps = {occ[0]: amp for amp, occ in state.components}
        expected0 = np.exp(-0.125) / sqrt(1.25)
        assert amps[1] == pytest.approx(expected0, rel=1e-12)
        # k = 1: c_1 * sqrt(2!/1!) / norm
        expected1 = np.exp(-0.125) * 0.5 * sqrt(2.0) / sqrt(1.25)
        assert amps[2] == pytest.approx(expected1, rel=1e-12)
        assert state.norm_squared() + state.truncation_mass == pytest.approx(
            1.0, abs=1e-9
        )

    def test_coherent_sixth_order(self):
        # alpha = 1.5 with the default cutoff and a hard cap of 6 keeps
        # Fock components up to the sixth order
        state = build_input_state([PortStateSpec(alpha=1.5)], 0.01, 6)
        orders = {occ[0] for _, occ in state.components}
        assert max(orders) == 6

    def test_tight_cutoff_small_truncation(self):
        state = build_input_state([PortStateSpec(alpha=0.8)], 1e-8)
        assert state.truncation_mass < 1e-8

    def test_polarised_single_photon(self):
        pol = PolarisationState(theta=np.pi / 4, phi=0.0)
        state = build_input_state([PortStateSpec(n=1, polarisation=pol)])
        comps = {occ: amp for amp, occ in state.components}
        assert comps[(1, 0)] == pytest.approx(sqrt(0.5))
        assert comps[(0, 1)] == pytest.approx(sqrt(0.5))

    def test_distinguishable_flag_propagates(self):
        state = build_input_state(
            [PortStateSpec(n=1, distinguishable=True), PortStateSpec(n=0)]
        )
        assert state.distinguishable

    def test_mixed_distinguishability_rejected(self):
        with pytest.raises(ValueError, match="cannot mix"):
            build_input_state(
                [PortStateSpec(n=1, distinguishable=True), PortStateSpec(n=1)]
            )

    def test_cutoff_validation(self):
        with pytest.raises(ValueError):
            build_input_state([PortStateSpec(n=1)], relative_cutoff=1.5)


class TestFockAmplitude:
    def test_identity(self):
        assert fock_amplitude(np.eye(2), (1, 1), (1, 1)) == pytest.approx(1.0)

    def test_hom_null(self):
        assert fock_amplitude(BALANCED, (1, 1), (1, 1)) == pytest.approx(0.0)

    def test_hom_bunching(self):
        amp = fock_amplitude(BALANCED, (1, 1), (2, 0))
        assert abs(amp) ** 2 == pytest.approx(0.5)

    def test_photon_mismatch_rejected(self):
        with pytest.raises(ValueError):
            fock_amplitude(np.eye(2), (1, 0), (1, 1))

    def test_ladder_operator_oracle(self, rng):
        for modes in (2, 3):
            for photons in (1, 2, 3):
                for _ in range(5):
                    u = random_unitary(modes, rng)
                    oracle = fock_sector_matrix(u, modes, photons)
                    basis = FockBasis(modes, photons)
                    for j, occ_in in enumerate(basis.occupations):
                        for i, occ_out in enumerate(basis.occupations):
                            assert fock_amplitude(
                                u, occ_in, occ_out
                            ) == pytest.approx(oracle[i, j], abs=1e-9)


class TestPropagate:
    def test_identity_unitary(self):
        state = InputState(
            components=[(sqrt(0.5), (1, 0)), (sqrt(0.5) * 1j, (0, 1))],
            mode_count=2,
        )
        dist = propagate(state, np.eye(2))
        assert dist.probabilities[(1, 0)] == pytest.approx(0.5)
        assert dist.probabilities[(0, 1)] == pytest.approx(0.5)

    def test_single_photon_columns(self, rng):
        u = random_unitary(4, rng)
        state = InputState(components=[(1.0, (0, 1, 0, 0))], mode_count=4)
        dist = propagate(state, u)
        for j in range(4):
            occ = tuple(1 if i == j else 0 for i in range(4))
            assert dist.probabilities.get(occ, 0.0) == pytest.approx(
                abs(u[j, 1]) ** 2
            )

    def test_hom(self):
        state = InputState(components=[(1.0, (1, 1))], mode_count=2)
        dist = propagate(state, BALANCED)
        assert dist.probabilities.get((1, 1), 0.0) == 0.0
        assert dist.probabilities[(2, 0)] == pytest.approx(0.5, abs=1e-12)
        assert dist.probabilities[(0, 2)] == pytest.approx(0.5, abs=1e-12)

    def test_norm_preserved_for_superpositions(self, rng):
        specs = [PortStateSpec(alpha=0.6), PortStateSpec(n=1, alpha=0.4)]
        state = build_input_state(specs, 1e-7, max_order=5)
        u = random_unitary(4, rng)
        dist = propagate(state, u)
        assert dist.total_probability() + dist.truncation_mass == pytest.approx(
            1.0, abs=1e-10
        )

    def test_coherent_product_poisson_oracle(self, rng):
        # coherent input through any passive unitary stays coherent with
        # amplitudes beta = U alpha; counts are independent Poissons
        alphas = np.array([0.5, 0.0, 0.7j, 0.0])
        specs = [PortStateSpec(alpha=a) for a in alphas[0::2]]
        state = build_input_state(specs, 1e-9, max_order=6)
        u = random_unitary(4, rng)
        dist = propagate(state, u)
        beta = u @ alphas
        for occ, p in dist.probabilities.items():
            if sum(occ) > 6:
                # sectors above the per-port order cap are partially truncated
                continue
            expected = np.exp(-np.sum(np.abs(beta) ** 2))
            for b, n in zip(beta, occ):
                expected *= abs(b) ** (2 * n) / factorial(n)
            assert p == pytest.approx(expected, rel=1e-5, abs=1e-12)

    def test_sector_cap_tracks_truncation(self):
        state = build_input_state([PortStateSpec(alpha=1.0)], 1e-9)
        dist = propagate(state, np.eye(2), max_total_photons=2)
        assert dist.truncation_mass > 1e-3
        assert dist.total_probability() + dist.truncation_mass == pytest.approx(
            1.0, abs=1e-9
        )
        assert all(sum(occ) <= 2 for occ in dist.probabilities)

    def test_dimension_mismatch(self):
        state = InputState(components=[(1.0, (1, 0))], mode_count=2)
        with pytest.raises(ValueError):
            propagate(state, np.eye(3))


class TestDistinguishable:
    def test_hom(self):
        dist = propagate_distinguishable((1, 1), BALANCED)
        assert dist.probabilities[(1, 1)] == pytest.approx(0.5)
        assert dist.probabilities[(2, 0)] == pytest.approx(0.25)
        assert dist.probabilities[(0, 2)] == pytest.approx(0.25)

    def test_identity(self):
        dist = propagate_distinguishable((2, 1, 0), np.eye(3))
        assert dist.probabilities == {(2, 1, 0): pytest.approx(1.0)}

    def test_bruteforce_oracle(self, rng):
        u = random_unitary(4, rng)
        occ = (1, 0, 2, 0)
        dist = propagate_distinguishable(occ, u)
        oracle = distinguishable_bruteforce(occ, u)
        assert set(dist.probabilities) == set(oracle)
        for key, p in oracle.items():
            assert dist.probabilities[key] == pytest.approx(p, rel=1e-10)

    def test_single_photon_matches_indistinguishable(self, rng):
        u = random_unitary(3, rng)
        dist_d = propagate_distinguishable((0, 1, 0), u)
        state = InputState(components=[(1.0, (0, 1, 0))], mode_count=3)
        dist_i = propagate(state, u)
        for occ, p in dist_d.probabilities.items():
            assert dist_i.probabilities.get(occ, 0.0) == pytest.approx(p)

    def test_normalised(self, rng):
        u = random_unitary(4, rng)
        dist = propagate_distinguishable((1, 1, 1, 0), u)
        assert dist.total_probability() == pytest.approx(1.0, abs=1e-12)


class TestTracePolarisation:
    def test_examples(self):
        from pnrqrc.propagation import OutputDistribution

        dist = trace_polarisation(
            OutputDistribution(probabilities={(1, 0, 0, 1): 1.0}, mode_count=4)
        )
        assert dist.probabilities == {(1, 1): pytest.approx(1.0)}

    def test_merging(self):
        from pnrqrc.propagation import OutputDistribution

        dist = OutputDistribution(
            probabilities={(1, 0, 0, 0): 0.5, (0, 1, 0, 0): 0.5}, mode_count=4
        )
        traced = trace_polarisation(dist)
        assert traced.probabilities == {(1, 0): pytest.approx(1.0)}

    def test_sum_preserved(self, rng):
        from pnrqrc.propagation import OutputDistribution

        occs = [tuple(rng.integers(0, 3, size=4)) for _ in range(8)]
        weights = rng.uniform(0, 1, size=8)
        weights /= weights.sum()
        dist = OutputDistribution(
            probabilities={o: w for o, w in zip(occs, weights)}, mode_count=4
        )
        traced = trace_polarisation(dist)
        assert traced.total_probability() == pytest.approx(
            dist.total_probability(), abs=1e-12
        )


class TestIntensity:
    def test_identity_network(self):
        specs = [PortStateSpec(alpha=0.5), PortStateSpec(alpha=0.0)]
        out = intensity_expectation(specs, np.eye(4))
        assert out == pytest.approx([0.25, 0.0])

    def test_total_intensity_conserved(self, rng):
        specs = [PortStateSpec(alpha=a) for a in (0.5, 0.5, 0.5, 0.5, 0.0)]
        u = random_unitary(10, rng)
        out = intensity_expectation(specs, u)
        assert out.sum() == pytest.approx(4 * 0.25, abs=1e-12)

    def test_rejects_photon_additions(self):
        with pytest.raises(ValueError, match="purely coherent"):
            intensity_expectation([PortStateSpec(n=1, alpha=0.5)], np.eye(2))
