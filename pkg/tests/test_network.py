import numpy as np
import pytest

from oracles import reck_unitary
from pnrqrc.network import (
    Crossing,
    PolarisingNetwork,
    RetarderPair,
    assemble,
    beamsplitter_phase_matrix,
    crossing_matrix,
    givens_embed,
    ipbs_matrix,
    output_phase_matrix,
    random_reservoir,
    reck_crossing_order,
    retarder_pair_matrix,
)


def unitarity_error(mat):
    mat = np.asarray(mat)
    return np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))


def random_crossing(rng, pair=(1, 2), identity_retarders=False):
    ret = (
        RetarderPair()
        if identity_retarders
        else RetarderPair(*rng.uniform(0, 2 * np.pi, size=6))
    )
    alpha = rng.uniform(0, np.pi / 2)
    return Crossing(
        port_pair=pair,
        alpha_h=alpha,
        alpha_v=alpha,
        retarders=ret,
        phase=rng.uniform(0, 2 * np.pi),
    )


class TestPrimitives:
    def test_beamsplitter_phase_identity(self):
        assert np.allclose(beamsplitter_phase_matrix(0, 0), np.eye(2))

    def test_beamsplitter_phase_entries(self):
        alpha, beta = 0.7, 1.3
        mat = beamsplitter_phase_matrix(alpha, beta)
        e = np.exp(1j * beta)
        assert mat[0, 0] == pytest.approx(np.cos(alpha) * e)
        assert mat[0, 1] == pytest.approx(np.sin(alpha))
        assert mat[1, 0] == pytest.approx(-np.sin(alpha) * e)
        assert mat[1, 1] == pytest.approx(np.cos(alpha))

    def test_primitives_unitary(self, rng):
        for _ in range(50):
            assert unitarity_error(
                beamsplitter_phase_matrix(*rng.uniform(0, 2 * np.pi, 2))
            ) < 1e-12
            assert unitarity_error(
                ipbs_matrix(*rng.uniform(0, np.pi / 2, 2))
            ) < 1e-12
            pair = RetarderPair(*rng.uniform(0, 2 * np.pi, 6))
            assert unitarity_error(retarder_pair_matrix(pair)) < 1e-12
            assert unitarity_error(
                output_phase_matrix(rng.uniform(0, 2 * np.pi, 4))
            ) < 1e-12
            assert unitarity_error(crossing_matrix(random_crossing(rng))) < 1e-12

    def test_ipbs_block_structure(self):
        mat = ipbs_matrix(0.4, 1.1)
        # H and V subspaces do not mix: local order (m_H, p_H, m_V, p_V)
        assert np.all(mat[:2, 2:] == 0)
        assert np.all(mat[2:, :2] == 0)

    def test_identity_retarders(self):
        assert np.allclose(retarder_pair_matrix(RetarderPair()), np.eye(4))

    def test_retarder_acts_per_port(self, rng):
        # only port-1 parameters set: modes p_H, p_V (local 1, 3) untouched
        pair = RetarderPair(eta1=1.2, phi1=0.3, theta1=0.8)
        mat = retarder_pair_matrix(pair)
        for i in (1, 3):
            assert mat[i, i] == pytest.approx(1.0)
            for j in range(4):
                if j != i:
                    assert mat[i, j] == pytest.approx(0.0)

    def test_output_phase_values(self):
        psis = [0.5, 1.5]
        mat = output_phase_matrix(psis)
        expected = np.exp(1j * np.array([0.5, 0.5, 1.5, 1.5]))
        assert np.allclose(np.diag(mat), expected)
        assert np.allclose(mat, np.diag(np.diag(mat)))

    def test_crossing_h_restriction_is_beamsplitter(self, rng):
        # identity retarders: H part (sorted indices 0, 2) equals C(alpha, beta)
        for _ in range(10):
            c = random_crossing(rng, identity_retarders=True)
            mat = crossing_matrix(c)
            h_block = mat[np.ix_([0, 2], [0, 2])]
            assert np.allclose(
                h_block, beamsplitter_phase_matrix(c.alpha_h, c.phase), atol=1e-12
            )


class TestGivensEmbed:
    def test_product_property(self, rng):
        from oracles import random_unitary

        a = random_unitary(2, rng)
        b = random_unitary(2, rng)
        idx, dim = [1, 4], 6
        lhs = givens_embed(a, idx, dim) @ givens_embed(b, idx, dim)
        rhs = givens_embed(a @ b, idx, dim)
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            givens_embed(np.eye(2), [0], 4)
        with pytest.raises(IndexError):
            givens_embed(np.eye(2), [0, 5], 4)
        with pytest.raises(ValueError):
            givens_embed(np.eye(2), [2, 0], 4)
        with pytest.raises(ValueError):
            givens_embed(np.eye(2), [1, 1], 4)


class TestAssembly:
    def test_crossing_order(self):
        assert reck_crossing_order(3) == [(2, 3), (1, 2), (1, 3)]
        assert reck_crossing_order(4) == [
            (3, 4),
            (2, 3),
            (2, 4),
            (1, 2),
            (1, 3),
            (1, 4),
        ]

    def test_crossing_count(self):
        for m in (2, 3, 5):
            assert len(reck_crossing_order(m)) == m * (m - 1) // 2

    def test_assembled_unitary(self):
        for m in (2, 3, 5):
            for seed in range(10):
                net = random_reservoir(m, seed)
                assert unitarity_error(net.unitary) < 1e-10

    def test_h_subspace_matches_nonpolarised_reck(self, rng):
        # identity retarders, non-polarising IPBS: the polarised assembly
        # restricted to either polarisation subspace must equal an
        # independently coded M-mode triangular mesh with the same (alpha,
        # beta, psi) parameters.
        for m in (2, 3, 5):
            params = []
            crossings = []
            for pair in reck_crossing_order(m):
                alpha = rng.uniform(0, np.pi / 2)
                beta = rng.uniform(0, 2 * np.pi)
                params.append((pair, alpha, beta))
                crossings.append(
                    Crossing(
                        port_pair=pair,
                        alpha_h=alpha,
                        alpha_v=alpha,
                        retarders=RetarderPair(),
                        phase=beta,
                    )
                )
            psis = rng.uniform(0, 2 * np.pi, size=m)
            net = PolarisingNetwork(
                port_count=m, crossings=crossings, output_phases=list(psis)
            )
            full = assemble(net)
            oracle = reck_unitary(m, params, psis)
            assert np.allclose(full[0::2, 0::2], oracle, atol=1e-10)
            assert np.allclose(full[1::2, 1::2], oracle, atol=1e-10)
            assert np.max(np.abs(full[0::2, 1::2])) < 1e-12
            assert np.max(np.abs(full[1::2, 0::2])) < 1e-12

    def test_wrong_order_rejected(self, rng):
        crossings = [
            random_crossing(rng, pair) for pair in reversed(reck_crossing_order(3))
        ]
        net = PolarisingNetwork(
            port_count=3, crossings=crossings, output_phases=[0.0] * 3
        )
        with pytest.raises(ValueError, match="mesh order"):
            assemble(net)

    def test_wrong_phase_count_rejected(self, rng):
        crossings = [random_crossing(rng, pair) for pair in reck_crossing_order(2)]
        net = PolarisingNetwork(
            port_count=2, crossings=crossings, output_phases=[0.0]
        )
        with pytest.raises(ValueError, match="output_phases"):
            assemble(net)

    def test_invalid_port_pair(self):
        with pytest.raises(ValueError):
            Crossing(
                port_pair=(2, 2),
                alpha_h=0.0,
                alpha_v=0.0,
                retarders=RetarderPair(),
                phase=0.0,
            )


class TestRandomReservoir:
    def test_deterministic(self):
        a = random_reservoir(5, 42)
        b = random_reservoir(5, 42)
        assert a.to_dict() == b.to_dict()
        assert np.allclose(a.unitary, b.unitary)

    def test_seed_sensitivity(self):
        assert random_reservoir(5, 1).to_dict() != random_reservoir(5, 2).to_dict()

    def test_parameter_ranges(self):
        net = random_reservoir(5, 9)
        for c in net.crossings:
            assert 0 <= c.alpha_h <= np.pi / 2
            assert c.alpha_h == c.alpha_v  # non-polarising default
            assert 0 <= c.phase < 2 * np.pi
        assert all(0 <= p < 2 * np.pi for p in net.output_phases)

    def test_polarising_variant(self):
        net = random_reservoir(3, 5, polarising=True)
        assert any(c.alpha_h != c.alpha_v for c in net.crossings)
        assert unitarity_error(net.unitary) < 1e-10

    def test_too_few_ports(self):
        with pytest.raises(ValueError):
            random_reservoir(1, 0)


class TestSerialisation:
    def test_round_trip(self):
        net = random_reservoir(4, 17)
        restored = PolarisingNetwork.from_json(net.to_json())
        assert restored.to_dict() == net.to_dict()
        assert np.allclose(restored.unitary, net.unitary, atol=1e-12)

    def test_metadata_recorded(self):
        doc = random_reservoir(3, 8).to_dict()
        assert doc["ordering_version"] == "reck-interleaved-v1"
        assert doc["rng"] == "numpy-pcg64"
        assert doc["seed"] == 8

    def test_unknown_ordering_version_rejected(self):
        doc = random_reservoir(2, 1).to_dict()
        doc["ordering_version"] = "other-v9"
        with pytest.raises(ValueError, match="ordering version"):
            PolarisingNetwork.from_dict(doc)
