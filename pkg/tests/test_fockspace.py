import pytest
from hypothesis import given, strategies as st

from pnrqrc.fockspace import (
    FockBasis,
    collapse_polarisation,
    dimension,
    enumerate_occupations,
    total,
)


class TestDimension:
    def test_single_mode(self):
        assert dimension(1, 0) == 1
        assert dimension(1, 7) == 1

    def test_known_values(self):
        # binomial(N + M - 1, N)
        assert dimension(2, 1) == 2
        assert dimension(2, 2) == 3
        assert dimension(5, 4) == 70
        assert dimension(10, 4) == 715

    def test_zero_photons(self):
        assert dimension(8, 0) == 1

    def test_range_guard(self):
        with pytest.raises(OverflowError):
            dimension(21, 1)
        with pytest.raises(OverflowError):
            dimension(2, 13)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            dimension(0, 1)
        with pytest.raises(ValueError):
            dimension(2, -1)


class TestEnumeration:
    def test_descending_lex_order(self):
        assert enumerate_occupations(2, 2) == ((2, 0), (1, 1), (0, 2))

    def test_three_modes(self):
        occs = enumerate_occupations(3, 2)
        assert occs[0] == (2, 0, 0)
        assert occs[-1] == (0, 0, 2)
        assert list(occs) == sorted(occs, reverse=True)

    @given(
        modes=st.integers(min_value=1, max_value=6),
        photons=st.integers(min_value=0, max_value=5),
    )
    def test_length_matches_dimension(self, modes, photons):
        occs = enumerate_occupations(modes, photons)
        assert len(occs) == dimension(modes, photons)
        assert len(set(occs)) == len(occs)
        assert all(total(occ) == photons for occ in occs)
        assert all(len(occ) == modes for occ in occs)


class TestFockBasis:
    def test_index_occupation_inverse(self):
        basis = FockBasis(4, 3)
        for i in range(len(basis)):
            assert basis.index_of(basis.occupation_at(i)) == i
        for occ in basis:
            assert basis.occupation_at(basis.index_of(occ)) == occ

    def test_len_and_iter(self):
        basis = FockBasis(3, 2)
        assert len(basis) == dimension(3, 2)
        assert tuple(basis) == enumerate_occupations(3, 2)


class TestCollapsePolarisation:
    def test_examples(self):
        assert collapse_polarisation((1, 0, 0, 1)) == (1, 1)
        assert collapse_polarisation((2, 1, 0, 0)) == (3, 0)
        assert collapse_polarisation((0,) * 6) == (0, 0, 0)

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            collapse_polarisation((1, 0, 1))

    @given(
        st.lists(st.integers(min_value=0, max_value=4), min_size=2, max_size=10).map(
            lambda v: tuple(v[: len(v) // 2 * 2])
        )
    )
    def test_total_preserved(self, occ):
        assert total(collapse_polarisation(occ)) == total(occ)
