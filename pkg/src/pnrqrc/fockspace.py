"""Occupation-number bookkeeping for multimode photonic states.

Occupation vectors are plain tuples of non-negative ints, one entry per
mode.  Polarised networks use the interleaved mode ordering
[1_H, 1_V, 2_H, 2_V, ...] so each port's polarisation pair is adjacent.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

# Enumeration stays exact and affordable inside this envelope; anything
# larger is refused rather than silently attempted.
MAX_MODES = 20
MAX_PHOTONS = 12


def total(occupation) -> int:
    """Total photon number of an occupation vector."""
    return sum(occupation)


def _check_range(mode_count: int, photon_count: int) -> None:
    if mode_count < 1:
        raise ValueError("mode_count must be >= 1")
    if photon_count < 0:
        raise ValueError("photon_count must be >= 0")
    if mode_count > MAX_MODES or photon_count > MAX_PHOTONS:
        raise OverflowError(
            f"({mode_count} modes, {photon_count} photons) exceeds the "
            f"supported range ({MAX_MODES}, {MAX_PHOTONS})"
        )


def dimension(mode_count: int, photon_count: int) -> int:
    """Number of occupations of `mode_count` modes by `photon_count` photons.

    Equals binomial(photon_count + mode_count - 1, photon_count).
    """
    _check_range(mode_count, photon_count)
    return comb(photon_count + mode_count - 1, photon_count)


@lru_cache(maxsize=None)
def enumerate_occupations(mode_count: int, photon_count: int) -> tuple:
    """All occupations with the given total, in lexicographically
    descending order, e.g. (2, 2) -> ((2,0), (1,1), (0,2))."""
    _check_range(mode_count, photon_count)

    def rec(modes, photons):
        if modes == 1:
            yield (photons,)
            return
        for first in range(photons, -1, -1):
            for rest in rec(modes - 1, photons - first):
                yield (first,) + rest

    return tuple(rec(mode_count, photon_count))


def collapse_polarisation(occupation) -> tuple:
    """Merge interleaved (H, V) mode pairs into per-port photon counts."""
    if len(occupation) % 2 != 0:
        raise ValueError("polarised occupation vectors must have even length")
    return tuple(
        occupation[2 * m] + occupation[2 * m + 1]
        for m in range(len(occupation) // 2)
    )


class FockBasis:
    """Canonical ordered basis of all occupations of a fixed sector.

    index_of and occupation_at are mutual inverses over the whole basis.
    """

    def __init__(self, mode_count: int, photon_count: int):
        self.mode_count = mode_count
        self.photon_count = photon_count
        self.occupations = enumerate_occupations(mode_count, photon_count)
        self._index = {occ: i for i, occ in enumerate(self.occupations)}

    def __len__(self) -> int:
        return len(self.occupations)

    def __iter__(self):
        return iter(self.occupations)

    def occupation_at(self, i: int) -> tuple:
        return self.occupations[i]

    def index_of(self, occupation) -> int:
        return self._index[tuple(occupation)]
