"""Imperfect photon-number-resolving detection.

Detector loss is a per-port binomial thinning applied after the
polarisation trace; post-selection keeps events with total photon number
at or below a threshold and groups everything else (including any
truncation mass) into a single reject state.  Finite sampling draws from
the kept-plus-reject categorical distribution, discards reject draws and
renormalises.  Dark counts are deliberately not simulated; the detector
model carries the field so the omission is explicit in configs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb

import numpy as np

from .fockspace import total
from .propagation import OutputDistribution, PortStateSpec, _port_components


@dataclass(frozen=True)
class DetectorModel:
    eta: float = 1.0
    max_photons: int = 4
    n_samp: int = 10**5
    dark_counts: float = 0.0  # reserved; not simulated

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if self.max_photons < 0:
            raise ValueError("max_photons must be >= 0")
        if self.n_samp < 1:
            raise ValueError("n_samp must be >= 1")
        if self.dark_counts != 0.0:
            raise NotImplementedError("dark counts are not simulated")


@dataclass
class SampledFeatures:
    frequencies: dict  # occupation -> empirical frequency
    rejected_fraction: float
    seed: int
    empty: bool = False


def _binomial_row(n: int, eta: float):
    return [(k, comb(n, k) * eta**k * (1 - eta) ** (n - k)) for k in range(n + 1)]


def apply_loss(dist: OutputDistribution, eta: float) -> OutputDistribution:
    """Redistribute each occupation over its componentwise-lower neighbours
    with independent per-port binomial weights; total probability is
    preserved."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if eta == 1.0:
        return OutputDistribution(
            probabilities=dict(dist.probabilities),
            mode_count=dist.mode_count,
            truncation_mass=dist.truncation_mass,
        )
    rows = {}
    out = {}
    for occ, p in dist.probabilities.items():
        per_mode = []
        for n in occ:
            if n not in rows:
                rows[n] = _binomial_row(n, eta)
            per_mode.append(rows[n])
        for combo in product(*per_mode):
            weight = p
            target = []
            for k, w in combo:
                weight *= w
                target.append(k)
            if weight > 0.0:
                key = tuple(target)
                out[key] = out.get(key, 0.0) + weight
    return OutputDistribution(
        probabilities=out,
        mode_count=dist.mode_count,
        truncation_mass=dist.truncation_mass,
    )


def postselect(dist: OutputDistribution, max_photons: int):
    """Split into (kept, reject_probability): kept holds occupations with
    total <= max_photons, unnormalised; the reject probability absorbs the
    rest including any truncation mass."""
    kept = {
        occ: p for occ, p in dist.probabilities.items() if total(occ) <= max_photons
    }
    reject = 1.0 - sum(kept.values())
    kept_dist = OutputDistribution(
        probabilities=kept, mode_count=dist.mode_count, truncation_mass=0.0
    )
    return kept_dist, max(0.0, reject)


def canonical_outcome_order(occupations):
    """Deterministic outcome ordering: ascending total photon number, then
    lexicographically descending within a sector."""
    return sorted(occupations, key=lambda occ: (total(occ), tuple(-n for n in occ)))


def sample(
    kept: OutputDistribution,
    reject_probability: float,
    n_samp: int,
    seed: int,
) -> SampledFeatures:
    """Draw n_samp outcomes by inverse-CDF over the canonical outcome
    ordering (reject state last), discard reject draws and renormalise."""
    if n_samp < 1:
        raise ValueError("n_samp must be >= 1")
    order = canonical_outcome_order(kept.probabilities)
    probs = np.array([kept.probabilities[occ] for occ in order] + [reject_probability])
    probs = np.clip(probs, 0.0, None)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    counts = np.zeros(len(probs), dtype=np.int64)
    remaining = n_samp
    while remaining > 0:
        chunk = min(remaining, 2_000_000)
        draws = np.searchsorted(cdf, rng.random(chunk), side="right")
        counts += np.bincount(draws, minlength=len(probs))
        remaining -= chunk
    rejected = int(counts[-1])
    survivors = n_samp - rejected
    if survivors == 0:
        return SampledFeatures(
            frequencies={}, rejected_fraction=1.0, seed=seed, empty=True
        )
    freqs = {
        occ: counts[i] / survivors for i, occ in enumerate(order) if counts[i] > 0
    }
    return SampledFeatures(
        frequencies=freqs,
        rejected_fraction=rejected / n_samp,
        seed=seed,
    )


def optimise_alpha(
    specs,
    detector: DetectorModel,
    grid=None,
    expansion_order: int = 40,
) -> float | None:
    """Scan |alpha| and return the value maximising the input state's
    probability mass with total photon number <= max_photons after loss.

    The objective only depends on the total photon-number distribution,
    which the network conserves, so it is unitary-independent.  Returns
    None when the spec template has no coherent ports.
    """
    coherent_ports = [s for s in specs if s.alpha != 0]
    if not coherent_ports:
        return None
    if grid is None:
        grid = np.arange(0.0, 3.0 + 1e-12, 0.01)
    best_alpha, best_mass = 0.0, -1.0
    for a in grid:
        # per-port total-photon pmf, convolved across ports
        pmf = np.array([1.0])
        for s in specs:
            scaled = PortStateSpec(n=s.n, alpha=a if s.alpha != 0 else 0.0)
            comps = _port_components(scaled, 1e-12, expansion_order)
            port = np.zeros(max(j for _, j in comps) + 1)
            for amp, j in comps:
                port[j] += abs(amp) ** 2
            pmf = np.convolve(pmf, port)
        mass = 0.0
        for n, p in enumerate(pmf):
            surv = sum(
                comb(n, k) * detector.eta**k * (1 - detector.eta) ** (n - k)
                for k in range(min(n, detector.max_photons) + 1)
            )
            mass += p * surv
        if mass > best_mass + 1e-15:
            best_mass, best_alpha = mass, float(a)
    return best_alpha
