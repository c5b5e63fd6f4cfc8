"""Feature evaluation through an externally supplied unitary.

Used by the image-classification path, where each sample owns its own
composed unitary (beamsplitter-angle encoding) instead of a shared
reservoir times an x-dependent polarisation layer.
"""

from __future__ import annotations

import numpy as np

from .detection import DetectorModel, apply_loss, postselect, sample
from .propagation import (
    InputState,
    intensity_expectation,
    propagate,
    propagate_distinguishable,
    trace_polarisation,
)


def pnr_features(
    unitary,
    input_state: InputState,
    specs,
    detector: DetectorModel,
    basis_index: dict,
    exact: bool,
    seed: int = 0,
    sector_headroom: int = 2,
):
    """Post-selected PNR feature vector for one composed unitary, exact or
    sampled; None when every sample is rejected."""
    if input_state.distinguishable:
        occ = tuple(c for spec in specs for c in (spec.n, 0))
        dist = propagate_distinguishable(occ, unitary)
    else:
        cap = detector.max_photons + sector_headroom
        dist = propagate(input_state, unitary, max_total_photons=cap)
    ports = trace_polarisation(dist)
    kept, reject = postselect(apply_loss(ports, detector.eta), detector.max_photons)
    vec = np.zeros(len(basis_index))
    if exact:
        mass = kept.total_probability()
        if mass == 0.0:
            return None
        for occ, p in kept.probabilities.items():
            vec[basis_index[occ]] = p / mass
        return vec
    drawn = sample(kept, reject, detector.n_samp, seed)
    if drawn.empty:
        return None
    for occ, f in drawn.frequencies.items():
        vec[basis_index[occ]] = f
    return vec


def intensity_features(unitary, specs) -> np.ndarray:
    return intensity_expectation(specs, unitary)
