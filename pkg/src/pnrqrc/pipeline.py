"""End-to-end feature evaluation for a single reservoir configuration.

For each data point x the unitary is the reservoir matrix composed with
the encoding layer at x; the fixed input state is propagated exactly,
traced over polarisation, passed through the detector loss model,
post-selected and (unless in exact mode) sampled.  Feature vectors live
on the fixed post-selected occupation basis plus a bias entry appended
by the design-matrix builder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detection import (
    DetectorModel,
    apply_loss,
    canonical_outcome_order,
    postselect,
    sample,
)
from .encoding import EncodingScheme, data_to_encoding_coordinate, encoding_layer
from .fockspace import enumerate_occupations
from .network import PolarisingNetwork
from .propagation import (
    PortStateSpec,
    build_input_state,
    intensity_expectation,
    propagate,
    propagate_distinguishable,
    trace_polarisation,
)

# extra photon-number headroom propagated above the post-selection
# threshold so lossy descendants of higher sectors are modelled
DEFAULT_SECTOR_HEADROOM = 2


def postselection_basis(port_count: int, max_photons: int):
    """Canonically ordered occupations with total <= max_photons."""
    occs = []
    for n in range(max_photons + 1):
        occs.extend(enumerate_occupations(port_count, n))
    return canonical_outcome_order(occs)


@dataclass
class ReservoirPipeline:
    network: PolarisingNetwork
    scheme: EncodingScheme
    specs: list  # per-port PortStateSpec
    detector: DetectorModel
    measurement: str = "pnr"  # "pnr" or "intensity"
    relative_cutoff: float = 0.01
    max_expansion_order: int | None = None
    sector_headroom: int = DEFAULT_SECTOR_HEADROOM
    sampling_seed: int = 0

    def __post_init__(self):
        if self.measurement not in ("pnr", "intensity"):
            raise ValueError(f"unknown measurement {self.measurement!r}")
        if self.network.port_count != self.scheme.port_count:
            raise ValueError("network and encoding port counts differ")
        if len(self.specs) != self.network.port_count:
            raise ValueError("one PortStateSpec required per port")
        self._basis = postselection_basis(
            self.network.port_count, self.detector.max_photons
        )
        self._basis_index = {occ: i for i, occ in enumerate(self._basis)}
        if self.measurement == "pnr":
            self._input = build_input_state(
                self.specs, self.relative_cutoff, self.max_expansion_order
            )
        else:
            self._input = None

    @property
    def feature_labels(self):
        if self.measurement == "intensity":
            return [f"intensity_{m + 1}" for m in range(self.network.port_count)]
        return list(self._basis)

    def unitary_at(self, x: float) -> np.ndarray:
        e = encoding_layer(data_to_encoding_coordinate(x), self.scheme)
        return self.network.unitary @ e

    def kept_distribution(self, x: float):
        """(kept OutputDistribution over ports, reject probability) at x."""
        u = self.unitary_at(x)
        if self._input.distinguishable:
            occ = tuple(
                c
                for spec in self.specs
                for c in (spec.n, 0)  # H mode of each port
            )
            dist = propagate_distinguishable(occ, u)
        else:
            cap = self.detector.max_photons + self.sector_headroom
            dist = propagate(self._input, u, max_total_photons=cap)
        ports = trace_polarisation(dist)
        lossy = apply_loss(ports, self.detector.eta)
        return postselect(lossy, self.detector.max_photons)

    def _vectorise(self, probabilities: dict) -> np.ndarray:
        vec = np.zeros(len(self._basis))
        for occ, p in probabilities.items():
            vec[self._basis_index[occ]] = p
        return vec

    def exact_features(self, x: float):
        """Infinite-sample limit of the post-selected feature vector."""
        if self.measurement == "intensity":
            return intensity_expectation(self.specs, self.unitary_at(x))
        kept, _ = self.kept_distribution(x)
        mass = kept.total_probability()
        if mass == 0.0:
            return None
        return self._vectorise(kept.probabilities) / mass

    def sampled_features(self, x: float, point_index: int):
        """Finite-sample feature vector with an independent seeded stream
        per data point."""
        if self.measurement == "intensity":
            return intensity_expectation(self.specs, self.unitary_at(x))
        kept, reject = self.kept_distribution(x)
        seed = int(
            np.random.SeedSequence(
                self.sampling_seed, spawn_key=(point_index,)
            ).generate_state(1)[0]
        )
        drawn = sample(kept, reject, self.detector.n_samp, seed)
        if drawn.empty:
            return None
        return self._vectorise(drawn.frequencies)

    def evaluator(self, exact: bool):
        """Closure for the design-matrix builder: x -> (features, labels)."""
        labels = self.feature_labels
        counter = {"i": 0}

        def run(x):
            if exact:
                vec = self.exact_features(x)
            else:
                vec = self.sampled_features(x, counter["i"])
                counter["i"] += 1
            if vec is None:
                return None
            return vec, labels

        return run


def fock_specs(photons) -> list:
    """Per-port specs for a Fock input like |1,1,1,1,0>."""
    return [PortStateSpec(n=int(n)) for n in photons]


def distinguishable_specs(photons) -> list:
    return [PortStateSpec(n=int(n), distinguishable=True) for n in photons]


def coherent_specs(alphas) -> list:
    return [PortStateSpec(alpha=complex(a)) for a in alphas]


def hybrid_specs(photons, alphas) -> list:
    return [
        PortStateSpec(n=int(n), alpha=complex(a)) for n, a in zip(photons, alphas)
    ]
