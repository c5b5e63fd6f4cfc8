"""Simulator for photon number-resolving quantum reservoir computing on
polarising linear photonic networks."""

from .detection import DetectorModel, apply_loss, optimise_alpha, postselect, sample
from .encoding import (
    EncodingScheme,
    PortEncodingParams,
    encoding_layer,
    feature_encoded_network,
    preset,
)
from .fockspace import (
    FockBasis,
    collapse_polarisation,
    dimension,
    enumerate_occupations,
)
from .network import PolarisingNetwork, assemble, random_reservoir
from .pipeline import ReservoirPipeline
from .propagation import (
    InputState,
    OutputDistribution,
    PortStateSpec,
    build_input_state,
    fock_amplitude,
    intensity_expectation,
    propagate,
    propagate_distinguishable,
    trace_polarisation,
)

__all__ = [
    "DetectorModel",
    "EncodingScheme",
    "FockBasis",
    "InputState",
    "OutputDistribution",
    "PolarisingNetwork",
    "PortEncodingParams",
    "PortStateSpec",
    "ReservoirPipeline",
    "apply_loss",
    "assemble",
    "build_input_state",
    "collapse_polarisation",
    "dimension",
    "encoding_layer",
    "enumerate_occupations",
    "feature_encoded_network",
    "fock_amplitude",
    "intensity_expectation",
    "optimise_alpha",
    "postselect",
    "preset",
    "propagate",
    "propagate_distinguishable",
    "random_reservoir",
    "sample",
    "trace_polarisation",
]

__version__ = "0.1.0"
