"""Data-to-polarisation encoding layers.

Each input port carries a quarter- and half-waveplate whose angles are
functions of the scalar data point, producing a closed trajectory on the
Poincare sphere per port.  The resulting layer is block-diagonal on the
interleaved (H, V) mode pairs and exactly periodic with period 2 in the
encoding coordinate.  Task data on [0, 1] maps onto the periodic
coordinate via x_enc = 2x - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .network import PolarisingNetwork, assemble, random_reservoir

PRESET_NAMES = ("uniform-linear", "multi-linear", "spiral")


@dataclass(frozen=True)
class PortEncodingParams:
    """Trajectory degrees of freedom for a single port.

    xi and gamma are binary switches (leave the equator / interleave at the
    poles), nu counts azimuthal orbits, and rho in [0, 2] offsets the
    trajectory's starting point.
    """

    xi: int = 0
    gamma: int = 0
    nu: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        if self.xi not in (0, 1) or self.gamma not in (0, 1):
            raise ValueError("xi and gamma must be 0 or 1")
        if not 0.0 <= self.rho <= 2.0:
            raise ValueError("rho must lie in [0, 2]")


@dataclass(frozen=True)
class EncodingScheme:
    ports: tuple
    name: str = "custom"

    @property
    def port_count(self) -> int:
        return len(self.ports)


@dataclass(frozen=True)
class PolarisationState:
    """Poincare-sphere coordinates: mixing angle theta and phase phi.

    Amplitudes are (cos(theta), sin(theta) * e^{i phi})."""

    theta: float
    phi: float

    def amplitudes(self) -> tuple:
        return (np.cos(self.theta), np.sin(self.theta) * np.exp(1j * self.phi))


def _wrap_periodic(x: float) -> float:
    # periodic coordinate on [-1, 1)
    return (x + 1.0) % 2.0 - 1.0


def waveplate_angles(x: float, params: PortEncodingParams) -> tuple:
    """Quarter- and half-waveplate angles (theta_Q, theta_H) at data
    coordinate x; the Heaviside switch uses H(0) = 0."""
    xp = _wrap_periodic(x + params.rho)
    heav = 1.0 if xp > 0 else 0.0
    xi, gamma, nu = params.xi, params.gamma, params.nu
    theta_q = xi * (1.0 + 2.0 * xp - 4.0 * xp * gamma * heav) * np.pi / 4
    theta_h = (
        nu * xp + xi * gamma * heav + 2.0 * nu * xp * gamma * heav - 2.0 * nu * xp
    ) * np.pi / 4
    return theta_q, theta_h


def _rot(t: float) -> np.ndarray:
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]])


def quarter_wave(theta: float) -> np.ndarray:
    return _rot(theta) @ np.diag([1, 1j]).astype(complex) @ _rot(-theta)


def half_wave(theta: float) -> np.ndarray:
    return _rot(theta) @ np.diag([1, -1]).astype(complex) @ _rot(-theta)


def jones_rotation(theta_q: float, theta_h: float) -> np.ndarray:
    """Jones matrix of a quarter-wave plate followed by a half-wave plate."""
    return half_wave(theta_h) @ quarter_wave(theta_q)


def encoding_layer(x: float, scheme: EncodingScheme) -> np.ndarray:
    """Block-diagonal 2M x 2M encoding unitary at data coordinate x."""
    M = scheme.port_count
    out = np.zeros((2 * M, 2 * M), dtype=complex)
    for m, params in enumerate(scheme.ports):
        block = jones_rotation(*waveplate_angles(x, params))
        out[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = block
    return out


def trajectory(scheme: EncodingScheme, port: int, xs) -> list:
    """Polarisation states traced out by one port over a grid, obtained by
    applying the port's Jones block to a fixed H input."""
    if not 0 <= port < scheme.port_count:
        raise IndexError(f"port {port} out of range")
    params = scheme.ports[port]
    states = []
    for x in xs:
        block = jones_rotation(*waveplate_angles(x, params))
        c_h, c_v = block[:, 0]
        theta = np.arctan2(abs(c_v), abs(c_h))
        phi = float(np.angle(c_v) - np.angle(c_h))
        phi = (phi + np.pi) % (2 * np.pi) - np.pi
        if phi == -np.pi:
            phi = np.pi
        states.append(PolarisationState(theta=float(theta), phi=phi))
    return states


def preset(
    name: str,
    port_count: int,
    slope: float = 1.0,
    phase_offsets=None,
) -> EncodingScheme:
    """Named encoding schemes.

    uniform-linear: all ports (xi=0, gamma=0, nu=slope);
    multi-linear:   (xi=0, gamma=0, nu_m = m);
    spiral:         (xi=1, gamma=0, nu_m = 4m).

    phase_offsets: None for rho=0 everywhere, "spread" for rho_m = 2m/M, or
    an explicit per-port sequence.
    """
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    if phase_offsets is None:
        rhos = [0.0] * port_count
    elif phase_offsets == "spread":
        rhos = [2.0 * (m + 1) / port_count % 2.0 for m in range(port_count)]
    else:
        rhos = [float(r) for r in phase_offsets]
        if len(rhos) != port_count:
            raise ValueError("phase_offsets must have one entry per port")
    ports = []
    for m in range(1, port_count + 1):
        rho = rhos[m - 1]
        if name == "uniform-linear":
            ports.append(PortEncodingParams(0, 0, slope, rho))
        elif name == "multi-linear":
            ports.append(PortEncodingParams(0, 0, float(m), rho))
        else:
            ports.append(PortEncodingParams(1, 0, 4.0 * m, rho))
    return EncodingScheme(ports=tuple(ports), name=name)


def data_to_encoding_coordinate(x: float) -> float:
    """Map task data on [0, 1] to the periodic encoding coordinate."""
    return 2.0 * x - 1.0


# ---------------------------------------------------------------------------
# beamsplitter-angle encoding for feature vectors (image classification)

FEATURE_ALPHA_LO = np.pi / 4
FEATURE_ALPHA_HI = 3 * np.pi / 4


@dataclass
class FeatureEncodedReservoir:
    """Sandwich reservoir R2 * E(features) * R1 where E is a stack of
    Reck-style meshes whose beamsplitter angles carry the features; the
    waveplates and phases of E stay random and fixed."""

    input_network: PolarisingNetwork
    output_network: PolarisingNetwork
    encoding_meshes: list
    feature_count: int

    @property
    def port_count(self) -> int:
        return self.input_network.port_count


def random_feature_reservoir(
    port_count: int, feature_count: int, seed: int
) -> FeatureEncodedReservoir:
    """Build the sandwich reservoir; the encoding block stacks as many
    triangular meshes as needed to supply `feature_count` beamsplitters."""
    per_mesh = port_count * (port_count - 1) // 2
    n_meshes = -(-feature_count // per_mesh)
    rng = np.random.default_rng(seed)

    def child():
        return int(rng.integers(0, 2**63 - 1))

    r1 = random_reservoir(port_count, child())
    r2 = random_reservoir(port_count, child())
    meshes = [random_reservoir(port_count, child()) for _ in range(n_meshes)]
    return FeatureEncodedReservoir(
        input_network=r1,
        output_network=r2,
        encoding_meshes=meshes,
        feature_count=feature_count,
    )


def feature_encoded_network(features, base: FeatureEncodedReservoir) -> np.ndarray:
    """Composed unitary with normalised features (each in [0, 1]) mapped
    affinely onto the first `feature_count` beamsplitter angles of the
    encoding block, range [pi/4, 3*pi/4]."""
    features = np.asarray(features, dtype=float)
    if features.shape != (base.feature_count,):
        raise ValueError(
            f"expected {base.feature_count} features, got {features.shape}"
        )
    alphas = FEATURE_ALPHA_LO + features * (FEATURE_ALPHA_HI - FEATURE_ALPHA_LO)
    encoded = []
    k = 0
    for mesh in base.encoding_meshes:
        crossings = []
        for c in mesh.crossings:
            if k < base.feature_count:
                c = replace(c, alpha_h=float(alphas[k]), alpha_v=float(alphas[k]))
                k += 1
            crossings.append(c)
        encoded.append(
            PolarisingNetwork(
                port_count=mesh.port_count,
                crossings=crossings,
                output_phases=mesh.output_phases,
                seed=mesh.seed,
            )
        )
    u = base.input_network.unitary
    for mesh in encoded:
        u = assemble(mesh) @ u
    return base.output_network.unitary @ u
