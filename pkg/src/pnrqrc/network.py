"""Polarising linear photonic networks on a triangular (Reck) mesh.

A network on M ports couples 2M polarisation modes in the interleaved
ordering [1_H, 1_V, 2_H, 2_V, ...].  Each of the Z = M(M-1)/2 crossings
is an imperfect polarising beamsplitter followed by a birefringent plate
on each output port, with a phase shifter on the input of the lower
port; a final diagonal layer applies per-port output phases.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

ORDERING_VERSION = "reck-interleaved-v1"
RNG_NAME = "numpy-pcg64"

# local order used by the 4x4 primitives: (m_H, p_H, m_V, p_V)
_LOCAL_TO_SORTED = np.array([0, 2, 1, 3])


@dataclass(frozen=True)
class BeamsplitterPhase:
    """Variable beamsplitter reflectance angle plus phase-shifter phase."""

    alpha: float
    beta: float


@dataclass(frozen=True)
class RetarderPair:
    """Waveplate parameters (retardance, circularity, angle) for the two
    output ports of a crossing."""

    eta1: float = 0.0
    phi1: float = 0.0
    theta1: float = 0.0
    eta2: float = 0.0
    phi2: float = 0.0
    theta2: float = 0.0


@dataclass(frozen=True)
class Crossing:
    port_pair: tuple  # (m, p), 1-based, m < p
    alpha_h: float
    alpha_v: float
    retarders: RetarderPair
    phase: float

    def __post_init__(self):
        m, p = self.port_pair
        if not 1 <= m < p:
            raise ValueError(f"invalid port pair {self.port_pair}")


def beamsplitter_phase_matrix(alpha: float, beta: float) -> np.ndarray:
    """2x2 beamsplitter + phase-shifter coupling matrix; the phase sits on
    the first input column."""
    c, s = np.cos(alpha), np.sin(alpha)
    e = np.exp(1j * beta)
    return np.array([[c * e, s], [-s * e, c]], dtype=complex)


def ipbs_matrix(alpha_h: float, alpha_v: float) -> np.ndarray:
    """Imperfect polarising beamsplitter in local order (m_H, p_H, m_V, p_V):
    independent real rotations on the H and V subspaces."""
    ch, sh = np.cos(alpha_h), np.sin(alpha_h)
    cv, sv = np.cos(alpha_v), np.sin(alpha_v)
    return np.array(
        [
            [ch, sh, 0, 0],
            [-sh, ch, 0, 0],
            [0, 0, cv, sv],
            [0, 0, -sv, cv],
        ],
        dtype=complex,
    )


def _retarder_block(eta: float, phi: float, theta: float) -> np.ndarray:
    """Single-waveplate Jones retarder acting on one port's (H, V) pair."""
    c, s = np.cos(theta), np.sin(theta)
    g = np.exp(-1j * eta / 2)
    e = np.exp(-1j * eta)
    off = g * (1 - e) * c * s
    return np.array(
        [
            [g * (c * c + e * s * s), off * np.exp(-1j * phi)],
            [off * np.exp(1j * phi), g * (s * s + e * c * c)],
        ],
        dtype=complex,
    )


def retarder_pair_matrix(pair: RetarderPair) -> np.ndarray:
    """Birefringent plates on both crossing outputs, local order
    (m_H, p_H, m_V, p_V): port-1 parameters couple (m_H, m_V) and port-2
    parameters couple (p_H, p_V)."""
    b1 = _retarder_block(pair.eta1, pair.phi1, pair.theta1)
    b2 = _retarder_block(pair.eta2, pair.phi2, pair.theta2)
    out = np.eye(4, dtype=complex)
    out[np.ix_([0, 2], [0, 2])] = b1
    out[np.ix_([1, 3], [1, 3])] = b2
    return out


def givens_embed(block, mode_indices, dim: int) -> np.ndarray:
    """Write a k x k unitary block into a dim x dim identity at the given
    strictly increasing mode indices."""
    block = np.asarray(block, dtype=complex)
    idx = list(mode_indices)
    if len(idx) != block.shape[0] or block.shape[0] != block.shape[1]:
        raise ValueError("block shape must match the number of mode indices")
    if any(i < 0 or i >= dim for i in idx):
        raise IndexError(f"mode indices {idx} out of range for dim {dim}")
    if sorted(set(idx)) != idx:
        raise ValueError(f"mode indices must be strictly increasing: {idx}")
    out = np.eye(dim, dtype=complex)
    out[np.ix_(idx, idx)] = block
    return out


def output_phase_matrix(psis) -> np.ndarray:
    """Diagonal output-phase layer; e^{i psi_m} on both polarisation modes
    of port m."""
    phases = np.repeat(np.exp(1j * np.asarray(psis, dtype=float)), 2)
    return np.diag(phases).astype(complex)


def crossing_matrix(crossing: Crossing) -> np.ndarray:
    """Aggregate 4x4 crossing transformation in sorted-global local order
    (m_H, m_V, p_H, p_V).

    Composition: phase shifter on the input of port m, then the IPBS, then
    the birefringent plates on the outputs.  Placing the phase on the input
    makes the H-restriction of a crossing with identity retarders equal
    beamsplitter_phase_matrix(alpha, beta).
    """
    ps = np.diag(
        np.array([np.exp(1j * crossing.phase), 1, np.exp(1j * crossing.phase), 1])
    ).astype(complex)
    local = (
        retarder_pair_matrix(crossing.retarders)
        @ ipbs_matrix(crossing.alpha_h, crossing.alpha_v)
        @ ps
    )
    p = _LOCAL_TO_SORTED
    return local[np.ix_(p, p)]


def reck_crossing_order(port_count: int):
    """Port pairs in mesh-product order: groups (M-1,M), (M-2,M-1), (M-2,M),
    ..., (1,2)...(1,M); the last-listed group acts first on the input."""
    order = []
    for m in range(port_count - 1, 0, -1):
        for p in range(m + 1, port_count + 1):
            order.append((m, p))
    return order


def _port_modes(m: int, p: int):
    # sorted global indices for the four polarised modes of ports m < p
    return [2 * (m - 1), 2 * (m - 1) + 1, 2 * (p - 1), 2 * (p - 1) + 1]


@dataclass
class PolarisingNetwork:
    """Element parameters of a triangular polarising mesh plus the
    assembled 2M x 2M unitary."""

    port_count: int
    crossings: list
    output_phases: list
    seed: int | None = None
    _unitary: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def unitary(self) -> np.ndarray:
        if self._unitary is None:
            self._unitary = assemble(self)
        return self._unitary

    def to_dict(self) -> dict:
        return {
            "ordering_version": ORDERING_VERSION,
            "rng": RNG_NAME,
            "seed": self.seed,
            "port_count": self.port_count,
            "output_phases": list(map(float, self.output_phases)),
            "crossings": [
                {
                    "port_pair": list(c.port_pair),
                    "alpha_h": c.alpha_h,
                    "alpha_v": c.alpha_v,
                    "phase": c.phase,
                    "retarders": [
                        c.retarders.eta1,
                        c.retarders.phi1,
                        c.retarders.theta1,
                        c.retarders.eta2,
                        c.retarders.phi2,
                        c.retarders.theta2,
                    ],
                }
                for c in self.crossings
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PolarisingNetwork":
        if data.get("ordering_version") != ORDERING_VERSION:
            raise ValueError(
                f"unsupported ordering version {data.get('ordering_version')!r}"
            )
        crossings = [
            Crossing(
                port_pair=tuple(c["port_pair"]),
                alpha_h=c["alpha_h"],
                alpha_v=c["alpha_v"],
                retarders=RetarderPair(*c["retarders"]),
                phase=c["phase"],
            )
            for c in data["crossings"]
        ]
        return cls(
            port_count=data["port_count"],
            crossings=crossings,
            output_phases=list(data["output_phases"]),
            seed=data.get("seed"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PolarisingNetwork":
        return cls.from_dict(json.loads(text))


def assemble(network: PolarisingNetwork) -> np.ndarray:
    """Full 2M x 2M scattering matrix: output phases times the ordered
    product of crossing matrices."""
    M = network.port_count
    expected = reck_crossing_order(M)
    got = [c.port_pair for c in network.crossings]
    if got != expected:
        raise ValueError(
            f"crossings must follow the mesh order {expected}, got {got}"
        )
    if len(network.output_phases) != M:
        raise ValueError("output_phases must have one entry per port")
    dim = 2 * M
    result = output_phase_matrix(network.output_phases)
    for crossing in network.crossings:
        m, p = crossing.port_pair
        result = result @ givens_embed(
            crossing_matrix(crossing), _port_modes(m, p), dim
        )
    return result


def random_reservoir(
    port_count: int, seed: int, polarising: bool = False
) -> PolarisingNetwork:
    """Draw a random mesh: beamsplitter angles uniform on [0, pi/2]
    (alpha_h == alpha_v unless `polarising`), all other angles uniform on
    [0, 2*pi).  Fully deterministic given the seed."""
    if port_count < 2:
        raise ValueError("port_count must be >= 2")
    rng = np.random.default_rng(seed)
    crossings = []
    for pair in reck_crossing_order(port_count):
        alpha_h = rng.uniform(0, np.pi / 2)
        alpha_v = rng.uniform(0, np.pi / 2) if polarising else alpha_h
        beta = rng.uniform(0, 2 * np.pi)
        ret = RetarderPair(*rng.uniform(0, 2 * np.pi, size=6))
        crossings.append(
            Crossing(
                port_pair=pair,
                alpha_h=alpha_h,
                alpha_v=alpha_v,
                retarders=ret,
                phase=beta,
            )
        )
    psis = list(rng.uniform(0, 2 * np.pi, size=port_count))
    return PolarisingNetwork(
        port_count=port_count, crossings=crossings, output_phases=psis, seed=seed
    )
