"""Exact propagation of photonic states through a mode unitary.

Input states are weighted superpositions of occupation vectors over the
2M polarised modes.  Because a passive network conserves photon number,
each total-photon-number sector propagates independently: transition
amplitudes within a sector are permanents of row/column-expanded
submatrices of the unitary, and amplitudes into the same output
occupation are summed coherently before squaring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb, factorial, sqrt

import numpy as np
from numpy.polynomial import laguerre

from .fockspace import FockBasis, collapse_polarisation, total
from .permanent import _sector_amplitudes, permanent


@dataclass(frozen=True)
class PortStateSpec:
    """Photon additions, coherent amplitude and polarisation for one port."""

    n: int = 0
    alpha: complex = 0j
    polarisation: object = "H"  # "H" or a PolarisationState
    distinguishable: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("photon additions must be non-negative")
        if self.distinguishable and self.alpha != 0:
            raise ValueError(
                "distinguishable coherent components are not supported"
            )


@dataclass
class InputState:
    """Weighted occupation components over 2M interleaved modes."""

    components: list  # [(amplitude, occupation)]
    mode_count: int
    truncation_mass: float = 0.0
    distinguishable: bool = False

    def norm_squared(self) -> float:
        merged = {}
        for amp, occ in self.components:
            merged[occ] = merged.get(occ, 0j) + amp
        return float(sum(abs(a) ** 2 for a in merged.values()))


@dataclass
class OutputDistribution:
    probabilities: dict  # occupation -> probability
    mode_count: int
    truncation_mass: float = 0.0

    def photon_sectors(self) -> dict:
        sectors = {}
        for occ, p in self.probabilities.items():
            sectors.setdefault(total(occ), {})[occ] = p
        return sectors

    def total_probability(self) -> float:
        return float(sum(self.probabilities.values()))


def _laguerre_value(n: int, x: float) -> float:
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return float(laguerre.lagval(x, coeffs))


def _port_components(spec: PortStateSpec, relative_cutoff: float, max_order):
    """Fock components [(amplitude, photon count)] of one port's
    photon-added coherent state, truncated per the cutoff rule."""
    n, alpha = spec.n, complex(spec.alpha)
    if alpha == 0:
        return [(1.0 + 0j, n)]
    a2 = abs(alpha) ** 2
    # displacement series coefficients c_k = e^{-|a|^2/2} a^k / sqrt(k!)
    coeffs = []
    c = np.exp(-a2 / 2)
    k = 0
    peak = abs(c)
    while True:
        coeffs.append(c)
        if max_order is not None and k >= max_order:
            break
        nxt = c * alpha / sqrt(k + 1)
        peak = max(peak, abs(nxt))
        if abs(nxt) < relative_cutoff * peak and abs(nxt) < abs(c):
            break
        c = nxt
        k += 1
    norm = sqrt(_laguerre_value(n, -a2) * factorial(n))
    comps = []
    for k, c in enumerate(coeffs):
        amp = c * sqrt(factorial(k + n) / factorial(k)) / norm
        comps.append((amp, k + n))
    return comps


def _polarise(amp: complex, j: int, spec: PortStateSpec):
    """Distribute j photons of one port over its (H, V) mode pair."""
    if spec.polarisation == "H":
        return [(amp, (j, 0))]
    c_h, c_v = spec.polarisation.amplitudes()
    out = []
    for h in range(j, -1, -1):
        coeff = sqrt(comb(j, h)) * c_h**h * c_v ** (j - h)
        if coeff != 0:
            out.append((amp * coeff, (h, j - h)))
    return out


def build_input_state(
    specs, relative_cutoff: float = 0.01, max_order=None
) -> InputState:
    """Expand per-port (n, alpha, polarisation) specs into a weighted
    superposition of 2M-mode occupations.

    Coherent parts use the Poissonian displacement series truncated where
    the coefficient falls below relative_cutoff times its peak (optionally
    hard-capped at max_order); the Laguerre normalisation of the
    photon-added coherent state is included.
    """
    if not 0 < relative_cutoff < 1:
        raise ValueError("relative_cutoff must lie in (0, 1)")
    distinguishable = any(s.distinguishable for s in specs)
    if distinguishable and not all(s.distinguishable or s.n == 0 for s in specs):
        raise ValueError("cannot mix distinguishable and indistinguishable photons")
    per_port = []
    for spec in specs:
        comps = _port_components(spec, relative_cutoff, max_order)
        polarised = []
        for amp, j in comps:
            polarised.extend(_polarise(amp, j, spec))
        per_port.append(polarised)
    components = []
    for combo in product(*per_port):
        amp = 1.0 + 0j
        occ = []
        for port_amp, (h, v) in combo:
            amp *= port_amp
            occ.extend((h, v))
        components.append((amp, tuple(occ)))
    state = InputState(
        components=components,
        mode_count=2 * len(specs),
        distinguishable=distinguishable,
    )
    state.truncation_mass = max(0.0, 1.0 - state.norm_squared())
    return state


def fock_amplitude(unitary, input_occ, output_occ) -> complex:
    """Transition amplitude <output|U|input> via a permanent of the
    row/column-expanded submatrix."""
    unitary = np.asarray(unitary, dtype=complex)
    input_occ, output_occ = tuple(input_occ), tuple(output_occ)
    if total(input_occ) != total(output_occ):
        raise ValueError("input and output photon numbers must match")
    if len(input_occ) != unitary.shape[0] or len(output_occ) != unitary.shape[0]:
        raise ValueError("occupation length must match the unitary dimension")
    cols = [j for j, n in enumerate(input_occ) for _ in range(n)]
    rows = [i for i, n in enumerate(output_occ) for _ in range(n)]
    sub = unitary[np.ix_(rows, cols)]
    norm = sqrt(
        np.prod([factorial(n) for n in input_occ])
        * np.prod([factorial(n) for n in output_occ])
    )
    return permanent(sub) / norm


def _sector_norms(input_occ, outputs):
    in_norm = 1.0
    for n in input_occ:
        in_norm *= factorial(n)
    norms = np.empty(len(outputs))
    for t, occ in enumerate(outputs):
        p = in_norm
        for n in occ:
            p *= factorial(n)
        norms[t] = 1.0 / sqrt(p)
    return norms


def propagate(
    state: InputState, unitary, max_total_photons=None
) -> OutputDistribution:
    """Exact output distribution over 2M-mode occupations.

    Sectors above max_total_photons (if given) are dropped and their input
    probability mass added to the distribution's truncation mass.
    """
    unitary = np.ascontiguousarray(unitary, dtype=np.complex128)
    if unitary.shape[0] != state.mode_count:
        raise ValueError("unitary dimension must match the state mode count")
    # merge duplicate occupations so coherent sums are formed once
    sectors = {}
    for amp, occ in state.components:
        sectors.setdefault(total(occ), {})
        sectors[total(occ)][occ] = sectors[total(occ)].get(occ, 0j) + amp
    probabilities = {}
    truncated = state.truncation_mass
    for n, comps in sorted(sectors.items()):
        sector_mass = sum(abs(a) ** 2 for a in comps.values())
        if max_total_photons is not None and n > max_total_photons:
            truncated += sector_mass
            continue
        if n == 0:
            occ = (0,) * state.mode_count
            probabilities[occ] = probabilities.get(occ, 0.0) + sector_mass
            continue
        basis = FockBasis(state.mode_count, n)
        outputs = np.array(basis.occupations, dtype=np.int64)
        amps = np.zeros(len(basis), dtype=np.complex128)
        for occ, amp in comps.items():
            cols = [j for j, c in enumerate(occ) for _ in range(c)]
            colmat = np.ascontiguousarray(unitary[:, cols])
            norms = _sector_norms(occ, basis.occupations)
            amps += amp * _sector_amplitudes(colmat, outputs, norms)
        for occ, a in zip(basis.occupations, amps):
            p = abs(a) ** 2
            if p > 0.0:
                probabilities[occ] = probabilities.get(occ, 0.0) + p
    return OutputDistribution(
        probabilities=probabilities,
        mode_count=state.mode_count,
        truncation_mass=truncated,
    )


def propagate_distinguishable(occupation, unitary) -> OutputDistribution:
    """Joint count distribution for photons that scatter independently
    (no multiphoton interference): a multinomial convolution over photons
    with single-photon law |U_{j, src}|^2."""
    unitary = np.asarray(unitary, dtype=complex)
    occupation = tuple(occupation)
    if len(occupation) != unitary.shape[0]:
        raise ValueError("occupation length must match the unitary dimension")
    dim = unitary.shape[0]
    probs = {(0,) * dim: 1.0}
    for src, count in enumerate(occupation):
        law = np.abs(unitary[:, src]) ** 2
        for _ in range(count):
            nxt = {}
            for occ, p in probs.items():
                for j in range(dim):
                    pj = p * law[j]
                    if pj > 0.0:
                        new = occ[:j] + (occ[j] + 1,) + occ[j + 1 :]
                        nxt[new] = nxt.get(new, 0.0) + pj
            probs = nxt
    return OutputDistribution(probabilities=probs, mode_count=dim)


def trace_polarisation(dist: OutputDistribution) -> OutputDistribution:
    """Sum probabilities over polarisation, leaving per-port photon counts."""
    out = {}
    for occ, p in dist.probabilities.items():
        ports = collapse_polarisation(occ)
        out[ports] = out.get(ports, 0.0) + p
    return OutputDistribution(
        probabilities=out,
        mode_count=dist.mode_count // 2,
        truncation_mass=dist.truncation_mass,
    )


def intensity_expectation(specs, unitary) -> np.ndarray:
    """Classical per-port output intensities for a purely coherent input."""
    if any(s.n != 0 for s in specs):
        raise ValueError("intensity detection requires a purely coherent input")
    unitary = np.asarray(unitary, dtype=complex)
    amps = np.zeros(2 * len(specs), dtype=complex)
    for m, spec in enumerate(specs):
        if spec.polarisation == "H":
            c_h, c_v = 1.0, 0.0
        else:
            c_h, c_v = spec.polarisation.amplitudes()
        amps[2 * m] = spec.alpha * c_h
        amps[2 * m + 1] = spec.alpha * c_v
    out = unitary @ amps
    intensities = np.abs(out) ** 2
    return intensities[0::2] + intensities[1::2]
