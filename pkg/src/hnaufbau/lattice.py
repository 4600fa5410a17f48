"""Hatano-Nelson chain: hopping matrices and analytic single-particle data.

The model is the nonreciprocal nearest-neighbor chain

    H = t e^{g} c_j^dag c_{j+1} + t e^{-g} c_{j+1}^dag c_j,

summed over bonds, with open, periodic, or twisted boundaries. A twist phi
multiplies the wrap-around hops by e^{-i phi} (rightward) and e^{+i phi}
(leftward); phi = 0 is periodic and phi = pi antiperiodic.

Closed forms implemented here:

  periodic/twisted:  k_m = (2 pi m + phi)/L,  m = 1..L
                     eps_m = t e^{g} e^{-i k_m} + t e^{-g} e^{+i k_m}
                     orbital phi_j = e^{-i k_m j} / sqrt(L)   (unit norm)

  open:              k'_m = m pi / (L+1)
                     eps_m = 2 t cos k'_m                     (real)
                     orbital phi_j = e^{-g j} sin(j k'_m)     (NOT normalized)

Open-boundary orbitals are kept unnormalized on purpose; normalization is
applied downstream where observables are formed. Sites are 1-indexed in the
formulas above and stored at array positions j-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BOUNDARIES",
    "BoundaryError",
    "ComplexLevel",
    "HNParams",
    "hopping_bonds",
    "hopping_matrix",
    "obc_spectrum",
    "pbc_spectrum",
    "single_particle_levels",
]

BOUNDARIES = ("periodic", "open", "twisted")


class BoundaryError(ValueError):
    """Operation called with an incompatible boundary condition."""


@dataclass(frozen=True)
class HNParams:
    """Model parameters: length L >= 2, hopping t > 0, nonreciprocity g,
    boundary in {periodic, open, twisted} with twist angle in radians
    (meaningful only when boundary == "twisted")."""

    L: int
    t: float = 1.0
    g: float = 0.0
    boundary: str = "periodic"
    twist: float = 0.0

    def __post_init__(self):
        if not isinstance(self.L, (int, np.integer)) or isinstance(self.L, bool):
            raise ValueError(f"L must be an integer, got {self.L!r}")
        if self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        for name in ("t", "g", "twist"):
            val = getattr(self, name)
            if not isinstance(val, (int, float, np.floating, np.integer)) or isinstance(
                val, bool
            ):
                raise ValueError(f"{name} must be a real number, got {val!r}")
            if not math.isfinite(float(val)):
                raise ValueError(f"{name} must be finite, got {val}")
        if not self.t > 0:
            raise ValueError(f"t must be > 0, got {self.t}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(
                f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}"
            )
        if self.boundary != "twisted" and self.twist != 0.0:
            raise ValueError("twist angle is only valid with boundary='twisted'")

    @property
    def phi(self) -> float:
        """Effective wrap-around phase: 0 for periodic, twist for twisted."""
        return float(self.twist) if self.boundary == "twisted" else 0.0


@dataclass(frozen=True)
class ComplexLevel:
    """One single-particle level: mode label m (1..L), its momentum, complex
    energy, and the length-L orbital amplitudes (site j at position j-1)."""

    label: int
    momentum: float
    energy: complex
    orbital: np.ndarray = field(repr=False)


def hopping_matrix(p: HNParams) -> np.ndarray:
    """L x L hopping matrix of the chain.

    Row i, column j holds the amplitude of c_i^dag c_j. Wrap-around entries
    accumulate onto existing ones, which matters only at L = 2 where chain
    and wrap bonds coincide.
    """
    L = p.L
    tg = p.t * math.exp(p.g)
    tg_rev = p.t * math.exp(-p.g)
    h = np.zeros((L, L), dtype=np.complex128)
    for j in range(L - 1):
        h[j, j + 1] += tg
        h[j + 1, j] += tg_rev
    if p.boundary != "open":
        phase = np.exp(-1j * p.phi)
        h[L - 1, 0] += tg * phase
        h[0, L - 1] += tg_rev * np.conj(phase)
    return h


def hopping_bonds(p: HNParams):
    """Directed bonds (i, j, amplitude) with i != j, from the nonzero
    off-diagonal entries of hopping_matrix, sorted by (i, j). The many-body
    Hamiltonian is sum over bonds of amplitude * c_i^dag c_j."""
    h = hopping_matrix(p)
    bonds = []
    for i in range(p.L):
        for j in range(p.L):
            if i != j and h[i, j] != 0:
                bonds.append((i, j, complex(h[i, j])))
    return bonds


def pbc_spectrum(p: HNParams):
    """Analytic levels for periodic or twisted boundaries.

    Returns L ComplexLevels, labels m = 1..L, momenta k_m = (2 pi m + phi)/L,
    plane-wave orbitals normalized to 1.
    """
    if p.boundary == "open":
        raise BoundaryError("pbc_spectrum requires periodic or twisted boundary")
    L = p.L
    sites = np.arange(1, L + 1)
    levels = []
    for m in range(1, L + 1):
        k = (2.0 * math.pi * m + p.phi) / L
        energy = p.t * math.exp(p.g) * np.exp(-1j * k) + p.t * math.exp(
            -p.g
        ) * np.exp(1j * k)
        orbital = np.exp(-1j * k * sites) / math.sqrt(L)
        levels.append(ComplexLevel(m, k, complex(energy), orbital))
    return levels


def obc_spectrum(p: HNParams):
    """Analytic levels for the open chain.

    Returns L ComplexLevels, labels m = 1..L, momenta k'_m = m pi/(L+1),
    real energies 2 t cos k'_m, orbitals e^{-g j} sin(j k'_m) unnormalized.
    Energies are independent of g (similarity transform to the Hermitian
    chain); the orbitals are not.
    """
    if p.boundary != "open":
        raise BoundaryError("obc_spectrum requires open boundary")
    L = p.L
    sites = np.arange(1, L + 1)
    levels = []
    for m in range(1, L + 1):
        k = math.pi * m / (L + 1)
        energy = 2.0 * p.t * math.cos(k)
        orbital = np.exp(-p.g * sites) * np.sin(k * sites)
        orbital = orbital.astype(np.complex128)
        levels.append(ComplexLevel(m, k, complex(energy), orbital))
    return levels


def single_particle_levels(p: HNParams):
    """Dispatch to the analytic spectrum for the boundary at hand."""
    if p.boundary == "open":
        return obc_spectrum(p)
    return pbc_spectrum(p)
