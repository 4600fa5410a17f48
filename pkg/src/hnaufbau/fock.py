"""Explicit Fock-space engine: bases, Hamiltonian application, product states.

Fermion and hard-core bases are stored as ascending L-bit occupation words
(site j at bit j); boson bases as colexicographically ordered occupation
matrices with an integer key per state (occupations read as digits in base
N+1), kept sorted so lookups are binary searches. Fermion matrix elements
carry Jordan-Wigner string signs counted below the acted-on site; hard-core
bosons use bosonic rules with occupancy capped at 1 and no sign, which is
exactly where the two statistics part ways on a periodic wrap-around bond.

Product states are built by applying creation operators sequentially to the
vacuum, one sector at a time; determinant antisymmetry and permanent
symmetrization come out automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .aufbau import STATISTICS, SectorError, SectorTooLargeError
from .lattice import HNParams, hopping_bonds, single_particle_levels

__all__ = [
    "BasisMismatchError",
    "FockBasis",
    "FockVector",
    "NullStateError",
    "apply_bonds",
    "apply_hamiltonian",
    "build_dense_hamiltonian",
    "construct_product_state",
    "eigenstate_from_config",
    "get_basis",
    "residual",
]

DENSE_DIM_CAP = 2500
BASIS_DIM_CAP = 5_000_000
NULL_NORM_TOL = 1e-12


class BasisMismatchError(ValueError):
    """Vector basis does not match the requested operation."""


class NullStateError(ValueError):
    """Construction produced a vector of (numerically) zero norm."""


class FockBasis:
    """Ordered N-particle basis for one statistics over L sites.

    Fermion and hardcore states live in ``words`` (ascending int64 bit
    words); boson and hardcore states also expose ``states`` (dim x L int16
    occupation matrix), ``keys`` (ascending int64 state keys) and ``radix``
    (per-site place values). ``cap`` is the per-site occupancy bound used by
    the bosonic kernels: N for bosons, 1 for hard-core.
    """

    def __init__(self, statistics, L, N):
        if statistics not in STATISTICS:
            raise ValueError(
                f"statistics must be one of {STATISTICS}, got {statistics!r}"
            )
        if not isinstance(L, (int, np.integer)) or isinstance(L, bool) or L < 1:
            raise SectorError(f"L must be a positive integer, got {L!r}")
        if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 0:
            raise SectorError(f"N must be a non-negative integer, got {N!r}")
        if statistics in ("fermion", "hardcore") and N > L:
            raise SectorError(f"{statistics} requires N <= L, got N={N}, L={L}")
        if statistics in ("fermion", "hardcore") and L > 62:
            raise SectorTooLargeError(f"word storage supports L <= 62, got {L}")
        self.statistics = statistics
        self.L = int(L)
        self.N = int(N)
        if statistics == "boson":
            dim = math.comb(L + N - 1, N)
        else:
            dim = math.comb(L, N)
        if dim > BASIS_DIM_CAP:
            raise SectorTooLargeError(
                f"sector has {dim} states, above the cap of {BASIS_DIM_CAP}"
            )
        self.dim = dim
        self._occupations = None
        if statistics == "fermion":
            self.words = kernels.fermion_words(L, N, dim)
            self.keys = None
            self.radix = None
            self.cap = 1
        elif statistics == "hardcore":
            self.words = kernels.fermion_words(L, N, dim)
            self.radix = np.array([1 << j for j in range(L)], dtype=np.int64)
            self.keys = self.words
            self.cap = 1
        else:
            base = N + 1
            if base**max(L - 1, 0) >= 1 << 62:
                raise SectorTooLargeError(
                    f"state keys overflow int64 for base {base}, L={L}"
                )
            self.words = None
            self.radix = np.array([base**j for j in range(L)], dtype=np.int64)
            states = kernels.boson_states(L, N, dim)
            self.keys = states.astype(np.int64) @ self.radix
            self._occupations = states
            self.cap = max(N, 1)

    @property
    def occupations(self) -> np.ndarray:
        """dim x L int16 occupation matrix, row order = basis order."""
        if self._occupations is None:
            self._occupations = kernels.fermion_occupations(self.words, self.L)
        return self._occupations

    def index_of(self, occ) -> int:
        """Position of an occupation vector in the basis."""
        occ = tuple(int(n) for n in occ)
        if len(occ) != self.L or sum(occ) != self.N:
            raise BasisMismatchError(f"occupation {occ} not in sector (L={self.L}, N={self.N})")
        if self.statistics != "boson":
            if any(n > 1 for n in occ):
                raise BasisMismatchError(f"occupation {occ} exceeds the hard-core cap")
            key = sum(1 << j for j, n in enumerate(occ) if n)
            arr = self.words
        else:
            key = int(np.asarray(occ, dtype=np.int64) @ self.radix)
            arr = self.keys
        i = int(np.searchsorted(arr, key))
        if i >= self.dim or arr[i] != key:
            raise BasisMismatchError(f"occupation {occ} not found in basis")
        return i

    def zero_vector(self) -> "FockVector":
        return FockVector(self, np.zeros(self.dim, dtype=np.complex128))

    def __repr__(self):
        return (
            f"FockBasis(statistics={self.statistics!r}, L={self.L}, "
            f"N={self.N}, dim={self.dim})"
        )


@lru_cache(maxsize=64)
def get_basis(statistics, L, N) -> FockBasis:
    """Memoized basis constructor; bases are immutable once built."""
    return FockBasis(statistics, L, N)


@dataclass
class FockVector:
    """Complex amplitudes over a FockBasis; norm_applied marks unit norm."""

    basis: FockBasis
    amplitudes: np.ndarray
    norm_applied: bool = False

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.basis.dim,):
            raise BasisMismatchError(
                f"amplitude count {amps.shape} does not match basis dim {self.basis.dim}"
            )
        self.amplitudes = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n < NULL_NORM_TOL:
            raise NullStateError(f"vector norm {n:.3e} below {NULL_NORM_TOL}")
        return FockVector(self.basis, self.amplitudes / n, norm_applied=True)


def _bond_arrays(bonds, L):
    bi = np.array([b[0] for b in bonds], dtype=np.int64)
    bj = np.array([b[1] for b in bonds], dtype=np.int64)
    amps = np.array([b[2] for b in bonds], dtype=np.complex128)
    if bonds and (bi.min() < 0 or bi.max() >= L or bj.min() < 0 or bj.max() >= L):
        raise ValueError(f"bond site index outside 0..{L - 1}")
    return bi, bj, amps


def apply_bonds(v: FockVector, bonds) -> FockVector:
    """w = H v for H = sum over (i, j, amp) of amp * c_i^dag c_j."""
    basis = v.basis
    bi, bj, amps = _bond_arrays(bonds, basis.L)
    out = np.zeros(basis.dim, dtype=np.complex128)
    if basis.dim == 0 or len(bonds) == 0:
        return FockVector(basis, out)
    if basis.statistics == "fermion":
        kernels.apply_bonds_fermion(basis.words, v.amplitudes, bi, bj, amps, basis.L, out)
    else:
        kernels.apply_bonds_boson(
            basis.occupations, basis.keys, basis.radix, v.amplitudes, bi, bj, amps,
            basis.cap, out,
        )
    return FockVector(basis, out)


def apply_hamiltonian(p: HNParams, statistics, v: FockVector) -> FockVector:
    """Action of the N-particle Hamiltonian built from p on v."""
    if v.basis.statistics != statistics:
        raise BasisMismatchError(
            f"vector basis is {v.basis.statistics!r}, requested {statistics!r}"
        )
    if v.basis.L != p.L:
        raise BasisMismatchError(f"vector basis has L={v.basis.L}, params have L={p.L}")
    return apply_bonds(v, hopping_bonds(p))


def build_dense_hamiltonian(p: HNParams, statistics, N) -> np.ndarray:
    """Dense sector Hamiltonian, columns indexed like the basis. Sectors
    larger than 2500 states are refused."""
    basis = get_basis(statistics, p.L, N)
    if basis.dim > DENSE_DIM_CAP:
        raise SectorTooLargeError(
            f"dense sector has {basis.dim} states, above the cap of {DENSE_DIM_CAP}"
        )
    bonds = hopping_bonds(p)
    bi, bj, amps = _bond_arrays(bonds, p.L)
    if basis.statistics == "fermion":
        return kernels.dense_bonds_fermion(basis.words, bi, bj, amps, p.L)
    return kernels.dense_bonds_boson(
        basis.occupations, basis.keys, basis.radix, bi, bj, amps, basis.cap
    )


def construct_product_state(orbitals, statistics, L=None) -> FockVector:
    """Apply creation operators sum_j orb[j] c_j^dag for each orbital in turn
    to the vacuum, then normalize.

    Orbitals may come in unnormalized (open-boundary closed forms are); each
    is scaled to unit norm first, which only changes the overall factor that
    normalization fixes anyway. Raises NullStateError when the result
    vanishes, e.g. linearly dependent fermion orbitals or more hard-core
    particles than an orbital's support can hold.
    """
    orbs = [np.asarray(o, dtype=np.complex128).ravel() for o in orbitals]
    if L is None:
        if not orbs:
            raise ValueError("need L when constructing the bare vacuum")
        L = orbs[0].size
    for o in orbs:
        if o.size != L:
            raise ValueError(f"orbital length {o.size} != L={L}")
        if not np.all(np.isfinite(o.real)) or not np.all(np.isfinite(o.imag)):
            raise ValueError("orbital contains non-finite entries")
    N = len(orbs)
    if statistics in ("fermion", "hardcore") and N > L:
        raise SectorError(f"{statistics} requires N <= L, got N={N}")

    normed = []
    for o in orbs:
        nn = np.linalg.norm(o)
        if nn < 1e-300:
            raise NullStateError("zero orbital")
        normed.append(o / nn)

    target = get_basis(statistics, L, N)
    vec = np.ones(1, dtype=np.complex128)
    if statistics == "fermion":
        src_words = get_basis("fermion", L, 0).words
        for n, orb in enumerate(normed):
            dst_words = get_basis("fermion", L, n + 1).words
            out = np.zeros(dst_words.shape[0], dtype=np.complex128)
            kernels.create_fermion(src_words, dst_words, vec, orb, out)
            vec, src_words = out, dst_words
    else:
        # shared radix across sectors so every intermediate key is comparable
        cap = 1 if statistics == "hardcore" else max(N, 1)
        radix = target.radix if N > 0 else np.ones(L, dtype=np.int64)
        src = get_basis(statistics, L, 0)
        for n, orb in enumerate(normed):
            dst = get_basis(statistics, L, n + 1)
            dst_keys = (
                dst.occupations.astype(np.int64) @ radix
                if statistics == "boson"
                else dst.keys
            )
            out = np.zeros(dst.dim, dtype=np.complex128)
            kernels.create_boson(src.occupations, dst_keys, radix, vec, orb, cap, out)
            vec, src = out, dst
    return FockVector(target, vec).normalized()


def residual(p: HNParams, statistics, v: FockVector, E) -> float:
    """Euclidean norm of H v - E v."""
    w = apply_hamiltonian(p, statistics, v)
    return float(np.linalg.norm(w.amplitudes - complex(E) * v.amplitudes))


def eigenstate_from_config(p: HNParams, config) -> FockVector:
    """Product eigenstate for one occupation configuration, using the
    analytic orbitals of the boundary at hand (mode m occupied n_m times).

    Hard-core states are built through their fermion image: the sector
    Hamiltonians agree entry by entry in the shared occupation basis (the
    wrap-around bond needs the parity twist to be baked into p for that, as
    the hardcore module does), so the fermion amplitudes ARE the hard-core
    amplitudes; a symmetrized bosonic product would not be an eigenstate.
    """
    levels = single_particle_levels(p)
    if len(config.occupations) != p.L:
        raise SectorError(
            f"config has {len(config.occupations)} modes, expected L={p.L}"
        )
    orbitals = []
    for pos, n in enumerate(config.occupations):
        orbitals.extend([levels[pos].orbital] * n)
    if config.statistics == "hardcore":
        ferm = construct_product_state(orbitals, "fermion", L=p.L)
        basis = get_basis("hardcore", p.L, len(orbitals))
        return FockVector(basis, ferm.amplitudes, norm_applied=True)
    return construct_product_state(orbitals, config.statistics, L=p.L)
