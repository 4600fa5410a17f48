"""Generalized Aufbau assembly of many-body spectra.

Single-particle levels are ordered by the real part of their complex energy;
imaginary parts never influence which level fills first, only the tie-break
inside real-part-degenerate groups (ascending imaginary part, then label).
Occupation configurations are enumerated per statistics and their energies
are plain occupation-weighted sums of level energies.

Ties are resolved with a tolerance, not exact comparison: levels (or
many-body energies) whose real parts differ by at most tie_tol are chained
into one degeneracy cluster and ordered within the cluster. Without this,
float noise of order 1e-16 in cos(pi/2) vs cos(3pi/2) would flip which of
two complex-conjugate partners counts as the ground state.

Energy sums run in sorted-mode order with compensated (Kahan) summation so
that a spectrum row and the direct ground-state fill agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .lattice import ComplexLevel

__all__ = [
    "STATISTICS",
    "LevelOrdering",
    "ManyBodyLevel",
    "OccupationConfig",
    "SectorError",
    "SectorTooLargeError",
    "build_spectrum",
    "count_configs",
    "default_tie_tol",
    "energy_of_config",
    "enumerate_configs",
    "ground_state",
    "occupation_string",
    "parse_occupation_string",
    "sort_complex_spectrum",
    "sort_levels",
]

STATISTICS = ("fermion", "boson", "hardcore")

DEFAULT_MAX_STATES = 5_000_000


class SectorError(ValueError):
    """Invalid (L, N, statistics) sector."""


class SectorTooLargeError(SectorError):
    """Sector dimension exceeds the configured enumeration cap."""


@dataclass(frozen=True)
class OccupationConfig:
    """One occupation configuration: n_m per mode, mode m at position m-1."""

    statistics: str
    occupations: tuple

    def __post_init__(self):
        if self.statistics not in STATISTICS:
            raise ValueError(
                f"statistics must be one of {STATISTICS}, got {self.statistics!r}"
            )
        occ = tuple(int(n) for n in self.occupations)
        object.__setattr__(self, "occupations", occ)
        if any(n < 0 for n in occ):
            raise ValueError("occupations must be non-negative")
        if self.statistics in ("fermion", "hardcore") and any(n > 1 for n in occ):
            raise ValueError(f"{self.statistics} occupations must be 0 or 1")

    @property
    def N(self) -> int:
        return sum(self.occupations)


@dataclass(frozen=True)
class ManyBodyLevel:
    """One many-body level: its energy, configuration, position in the
    (Re, Im)-sorted spectrum, and the real-part degeneracy group it falls in."""

    energy: complex
    config: OccupationConfig
    rank: int
    degeneracy_group: int


@dataclass(frozen=True)
class LevelOrdering:
    """Filling order of single-particle levels.

    permutation holds mode labels, rank l at position l; positions holds the
    corresponding 0-based indices into the level list that produced it; groups
    holds the real-part degeneracy cluster id per rank (non-decreasing).
    """

    permutation: tuple
    tie_tol: float
    positions: tuple = field(repr=False)
    groups: tuple = field(repr=False)


def default_tie_tol(real_parts) -> float:
    """1e-9 scaled by (1 + spread of the real parts being compared)."""
    arr = np.asarray(real_parts, dtype=np.float64)
    if arr.size == 0:
        return 1e-9
    width = float(arr.max() - arr.min())
    return 1e-9 * (1.0 + width)


def _clustered_order(re, im, tiebreak, tie_tol):
    """Order by Re, chain runs with adjacent gaps <= tie_tol into clusters,
    sort each cluster by (Im, tiebreak). Returns (order, cluster_ids)."""
    order1 = np.argsort(re, kind="stable")
    re_sorted = re[order1]
    if re_sorted.size > 1:
        breaks = np.diff(re_sorted) > tie_tol
        cid = np.concatenate(([0], np.cumsum(breaks)))
    else:
        cid = np.zeros(re_sorted.size, dtype=np.int64)
    final = np.lexsort((tiebreak[order1], im[order1], cid))
    return order1[final], cid[final]


def sort_levels(levels, tie_tol=None) -> LevelOrdering:
    """Order levels by (Re energy, then Im ascending, then mode label).

    Levels whose real parts chain within tie_tol form one degeneracy group;
    the group ids come back in LevelOrdering.groups. Default tie_tol is
    default_tie_tol over the real parts.
    """
    if len(levels) == 0:
        raise ValueError("sort_levels requires a non-empty level list")
    energies = np.array([lv.energy for lv in levels], dtype=np.complex128)
    labels = np.array([lv.label for lv in levels], dtype=np.int64)
    if tie_tol is None:
        tie_tol = default_tie_tol(energies.real)
    tie_tol = float(tie_tol)
    if not (tie_tol >= 0.0 and math.isfinite(tie_tol)):
        raise ValueError(f"tie_tol must be finite and >= 0, got {tie_tol}")
    order, groups = _clustered_order(energies.real, energies.imag, labels, tie_tol)
    return LevelOrdering(
        permutation=tuple(int(labels[i]) for i in order),
        tie_tol=tie_tol,
        positions=tuple(int(i) for i in order),
        groups=tuple(int(gid) for gid in groups),
    )


def _check_sector(L, N, statistics):
    if statistics not in STATISTICS:
        raise ValueError(f"statistics must be one of {STATISTICS}, got {statistics!r}")
    if not isinstance(L, (int, np.integer)) or isinstance(L, bool) or L < 1:
        raise SectorError(f"L must be a positive integer, got {L!r}")
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 0:
        raise SectorError(f"N must be a non-negative integer, got {N!r}")
    if statistics in ("fermion", "hardcore") and N > L:
        raise SectorError(f"{statistics} sector requires N <= L, got N={N}, L={L}")


def count_configs(L, N, statistics) -> int:
    """Sector dimension: C(L, N) for fermion/hardcore, C(L+N-1, N) for boson."""
    _check_sector(L, N, statistics)
    if statistics == "boson":
        return math.comb(L + N - 1, N)
    return math.comb(L, N)


def enumerate_configs(L, N, statistics):
    """Yield every OccupationConfig of the sector once, in colexicographic
    order over occupation vectors (for fermion/hardcore this coincides with
    ascending order of the L-bit occupation words)."""
    _check_sector(L, N, statistics)
    if statistics == "boson":
        yield from _enumerate_boson(L, N)
    else:
        yield from _enumerate_binary(L, N, statistics)


def _enumerate_binary(L, N, statistics):
    count = math.comb(L, N)
    word = (1 << N) - 1
    for r in range(count):
        occ = tuple((word >> j) & 1 for j in range(L))
        yield OccupationConfig(statistics, occ)
        if r + 1 < count:
            t = word | (word - 1)
            tz = (word & -word).bit_length() - 1
            word = (t + 1) | ((((~t) & (t + 1)) - 1) >> (tz + 1))


def _enumerate_boson(L, N):
    cur = [0] * L
    cur[0] = N
    count = math.comb(L + N - 1, N)
    for r in range(count):
        yield OccupationConfig("boson", tuple(cur))
        if r + 1 < count:
            i0 = 0
            while cur[i0] == 0:
                i0 += 1
            carry = cur[i0] - 1
            cur[i0] = 0
            cur[i0 + 1] += 1
            cur[0] = carry


def _level_energies(levels):
    return np.array([lv.energy for lv in levels], dtype=np.complex128)


def _kahan_energy(eps, perm_positions, occupations):
    """Compensated occupation-weighted sum, iterating modes in perm order.

    Mirrors the spectrum kernels operation for operation, so a value computed
    here is bit-identical to the corresponding spectrum row.
    """
    acc = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for m in perm_positions:
        n = occupations[m]
        if n == 0:
            continue
        term = complex(eps[m]) if n == 1 else n * complex(eps[m])
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


def build_spectrum(levels, statistics, N, tie_tol=None, max_states=DEFAULT_MAX_STATES):
    """All many-body levels of the sector, sorted by (Re E, Im E).

    Ranks run 0..dim-1 in sorted order; degeneracy_group ids are maximal
    runs of energies whose real parts chain within tie_tol. The ground
    state is rank 0. Sectors larger than max_states raise
    SectorTooLargeError before any allocation.
    """
    L = len(levels)
    _check_sector(L, N, statistics)
    dim = count_configs(L, N, statistics)
    if dim > max_states:
        raise SectorTooLargeError(
            f"sector has {dim} states, above the cap of {max_states}"
        )
    ordering = sort_levels(levels, tie_tol)
    eps = _level_energies(levels)
    perm = np.array(ordering.positions, dtype=np.int64)

    if statistics == "boson":
        states = kernels.boson_states(L, N, dim)
        energies = kernels.config_energies_boson(
            states, perm, eps, np.zeros(dim, dtype=np.complex128)
        )
        occ_rows = states
    else:
        if L > 62:
            raise SectorTooLargeError(
                f"word-based enumeration supports L <= 62, got L={L}"
            )
        words = kernels.fermion_words(L, N, dim)
        energies = kernels.config_energies_fermion(
            words, perm, eps, np.zeros(dim, dtype=np.complex128)
        )
        occ_rows = kernels.fermion_occupations(words, L)

    mb_tol = default_tie_tol(energies.real) if tie_tol is None else float(tie_tol)
    positions = np.arange(dim, dtype=np.int64)
    order, groups = _clustered_order(energies.real, energies.imag, positions, mb_tol)

    out = []
    for rank in range(dim):
        s = order[rank]
        config = OccupationConfig(statistics, tuple(int(n) for n in occ_rows[s]))
        out.append(
            ManyBodyLevel(
                energy=complex(energies[s]),
                config=config,
                rank=rank,
                degeneracy_group=int(groups[rank]),
            )
        )
    return out


def ground_state(levels, statistics, N, tie_tol=None) -> ManyBodyLevel:
    """Aufbau ground state without enumerating the sector.

    Fermions and hard-core bosons occupy the first N ranks of the level
    ordering; bosons put all N particles in rank 0. Cost is the level sort,
    O(L log L). The energy matches rank 0 of build_spectrum bit for bit.
    """
    L = len(levels)
    _check_sector(L, N, statistics)
    ordering = sort_levels(levels, tie_tol)
    eps = _level_energies(levels)
    occ = [0] * L
    if statistics == "boson":
        if N > 0:
            occ[ordering.positions[0]] = N
    else:
        for pos in ordering.positions[:N]:
            occ[pos] = 1
    energy = _kahan_energy(eps, ordering.positions, occ)
    config = OccupationConfig(statistics, tuple(occ))
    return ManyBodyLevel(energy=energy, config=config, rank=0, degeneracy_group=0)


def energy_of_config(levels, config, tie_tol=None) -> complex:
    """Energy of one configuration, summed exactly as build_spectrum does."""
    L = len(levels)
    if len(config.occupations) != L:
        raise SectorError(
            f"config has {len(config.occupations)} modes, levels have {L}"
        )
    ordering = sort_levels(levels, tie_tol)
    eps = _level_energies(levels)
    return _kahan_energy(eps, ordering.positions, config.occupations)


def occupation_string(config) -> str:
    """Compact occupation text: digit string when all n <= 9 ("0101100000"),
    comma-joined otherwise ("0,11,0")."""
    occ = config.occupations
    if all(n <= 9 for n in occ):
        return "".join(str(n) for n in occ)
    return ",".join(str(n) for n in occ)


def parse_occupation_string(s, statistics) -> OccupationConfig:
    """Inverse of occupation_string."""
    s = s.strip()
    if not s:
        raise ValueError("empty occupation string")
    if "," in s:
        occ = tuple(int(part) for part in s.split(","))
    else:
        occ = tuple(int(ch) for ch in s)
    return OccupationConfig(statistics, occ)


def sort_complex_spectrum(values, tie_tol=None):
    """Cluster-sort a complex array by (Re, Im) with tolerance chaining.

    Used for multiset comparisons between spectra from different routes:
    plain lexicographic (Re, Im) sorting would let 1e-16 real-part noise
    swap complex-conjugate partners between the two lists.
    """
    arr = np.asarray(values, dtype=np.complex128).ravel()
    if arr.size == 0:
        return arr.copy()
    if tie_tol is None:
        tie_tol = default_tie_tol(arr.real)
    positions = np.arange(arr.size, dtype=np.int64)
    order, _groups = _clustered_order(arr.real, arr.imag, positions, float(tie_tol))
    return arr[order]
