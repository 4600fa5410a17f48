"""Fermion vs hard-core comparison on the ring.

Two regimes, two verification strategies: small sectors go through the
dense Fock-space oracle; the long-chain scan is pinned by closed forms.
The real part of the ground-energy difference obeys

    Re(delta) = t (e^g + e^{-g}) tan(pi / (2 L))

exactly at even half filling, which decays as 1/L. Frozen values below
were computed from the momentum sums and cross-checked by dense
diagonalization at L=8.
"""

import math

import numpy as np
import pytest

from hnaufbau.aufbau import SectorError, ground_state, sort_complex_spectrum
from hnaufbau.fock import build_dense_hamiltonian
from hnaufbau.hardcore import (
    EnergyGap,
    ParitySector,
    delta_E_scan,
    fermion_ground_energy_pbc,
    hcb_ground_energy_pbc,
    im_delta_closed_form,
    obc_equivalence_check,
    parity_sector,
)
from hnaufbau.lattice import HNParams, pbc_spectrum
from hnaufbau.numerics import eigenvalues

SCAN_LENGTHS = list(range(160, 481, 16))


def lowest_re(values):
    s = sort_complex_spectrum(values)
    return s[0]


# ------------------------------------------------------------ parity sector


def test_parity_sector_mapping():
    even = parity_sector(8, 4)
    assert even.N_parity == "even"
    assert even.effective_fermion_boundary == "antiperiodic"
    odd = parity_sector(8, 3)
    assert odd.N_parity == "odd"
    assert odd.effective_fermion_boundary == "periodic"


def test_parity_sector_validation():
    with pytest.raises(SectorError):
        parity_sector(8, 0)
    with pytest.raises(SectorError):
        parity_sector(8, 9)
    with pytest.raises(SectorError):
        parity_sector(1, 1)


# ------------------------------------------------------- ground energies


def test_hcb_ground_matches_dense_oracle_l8():
    p = HNParams(L=8, t=1.0, g=0.5, boundary="periodic")
    h = build_dense_hamiltonian(p, "hardcore", 4)  # dim 70
    res = eigenvalues(h)
    assert res.converged
    dense = lowest_re(res.eigenvalues)
    fast = hcb_ground_energy_pbc(8, 4, 0.5)
    assert abs(dense - fast) < 1e-8


def test_fermion_ground_matches_dense_oracle_l8():
    p = HNParams(L=8, t=1.0, g=0.5, boundary="periodic")
    h = build_dense_hamiltonian(p, "fermion", 4)
    res = eigenvalues(h)
    assert res.converged
    dense = lowest_re(res.eigenvalues)
    fast = fermion_ground_energy_pbc(8, 4, 0.5)
    assert abs(dense - fast) < 1e-8


def test_odd_parity_sectors_coincide():
    # odd N: the fermion image is periodic, so the two routes agree exactly
    for L, N in ((6, 3), (10, 5), (9, 3)):
        assert hcb_ground_energy_pbc(L, N, 0.7) == fermion_ground_energy_pbc(
            L, N, 0.7
        )


def test_hcb_ground_energy_is_real():
    for L, N in ((8, 4), (12, 6), (160, 80)):
        e = hcb_ground_energy_pbc(L, N, 0.5)
        assert abs(e.imag) < 1e-10


def test_hermitian_limit_hcb_below_fermion():
    # g=0: both energies real, hard-core strictly lower in the even sector
    ef = fermion_ground_energy_pbc(8, 4, 0.0)
    eb = hcb_ground_energy_pbc(8, 4, 0.0)
    assert abs(ef.imag) < 1e-12 and abs(eb.imag) < 1e-12
    assert eb.real < ef.real
    # the separation closes as 1/L^2
    gap_small = fermion_ground_energy_pbc(8, 4, 0.0).real - eb.real
    eb_big = hcb_ground_energy_pbc(32, 16, 0.0).real
    ef_big = fermion_ground_energy_pbc(32, 16, 0.0).real
    assert 0 < ef_big - eb_big < gap_small


def test_fermion_even_sector_picks_negative_im_branch():
    e = fermion_ground_energy_pbc(8, 4, 0.5)
    assert e.imag < 0


def test_hcb_route_matches_full_spectrum_route():
    # energy-only scan levels vs the orbital-carrying constructor
    p = HNParams(L=12, t=1.0, g=0.5, boundary="twisted", twist=math.pi)
    via_spectrum = ground_state(pbc_spectrum(p), "fermion", 6).energy
    assert hcb_ground_energy_pbc(12, 6, 0.5) == via_spectrum


# ----------------------------------------------------------- closed forms


def test_im_delta_closed_form_values():
    half = im_delta_closed_form(160, 80, 0.5)
    assert half == pytest.approx(-1.0421906109874948, abs=1e-12)
    # filling-only: any L at half filling gives the same number
    assert im_delta_closed_form(12, 6, 0.5) == pytest.approx(half, abs=1e-12)
    assert im_delta_closed_form(10, 10, 0.9) == pytest.approx(0.0, abs=1e-15)
    assert im_delta_closed_form(10, 5, -0.5) == pytest.approx(-half, abs=1e-12)
    assert im_delta_closed_form(10, 5, 0.0) == 0.0


def test_scan_imaginary_part_matches_closed_form():
    gaps = delta_E_scan(SCAN_LENGTHS, filling=0.5, g=0.5)
    assert [gap.L for gap in gaps] == SCAN_LENGTHS
    for gap in gaps:
        want = im_delta_closed_form(gap.L, gap.N, gap.g, gap.t)
        assert abs(gap.delta.imag - want) < 1e-10
        assert abs(gap.E0_hcb.imag) < 1e-10


def test_scan_real_part_tan_law():
    gaps = delta_E_scan(SCAN_LENGTHS, filling=0.5, g=0.5)
    for gap in gaps:
        want = (math.exp(0.5) + math.exp(-0.5)) * math.tan(math.pi / (2 * gap.L))
        assert gap.delta.real == pytest.approx(want, abs=1e-10)
    # frozen endpoint
    assert gaps[0].delta.real == pytest.approx(0.022141595413103232, abs=1e-12)


def test_scan_real_part_strictly_decreasing():
    gaps = delta_E_scan(SCAN_LENGTHS, filling=0.5, g=0.5)
    re = [abs(gap.delta.real) for gap in gaps]
    assert all(b < a for a, b in zip(re, re[1:]))


def test_scan_decay_exponent_is_one():
    # log-log least squares over the Fig.-4 grid: the decay is 1/L
    gaps = delta_E_scan(SCAN_LENGTHS, filling=0.5, g=0.5)
    x = np.log([gap.L for gap in gaps])
    y = np.log([abs(gap.delta.real) for gap in gaps])
    slope = np.polyfit(x, y, 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.05)


def test_scan_hermitian_limit():
    gaps = delta_E_scan([160, 176], filling=0.5, g=0.0)
    for gap in gaps:
        assert abs(gap.delta.imag) < 1e-12


def test_scan_validation():
    with pytest.raises(SectorError):
        delta_E_scan([10], filling=0.5)  # N=5 odd
    with pytest.raises(SectorError):
        delta_E_scan([10], filling=0.3)  # non-integer N
    with pytest.raises(SectorError):
        delta_E_scan([7.5])


def test_energy_gap_rejects_complex_hcb_energy():
    with pytest.raises(ValueError):
        EnergyGap(
            L=8, N=4, g=0.5, t=1.0,
            E0_fermion=0.0 + 0.0j,
            E0_hcb=0.0 + 1e-6j,
            delta=0.0 - 1e-6j,
        )


def test_parity_sector_is_frozen():
    sector = ParitySector(L=8, N=4, N_parity="even",
                          effective_fermion_boundary="antiperiodic")
    with pytest.raises(AttributeError):
        sector.N = 5


# -------------------------------------------------------- OBC equivalence


def test_obc_equivalence_true_cases():
    assert obc_equivalence_check(6, 3, 0.7) is True
    assert obc_equivalence_check(7, 3, 1.1) is True
    assert obc_equivalence_check(6, 2, 0.7) is True  # even N, still open


def test_pbc_even_sector_inequivalent():
    assert obc_equivalence_check(6, 2, 0.7, boundary="periodic") is False


def test_pbc_odd_sector_equivalent():
    assert obc_equivalence_check(6, 3, 0.7, boundary="periodic") is True
