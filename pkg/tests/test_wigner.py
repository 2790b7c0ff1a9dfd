import math

import numpy as np
import pytest
from scipy.special import eval_genlaguerre, factorial

import paritylab as pl
from paritylab import GridWindow, WindowError
from conftest import random_density_matrix

TWO_OVER_PI = 2.0 / math.pi


def displacement_oracle(beta, dim):
    """Closed-form <m|D(beta)|n> via associated Laguerre polynomials."""
    out = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        for n in range(dim):
            if m >= n:
                pref = math.sqrt(factorial(n) / factorial(m)) * beta ** (m - n)
                lag = eval_genlaguerre(n, m - n, abs(beta) ** 2)
            else:
                pref = (math.sqrt(factorial(m) / factorial(n))
                        * (-beta.conjugate()) ** (n - m))
                lag = eval_genlaguerre(m, n - m, abs(beta) ** 2)
            out[m, n] = pref * math.exp(-abs(beta) ** 2 / 2.0) * lag
    return out


def test_displacement_recurrence_matches_laguerre_oracle(rng):
    for _ in range(8):
        beta = complex(rng.normal(), rng.normal())
        got = pl.displacement_fock_matrix(beta, 14)
        expect = displacement_oracle(beta, 14)
        assert np.max(np.abs(got - expect)) < 1e-11


def test_displacement_is_unitary():
    d = pl.displacement_fock_matrix(0.7 - 0.3j, 60)
    # unitarity holds on the sub-block far from the truncation edge
    block = (d.conj().T @ d)[:20, :20]
    assert np.max(np.abs(block - np.eye(20))) < 1e-10


def test_wigner_origin_values():
    assert abs(pl.wigner_point(pl.build_fock(0), (0, 0)) - TWO_OVER_PI) < 1e-14
    assert abs(pl.wigner_point(pl.build_fock(1), (0, 0)) + TWO_OVER_PI) < 1e-14
    coh = pl.build_state(pl.Coherent(1.0))
    assert abs(pl.wigner_point(coh, (0, 0)) - TWO_OVER_PI * math.exp(-2)) < 1e-12


def test_wigner_single_photon_slice():
    # W(q,0) = (2/pi)(4q^2-1)e^{-2q^2} with zero crossings at q = +-1/2
    rho = pl.build_fock(1).to_density()
    for q in (0.0, 0.25, 0.5, 0.9, 1.7):
        expect = TWO_OVER_PI * (4 * q * q - 1) * math.exp(-2 * q * q)
        assert abs(pl.wigner_point(rho, (q, 0.0)) - expect) < 1e-13
    assert abs(pl.wigner_point(rho, (0.5, 0.0))) < 1e-14


def test_wigner_coherent_displaced_gaussian(rng):
    # oracle is the untruncated ideal Gaussian; the built state carries a
    # 1e-10 Poisson tail cut, so agreement bottoms out around 1e-9
    alpha = 0.8 + 0.4j
    rho = pl.build_state(pl.Coherent(alpha))
    for _ in range(5):
        q, p = rng.normal(scale=1.2), rng.normal(scale=1.2)
        expect = TWO_OVER_PI * math.exp(-2 * abs((q + 1j * p) - alpha) ** 2)
        assert abs(pl.wigner_point(rho, (q, p)) - expect) < 1e-8


def test_origin_identity_random_states(rng):
    for _ in range(40):
        dim = int(rng.integers(2, 18))
        rho = random_density_matrix(rng, dim)
        w = pl.wigner_point(rho, (0.0, 0.0))
        assert abs(w - TWO_OVER_PI * pl.mean_parity(rho)) < 1e-10


def test_vacuum_grid_symmetry_and_peak():
    grid = pl.wigner_grid(pl.build_fock(0), GridWindow(-3, 3, -3, 3, 121, 121))
    assert abs(grid.value_at_origin() - TWO_OVER_PI) < 1e-14
    assert abs(float(np.max(grid.values)) - TWO_OVER_PI) < 1e-14
    assert np.max(np.abs(grid.values - grid.values[::-1, :])) < 1e-10
    assert np.max(np.abs(grid.values - grid.values.T)) < 1e-10


@pytest.mark.parametrize("spec", [pl.Fock(0), pl.Fock(1), pl.Fock(3),
                                  pl.Coherent(1.0), pl.Thermal(0.5),
                                  pl.PhotonAdded(1, pl.Binomial(0.5, 2)),
                                  pl.PhotonAdded(1, pl.Thermal(1.0))])
def test_grid_mass_normalized(spec):
    grid = pl.wigner_grid(pl.build_state(spec))
    assert abs(grid.riemann_mass() - 1.0) < 1e-3


def test_grid_respects_wigner_bound():
    grid = pl.wigner_grid(pl.build_state(pl.PhotonAdded(1, pl.Binomial(0.7, 4))))
    assert float(np.max(np.abs(grid.values))) <= TWO_OVER_PI + 1e-9


def test_thermal_wigner_closed_form():
    # stationary Gaussian of the thermal flow: (2/(pi(1+2n))) e^{-2 r^2/(1+2n)}
    nbar = 0.7
    rho = pl.build_state(pl.Thermal(nbar))
    width = 1.0 + 2.0 * nbar
    for q, p in ((0.0, 0.0), (0.5, 0.3), (1.2, -0.8)):
        expect = 2.0 / (math.pi * width) * math.exp(-2.0 * (q * q + p * p) / width)
        assert abs(pl.wigner_point(rho, (q, p)) - expect) < 1e-10


def test_rotational_covariance_quarter_turn():
    # rotating alpha by pi/2 rotates the distribution: W'(q, p) = W(p, -q)
    alpha = 0.9
    rho = pl.build_state(pl.PhotonAdded(1, pl.Coherent(alpha)))
    rho_rot = pl.build_state(pl.PhotonAdded(1, pl.Coherent(alpha * 1j)))
    for q, p in ((0.3, -0.2), (1.1, 0.4), (-0.6, 0.9)):
        assert abs(pl.wigner_point(rho_rot, (q, p))
                   - pl.wigner_point(rho, (p, -q))) < 1e-9


def test_hermitian_states_have_real_wigner(rng):
    for _ in range(10):
        rho = random_density_matrix(rng, int(rng.integers(2, 12)))
        grid = pl.wigner_grid(rho, GridWindow(-3, 3, -3, 3, 21, 21))
        assert grid.values.dtype == float  # imaginary residue checked internally


def test_negativity_volume_vacuum_zero():
    assert pl.negativity_volume(pl.wigner_grid(pl.build_fock(0))) == 0.0


def test_negativity_volume_single_photon():
    # exact volume: integral of -W over r < 1/2 equals 2 e^{-1/2} - 1
    exact = 2.0 * math.exp(-0.5) - 1.0
    win = GridWindow(-3, 3, -3, 3, 121, 121)
    coarse = pl.negativity_volume(pl.wigner_grid(pl.build_fock(1), win))
    fine = pl.negativity_volume(pl.wigner_grid(
        pl.build_fock(1), GridWindow(-3, 3, -3, 3, 241, 241)))
    assert abs(coarse - exact) < 1e-3
    assert abs(fine - coarse) < 0.01 * coarse


def test_negativity_volume_rejects_small_window():
    # |1> is negative at q = 0.4, so a window ending there must be refused
    grid = pl.wigner_grid(pl.build_fock(1), GridWindow(-0.4, 0.4, -0.4, 0.4, 21, 21))
    with pytest.raises(WindowError):
        pl.negativity_volume(grid)


def test_added_binomial_cross_section_shape():
    # dominant negative dip sits just off the origin; no negativity far out
    rho = pl.build_state(pl.PhotonAdded(1, pl.Binomial(0.5, 2)))
    qs = np.linspace(-4.0, 4.0, 801)
    vals = np.array([pl.wigner_point(rho, (float(q), 0.0)) for q in qs])
    dip = int(np.argmin(vals))
    assert vals[dip] < -0.3
    assert abs(qs[dip]) < 1.0
    assert np.all(vals[np.abs(qs) > 1.5] > -1e-9)


def test_fock3_cross_section_has_three_positive_crossings():
    rho = pl.build_fock(3).to_density()
    qs = np.linspace(1e-3, 4.0, 500)
    vals = np.array([pl.wigner_point(rho, (float(q), 0.0)) for q in qs])
    flips = int(np.sum(np.abs(np.diff(np.sign(vals))) > 1))
    assert flips == 3
