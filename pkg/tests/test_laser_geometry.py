"""
Unit tests for the Raman coupling and beam-angle geometry.
"""
import logging
import math

import pytest

from fluxlab.exceptions import DomainError, OutOfRangeError
from fluxlab.schemas import RamanConfig
from fluxlab.solvers import (
    attainable_alpha_window,
    flux_from_wavenumber,
    gamma_squared,
    raman_rabi_magnitude,
    solve_angles,
    wavenumber_from_angles,
)
from fluxlab.solvers.laser_geometry import constraint_residuals, q_window


class TestRamanRabi:
    """Tests for the two-photon Rabi frequency."""

    @pytest.mark.parametrize(
        "omega_e,omega_g,delta_r,expected",
        [(0.0, 1.0, 50.0, 0.0), (1.0, 2.0, 40.0, 0.025), (3.0, 3.0, 60.0, 0.075)],
    )
    def test_product_over_twice_detuning(self, omega_e, omega_g, delta_r, expected):
        """Test Omega_e Omega_g / (2 delta_r)."""
        config = RamanConfig(Omega_e=omega_e, Omega_g=omega_g, delta_r=delta_r, k_g=1.0)
        assert raman_rabi_magnitude(config) == pytest.approx(expected)

    def test_nonpositive_detuning(self):
        """Test that delta_r must be positive."""
        with pytest.raises(DomainError):
            raman_rabi_magnitude(RamanConfig(Omega_e=1.0, Omega_g=1.0, delta_r=0.0, k_g=1.0))

    def test_adiabaticity_warning(self, caplog):
        """Test a warning when delta_r is comparable to the Rabi frequencies."""
        config = RamanConfig(Omega_e=1.0, Omega_g=2.0, delta_r=4.0, k_g=1.0)
        with caplog.at_level(logging.WARNING, logger="fluxlab.solvers.laser_geometry"):
            assert raman_rabi_magnitude(config) == pytest.approx(0.25)
        assert "adiabatic" in caplog.text


class TestSolveAngles:
    """Tests for the beam-angle solution."""

    def test_symmetric_case(self):
        """Test Delta_prime = 0 and q = sqrt(2) k_g give pi/4 for both beams."""
        k_g = 2 * math.pi
        angles = solve_angles(math.sqrt(2) * k_g, 0.0, k_g)
        assert angles.phi_e == pytest.approx(math.pi / 4, abs=1e-12)
        assert angles.phi_g == pytest.approx(math.pi / 4, abs=1e-12)

    def test_small_detuning_residuals(self):
        """Test both momentum balances for Delta_prime = 0.01, q = 1.2."""
        angles = solve_angles(1.2, 0.01, 1.0)
        along_x, along_y = constraint_residuals(angles, 1.2, 0.01, 1.0)
        assert abs(along_x) < 1e-12
        assert abs(along_y) < 1e-12

    def test_random_triples(self, rng):
        """Test 1000 in-window triples satisfy both constraints to 1e-12 k_g."""
        for _ in range(1000):
            k_g = rng.uniform(1.0, 10.0)
            delta_prime = rng.uniform(0.0, 0.5 * k_g)
            lower, upper = q_window(delta_prime, k_g)
            margin = 1e-6 * k_g
            q = rng.uniform(lower + margin, upper - margin)
            angles = solve_angles(q, delta_prime, k_g)
            along_x, along_y = constraint_residuals(angles, q, delta_prime, k_g)
            assert abs(along_x) < 1e-12 * k_g
            assert abs(along_y) < 1e-12 * k_g
            assert 0.0 <= angles.phi_g <= math.pi / 2

    def test_e_beam_crosses_axis(self):
        """Test phi_e turns negative for small q at large Delta_prime."""
        k_g = 1.0
        angles = solve_angles(0.6, 0.5, k_g)
        assert angles.phi_e < 0
        along_x, along_y = constraint_residuals(angles, 0.6, 0.5, k_g)
        assert max(abs(along_x), abs(along_y)) < 1e-12

    def test_lower_bound(self):
        """Test q <= Delta_prime names the lower bound."""
        with pytest.raises(OutOfRangeError) as excinfo:
            solve_angles(0.2, 0.2, 1.0)
        assert excinfo.value.bound == "lower"

    def test_upper_bound(self):
        """Test q beyond the window names the upper bound."""
        with pytest.raises(OutOfRangeError) as excinfo:
            solve_angles(2.0, 0.0, 1.0)
        assert excinfo.value.bound == "upper"

    def test_out_of_range_is_domain_error(self):
        """Test that range errors are domain errors."""
        with pytest.raises(DomainError):
            solve_angles(5.0, 0.0, 1.0)

    def test_invalid_wavenumbers(self):
        """Test Delta_prime must stay below k_g."""
        with pytest.raises(DomainError):
            solve_angles(1.0, 1.5, 1.0)

    def test_round_trip_to_flux(self):
        """Test recovered q reproduces the requested flux."""
        lam = 1.0
        k_g = 2 * math.pi / lam
        for alpha in [0.1, 0.25, 1 / 6, 0.4]:
            q = 4 * math.pi * alpha / lam
            angles = solve_angles(q, 0.05, k_g)
            recovered = wavenumber_from_angles(angles, 0.05, k_g)
            assert flux_from_wavenumber(recovered, lam).value == pytest.approx(alpha, abs=1e-12)


class TestWindow:
    """Tests for the attainable flux window."""

    def test_gamma_squared_as_written(self):
        """Test the window polynomial evaluated term by term."""
        q, d, k = 1.3, 0.2, 1.1
        expected = (q**2 - d**2) * (4 * k**2 - q**2 - 4 * k * d + d**2)
        assert gamma_squared(q, d, k) == expected

    def test_no_detuning(self):
        """Test alpha spans (0, 1) when Delta_prime = 0 and k_g = 2 pi / lambda."""
        lower, upper = attainable_alpha_window(0.0, 2 * math.pi, 1.0)
        assert lower == 0.0
        assert upper == pytest.approx(1.0, abs=1e-15)

    def test_window_shrinks_with_detuning(self):
        """Test the upper flux falls as Delta_prime grows."""
        uppers = [attainable_alpha_window(d, 2 * math.pi, 1.0)[1] for d in [0.0, 0.5, 1.0, 2.0]]
        assert all(a > b for a, b in zip(uppers, uppers[1:]))

    def test_invalid_wavelength(self):
        """Test lambda must be positive."""
        with pytest.raises(DomainError):
            attainable_alpha_window(0.0, 1.0, 0.0)
