"""
Unit tests for the Gutzwiller mean-field solver.
"""
import logging
import math

import numpy as np
import pytest

from fluxlab.models import GutzwillerState
from fluxlab.schemas import FluxRatio, HubbardParams, LatticeSpec, TrapParams
from fluxlab.solvers import (
    build_hamiltonian,
    local_mean_field_hamiltonian,
    observables,
    site_energy,
    solve_ground_state,
)
from fluxlab.solvers.lattice_core import apply_gauge_transform
from fluxlab.solvers.meanfield import _align_global_phase

NO_FLUX = FluxRatio.rational(0, 1)


def _fock_state(spec, n, n_max):
    coeffs = np.zeros((spec.dim, n_max + 1), dtype=np.complex128)
    coeffs[:, n] = 1.0
    return GutzwillerState.from_coeffs(spec, coeffs)


def _staggered_seed(spec, amplitude=0.1):
    index = np.arange(spec.dim)
    return amplitude * (-1.0) ** (index % spec.n_x + index // spec.n_x)


def _central_block(values, size=6):
    n_y, n_x = values.shape
    y0, x0 = (n_y - size) // 2, (n_x - size) // 2
    return values[y0 : y0 + size, x0 : x0 + size]


class TestSiteEnergy:
    """Tests for the discretised trap."""

    def test_centre_is_zero(self):
        """Test zero energy at the trap centre."""
        assert site_energy(TrapParams(omega_T=0.06, center=(3.0, 4.0)), 3, 4) == 0.0

    def test_no_trap(self):
        """Test omega_T = 0 gives zero everywhere."""
        trap = TrapParams()
        assert all(site_energy(trap, n, m) == 0.0 for n in range(4) for m in range(4))

    def test_offset_along_x(self):
        """Test omega_T = 0.06 and offset (10, 0) give 3 J."""
        trap = TrapParams(omega_T=0.06, center=(5.0, 5.0))
        assert site_energy(trap, 15, 5) == pytest.approx(3.0)

    def test_axis_weights(self):
        """Test per-axis curvature multipliers."""
        trap = TrapParams(omega_T=1.0, weights=(1.0, 4.0))
        assert site_energy(trap, 0, 1) == pytest.approx(2.0)


class TestLocalHamiltonian:
    """Tests for the single-site mean-field matrix."""

    def test_decoupled_site(self):
        """Test the diagonal 0, -6, 20, 78 at U = 16, mu = 6 without neighbours' phi."""
        spec = LatticeSpec(n_x=3, n_y=3)
        state = _fock_state(spec, 1, n_max=3)
        params = HubbardParams(J=1.0, U_n=16.0)
        matrix = local_mean_field_hamiltonian((1, 1), state, NO_FLUX, params, TrapParams(), mu=6.0)
        np.testing.assert_allclose(matrix, np.diag([0.0, -6.0, 20.0, 78.0]), atol=1e-14)

    def test_hermitian_with_field(self):
        """Test the coupling to a neighbour's order parameter."""
        spec = LatticeSpec(n_x=2, n_y=1)
        coeffs = np.zeros((2, 3), dtype=np.complex128)
        coeffs[:, 0] = coeffs[:, 1] = 1 / math.sqrt(2)
        state = GutzwillerState.from_coeffs(spec, coeffs)
        params = HubbardParams(J=1.0, U_n=0.0)
        matrix = local_mean_field_hamiltonian((0, 0), state, NO_FLUX, params, TrapParams(), mu=0.0)
        assert matrix[1, 0] == pytest.approx(0.5)
        assert matrix[2, 1] == pytest.approx(0.5 * math.sqrt(2))
        np.testing.assert_allclose(matrix, matrix.conj().T)

    def test_field_builds_coherence(self):
        """Test a real field at U = 0 gives a ground state with <a> != 0."""
        spec = LatticeSpec(n_x=2, n_y=1)
        coeffs = np.zeros((2, 6), dtype=np.complex128)
        coeffs[:, 0] = coeffs[:, 1] = 1 / math.sqrt(2)
        state = GutzwillerState.from_coeffs(spec, coeffs)
        matrix = local_mean_field_hamiltonian(
            (0, 0), state, NO_FLUX, HubbardParams(J=1.0), TrapParams(), mu=-1.0
        )
        _, vectors = np.linalg.eigh(matrix)
        ground = GutzwillerState.from_coeffs(LatticeSpec(n_x=1, n_y=1), vectors[:, 0])
        assert abs(ground.phi[0]) > 0.1


class TestObservables:
    """Tests for order parameter and fluctuation maps."""

    def test_fock_site(self):
        """Test phi = 0 and sigma^2 = 0 on a Fock state."""
        result = observables(_fock_state(LatticeSpec(n_x=2, n_y=2), 1, n_max=4))
        assert not np.any(result.phi)
        np.testing.assert_allclose(result.sigma2, 0.0, atol=1e-15)
        assert result.total_n == pytest.approx(4.0)

    def test_two_level_superposition(self):
        """Test the equal superposition of n = 0 and n = 1."""
        state = GutzwillerState.from_coeffs(LatticeSpec(n_x=1, n_y=1), [1 / math.sqrt(2), 1 / math.sqrt(2)])
        result = observables(state)
        assert result.phi[0, 0] == pytest.approx(0.5)
        assert result.mean_n[0, 0] == pytest.approx(0.5)
        assert result.sigma2[0, 0] == pytest.approx(0.5)

    def test_empty_site(self):
        """Test sigma^2 is defined as zero on the vacuum."""
        result = observables(_fock_state(LatticeSpec(n_x=1, n_y=1), 0, n_max=3))
        assert result.sigma2[0, 0] == 0.0

    def test_poisson_statistics(self):
        """Test a truncated coherent state with mean 1 has sigma^2 close to 1."""
        n = np.arange(13)
        amplitudes = np.array([math.exp(-0.5) / math.sqrt(math.factorial(k)) for k in n])
        amplitudes /= np.linalg.norm(amplitudes)
        result = observables(GutzwillerState.from_coeffs(LatticeSpec(n_x=1, n_y=1), amplitudes))
        assert result.mean_n[0, 0] == pytest.approx(1.0, rel=0.02)
        assert result.sigma2[0, 0] == pytest.approx(1.0, rel=0.02)


class TestSolveGroundState:
    """Tests for the Gauss-Seidel self-consistency loop."""

    def test_decoupled_mott_limit(self):
        """Test J = 0, U = 16, mu = 6 gives Fock n = 1 on every site."""
        spec = LatticeSpec(n_x=4, n_y=4)
        state = solve_ground_state(spec, NO_FLUX, HubbardParams(J=0.0, U_n=16.0), TrapParams(), mu=6.0)
        assert state.converged
        np.testing.assert_allclose(np.abs(state.phi), 0.0, atol=1e-12)
        np.testing.assert_allclose(state.sigma2, 0.0, atol=1e-12)
        np.testing.assert_allclose(state.mean_n, 1.0, atol=1e-12)

    def test_state_consistency(self):
        """Test normalised sites and phi, sigma^2 recomputable from coeffs."""
        spec = LatticeSpec(n_x=4, n_y=4)
        state = solve_ground_state(spec, FluxRatio.rational(1, 4), HubbardParams(J=1.0, U_n=2.0), TrapParams(), mu=2.0)
        np.testing.assert_allclose(np.sum(np.abs(state.coeffs) ** 2, axis=1), 1.0, atol=1e-10)
        result = observables(state)
        np.testing.assert_allclose(result.phi, state.as_map(state.phi), atol=1e-10)
        np.testing.assert_allclose(result.sigma2, state.as_map(state.sigma2), atol=1e-10)

    def test_energy_never_increases(self):
        """Test the variational energy is non-increasing across sweeps."""
        spec = LatticeSpec(n_x=8, n_y=8)
        trap = TrapParams.centered(spec, 0.06)
        state = solve_ground_state(spec, FluxRatio.rational(1, 6), HubbardParams(J=1.0, U_n=16.0), trap, mu=6.0, n_max=6)
        assert np.all(np.diff(state.energy_history) <= 1e-10)
        assert state.energy == state.energy_history[-1]

    def test_flux_run_converges(self):
        """Test a trapped run with complex hopping settles within the default budget."""
        spec = LatticeSpec(n_x=8, n_y=8)
        trap = TrapParams.centered(spec, 0.06)
        state = solve_ground_state(spec, FluxRatio.rational(1, 6), HubbardParams(J=1.0, U_n=16.0), trap, mu=6.0, n_max=6)
        assert state.converged
        assert state.residual < 1e-8

    def test_global_phase_alignment(self, rng):
        """Test a uniformly rotated state is rotated back onto its reference."""
        n_max = 5
        coeffs = rng.normal(size=(6, n_max + 1)) + 1j * rng.normal(size=(6, n_max + 1))
        coeffs /= np.linalg.norm(coeffs, axis=1, keepdims=True)
        sqrt_n = np.sqrt(np.arange(1.0, n_max + 1))
        phi = np.sum(sqrt_n * np.conj(coeffs[:, :-1]) * coeffs[:, 1:], axis=1)
        theta = 0.7
        turned = coeffs * np.exp(1j * theta * np.arange(n_max + 1))
        turned_phi = phi * np.exp(1j * theta)
        _align_global_phase(turned, turned_phi, phi)
        np.testing.assert_allclose(turned_phi, phi, atol=1e-12)
        recomputed = np.sum(sqrt_n * np.conj(turned[:, :-1]) * turned[:, 1:], axis=1)
        np.testing.assert_allclose(recomputed, turned_phi, atol=1e-12)

    def test_phase_alignment_skips_empty_field(self):
        """Test a vanishing order parameter is left untouched."""
        coeffs = np.zeros((2, 3), dtype=np.complex128)
        coeffs[:, 1] = 1.0
        phi = np.zeros(2, dtype=np.complex128)
        _align_global_phase(coeffs, phi, phi.copy())
        np.testing.assert_array_equal(coeffs[:, 1], 1.0)

    def test_gauge_covariance(self, rng):
        """Test a gauge-transformed hopping operator gives the same |phi| and sigma^2 maps."""
        spec = LatticeSpec(n_x=4, n_y=4)
        params = HubbardParams(J=1.0, U_n=1.0)
        op = build_hamiltonian(spec, NO_FLUX)
        theta = rng.uniform(0, 2 * np.pi, size=spec.dim)
        transformed = apply_gauge_transform(op, theta)
        seed = _staggered_seed(spec)
        kwargs = dict(mu=1.0, n_max=10, tol=1e-11, max_sweeps=5000)
        reference = solve_ground_state(spec, NO_FLUX, params, TrapParams(), initial_phi=seed, **kwargs)
        rotated = solve_ground_state(
            spec, NO_FLUX, params, TrapParams(), op=transformed, initial_phi=seed * np.exp(1j * theta), **kwargs
        )
        assert reference.converged and rotated.converged
        np.testing.assert_allclose(np.abs(rotated.phi), np.abs(reference.phi), atol=1e-8)
        np.testing.assert_allclose(rotated.sigma2, reference.sigma2, atol=1e-8)
        assert rotated.energy == pytest.approx(reference.energy, abs=1e-8)

    def test_fourfold_symmetry(self):
        """Test reflection symmetry of the maps for a centred trap on an odd lattice."""
        spec = LatticeSpec(n_x=5, n_y=5)
        trap = TrapParams.centered(spec, 0.5)
        state = solve_ground_state(
            spec, NO_FLUX, HubbardParams(J=1.0, U_n=1.0), trap, mu=1.0, tol=1e-10, max_sweeps=5000,
            initial_phi=_staggered_seed(spec),
        )
        for values in (np.abs(state.as_map(state.phi)), state.as_map(state.sigma2)):
            np.testing.assert_allclose(values, values[::-1, :], atol=1e-6)
            np.testing.assert_allclose(values, values[:, ::-1], atol=1e-6)

    def test_sweep_budget_exhausted(self, caplog):
        """Test a non-converged run reports its residual."""
        spec = LatticeSpec(n_x=4, n_y=4)
        with caplog.at_level(logging.WARNING, logger="fluxlab.solvers.meanfield"):
            state = solve_ground_state(spec, NO_FLUX, HubbardParams(J=1.0, U_n=1.0), TrapParams(), mu=1.0, max_sweeps=1)
        assert not state.converged
        assert state.sweeps == 1
        assert state.residual > 1e-8
        assert "did not converge" in caplog.text

    def test_cutoff_warning(self):
        """Test weight in the top Fock state raises the cutoff flag."""
        spec = LatticeSpec(n_x=3, n_y=3)
        state = solve_ground_state(spec, NO_FLUX, HubbardParams(J=1.0, U_n=0.1), TrapParams(), mu=3.0, n_max=2)
        assert state.cutoff_warning

    def test_trap_profile(self):
        """Test the density falls from the trap centre outward."""
        spec = LatticeSpec(n_x=7, n_y=7)
        trap = TrapParams.centered(spec, 1.0)
        state = solve_ground_state(spec, NO_FLUX, HubbardParams(J=1.0, U_n=4.0), trap, mu=4.0)
        density = state.as_map(state.mean_n)
        assert density[3, 3] > density[3, 0]
        assert density[3, 0] > density[0, 0]


@pytest.fixture(scope="module")
def figure_runs():
    spec = LatticeSpec(n_x=32, n_y=32)
    trap = TrapParams.centered(spec, 0.06)
    params = HubbardParams(J=1.0, U_n=16.0)
    return {
        alpha: solve_ground_state(spec, FluxRatio.rational(*alpha), params, trap, mu=6.0)
        for alpha in [(0, 1), (1, 6)]
    }


@pytest.mark.slow
class TestTrappedFluxFigure:
    """Full-size trapped runs on a 32 x 32 lattice."""

    def test_runs_converge(self, figure_runs):
        """Test both figure runs reach the tolerance within the default budget."""
        for state in figure_runs.values():
            assert state.converged
            assert state.residual < 1e-8

    def test_flux_suppresses_centre(self, figure_runs):
        """Test flux lowers central |phi| and sigma^2."""
        plain, flux = figure_runs[(0, 1)], figure_runs[(1, 6)]
        assert _central_block(np.abs(flux.as_map(flux.phi))).mean() < _central_block(np.abs(plain.as_map(plain.phi))).mean()
        assert _central_block(flux.as_map(flux.sigma2)).mean() < _central_block(plain.as_map(plain.sigma2)).mean()

    def test_energy_monotone(self, figure_runs):
        """Test monotone energy on both figure runs."""
        for state in figure_runs.values():
            assert np.all(np.diff(state.energy_history) <= 1e-10)

    def test_cutoff_stability(self, figure_runs):
        """Test raising n_max from 8 to 10 leaves the observables unchanged."""
        spec = LatticeSpec(n_x=32, n_y=32)
        wider = solve_ground_state(
            spec, NO_FLUX, HubbardParams(J=1.0, U_n=16.0), TrapParams.centered(spec, 0.06), mu=6.0, n_max=10
        )
        base = figure_runs[(0, 1)]
        np.testing.assert_allclose(np.abs(wider.phi), np.abs(base.phi), atol=1e-6)
        np.testing.assert_allclose(wider.sigma2, base.sigma2, atol=1e-6)
