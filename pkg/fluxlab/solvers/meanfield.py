"""
Grand-canonical Gutzwiller mean-field ground state of the trapped flux lattice.

Each site carries a Fock superposition ``f_n``, n = 0..n_max. The hopping
operator from :func:`build_hamiltonian` couples sites through the order
parameter ``phi = <a>``; a site sees ``eta_i = sum_j H_ij phi_j`` and the
local Hamiltonian

    h_i = U_i n (n - 1) + (eps_i - mu) n + eta_i a^dagger + conj(eta_i) a.

Energies are in units of J.
"""

import logging
from typing import Optional, Union

import numpy as np
from scipy import sparse
from scipy.special import gammaln

from ..exceptions import ContractError
from ..models.gutzwiller import (
    GutzwillerObservables,
    GutzwillerState,
    local_moments,
    number_fluctuations,
)
from ..models.operator import HermitianOperatorRep
from ..schemas.gutzwiller import TrapParams
from ..schemas.lattice import FluxRatio, HubbardParams, LatticeSpec
from .lattice_core import build_hamiltonian

logger = logging.getLogger(__name__)

SEED_PHI = 0.1
CUTOFF_WEIGHT = 1e-6


def site_energy(trap: TrapParams, n: int, m: int) -> float:
    """Trap energy ``omega_T / 2 * (w_x (n - c_x)^2 + w_y (m - c_y)^2)`` of site (n, m)."""
    c_x, c_y = trap.center
    w_x, w_y = trap.weights
    return 0.5 * trap.omega_T * (w_x * (n - c_x) ** 2 + w_y * (m - c_y) ** 2)


def trap_potential(spec: LatticeSpec, trap: TrapParams) -> np.ndarray:
    """Trap energy of every site in row-major order."""
    index = np.arange(spec.dim)
    return site_energy(trap, index % spec.n_x, index // spec.n_x)


def _raising(n_max: int) -> np.ndarray:
    """Matrix of a^dagger in the truncated Fock basis."""
    return np.diag(np.sqrt(np.arange(1.0, n_max + 1)), k=-1)


def _coherent(beta: complex, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    if beta == 0:
        return (n == 0).astype(np.complex128)
    log_magnitude = n * np.log(max(abs(beta), 1e-300)) - 0.5 * gammaln(n + 1)
    amplitudes = np.exp(log_magnitude - log_magnitude.max()) * np.exp(1j * np.angle(beta) * n)
    return amplitudes / np.linalg.norm(amplitudes)


def _align_global_phase(coeffs: np.ndarray, phi: np.ndarray, reference: np.ndarray) -> None:
    """Rotate the state in place so phi carries no net phase relative to ``reference``.

    A uniform rotation ``phi -> exp(-i theta) phi`` is ``c_n -> exp(-i n theta) c_n``
    on every site and leaves the energy unchanged.
    """
    overlap = np.vdot(reference, phi)
    if abs(overlap) == 0.0:
        return
    rotation = np.conj(overlap) / abs(overlap)
    coeffs *= rotation ** np.arange(coeffs.shape[1])
    phi *= rotation


class _SiteCouplings:
    """Off-diagonal hopping and onsite energy tables of one lattice problem."""

    def __init__(
        self,
        spec: LatticeSpec,
        op: HermitianOperatorRep,
        params: HubbardParams,
        trap: TrapParams,
        mu: float,
        n_max: int,
    ):
        if op.dim != spec.dim:
            raise ContractError(f"hopping operator dimension {op.dim} != lattice dimension {spec.dim}")
        full = op.matrix
        self.diagonal = full.diagonal().real
        self.off_diagonal = (full - sparse.diags(full.diagonal())).tocsr()
        self.off_diagonal.eliminate_zeros()

        columns = np.arange(spec.dim) % spec.n_x
        interaction = np.array([params.onsite_interaction(int(n)) for n in columns])
        chemical = trap_potential(spec, trap) + self.diagonal - mu
        n = np.arange(n_max + 1, dtype=float)
        # base[i, n] = U_i n (n - 1) + (eps_i - mu) n
        self.base = interaction[:, None] * (n * (n - 1.0))[None, :] + chemical[:, None] * n[None, :]
        self.raising = _raising(n_max)

    def field(self, i: int, phi: np.ndarray) -> complex:
        start, stop = self.off_diagonal.indptr[i], self.off_diagonal.indptr[i + 1]
        return complex(np.dot(self.off_diagonal.data[start:stop], phi[self.off_diagonal.indices[start:stop]]))

    def local_matrix(self, i: int, eta: complex) -> np.ndarray:
        return np.diag(self.base[i]).astype(np.complex128) + eta * self.raising + np.conj(eta) * self.raising.T

    def energy(self, coeffs: np.ndarray, phi: np.ndarray) -> float:
        onsite = float(np.sum(np.abs(coeffs) ** 2 * self.base))
        hopping = float(np.real(np.vdot(phi, self.off_diagonal @ phi)))
        return onsite + hopping


def local_mean_field_hamiltonian(
    site: tuple[int, int],
    state: GutzwillerState,
    flux: FluxRatio,
    params: HubbardParams,
    trap: TrapParams,
    mu: float,
    op: Optional[HermitianOperatorRep] = None,
) -> np.ndarray:
    """Local mean-field Hamiltonian of site ``(n, m)`` given its neighbours' order parameters.

    Args:
        site: Site coordinates (n, m).
        state: Current state supplying every phi.
        flux: Flux of the Landau-gauge hopping.
        params: Hopping and interaction energies.
        trap: Harmonic trap.
        mu: Chemical potential.
        op: Hopping operator to use instead of the Landau-gauge one.

    Returns:
        Hermitian matrix of size ``(n_max + 1, n_max + 1)``.
    """
    spec = state.spec
    op = build_hamiltonian(spec, flux, params.J) if op is None else op
    couplings = _SiteCouplings(spec, op, params, trap, mu, state.n_max)
    i = spec.site_index(*site)
    return couplings.local_matrix(i, couplings.field(i, state.phi))


def solve_ground_state(
    spec: LatticeSpec,
    flux: FluxRatio,
    params: HubbardParams,
    trap: TrapParams,
    mu: float,
    n_max: int = 8,
    tol: float = 1e-8,
    max_sweeps: int = 1000,
    op: Optional[HermitianOperatorRep] = None,
    initial_phi: Union[complex, np.ndarray, None] = None,
) -> GutzwillerState:
    """Self-consistent Gutzwiller ground state by Gauss-Seidel sweeps.

    Each sweep visits the sites row-major forward, then backward. At every
    site the local Hamiltonian is diagonalised and the site takes its ground
    state, which never raises the total energy. After each sweep the global
    phase is aligned with the previous sweep, since complex hopping leaves a
    uniform phase rotation free. The run stops when no phi
    moved by more than ``tol`` over a sweep.

    Args:
        spec: Lattice.
        flux: Flux per plaquette.
        params: Hopping and interaction energies.
        trap: Harmonic trap.
        mu: Chemical potential.
        n_max: Fock cutoff.
        tol: Convergence threshold on the largest per-site phi change.
        max_sweeps: Sweep budget.
        op: Hopping operator replacing the Landau-gauge one, e.g. gauge transformed.
        initial_phi: Seed order parameter, scalar or per site; 0.1 everywhere by default.

    Returns:
        Final state. ``converged`` is False with the last residual when the
        budget runs out; ``cutoff_warning`` is set when any site keeps more
        than 1e-6 weight in the top Fock state.
    """
    op = build_hamiltonian(spec, flux, params.J) if op is None else op
    couplings = _SiteCouplings(spec, op, params, trap, mu, n_max)

    seed = np.broadcast_to(
        np.asarray(SEED_PHI if initial_phi is None else initial_phi, dtype=np.complex128), (spec.dim,)
    )
    coeffs = np.array([_coherent(beta, n_max) for beta in seed])
    phi, _, _ = local_moments(coeffs)
    history = [couplings.energy(coeffs, phi)]
    order = np.concatenate([np.arange(spec.dim), np.arange(spec.dim)[::-1]])
    sqrt_n = np.sqrt(np.arange(1.0, n_max + 1))

    converged = False
    residual = float("inf")
    sweeps = 0
    logger.info(f"Gutzwiller solve on {spec.n_x}x{spec.n_y} at alpha={flux.label}, mu={mu}, n_max={n_max}")
    for sweeps in range(1, max_sweeps + 1):
        previous = phi.copy()
        for i in order:
            _, vectors = np.linalg.eigh(couplings.local_matrix(i, couplings.field(i, phi)))
            coeffs[i] = vectors[:, 0]
            phi[i] = np.sum(sqrt_n * np.conj(coeffs[i, :-1]) * coeffs[i, 1:])
        _align_global_phase(coeffs, phi, previous)
        history.append(couplings.energy(coeffs, phi))
        residual = float(np.max(np.abs(phi - previous)))
        logger.debug(f"Sweep {sweeps}: energy={history[-1]:.12g}, residual={residual:.3g}")
        if residual < tol:
            converged = True
            break

    if not converged:
        logger.warning(f"Gutzwiller solve did not converge in {max_sweeps} sweeps (residual {residual:.3g})")
    top_weight = float(np.max(np.abs(coeffs[:, -1]) ** 2))
    cutoff_warning = top_weight > CUTOFF_WEIGHT
    if cutoff_warning:
        logger.warning(f"Fock cutoff n_max={n_max} keeps weight {top_weight:.3g}; raise n_max")

    return GutzwillerState.from_coeffs(
        spec,
        coeffs,
        energy=history[-1],
        energy_history=history,
        converged=converged,
        residual=residual,
        sweeps=sweeps,
        cutoff_warning=cutoff_warning,
        alpha=flux.value,
    )


def observables(state: GutzwillerState) -> GutzwillerObservables:
    """Order parameter, fluctuation and density maps recomputed from the Fock amplitudes."""
    phi, mean_n, mean_n2 = local_moments(state.coeffs)
    return GutzwillerObservables(
        phi=state.as_map(phi),
        sigma2=state.as_map(number_fluctuations(mean_n, mean_n2)),
        mean_n=state.as_map(mean_n),
        total_n=float(mean_n.sum()),
        energy=state.energy,
    )
