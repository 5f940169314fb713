"""
Run orchestrator.
Resolves a run configuration into solver calls, writes the data files and
records artifacts and status.
"""

import json
import logging
import os
from typing import Any, Callable, Optional, Union

import numpy as np

from .models.run import Artifact, ArtifactType, RunRecord, RunStatus
from .reports.report_gen import dump_operator, emit_dataset
from .schemas.gutzwiller import TrapParams
from .schemas.lattice import HubbardParams
from .schemas.run import (
    ButterflyParams,
    Command,
    EvolveParams,
    GutzwillerParams,
    LaserParams,
    RunConfig,
    SpectrumParams,
    WannierParams,
)
from .solvers.dynamics import bulk_trim, density_time_series, detect_period
from .solvers.laser_geometry import (
    attainable_alpha_window,
    constraint_residuals,
    solve_angles,
    wavenumber_from_angles,
)
from .solvers.lattice_core import build_hamiltonian, flux_from_wavenumber, parse_flux
from .solvers.meanfield import solve_ground_state
from .solvers.spectra import butterfly, spectrum_slice
from .solvers.wannier_bands import calibration_table

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, str], None]

_EXTENSION_TYPES = {
    ".csv": ArtifactType.CSV,
    ".svg": ArtifactType.SVG,
    ".json": ArtifactType.JSON,
    ".txt": ArtifactType.TXT,
}


def write_run_json(config: RunConfig, output_dir: str) -> str:
    """Write the resolved configuration as sorted-key JSON."""
    path = os.path.join(output_dir, "run.json")
    payload = config.model_dump(mode="json")
    try:
        os.makedirs(output_dir, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise OSError(e.errno, f"cannot write run configuration: {e.strerror}", path) from e
    return path


class RunOrchestrator:
    """Orchestrate a complete command run."""

    def __init__(self, config: RunConfig, progress_callback: Optional[ProgressCallback] = None):
        self.config = config
        self.progress_callback = progress_callback
        self.record = RunRecord(command=config.command.value, output_dir=config.output_dir)
        self._handlers: dict[Command, Callable[[Any], None]] = {
            Command.BUTTERFLY: self._run_butterfly,
            Command.SPECTRUM: self._run_spectrum,
            Command.EVOLVE: self._run_evolve,
            Command.WANNIER: self._run_wannier,
            Command.LASER_ANGLES: self._run_laser_angles,
            Command.GUTZWILLER: self._run_gutzwiller,
        }

    def execute(self) -> RunRecord:
        """
        Execute the configured command.

        Returns:
            The completed run record

        Raises:
            Whatever the solver or writer raised; the record is marked FAILED first.
        """
        record = self.record
        try:
            record.status = RunStatus.RUNNING
            self._progress(0, f"Starting {record.command}...")
            self._save_artifact(write_run_json(self.config, self.config.output_dir))

            self._handlers[self.config.command](self.config.parameters)

            record.status = RunStatus.COMPLETED
            self._progress(100, "Run completed successfully")
            return record
        except Exception as e:
            record.status = RunStatus.FAILED
            record.error_message = str(e)
            record.progress_message = f"Run failed: {str(e)}"
            logger.error(f"{record.command} failed: {e}")
            raise

    def _progress(self, percent: int, message: str) -> None:
        self.record.progress_percent = percent
        self.record.progress_message = message
        logger.info(message)
        if self.progress_callback:
            self.progress_callback(percent, message)

    def _save_artifact(self, file_path: str) -> None:
        artifact_type = _EXTENSION_TYPES[os.path.splitext(file_path)[1]]
        self.record.artifacts.append(Artifact.from_path(artifact_type, file_path))

    def _emit(self, dataset, name: str, svg: bool) -> None:
        base = os.path.join(self.config.output_dir, name)
        formats = ["csv", "svg"] if svg else ["csv"]
        for fmt in formats:
            for path in emit_dataset(dataset, fmt, base):
                self._save_artifact(path)

    def _run_butterfly(self, params: ButterflyParams) -> None:
        self._progress(10, f"Computing butterfly up to r={params.rmax}...")
        dataset = butterfly(
            params.rmax,
            k_samples=params.ksamples,
            J=params.J,
            gap_tol=params.gap_tol,
            parallelism=self.config.parallelism,
        )
        self._progress(80, "Writing butterfly data...")
        self._emit(dataset, "butterfly", params.svg)
        self.record.result = dataset
        self.record.summary = {"points": len(dataset), "slices": len(dataset.slices)}

    def _run_spectrum(self, params: SpectrumParams) -> None:
        flux = parse_flux(params.alpha)
        self._progress(10, f"Computing Harper slice at alpha={flux.label}...")
        slice_ = spectrum_slice(flux, k_samples=params.ksamples, J=params.J, gap_tol=params.gap_tol)
        self._emit(slice_, f"spectrum_{flux.p}_{flux.r}", svg=False)
        self.record.result = slice_
        self.record.summary = {
            "alpha": flux.label,
            "band_count": slice_.band_count,
            "touching": slice_.touching,
            "band_edges": [list(edge) for edge in slice_.band_edges],
        }

    def _run_evolve(self, params: EvolveParams) -> None:
        flux = parse_flux(params.alpha)
        spec = params.lattice
        op = build_hamiltonian(spec, flux, params.J)
        if params.dump_operator:
            self._save_artifact(dump_operator(op, os.path.join(self.config.output_dir, "hamiltonian.txt")))

        self._progress(10, f"Evolving at alpha={flux.label} on {spec.n_x}x{spec.n_y}...")
        times = np.linspace(0.0, params.tmax, params.samples)
        profile = density_time_series(
            spec, flux, params.J, times, method=params.method, parallelism=self.config.parallelism, op=op
        )
        self._progress(80, "Writing density data...")
        self._emit(profile, "density", params.svg)

        final = profile.density[-1]
        trim = bulk_trim(flux, params.max_period)
        period: Union[int, str] = "not evaluated"
        if final.size >= 2 * params.max_period and final.size - 2 * trim > params.max_period:
            detection = detect_period(final, params.max_period, trim=trim)
            period = "aperiodic" if detection.aperiodic else detection.period
        self.record.result = profile
        self.record.summary = {
            "alpha": flux.label,
            "period_at_tmax": period,
            "max_norm_drift": float(np.max(np.abs(profile.norms - 1.0))),
            "max_energy_drift": float(np.max(np.abs(profile.energies - profile.energies[0]))),
        }

    def _run_wannier(self, params: WannierParams) -> None:
        alphas = [parse_flux(a).value for a in params.alpha]
        self._progress(10, f"Calibrating {len(params.depth)} depth(s)...")
        table = calibration_table(
            params.depth,
            alphas,
            n_planewaves=params.n_planewaves,
            n_quasimomenta=params.n_quasimomenta,
            parallelism=self.config.parallelism,
        )
        self._emit(table, "calibration", svg=False)
        self.record.result = table
        self.record.summary = {"rows": len(table)}

    def _run_laser_angles(self, params: LaserParams) -> None:
        angles = solve_angles(params.q, params.delta_prime, params.kg)
        residual_x, residual_y = constraint_residuals(angles, params.q, params.delta_prime, params.kg)
        q_back = wavenumber_from_angles(angles, params.delta_prime, params.kg)
        alpha_min, alpha_max = attainable_alpha_window(params.delta_prime, params.kg, params.wavelength)
        phi_e_deg, phi_g_deg = angles.degrees
        self.record.result = angles
        self.record.summary = {
            "phi_e_rad": angles.phi_e,
            "phi_g_rad": angles.phi_g,
            "phi_e_deg": phi_e_deg,
            "phi_g_deg": phi_g_deg,
            "residual_x": residual_x,
            "residual_y": residual_y,
            "alpha": flux_from_wavenumber(q_back, params.wavelength).value,
            "alpha_min": alpha_min,
            "alpha_max": alpha_max,
        }

    def _run_gutzwiller(self, params: GutzwillerParams) -> None:
        flux = parse_flux(params.alpha)
        spec = params.lattice
        hubbard = HubbardParams(J=params.J, U_n=params.u, U_n_odd=params.u_odd)
        trap = TrapParams.centered(spec, params.omega_t)
        self._progress(10, f"Solving Gutzwiller ground state at alpha={flux.label}...")
        state = solve_ground_state(
            spec,
            flux,
            hubbard,
            trap,
            params.mu,
            n_max=params.nmax,
            tol=params.tol,
            max_sweeps=params.max_sweeps,
        )
        self._progress(80, "Writing Gutzwiller maps...")
        self._emit(state, "gutzwiller", params.svg)
        self.record.result = state
        self.record.summary = {
            "alpha": flux.label,
            "converged": state.converged,
            "sweeps": state.sweeps,
            "residual": state.residual,
            "energy": state.energy,
            "total_n": state.total_n,
            "cutoff_warning": state.cutoff_warning,
        }
