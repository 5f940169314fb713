"""
Unit tests for run orchestration.

Tests status transitions, artifact bookkeeping, progress reporting and failure handling.
"""
import json
import math
import os
from unittest.mock import Mock, patch

import pytest

from fluxlab.models import ArtifactType, RunStatus
from fluxlab.orchestrator import RunOrchestrator, write_run_json
from fluxlab.schemas import (
    ButterflyParams,
    Command,
    EvolveParams,
    GutzwillerParams,
    LaserParams,
    RunConfig,
    SpectrumParams,
    WannierParams,
)


def _config(command, parameters, output_dir, parallelism=1):
    return RunConfig(command=command, parameters=parameters, output_dir=output_dir, parallelism=parallelism)


class TestRunOrchestration:
    """Tests for orchestrator core functionality."""

    @pytest.fixture
    def butterfly_config(self, output_dir):
        """Small butterfly run."""
        return _config(Command.BUTTERFLY, ButterflyParams(rmax=2, ksamples=4), output_dir)

    def test_status_transitions(self, butterfly_config):
        """Test a run goes PENDING -> RUNNING -> COMPLETED."""
        orchestrator = RunOrchestrator(butterfly_config)
        assert orchestrator.record.status == RunStatus.PENDING
        record = orchestrator.execute()
        assert record.status == RunStatus.COMPLETED
        assert record.progress_percent == 100
        assert record.error_message is None

    def test_artifacts_recorded(self, butterfly_config):
        """Test run.json, data and plot files are recorded with sizes."""
        record = RunOrchestrator(butterfly_config).execute()
        names = [os.path.basename(a.file_path) for a in record.artifacts]
        assert names == ["run.json", "butterfly.csv", "butterfly_bands.csv", "butterfly.svg"]
        assert [a.type for a in record.artifacts] == [
            ArtifactType.JSON,
            ArtifactType.CSV,
            ArtifactType.CSV,
            ArtifactType.SVG,
        ]
        assert all(a.file_size and a.file_size > 0 for a in record.artifacts)
        assert record.summary == {"points": 64, "slices": 3}

    def test_progress_callback(self, butterfly_config):
        """Test progress is reported from 0 to 100."""
        callback = Mock()
        RunOrchestrator(butterfly_config, progress_callback=callback).execute()
        percents = [call.args[0] for call in callback.call_args_list]
        assert percents[0] == 0
        assert percents[-1] == 100
        assert percents == sorted(percents)

    def test_failure_marks_record(self, output_dir):
        """Test a solver failure marks the run FAILED and propagates."""
        config = _config(Command.SPECTRUM, SpectrumParams(alpha="1/3", ksamples=4), output_dir)
        orchestrator = RunOrchestrator(config)
        with patch("fluxlab.orchestrator.spectrum_slice", side_effect=RuntimeError("solver exploded")):
            with pytest.raises(RuntimeError):
                orchestrator.execute()
        assert orchestrator.record.status == RunStatus.FAILED
        assert orchestrator.record.error_message == "solver exploded"
        assert "solver exploded" in orchestrator.record.progress_message
        assert [a.type for a in orchestrator.record.artifacts] == [ArtifactType.JSON]

    def test_svg_can_be_skipped(self, output_dir):
        """Test --no-svg emits CSV only."""
        config = _config(Command.BUTTERFLY, ButterflyParams(rmax=1, ksamples=2, svg=False), output_dir)
        with patch("fluxlab.orchestrator.emit_dataset", return_value=[]) as mock_emit:
            RunOrchestrator(config).execute()
        assert [call.args[1] for call in mock_emit.call_args_list] == ["csv"]


class TestCommandHandlers:
    """Tests for the per-command handlers."""

    def test_spectrum_summary(self, output_dir):
        """Test band count and edges in the summary."""
        config = _config(Command.SPECTRUM, SpectrumParams(alpha="1/2", ksamples=8), output_dir)
        record = RunOrchestrator(config).execute()
        assert record.summary["band_count"] == 2
        assert record.summary["touching"] is True
        assert os.path.exists(os.path.join(output_dir, "spectrum_1_2.csv"))

    def test_evolve_with_operator_dump(self, output_dir):
        """Test evolve writes density data and the operator dump."""
        params = EvolveParams(alpha="1/4", nx=8, ny=8, tmax=1.0, samples=3, dump_operator=True)
        record = RunOrchestrator(_config(Command.EVOLVE, params, output_dir)).execute()
        names = [os.path.basename(a.file_path) for a in record.artifacts]
        assert names == ["run.json", "hamiltonian.txt", "density.csv", "density.svg"]
        assert record.summary["period_at_tmax"] == "not evaluated"
        assert record.summary["max_norm_drift"] < 1e-12

    def test_evolve_detects_period(self, output_dir):
        """Test the summary reports the period of the final profile."""
        params = EvolveParams(alpha="1/4", nx=4, ny=48, tmax=3.0, samples=2, svg=False)
        record = RunOrchestrator(_config(Command.EVOLVE, params, output_dir)).execute()
        assert record.summary["period_at_tmax"] == 4

    def test_wannier_table(self, output_dir):
        """Test the calibration table has one row per (depth, alpha)."""
        params = WannierParams(depth=[10.0], alpha=["0", "1/4"])
        record = RunOrchestrator(_config(Command.WANNIER, params, output_dir)).execute()
        assert record.summary == {"rows": 2}
        assert [a.type for a in record.artifacts] == [ArtifactType.JSON, ArtifactType.CSV]

    def test_laser_angles(self, output_dir):
        """Test the symmetric default geometry."""
        record = RunOrchestrator(_config(Command.LASER_ANGLES, LaserParams(), output_dir)).execute()
        assert record.summary["phi_e_rad"] == pytest.approx(math.pi / 4, abs=1e-12)
        assert record.summary["phi_g_deg"] == pytest.approx(45.0, abs=1e-10)
        assert record.summary["alpha"] == pytest.approx(math.sqrt(2) / 2, abs=1e-12)

    def test_gutzwiller_maps(self, output_dir):
        """Test the Gutzwiller run writes data and both maps."""
        params = GutzwillerParams(size=4, nmax=4, mu=2.0, u=4.0)
        record = RunOrchestrator(_config(Command.GUTZWILLER, params, output_dir)).execute()
        names = [os.path.basename(a.file_path) for a in record.artifacts]
        assert names == ["run.json", "gutzwiller.csv", "gutzwiller_abs_phi.svg", "gutzwiller_sigma2.svg"]
        assert "converged" in record.summary


class TestRunJson:
    """Tests for the resolved-configuration record."""

    def test_sorted_keys(self, output_dir):
        """Test run.json holds the resolved configuration with sorted keys."""
        config = _config(Command.BUTTERFLY, ButterflyParams(rmax=3), output_dir)
        path = write_run_json(config, output_dir)
        text = open(path, encoding="utf-8").read()
        payload = json.loads(text)
        assert payload["command"] == "butterfly"
        assert payload["parameters"]["rmax"] == 3
        assert payload["parameters"]["ksamples"] == 64
        assert text == json.dumps(payload, indent=2, sort_keys=True) + "\n"
