#!/usr/bin/env python3
"""
fluxlab command line

Usage:
    fluxlab butterfly --rmax 8 --ksamples 64
    fluxlab spectrum --alpha 1/3
    fluxlab evolve --alpha 1/6 --nx 36 --ny 36 --bc-x periodic --bc-y periodic
    fluxlab wannier --depth 4 10 20 --alpha 0 1/8 1/4
    fluxlab laser-angles --q 8.885765876 --delta-prime 0 --kg 6.283185307
    fluxlab gutzwiller --alpha 1/6 --u 16 --mu 6 --omega-t 0.06 --size 32

Options may also come from a ``key = value`` file given with ``--config``;
flags on the command line win over the file.
"""

import argparse
import io
import logging
import sys
from typing import Optional, Sequence

from dotenv import dotenv_values
from pydantic import ValidationError

from .config import settings
from .exceptions import ConfigurationError, FluxLabError, UsageError
from .orchestrator import RunOrchestrator
from .schemas.run import COMMAND_PARAMS, Command, RunConfig

logger = logging.getLogger(__name__)

GLOBAL_KEYS = ("output_dir", "parallelism")


class Colors:
    """ANSI color codes for terminal output."""

    GREEN = "\033[92m"
    RED = "\033[91m"
    YELLOW = "\033[93m"
    BLUE = "\033[94m"
    RESET = "\033[0m"
    BOLD = "\033[1m"


def print_header(text):
    """Print formatted section header."""
    print(f"\n{Colors.BOLD}{Colors.BLUE}{'=' * 70}{Colors.RESET}")
    print(f"{Colors.BOLD}{Colors.BLUE}{text:^70}{Colors.RESET}")
    print(f"{Colors.BOLD}{Colors.BLUE}{'=' * 70}{Colors.RESET}\n")


def print_success(text):
    """Print success message."""
    print(f"{Colors.GREEN}✓ {text}{Colors.RESET}")


def print_error(text):
    """Print error message."""
    print(f"{Colors.RED}✗ {text}{Colors.RESET}", file=sys.stderr)


def print_warning(text):
    """Print warning message."""
    print(f"{Colors.YELLOW}⚠ {text}{Colors.RESET}")


class _Parser(argparse.ArgumentParser):
    """Argument parser raising UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--output-dir", help=f"output directory (default {settings.output_dir})")
    parser.add_argument("--parallelism", type=int, help="worker threads for independent work units")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per solver.

    Options default to ``argparse.SUPPRESS`` so only flags actually given
    reach the namespace; defaults live in the parameter schemas.
    """
    parser = _Parser(
        prog="fluxlab",
        description="Flux lattice laboratory: Hofstadter spectra, density dynamics, "
        "Wannier calibration, Raman geometry and Gutzwiller ground states",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        argument_default=argparse.SUPPRESS,
        epilog="""
Examples:
  fluxlab butterfly --rmax 8                 # Hofstadter butterfly data and SVG
  fluxlab spectrum --alpha 1/3               # one Harper slice with band edges
  fluxlab evolve --alpha 1/6                 # density dynamics on 36x36
  fluxlab evolve --alpha 1/2pi --bc-y open   # irrational flux
  fluxlab wannier --depth 10 --alpha 1/6     # calibration table
  fluxlab laser-angles --q 8.9 --kg 6.28     # Raman beam angles
  fluxlab gutzwiller --alpha 1/6             # trapped mean-field ground state
        """,
    )
    _add_common(parser)
    subparsers = parser.add_subparsers(dest="command", metavar="command")

    p = subparsers.add_parser("butterfly", help="Hofstadter butterfly", argument_default=argparse.SUPPRESS)
    p.add_argument("--rmax", type=int, help="largest flux denominator (default 8)")
    p.add_argument("--ksamples", type=int, help="k points per axis (default 64)")
    p.add_argument("--gap-tol", type=float, help="touching tolerance in J (default 1e-3)")
    p.add_argument("--J", type=float, help="hopping energy (default 1)")
    p.add_argument("--no-svg", dest="svg", action="store_false", help="skip the SVG plot")
    _add_common(p)

    p = subparsers.add_parser("spectrum", help="single Harper slice", argument_default=argparse.SUPPRESS)
    p.add_argument("--alpha", help="rational flux p/r (default 1/3)")
    p.add_argument("--ksamples", type=int, help="k points per axis (default 64)")
    p.add_argument("--gap-tol", type=float, help="touching tolerance in J (default 1e-3)")
    p.add_argument("--J", type=float, help="hopping energy (default 1)")
    _add_common(p)

    p = subparsers.add_parser("evolve", help="density dynamics", argument_default=argparse.SUPPRESS)
    p.add_argument("--alpha", help="flux: p/r, decimal or 1/2pi (default 1/6)")
    p.add_argument("--nx", type=int, help="sites along x (default 36)")
    p.add_argument("--ny", type=int, help="sites along y (default 36)")
    p.add_argument("--bc-x", choices=["open", "periodic"], help="x boundary (default periodic)")
    p.add_argument("--bc-y", choices=["open", "periodic"], help="y boundary (default periodic)")
    p.add_argument("--tmax", type=float, help="final time in 1/J (default 6)")
    p.add_argument("--samples", type=int, help="number of sample times (default 60)")
    p.add_argument("--J", type=float, help="hopping energy (default 1)")
    p.add_argument("--method", choices=["auto", "spectral", "chebyshev"], help="propagator (default auto)")
    p.add_argument("--max-period", type=int, help="largest detected period (default 12)")
    p.add_argument("--dump-operator", action="store_true", help="write hamiltonian.txt")
    p.add_argument("--no-svg", dest="svg", action="store_false", help="skip the SVG heat map")
    _add_common(p)

    p = subparsers.add_parser("wannier", help="Wannier calibration table", argument_default=argparse.SUPPRESS)
    p.add_argument("--depth", type=float, nargs="+", help="lattice depths V0/E_R")
    p.add_argument("--alpha", nargs="+", help="flux values for gamma_y")
    p.add_argument("--n-planewaves", type=int, help="odd plane-wave cutoff (default 41)")
    p.add_argument("--n-quasimomenta", type=int, help="quasimomentum samples (default 64)")
    _add_common(p)

    p = subparsers.add_parser("laser-angles", help="Raman beam angles", argument_default=argparse.SUPPRESS)
    p.add_argument("--q", type=float, help="momentum transfer (default sqrt(2) k_g)")
    p.add_argument("--delta-prime", type=float, help="(Delta + omega_eg)/c (default 0)")
    p.add_argument("--kg", type=float, help="g-beam wave number (default 2 pi)")
    p.add_argument("--wavelength", type=float, help="lattice wavelength for alpha (default 1)")
    p.add_argument("--format", choices=["text", "kv"], help="output format (default text)")
    _add_common(p)

    p = subparsers.add_parser("gutzwiller", help="Gutzwiller ground state", argument_default=argparse.SUPPRESS)
    p.add_argument("--alpha", help="flux (default 0)")
    p.add_argument("--u", type=float, help="onsite interaction in J (default 16)")
    p.add_argument("--u-odd", type=float, help="onsite interaction on odd columns")
    p.add_argument("--mu", type=float, help="chemical potential in J (default 6)")
    p.add_argument("--omega-t", type=float, help="trap strength in J (default 0.06)")
    p.add_argument("--nmax", type=int, help="Fock cutoff (default 8)")
    p.add_argument("--size", type=int, help="lattice side length (default 32)")
    p.add_argument("--J", type=float, help="hopping energy (default 1)")
    p.add_argument("--tol", type=float, help="convergence threshold (default 1e-8)")
    p.add_argument("--max-sweeps", type=int, help="sweep budget (default 1000)")
    p.add_argument("--no-svg", dest="svg", action="store_false", help="skip the SVG maps")
    _add_common(p)

    return parser


def read_config_file(path: str) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment. Keys are normalised to snake case."""
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e.strerror}") from e
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{number}: expected 'key = value', got {line!r}")
        key = line.split("=", 1)[0].strip().removeprefix("export ").strip()
        if not key:
            raise UsageError(f"{path}:{number}: empty key")
        if any(ch.isspace() for ch in key):
            raise UsageError(f"{path}:{number}: key {key!r} contains whitespace")
    parsed = dotenv_values(stream=io.StringIO(text), interpolate=False)
    return {key.lower().replace("-", "_"): (value or "").strip() for key, value in parsed.items()}


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "parameters"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def parse_config(args: Sequence[str], config_file: Optional[str] = None) -> RunConfig:
    """
    Resolve command line flags and an optional config file into a run configuration.

    Args:
        args: Command line arguments without the program name
        config_file: Config file path; overrides ``--config``

    Returns:
        Validated run configuration

    Raises:
        UsageError: On unknown commands or keys, bad values or violated constraints
    """
    namespace = vars(build_parser().parse_args(list(args)))
    for flag in ("verbose", "quiet"):
        namespace.pop(flag, None)
    config_path = config_file or namespace.get("config")
    namespace.pop("config", None)
    file_values = read_config_file(config_path) if config_path else {}

    cli_command = namespace.pop("command", None)
    file_command = file_values.pop("command", None)
    if cli_command and file_command and cli_command != file_command:
        raise UsageError(f"command {cli_command!r} conflicts with {file_command!r} in {config_path}")
    name = cli_command or file_command
    if not name:
        raise UsageError("no command given")
    try:
        command = Command(name)
    except ValueError as e:
        raise UsageError(f"unknown command {name!r}; expected one of {[c.value for c in Command]}") from e

    merged = {**file_values, **namespace}
    globals_ = {key: merged.pop(key) for key in GLOBAL_KEYS if key in merged}
    try:
        parameters = COMMAND_PARAMS[command](**merged)
        return RunConfig(command=command, parameters=parameters, **globals_)
    except ValidationError as e:
        raise UsageError(f"invalid {command.value} configuration: {_describe(e)}") from e


def _configure_logging(args: Sequence[str]) -> None:
    level = settings.log_level
    if "-v" in args or "--verbose" in args:
        level = "DEBUG"
    elif "-q" in args or "--quiet" in args:
        level = "WARNING"
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _print_laser_angles(summary: dict, fmt: str) -> None:
    digits = settings.float_digits
    if fmt == "kv":
        for key, value in summary.items():
            print(f"{key}={value:.{digits}g}")
        return
    print_header("Raman beam angles")
    print(f"phi_e = {summary['phi_e_deg']:.{digits}g} deg  ({summary['phi_e_rad']:.{digits}g} rad)")
    print(f"phi_g = {summary['phi_g_deg']:.{digits}g} deg  ({summary['phi_g_rad']:.{digits}g} rad)")
    print(f"residuals: x {summary['residual_x']:.3g}, y {summary['residual_y']:.3g}")
    print(f"alpha = {summary['alpha']:.{digits}g}  (window {summary['alpha_min']:.{digits}g} .. {summary['alpha_max']:.{digits}g})")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point. Returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        build_parser().print_help()
        return 0

    try:
        config = parse_config(argv)
    except UsageError as e:
        print_error(f"usage error: {e}")
        return 2

    _configure_logging(argv)
    try:
        record = RunOrchestrator(config).execute()
    except ConfigurationError as e:
        print_error(f"configuration error: {e}")
        return 2
    except (FluxLabError, OSError, ValueError) as e:
        print_error(f"{config.command.value} failed: {e}")
        return 1

    if config.command == Command.LASER_ANGLES:
        _print_laser_angles(record.summary, config.parameters.format)
        return 0

    print_header(f"fluxlab {record.command}")
    for artifact in record.artifacts:
        print_success(f"{artifact.type.value}: {artifact.file_path} ({artifact.file_size} bytes)")
    for key, value in record.summary.items():
        print(f"  {key}: {value}")
    if record.summary.get("converged") is False:
        print_warning("Gutzwiller iteration did not converge")
    return 0


if __name__ == "__main__":
    sys.exit(main())
