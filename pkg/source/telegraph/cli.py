
'''
The ``telegraph`` command.

Subcommands: ``solve``, ``spectrum``, ``verify``, ``widths`` and ``decay``.
Results are written to the output directory as CSV and JSON files; log messages
go to stderr and error descriptions (JSON) to stdout.

Exit status:

	0  success
	2  invalid configuration or precondition (nothing is written)
	3  the fixed-point iteration failed (non-convergence, ball violation, solver blow-up)
	4  the trajectory violates the constraint level (outputs and error.json are written)
	5  a verification suite failed
'''

import sys
import json
import logging
import argparse
from pathlib import Path
from typing import List, Optional

import numpy as np

from .config import ScenarioConfig, load_config
from .errors import (AdmissibilityError, ConfigurationError, InvarianceViolationError, NonConvergenceError, PropertyViolationError,
					 StepSizeError, TelegraphError)
from .results import _jsonable, format_value, write_csv, write_json
from .semigroup import du_norm_bound, spectral_abscissa
from .solver import constrained_solve
from .spectral import extremal_element, l2_norm, n_width, project_Q
from .utilities import _check_index
from .verify import SUITES, run_suite
from .version import __version__

logger = logging.getLogger("telegraph_logger")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_INADMISSIBLE = 4
EXIT_PROPERTY = 5

def _exit_status(error:TelegraphError) -> int:
	if isinstance(error, AdmissibilityError):
		return EXIT_INADMISSIBLE
	if isinstance(error, PropertyViolationError):
		return EXIT_PROPERTY
	if isinstance(error, (NonConvergenceError, InvarianceViolationError, StepSizeError)):
		return EXIT_SOLVER
	return EXIT_CONFIG

def _report_error(error:TelegraphError, out:Optional[Path]=None, config_sha256:str=None) -> int:
	'''
	Print the error as JSON on stdout and, when ``out`` is given, also write it to error.json.
	'''
	document = _jsonable(error.to_dict())
	print(json.dumps(document, sort_keys=True, indent=2))
	if out is not None:
		write_json(out / "error.json", config_sha256, document)
	logger.error(str(error))
	return _exit_status(error)

def _parser() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument("--config", default=None, help="scenario file (JSON); defaults are used when omitted")
	common.add_argument("--seed", type=int, default=None, help="seed of the randomised checks (overrides the scenario)")
	common.add_argument("--out", default=".", help="output directory (default: current directory)")
	common.add_argument("--threads", type=int, default=1, help="worker threads (affects speed only)")
	common.add_argument("--nu", type=float, default=None, help="damping ν (overrides the scenario)")
	common.add_argument("--kappa", type=float, default=None, help="stiffness κ (overrides the scenario)")
	verbosity = common.add_mutually_exclusive_group()
	verbosity.add_argument("-v", "--verbose", action="store_true", help="log progress (INFO)")
	verbosity.add_argument("--debug", action="store_true", help="log everything (DEBUG)")

	parser = argparse.ArgumentParser(prog="telegraph",
									 description="Spectral solver for the constrained nonlinear telegraph equation.")
	parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
	commands = parser.add_subparsers(dest="command", required=True)

	commands.add_parser("solve", parents=[common], help="solve the projected fixed-point problem of a scenario")

	spectrum = commands.add_parser("spectrum", parents=[common], help="mode regimes and the spectral abscissa θ")
	spectrum.add_argument("--n-max", type=int, default=16, help="number of modes in the table")

	verify = commands.add_parser("verify", parents=[common], help="run a property suite")
	verify.add_argument("suite", choices=SUITES)
	verify.add_argument("--samples", type=int, default=None, help="random samples per check (overrides the scenario)")

	widths = commands.add_parser("widths", parents=[common], help="n-widths and measured extremal projection errors")
	widths.add_argument("--n-max", type=int, default=8, help="largest projection order")

	decay = commands.add_parser("decay", parents=[common], help="D(U) decay profile and the bound ω")
	decay.add_argument("--n-max", type=int, default=16, help="number of modes included")
	return parser

def _load_scenario(args) -> ScenarioConfig:
	''' Read the scenario and apply the command line overrides. '''
	scenario = load_config(args.config)
	if args.seed is not None:
		scenario.seed = args.seed
	if args.nu is not None:
		scenario.physics.nu = args.nu
	if args.kappa is not None:
		scenario.physics.kappa = args.kappa
	if getattr(args, "samples", None) is not None:
		scenario.verify.samples = args.samples
	scenario.validate()
	try:
		_check_index("threads", args.threads)
		if getattr(args, "n_max", None) is not None:
			_check_index("n-max", args.n_max)
	except ValueError as e:
		raise ConfigurationError(str(e))
	return scenario

def _output_dir(args) -> Path:
	out = Path(args.out)
	out.mkdir(parents=True, exist_ok=True)
	return out

# -------------------------------------------------------------------

def cmd_solve(args, scenario:ScenarioConfig) -> int:
	sha = scenario.sha256()
	forcing = scenario.build_forcing()
	constraint = scenario.build_constraint()
	drive = scenario.build_drive()
	config = scenario.build_solve_config(forcing)
	logger.info(f"solve: n={config.n}, capacity={config.capacity}, c={config.c:.6g}, omega={config.omega:.6g}, T0={config.T0:.6g}")

	try:
		trajectory = constrained_solve(config, forcing, constraint, drive, raise_on_violation=False, seed=scenario.seed)
	except TelegraphError as e:
		if _exit_status(e) == EXIT_CONFIG:
			raise
		return _report_error(e, _output_dir(args), sha)

	out = _output_dir(args)
	M = config.capacity
	h_norms = trajectory.h_norms()
	du_norms = trajectory.du_norms()
	write_csv(out / "trajectory.csv", sha, ["t"] + [f"a_{k}" for k in range(1, M+1)] + ["h_norm", "du_norm"],
			  ([t] + list(u) + [h, d] for t, u, h, d in zip(trajectory.times, trajectory.u, h_norms, du_norms)))

	report = trajectory.constraint_report
	write_csv(out / "constraint.csv", sha, ["t", "inf", "certified"],
			  zip(report.times, report.inf_values, report.certified))

	residuals = trajectory.weak_residuals
	write_csv(out / "residuals.csv", sha, ["k", "t", "residual"],
			  ((k, t, residuals.values[i, k-1]) for k in range(1, residuals.k_test + 1)
			   for i, t in enumerate(residuals.times)))

	summary = config.to_dict()
	summary.update(trajectory.diagnostics)
	summary.update(report.to_dict())
	summary["residual_tail"] = residuals.tail(config.n)
	summary["max_residual_projected"] = float(np.max(residuals.maxima[:config.n]))
	write_json(out / "summary.json", sha, summary)

	i = report.first_violation
	if i is not None:
		error = AdmissibilityError(f"The constraint level {config.alpha} is violated at t = {report.times[i]:.6g} "
								   f"(certified bound {report.certified[i]:.6g}).",
								   time=float(report.times[i]), location=float(report.locations[i]),
								   certified=float(report.certified[i]), alpha=config.alpha)
		return _report_error(error, out, sha)
	return EXIT_OK

def cmd_spectrum(args, scenario:ScenarioConfig) -> int:
	sha = scenario.sha256()
	summary = spectral_abscissa(scenario.build_params(), n_max=args.n_max)
	columns = ["n", "theta_n", "kind", "omega_n", "rho_n"]
	rows = [[m.n, m.theta_n, m.kind.value, m.omega_n, m.rho_n] for m in summary.per_mode]
	out = _output_dir(args)
	write_csv(out / "spectrum.csv", sha, columns, rows)
	write_json(out / "spectrum.json", sha, summary.to_dict())
	print(f"# theta {format_value(summary.theta)} ({summary.branch})")
	print(",".join(columns))
	for row in rows:
		print(",".join(format_value(v) for v in row))
	return EXIT_OK

def cmd_verify(args, scenario:ScenarioConfig) -> int:
	sha = scenario.sha256()
	config = forcing = None
	if args.suite == "invariance" and args.config is not None:
		forcing = scenario.build_forcing()
		config = scenario.build_solve_config(forcing)
	report = run_suite(args.suite, scenario.build_params(), seed=scenario.seed, samples=scenario.verify.samples,
					   threads=args.threads, config=config, forcing=forcing)
	out = _output_dir(args)
	write_json(out / "verify.json", sha, report.to_dict())
	if not report.passed:
		failed = [c.name for c in report.checks if not c.passed]
		return _report_error(PropertyViolationError(f"Suite '{args.suite}' failed: {failed}.", report=report))
	print(json.dumps({"suite": report.suite, "passed": True, "margins": {c.name: c.margin for c in report.checks}},
					 sort_keys=True, indent=2))
	return EXIT_OK

def cmd_widths(args, scenario:ScenarioConfig) -> int:
	sha = scenario.sha256()
	params = scenario.build_params()
	b = scenario.numerics.radius
	rows = list()
	for n in range(1, args.n_max + 1):
		e = extremal_element(b, n, params)
		rows.append([n, n_width(b, n, params), float(l2_norm(e.coeffs - project_Q(e, n).coeffs))])
	write_csv(_output_dir(args) / "widths.csv", sha, ["n", "width", "extremal_error"], rows)
	return EXIT_OK

def cmd_decay(args, scenario:ScenarioConfig) -> int:
	sha = scenario.sha256()
	params = scenario.build_params()
	omega, decay = du_norm_bound(params, n_max=args.n_max)
	out = _output_dir(args)
	write_csv(out / "decay.csv", sha, ["t", "profile"], zip(decay.times, decay.profile))
	write_json(out / "decay.json", sha, {
		"omega": omega,
		"sup": decay.sup,
		"refined_sup": decay.refined_sup,
		"refinement_change": decay.refinement_change,
		"safety": decay.safety,
		"n_max": args.n_max,
		"theta": spectral_abscissa(params, args.n_max).theta,
		"profile_ratio_t20": float(np.interp(20., decay.times, decay.profile) / decay.profile[0]),
	})
	return EXIT_OK

COMMANDS = {
	"solve": cmd_solve,
	"spectrum": cmd_spectrum,
	"verify": cmd_verify,
	"widths": cmd_widths,
	"decay": cmd_decay,
}

def main(argv:Optional[List[str]]=None) -> int:
	'''
	Entry point of the ``telegraph`` command.

	:param argv: arguments (default ``sys.argv[1:]``)
	:returns: the exit status
	'''
	args = _parser().parse_args(argv)
	level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
	logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")

	try:
		scenario = _load_scenario(args)
		return COMMANDS[args.command](args, scenario)
	except TelegraphError as e:
		return _report_error(e)
