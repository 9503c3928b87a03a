
'''
Property batteries run by ``telegraph verify``.

Each suite is a list of independent checks. A check receives its own random
generator, seeded from the suite seed and the check's position, so the report
does not depend on the number of worker threads.
'''

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import ConfigurationError
from .forcing import DriveTerm, ForcingOperator, LinearForcing, SinhForcing
from .generate import random_ball_element, random_ball_path, random_state
from .semigroup import apply_semigroup, energy_rate, generator_apply, propagator_matrices, resolvent_apply
from .solver import SolveConfig, apply_K, fixed_point_solve, weak_residual
from .spectral import PhysicalParams, StateVector, extremal_element, n_width, project_Q, h1_norm, l2_norm
from .utilities import _check_index

logger = logging.getLogger("telegraph_logger")

SUITES = ("semigroup", "resolvent", "widths", "invariance", "convergence")

@dataclass
class CheckResult:
	'''
	Outcome of one property check. ``margin`` ≥ 0 means the property held with that slack.
	'''
	name: str
	passed: bool
	margin: float
	details: Dict[str, Any] = field(default_factory=dict)
	counterexample: Optional[Dict[str, Any]] = None

	def to_dict(self):
		d = {"name": self.name, "passed": self.passed, "margin": self.margin, "details": self.details}
		if self.counterexample is not None:
			d["counterexample"] = self.counterexample
		return d

@dataclass
class SuiteReport:
	suite: str
	seed: int
	checks: List[CheckResult]

	@property
	def passed(self) -> bool:
		return all(c.passed for c in self.checks)

	def to_dict(self):
		return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
				"checks": [c.to_dict() for c in self.checks]}

def _state_dict(state:StateVector) -> Dict[str, List[float]]:
	return {"u": state.u.coeffs.tolist(), "v": state.v.coeffs.tolist()}

# -------------------------------------------------------------------
# semigroup
# -------------------------------------------------------------------

def _check_contraction(params, samples, capacity, rng) -> CheckResult:
	worst = math.inf
	example = None
	for _ in range(samples):
		f = random_state(capacity, rng)
		t = rng.uniform(0., 20.)
		margin = f.h_norm(params) - apply_semigroup(f, t, params).h_norm(params)
		if margin < worst:
			worst, example = margin, {"state": _state_dict(f), "t": t}
	passed = worst >= -1e-12
	return CheckResult("contraction", passed, worst, counterexample=None if passed else example)

def _check_composition(params, samples, capacity, rng) -> CheckResult:
	worst = 0.
	example = None
	for _ in range(samples):
		f = random_state(capacity, rng)
		t, s = rng.uniform(0., 10., size=2)
		direct = apply_semigroup(f, t + s, params).as_array()
		composed = apply_semigroup(apply_semigroup(f, s, params), t, params).as_array()
		error = float(np.max(np.abs(direct - composed))) / max(float(np.max(np.abs(f.as_array()))), 1e-300)
		if error > worst:
			worst, example = error, {"state": _state_dict(f), "t": t, "s": s}
	passed = worst <= 1e-12
	return CheckResult("composition", passed, 1e-12 - worst, {"max_relative_error": worst},
					   None if passed else example)

def _check_abel(params, capacity, rng) -> CheckResult:
	times = np.linspace(0., 10., 101)
	M = propagator_matrices(params, capacity, times)
	det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
	expected = np.exp(-params.nu * times)[:, None]
	scale = 1. + np.abs(M[..., 0, 0] * M[..., 1, 1])
	error = float(np.max(np.abs(det - expected) / scale))
	return CheckResult("abel_identity", error <= 1e-12, 1e-12 - error, {"max_error": error})

def _check_energy(params, samples, capacity, rng) -> CheckResult:
	worst = 0.
	for _ in range(samples):
		f = random_state(capacity, rng)
		expected = -params.nu * f.v.l2_norm()**2
		error = abs(energy_rate(f, params) - expected) / max(abs(expected), 1e-300)
		worst = max(worst, error)
	return CheckResult("energy_identity", worst <= 1e-12, 1e-12 - worst, {"max_relative_error": worst})

def _check_generator(params, capacity, rng) -> CheckResult:
	''' (T(h)f - f)/h → Uf with first order in h. '''
	f = random_state(capacity, rng)
	Uf = generator_apply(f, params).as_array()
	errors = list()
	steps = [1e-3, 5e-4, 2.5e-4]
	for h in steps:
		difference = (apply_semigroup(f, h, params).as_array() - f.as_array()) / h
		e = StateVector.from_array(difference - Uf)
		errors.append(e.h_norm(params))
	order = math.log(errors[0] / errors[-1]) / math.log(steps[0] / steps[-1])
	passed = 0.8 <= order <= 1.2
	return CheckResult("generator_consistency", passed, min(order - 0.8, 1.2 - order), {"order": order, "errors": errors})

def _semigroup_checks(params, samples, capacity=16):
	return [
		lambda rng: _check_contraction(params, samples, capacity, rng),
		lambda rng: _check_composition(params, samples, capacity, rng),
		lambda rng: _check_abel(params, capacity, rng),
		lambda rng: _check_energy(params, samples, capacity, rng),
		lambda rng: _check_generator(params, 4, rng),
	]

# -------------------------------------------------------------------
# resolvent
# -------------------------------------------------------------------

def _check_resolvent(params, lam, samples, capacity, rng) -> CheckResult:
	worst_slack = math.inf
	worst_roundtrip = 0.
	example = None
	for _ in range(samples):
		f = random_state(capacity, rng)
		r = resolvent_apply(lam, f, params)
		norm = f.h_norm(params)
		slack = (norm / lam - r.h_norm(params)) / norm
		back = lam * r.as_array() - generator_apply(r, params).as_array()
		roundtrip = StateVector.from_array(back - f.as_array()).h_norm(params) / norm
		worst_roundtrip = max(worst_roundtrip, roundtrip)
		if slack < worst_slack:
			worst_slack, example = slack, {"state": _state_dict(f), "lambda": lam}
	passed = worst_slack >= -1e-12 and worst_roundtrip <= 1e-12
	return CheckResult(f"resolvent_lambda_{lam:g}", passed, worst_slack,
					   {"min_relative_slack": worst_slack, "max_roundtrip_error": worst_roundtrip},
					   None if passed else example)

def _resolvent_checks(params, samples, capacity=16):
	return [lambda rng, lam=lam: _check_resolvent(params, lam, samples, capacity, rng) for lam in (0.1, 1., 10., 100.)]

# -------------------------------------------------------------------
# widths
# -------------------------------------------------------------------

def _check_width(params, n, samples, rng, b=1.0, capacity=32) -> CheckResult:
	width = n_width(b, n, params)
	e = extremal_element(b, n, params, capacity=capacity)
	extremal_error = float(l2_norm(e.coeffs - project_Q(e, n).coeffs))
	deviation = abs(extremal_error - width)
	worst = math.inf
	example = None
	for _ in range(samples):
		h = random_ball_element(b, capacity, params, rng)
		slack = width - float(l2_norm(h.coeffs[n:]))
		if slack < worst:
			worst, example = slack, {"h": h.coeffs.tolist()}
	passed = deviation <= 1e-12 and worst >= -1e-12
	return CheckResult(f"width_n_{n}", passed, min(1e-12 - deviation, worst),
					   {"width": width, "extremal_error": extremal_error, "min_slack": worst},
					   None if passed else example)

def _widths_checks(params, samples):
	return [lambda rng, n=n: _check_width(params, n, min(samples, 100), rng) for n in range(1, 9)]

# -------------------------------------------------------------------
# invariance and convergence
# -------------------------------------------------------------------

def _check_invariance(config:SolveConfig, forcing:ForcingOperator, samples:int, rng) -> CheckResult:
	grid = config.time_grid
	worst_u = 0.
	worst_K = 0.
	example = None
	for _ in range(samples):
		path = random_ball_path(config.c, config.n, config.capacity, config.params, rng)
		z = path(grid.node_times)
		Kz, traj = apply_K(z, config, forcing, return_trajectory=True)
		u_norm = float(max(np.max(traj.u_du_norms()), np.max(traj.u_du_norms(nodes=True))))
		K_norm = float(np.max(h1_norm(Kz, config.params)))
		if u_norm / config.radius > worst_u:
			worst_u, example = u_norm / config.radius, {"z_nodes": z.tolist()}
		worst_K = max(worst_K, K_norm / config.c)
	passed = worst_u <= 1 + 1e-9 and worst_K <= 1 + 1e-9
	return CheckResult("ball_invariance", passed, 1. - max(worst_u, worst_K),
					   {"max_u_du_norm_over_C": worst_u, "max_Kz_norm_over_c": worst_K, "T0": config.T0},
					   None if passed else example)

def convergence_scenario(params:PhysicalParams, n:int, capacity:int=64, cells:int=16, c:float=None, omega:float=None):
	'''
	The fixed smooth scenario of the convergence sweep: sinh forcing, C = 1,
	constant drive 0.05/k² on every mode, horizon min(T₀, 0.5).
	'''
	forcing = SinhForcing()
	drive = DriveTerm.constant([0.05 / k**2 for k in range(1, capacity+1)])
	base = SolveConfig.build(params, forcing, n=n, radius=1.0, capacity=capacity, cells=cells, c=c, omega=omega)
	config = SolveConfig.build(params, forcing, n=n, radius=1.0, capacity=capacity, cells=cells,
							   c=base.c, omega=base.omega, horizon=min(base.T0, 0.5))
	return config, forcing, drive

def _check_convergence(params, rng, orders=(4, 8, 16, 32)) -> CheckResult:
	tails = list()
	omega = None
	for n in orders:
		# ω does not depend on n
		config, forcing, drive = convergence_scenario(params, n, omega=omega)
		omega = config.omega
		state = fixed_point_solve(config, forcing, drive)
		tails.append(weak_residual(state.trajectory, forcing, config.capacity).tail(n))
	ratios = [b / a if a > 0 else 0. for a, b in zip(tails[:-1], tails[1:])]
	passed = all(r <= 1.05 for r in ratios)
	return CheckResult("residual_tail_convergence", passed, 1.05 - max(ratios),
					   {"orders": list(orders), "tails": tails, "ratios": ratios})

# -------------------------------------------------------------------

def run_suite(name:str, params:PhysicalParams, seed:int=1, samples:int=1000, threads:int=1,
			  config:SolveConfig=None, forcing:ForcingOperator=None) -> SuiteReport:
	'''
	Run a named property suite.

	:param name: one of "semigroup", "resolvent", "widths", "invariance", "convergence"
	:param params: physical constants
	:param seed: suite seed
	:param samples: random samples per check (the invariance suite uses at most 50, widths at most 100)
	:param threads: worker threads (affects speed only)
	:param config: solve configuration for the invariance suite (default: linear forcing, n = 4, capacity 8)
	:param forcing: forcing for the invariance suite
	'''
	samples = _check_index("samples", samples)
	threads = _check_index("threads", threads)
	if name == "semigroup":
		checks = _semigroup_checks(params, samples)
	elif name == "resolvent":
		checks = _resolvent_checks(params, samples)
	elif name == "widths":
		checks = _widths_checks(params, samples)
	elif name == "invariance":
		forcing = forcing or LinearForcing()
		config = config or SolveConfig.build(params, forcing, n=4, radius=1.0, capacity=8, cells=16)
		checks = [lambda rng: _check_invariance(config, forcing, min(samples, 50), rng)]
	elif name == "convergence":
		checks = [lambda rng: _check_convergence(params, rng)]
	else:
		raise ConfigurationError(f"Unknown verification suite '{name}'; expected one of {list(SUITES)}.")

	def run(indexed):
		i, check = indexed
		return check(np.random.default_rng([seed, i]))

	with ThreadPoolExecutor(max_workers=threads) as pool:
		results = list(pool.map(run, enumerate(checks)))
	for r in results:
		logger.info(f"verify {name}: {r.name} {'passed' if r.passed else 'FAILED'} (margin {r.margin:.3g})")
	return SuiteReport(suite=name, seed=seed, checks=results)
