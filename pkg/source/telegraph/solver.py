
'''
Projected fixed-point solver for

	u_tt = -ν u_t + κ u_xx + F(u) + g(t),   u(0) = u_t(0) = 0,   inf_I G(u) > 0

with an optional explicit drive g.

For z in the projected ball Bₙ = {z: z(t) ∈ span{φ₁..φₙ}, ‖z‖_C(J,H10) ≤ c}, the map K
solves the linear equation with source (0, z + g) by the Duhamel formula and returns
Pₙ F(u). A fixed point z = K(z) gives a solution of the projected system. On the
interval J = [0, T₀], T₀ = C/(ωc), the displacement stays in the D(U) ball of radius C
(when g = 0).
'''

import math
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import (AdmissibilityError, CapacityError, ConfigurationError, InvarianceViolationError,
					 NonConvergenceError, PreconditionError)
from .forcing import ConstraintOperator, DriveTerm, ForcingOperator, constraint_inf
from .generate import random_sphere_element
from .semigroup import DEFAULT_TIME_ORDER, DuhamelIntegrator, TimeGrid, Trajectory, du_norm_bound
from .spectral import (PhysicalParams, ModalVector, default_quadrature_order, h1_norm,
					   quadrature_grid)
from .utilities import _check_index, _check_positive, _pad_modes, _wavenumbers

logger = logging.getLogger("telegraph_logger")

def terminal_time(C:float, omega:float, c:float) -> float:
	'''
	T₀ = C / (ω·c).

	:param C: radius of the D(U) ball
	:param omega: bound on ‖T(t)‖_D(U)
	:param c: local bound of the forcing on the ball
	'''
	C = _check_positive("C", C)
	omega = _check_positive("omega", omega)
	c = _check_positive("c", c)
	return C / (omega * c)

@dataclass(frozen=True)
class SolveConfig:
	'''
	Numerical setup of a projected solve.

	:param params: physical constants
	:param n: projection order
	:param capacity: number of modes carried (≥ n)
	:param radius: radius C of the D(U) ball
	:param c: local bound c(C) of the forcing
	:param omega: bound ω on ‖T(t)‖_D(U)
	:param cells: number of time cells on [0, t_end]
	:param time_order: Gauss nodes per time cell
	:param fp_tol: tolerance on the fixed-point residual max_t ‖z - K(z)‖_H10
	:param fp_max_iter: iteration cap
	:param relaxation: initial relaxation factor in (0, 1]
	:param alpha: required constraint level α > 0
	:param horizon: end of the time grid (default T₀; must not exceed T₀)
	:param equicontinuity_delta: δ for the equicontinuity diagnostic
	:param validation_samples: random D(U)-sphere samples used to validate α
	:param residual_modes: number of test modes for the weak residual (default capacity)
	'''
	params: PhysicalParams
	n: int
	capacity: int
	radius: float
	c: float
	omega: float
	cells: int = 64
	time_order: int = DEFAULT_TIME_ORDER
	fp_tol: float = 1e-10
	fp_max_iter: int = 100
	relaxation: float = 1.0
	alpha: float = 0.5
	horizon: Optional[float] = None
	equicontinuity_delta: float = 0.1
	validation_samples: int = 64
	residual_modes: Optional[int] = None

	def __post_init__(self):
		for name in ("n", "capacity", "cells", "time_order", "fp_max_iter"):
			object.__setattr__(self, name, _check_index(name, getattr(self, name)))
		for name in ("radius", "c", "omega", "fp_tol", "alpha", "equicontinuity_delta"):
			object.__setattr__(self, name, _check_positive(name, getattr(self, name)))
		object.__setattr__(self, "validation_samples", _check_index("validation_samples", self.validation_samples, minimum=0))
		if self.n > self.capacity:
			raise CapacityError(f"The projection order n={self.n} exceeds the capacity ({self.capacity}).")
		if not (0 < self.relaxation <= 1):
			raise ConfigurationError(f"The relaxation must lie in (0, 1]; was given '{self.relaxation}'.")
		if self.horizon is not None:
			object.__setattr__(self, "horizon", _check_positive("horizon", self.horizon))
			if self.horizon > self.T0 * (1 + 1e-12):
				raise ConfigurationError(f"The horizon {self.horizon} exceeds the terminal time T0 = {self.T0}.")
		if self.residual_modes is not None:
			object.__setattr__(self, "residual_modes", _check_index("residual_modes", self.residual_modes))

	@classmethod
	def build(cls, params:PhysicalParams, forcing:ForcingOperator, n:int, radius:float=1.0,
			  capacity:int=None, c:float=None, omega:float=None, **kwargs) -> 'SolveConfig':
		'''
		Create a configuration, taking c from ``forcing.local_bound(radius)`` and ω from
		:py:func:`du_norm_bound` when they are not given.
		'''
		capacity = n if capacity is None else capacity
		if c is None:
			c = forcing.local_bound(radius, params)
		if omega is None:
			omega, _ = du_norm_bound(params, n_max=capacity)
		return cls(params=params, n=n, capacity=capacity, radius=radius, c=c, omega=omega, **kwargs)

	@property
	def T0(self) -> float:
		return terminal_time(self.radius, self.omega, self.c)

	@property
	def t_end(self) -> float:
		return self.T0 if self.horizon is None else self.horizon

	@property
	def time_grid(self) -> TimeGrid:
		return TimeGrid(self.t_end, self.cells, self.time_order)

	def to_dict(self) -> Dict[str, Any]:
		return {"nu": self.params.nu, "kappa": self.params.kappa, "n": self.n, "capacity": self.capacity,
				"radius": self.radius, "c": self.c, "omega": self.omega, "T0": self.T0, "t_end": self.t_end,
				"cells": self.cells, "time_order": self.time_order, "fp_tol": self.fp_tol,
				"fp_max_iter": self.fp_max_iter, "relaxation": self.relaxation, "alpha": self.alpha}

class _ProjectedSystem:
	'''
	The pieces of a solve that do not change between fixed-point iterations.
	'''
	def __init__(self, config:SolveConfig, forcing:ForcingOperator, drive:Optional[DriveTerm]=None):
		self.config = config
		self.forcing = forcing
		self.grid = config.time_grid
		self.integrator = DuhamelIntegrator(config.params, config.capacity, self.grid)
		if drive is None:
			self.drive = np.zeros((self.grid.node_count, config.capacity))
		else:
			self.drive = drive.sample(self.grid.node_times, config.capacity)

	def solve_linear(self, z:np.ndarray) -> Trajectory:
		''' Duhamel solve with source (0, z + drive) on the node times. '''
		g = self.grid
		M = self.config.capacity
		velocity = z + self.drive
		src = np.zeros((g.node_count, 2, M))
		src[:, 1, :] = velocity
		grid_states, node_states = self.integrator.integrate(src)
		nodes = node_states.reshape(g.node_count, 2, M)
		return Trajectory(params=self.config.params, times=g.times,
						  u=grid_states[:, 0, :], v=grid_states[:, 1, :],
						  node_times=g.node_times, node_u=nodes[:, 0, :], node_v=nodes[:, 1, :],
						  source=velocity, drive=self.drive)

	def project_forcing(self, node_u:np.ndarray) -> np.ndarray:
		''' Pₙ F(u) at the node times. '''
		out = self.forcing.apply(node_u)
		out[..., self.config.n:] = 0.
		return out

	def zero_iterate(self) -> np.ndarray:
		return np.zeros((self.grid.node_count, self.config.capacity))

def _as_node_array(z, config:SolveConfig, node_count:int) -> np.ndarray:
	if isinstance(z, np.ndarray):
		arr = np.array(z, dtype=np.double)
	else:
		arr = np.array([u.coeffs if isinstance(u, ModalVector) else u for u in z], dtype=np.double)
	if arr.shape != (node_count, config.capacity):
		raise PreconditionError(f"The iterate must be sampled on the {node_count} time nodes with {config.capacity} modes; was given shape {arr.shape}.")
	return arr

def apply_K(z, config:SolveConfig, forcing:ForcingOperator, drive:Optional[DriveTerm]=None,
			return_trajectory:bool=False):
	'''
	The map K: z ↦ Pₙ F(u), where V = (u, v) solves V_t = UV + (0, z + g), V(0) = 0.

	:param z: the iterate at the time nodes of ``config.time_grid``, shape (nodes, capacity)
	:param config: solve configuration
	:param forcing: the forcing F
	:param drive: optional explicit drive g
	:param return_trajectory: also return the trajectory of u
	:raises PreconditionError: if z has modes above n or ‖z‖_C(J,H10) > c
	:returns: K(z) with the shape of z, or (K(z), Trajectory)
	'''
	system = _ProjectedSystem(config, forcing, drive)
	z = _as_node_array(z, config, system.grid.node_count)
	if np.any(z[:, config.n:] != 0):
		raise PreconditionError(f"The iterate has components above mode n={config.n}.")
	norm = float(np.max(h1_norm(z, config.params)))
	if norm > config.c * (1 + 1e-12):
		raise PreconditionError(f"The iterate has norm {norm:.6g} in C(J, H10), outside the ball of radius c = {config.c:.6g}.",
								measured=norm, bound=config.c)
	trajectory = system.solve_linear(z)
	Kz = system.project_forcing(trajectory.node_u)
	if return_trajectory:
		return Kz, trajectory
	return Kz

@dataclass
class FixedPointState:
	'''
	Result of :py:func:`fixed_point_solve`.

	:param z: the iterate at the time nodes
	:param trajectory: the solution u of the linear problem with source (0, z + g)
	:param residual: max over the time nodes of ‖z - K(z)‖_H10
	:param iterations: number of applications of K
	'''
	z: np.ndarray
	trajectory: Trajectory
	residual: float
	iterations: int
	residual_history: List[float] = field(default_factory=list)
	relaxation: float = 1.0

def fixed_point_solve(config:SolveConfig, forcing:ForcingOperator, drive:Optional[DriveTerm]=None) -> FixedPointState:
	'''
	Solve z = K(z) by relaxed Picard iteration, z ← (1 - r) z + r K(z).

	The relaxation r starts at ``config.relaxation`` and is halved whenever the residual increases.
	The first iterate is z₀ = Pₙ F(u) for the displacement u driven by g alone (z₀ = 0 without drive).

	:raises InvarianceViolationError: if an iterate leaves the ball ‖z‖_C(J,H10) ≤ c
	:raises NonConvergenceError: if the residual is above ``config.fp_tol`` after ``config.fp_max_iter`` applications of K
	'''
	system = _ProjectedSystem(config, forcing, drive)
	params = config.params

	def check_ball(z, iteration):
		norm = float(np.max(h1_norm(z, params)))
		if norm > config.c * (1 + 1e-12):
			raise InvarianceViolationError(f"Iterate {iteration} has norm {norm:.6g} in C(J, H10), outside the ball of radius c = {config.c:.6g}.",
										   measured=norm, bound=config.c, iteration=iteration)

	z = system.zero_iterate()
	if drive is not None:
		z = system.project_forcing(system.solve_linear(z).node_u)
	check_ball(z, 0)

	relaxation = config.relaxation
	history = list()
	for iteration in range(1, config.fp_max_iter + 1):
		trajectory = system.solve_linear(z)
		Kz = system.project_forcing(trajectory.node_u)
		residual = float(np.max(h1_norm(z - Kz, params)))
		logger.debug(f"fixed_point_solve: iteration {iteration}, residual {residual:.3e}, relaxation {relaxation}")
		if len(history) > 0 and residual > history[-1]:
			relaxation *= 0.5
			logger.warning(f"fixed_point_solve: residual increased to {residual:.3e}; relaxation halved to {relaxation}")
		history.append(residual)
		if residual <= config.fp_tol:
			return FixedPointState(z=z, trajectory=trajectory, residual=residual, iterations=iteration,
								   residual_history=history, relaxation=relaxation)
		z = (1. - relaxation) * z + relaxation * Kz
		check_ball(z, iteration)

	raise NonConvergenceError(f"The fixed-point iteration did not reach {config.fp_tol:.3g} in {config.fp_max_iter} iterations "
							  f"(last residual {history[-1]:.3e}).", residual_history=history)

# -------------------------------------------------------------------
# constraint monitoring
# -------------------------------------------------------------------

@dataclass
class ConstraintReport:
	'''
	inf_I G(u(t)) on the grid times, with certified lower bounds.
	'''
	times: np.ndarray
	inf_values: np.ndarray
	certified: np.ndarray
	locations: np.ndarray
	alpha: float

	@property
	def first_violation(self) -> Optional[int]:
		''' Index of the first grid time whose certified bound is below α (None if admissible). '''
		bad = np.flatnonzero(self.certified < self.alpha)
		return int(bad[0]) if len(bad) > 0 else None

	@property
	def admissible(self) -> bool:
		return self.first_violation is None

	def to_dict(self):
		i = self.first_violation
		return {"admissible": self.admissible, "alpha": self.alpha,
				"min_inf": float(np.min(self.inf_values)), "min_certified": float(np.min(self.certified)),
				"first_violation_time": None if i is None else float(self.times[i])}

def admissibility_report(trajectory:Trajectory, G:ConstraintOperator, alpha:float) -> ConstraintReport:
	'''
	Evaluate inf_I G(u(t)) at every grid time of a trajectory.
	'''
	alpha = _check_positive("alpha", alpha)
	values = [constraint_inf(G, ModalVector(u)) for u in trajectory.u]
	return ConstraintReport(times=np.array(trajectory.times),
							inf_values=np.array([v.inf_value for v in values]),
							certified=np.array([v.certified_lower_bound for v in values]),
							locations=np.array([v.location for v in values]),
							alpha=alpha)

@dataclass
class ConstraintValidation:
	'''
	Result of :py:func:`validate_constraint_level`.
	'''
	passed: bool
	min_certified: float
	samples: int
	worst: Optional[np.ndarray] = None

	def to_dict(self):
		return {"passed": self.passed, "min_certified": self.min_certified, "samples": self.samples}

def validate_constraint_level(G:ConstraintOperator, radius:float, alpha:float, params:PhysicalParams,
							  capacity:int, samples:int=64, seed=0) -> ConstraintValidation:
	'''
	Heuristic check that inf_I G(u) ≥ α on the D(U) ball of radius C.

	Evaluates G on 0, on ±C-scaled single modes, and on ``samples`` random elements of
	the D(U) sphere. Passing is evidence, not proof.
	'''
	radius = _check_positive("radius", radius)
	alpha = _check_positive("alpha", alpha)
	capacity = _check_index("capacity", capacity)
	rng = np.random.default_rng(seed)

	k = _wavenumbers(capacity)
	weights = np.sqrt(k**4 + params.kappa * k**2)
	candidates = [np.zeros(capacity)]
	for i in range(capacity):
		e = np.zeros(capacity)
		e[i] = radius / weights[i]
		candidates.extend((e, -e))
	candidates.extend(random_sphere_element(radius, capacity, params, rng).coeffs for _ in range(samples))

	worst = None
	lowest = math.inf
	for coeffs in candidates:
		value = G.evaluate_inf(ModalVector(coeffs)).certified_lower_bound
		if value < lowest:
			lowest = value
			worst = coeffs
	result = ConstraintValidation(passed=lowest >= alpha, min_certified=float(lowest), samples=len(candidates), worst=worst)
	if not result.passed:
		logger.warning(f"validate_constraint_level: inf G = {lowest:.6g} < alpha = {alpha} on the D(U) ball of radius {radius}; "
					   "admissibility is checked on the computed trajectory only.")
	return result

def equicontinuity_modulus(trajectory:Trajectory, delta:float, params:PhysicalParams=None) -> float:
	'''
	max ‖u(t₁) - u(t₂)‖_H10 over grid times with |t₁ - t₂| ≤ δ.
	'''
	delta = _check_positive("delta", delta)
	params = params or trajectory.params
	times = np.asarray(trajectory.times)
	modulus = 0.
	for lag in range(1, len(times)):
		close = (times[lag:] - times[:-lag]) <= delta * (1 + 1e-12)
		if not np.any(close):
			break
		diff = trajectory.u[lag:][close] - trajectory.u[:-lag][close]
		modulus = max(modulus, float(np.max(h1_norm(diff, params))))
	return modulus

# -------------------------------------------------------------------
# weak residual
# -------------------------------------------------------------------

@dataclass
class WeakResiduals:
	'''
	rₖ(t) = (u_tt, φₖ) + ν(u_t, φₖ) + κ(u_x, φₖ′) - (F(u) + g, φₖ) at the time nodes.

	:param times: node times
	:param values: array of shape (len(times), k_test); column k-1 belongs to φₖ
	'''
	times: np.ndarray
	values: np.ndarray

	@property
	def k_test(self) -> int:
		return self.values.shape[1]

	@property
	def maxima(self) -> np.ndarray:
		''' max_t |rₖ(t)| for k = 1..k_test. '''
		return np.max(np.abs(self.values), axis=0)

	def tail(self, n:int) -> float:
		''' max over k > n of max_t |rₖ(t)| (0 if k_test ≤ n). '''
		return residual_tail(self, n)

def residual_tail(residuals:WeakResiduals, n:int) -> float:
	''' max over test modes k > n of max_t |rₖ(t)|. '''
	n = _check_index("n", n)
	m = residuals.maxima[n:]
	return float(np.max(m)) if len(m) > 0 else 0.

def weak_residual(trajectory:Trajectory, forcing:ForcingOperator, k_test:int) -> WeakResiduals:
	'''
	The residual of the weak form against the test functions φ₁..φ_k_test.

	u_tt is taken from the equation (-κk²π²u - νv + source, exact per mode); every
	pairing is evaluated by Gauss–Legendre quadrature in x. F(u) is evaluated without
	projection, so for k > n the residual is -(F(u), φₖ), the part of F(u) that the
	projection discards.
	'''
	k_test = _check_index("k_test", k_test)
	params = trajectory.params
	M = trajectory.capacity
	cap = max(M, k_test)
	grid = quadrature_grid(cap, default_quadrature_order(cap, forcing.dealias_degree))

	u = _pad_modes(trajectory.node_u, cap)
	v = _pad_modes(trajectory.node_v, cap)
	acc = _pad_modes(trajectory.acceleration(), cap)
	drive = trajectory.drive if trajectory.drive is not None else np.zeros_like(trajectory.node_u)

	phi = grid.sine_samples[:, :k_test] * grid.weights[:, None]
	dphi = grid.sine_derivative_samples[:, :k_test] * grid.weights[:, None]

	pointwise = grid.synthesize(acc) + params.nu * grid.synthesize(v) \
		- forcing.samples(trajectory.node_u, grid) - grid.synthesize(_pad_modes(drive, cap))
	values = pointwise @ phi + params.kappa * (grid.synthesize_derivative(u) @ dphi)
	return WeakResiduals(times=np.array(trajectory.node_times), values=values)

# -------------------------------------------------------------------
# the full solve
# -------------------------------------------------------------------

def constrained_solve(config:SolveConfig, forcing:ForcingOperator, constraint:ConstraintOperator,
					  drive:Optional[DriveTerm]=None, raise_on_violation:bool=True, seed=0) -> Trajectory:
	'''
	Solve the projected system and monitor the constraint on every grid time.

	The returned trajectory carries the constraint report, the weak residuals and the
	diagnostics (iterations, residual history, ball measurements, equicontinuity modulus,
	constraint level validation).

	:param config: solve configuration
	:param forcing: the forcing F
	:param constraint: the constraint G
	:param drive: optional explicit drive g
	:param raise_on_violation: raise AdmissibilityError for an inadmissible trajectory
	:param seed: seed of the constraint level validation samples
	:raises PreconditionError: if inf_I G(0) ≤ 0
	:raises AdmissibilityError: if the certified bound drops below α (and ``raise_on_violation``)
	'''
	at_zero = constraint.at_zero(config.capacity)
	if at_zero.certified_lower_bound <= 0:
		raise PreconditionError(f"The constraint must satisfy inf G(0) > 0; measured {at_zero.certified_lower_bound:.6g}.",
								measured=at_zero.certified_lower_bound, bound=0.)

	validation = validate_constraint_level(constraint, config.radius, config.alpha, config.params,
										   config.capacity, config.validation_samples, seed)

	state = fixed_point_solve(config, forcing, drive)
	trajectory = state.trajectory
	report = admissibility_report(trajectory, constraint, config.alpha)
	trajectory.constraint_report = report
	trajectory.weak_residuals = weak_residual(trajectory, forcing, config.residual_modes or config.capacity)

	max_du = float(max(np.max(trajectory.u_du_norms()), np.max(trajectory.u_du_norms(nodes=True))))
	trajectory.diagnostics.update({
		"iterations": state.iterations,
		"residual": state.residual,
		"residual_history": state.residual_history,
		"relaxation": state.relaxation,
		"max_u_du_norm": max_du,
		"ball_respected": max_du <= config.radius * (1 + 1e-12),
		"max_z_h1_norm": float(np.max(h1_norm(state.z, config.params))),
		"equicontinuity_modulus": equicontinuity_modulus(trajectory, config.equicontinuity_delta),
		"constraint_validation": validation.to_dict(),
	})
	if not trajectory.diagnostics["ball_respected"]:
		logger.warning(f"constrained_solve: max ‖u‖_D(U) = {max_du:.6g} exceeds C = {config.radius:.6g}.")

	i = report.first_violation
	if i is not None and raise_on_violation:
		raise AdmissibilityError(f"The constraint level {config.alpha} is violated at t = {report.times[i]:.6g} "
								 f"(certified bound {report.certified[i]:.6g} near x = {report.locations[i]:.6g}).",
								 time=float(report.times[i]), location=float(report.locations[i]),
								 certified=float(report.certified[i]), alpha=config.alpha, trajectory=trajectory)
	return trajectory
