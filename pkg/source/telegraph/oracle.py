
'''
Reference solutions that do not use the modal propagators: a method-of-lines
finite-difference solver and closed-form solutions of the forced mode equation.
'''

import math
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse
from scipy.linalg import solve_banded

from .errors import ConfigurationError, StepSizeError
from .forcing import BVPCompositionForcing, DriveTerm, ForcingOperator, LinearForcing, PointwiseForcing
from .semigroup import Trajectory
from .spectral import PhysicalParams
from .utilities import _check_index, _check_positive, _wavenumbers

logger = logging.getLogger("telegraph_logger")

# solutions larger than this multiple of |g|·max(t, t²) count as blown up
BLOW_UP_FACTOR = 1e8

class FDGrid:
	'''
	Uniform grid of ``m`` interior points xⱼ = -1 + j·h, h = 2/(m+1), with Dirichlet
	conditions at ±1.

	:param m: number of interior points (≥ 16)
	'''
	def __init__(self, m:int=512):
		self.m = _check_index("m", m, minimum=16)
		self.h = 2. / (self.m + 1)
		self.x = -1. + self.h * np.arange(1, self.m + 1)

	def __repr__(self):
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, m={self.m}>"

	def matrix(self) -> scipy.sparse.csr_matrix:
		''' The second-difference matrix (1, -2, 1)/h² (symmetric negative definite). '''
		m = self.m
		return scipy.sparse.diags([np.ones(m-1), -2. * np.ones(m), np.ones(m-1)], [-1, 0, 1], format="csr") / self.h**2

	def sine_mode_eigenvalue(self, k:int) -> float:
		'''
		Eigenvalue of the second-difference matrix for the grid restriction of sin(kπx):
		-(4/h²)·sin²(kπh/2), which tends to -(kπ)² as h → 0.
		'''
		k = _check_index("k", k)
		return -4. / self.h**2 * math.sin(k * math.pi * self.h / 2.)**2

	def sine_samples(self, capacity:int) -> np.ndarray:
		''' sin(kπxⱼ) for k = 1..capacity, shape (m, capacity). '''
		return np.sin(np.multiply.outer(self.x, _wavenumbers(capacity)))

	def l2_norm(self, values:np.ndarray) -> np.ndarray:
		''' Discrete L² norm √(h Σ vⱼ²) over the last axis. '''
		return np.sqrt(self.h * np.sum(np.asarray(values)**2, axis=-1))

class RK4:
	'''
	Classical 4th order Runge–Kutta stepping of y′ = rhs(t, y).

	:param rhs: function (t, y) → dy/dt
	'''
	def __init__(self, rhs:Callable[[float, np.ndarray], np.ndarray]):
		self.rhs = rhs

	def step(self, t:float, y:np.ndarray, dt:float) -> np.ndarray:
		'''
		Return y after one step of length dt from time t.
		'''
		k1 = self.rhs(t, y)
		k2 = self.rhs(t + dt/2, y + dt/2 * k1)
		k3 = self.rhs(t + dt/2, y + dt/2 * k2)
		k4 = self.rhs(t + dt, y + dt * k3)
		return y + dt/6 * (k1 + 2*k2 + 2*k3 + k4)

def stable_step(params:PhysicalParams, grid:FDGrid, cfl:float=0.8) -> float:
	'''
	Largest RK4 step used for the semi-discrete system: cfl·2√2/max(2√κ/h, ν).

	2√κ/h bounds the frequencies of κΔ_h and 2√2 is the extent of the RK4
	stability region along the imaginary axis.
	'''
	cfl = _check_positive("cfl", cfl)
	return cfl * 2. * math.sqrt(2.) / max(2. * math.sqrt(params.kappa) / grid.h, params.nu)

def _grid_forcing(forcing:Optional[ForcingOperator], grid:FDGrid) -> Callable[[np.ndarray], np.ndarray]:
	''' The forcing acting directly on grid values (no projection). '''
	if forcing is None:
		return lambda u: np.zeros_like(u)
	if isinstance(forcing, PointwiseForcing):
		return forcing.function
	if isinstance(forcing, LinearForcing):
		return lambda u: forcing.scale * u
	if isinstance(forcing, BVPCompositionForcing):
		# (-Δ_h + 1) w = u
		m = grid.m
		ab = np.zeros((3, m))
		ab[0, 1:] = -1. / grid.h**2
		ab[1, :] = 2. / grid.h**2 + 1.
		ab[2, :-1] = -1. / grid.h**2
		return lambda u: solve_banded((1, 1), ab, u)
	raise ConfigurationError(f"The finite-difference solver has no grid version of the forcing '{forcing.name}'.")

@dataclass
class FDTrajectory:
	'''
	Finite-difference solution samples: ``u`` and ``v`` have shape (len(times), m).
	'''
	grid: FDGrid
	times: np.ndarray
	u: np.ndarray
	v: np.ndarray

def fd_solve(params:PhysicalParams, forcing:Optional[ForcingOperator], drive:Optional[DriveTerm], times,
			 m:int=512, cfl:float=0.8) -> FDTrajectory:
	'''
	Method-of-lines solution of u_tt = -ν u_t + κ Δ_h u + F(u) + g(t) with zero data.

	F is applied to the grid values directly. Each output interval is split into
	equal RK4 steps no longer than :py:func:`stable_step`.

	:param params: physical constants
	:param forcing: the forcing (None for the linear equation)
	:param drive: explicit drive g (None for no drive)
	:param times: increasing output times starting at 0
	:param m: number of interior grid points
	:param cfl: fraction of the RK4 stability limit
	:raises StepSizeError: if the solution becomes non-finite or exceeds BLOW_UP_FACTOR·|g|·max(t, t²)
	'''
	grid = FDGrid(m)
	times = np.asarray(times, dtype=np.double)
	if times.ndim != 1 or len(times) == 0 or times[0] != 0 or np.any(np.diff(times) <= 0):
		raise ValueError("The output times must be increasing and start at 0.")

	L = params.kappa * grid.matrix()
	F = _grid_forcing(forcing, grid)
	basis = grid.sine_samples(drive.modes) if drive is not None else None

	def rhs(t, y):
		u, v = y
		a = L @ u - params.nu * v + F(u)
		if drive is not None:
			a = a + basis @ np.asarray(drive.function(t), dtype=np.double)
		return np.stack((v, a))

	stepper = RK4(rhs)
	dt_max = stable_step(params, grid, cfl)
	y = np.zeros((2, grid.m))
	us = np.zeros((len(times), grid.m))
	vs = np.zeros((len(times), grid.m))
	drive_size = 0.

	for i in range(1, len(times)):
		t = times[i-1]
		steps = max(1, math.ceil((times[i] - t) / dt_max - 1e-12))
		dt = (times[i] - t) / steps
		for s in range(steps):
			y = stepper.step(t + s * dt, y, dt)
		size = float(np.max(np.abs(y)))
		if drive is not None:
			drive_size = max(drive_size, float(np.max(np.abs(basis @ np.asarray(drive.function(times[i]), dtype=np.double)))))
		limit = BLOW_UP_FACTOR * drive_size * max(times[i], times[i]**2)
		if not math.isfinite(size) or (limit > 0 and size > limit):
			raise StepSizeError(f"The finite-difference solution blew up at t = {times[i]:.6g} (step {dt:.3g}).", time=float(times[i]))
		us[i], vs[i] = y
	logger.debug(f"fd_solve: m={grid.m}, dt≤{dt_max:.3g}, {len(times)-1} output intervals")
	return FDTrajectory(grid=grid, times=times, u=us, v=vs)

def fd_l2_distance(fd:FDTrajectory, trajectory:Trajectory) -> float:
	'''
	max over the shared times of the discrete L² distance between the finite-difference
	solution and the modal trajectory evaluated on the grid points.
	'''
	if len(fd.times) != len(trajectory.times) or not np.allclose(fd.times, trajectory.times, rtol=1e-12, atol=1e-14):
		raise ValueError("The finite-difference and modal trajectories must share their output times.")
	modal = trajectory.u @ fd.grid.sine_samples(trajectory.capacity).T
	return float(np.max(fd.grid.l2_norm(fd.u - modal)))

def modal_ode_closed_form(n:int, params:PhysicalParams, shift:float, drive_coeff:float, t) -> Tuple[np.ndarray, np.ndarray]:
	'''
	Exact solution (a, a′) of a″ + νa′ + (κn²π² + shift)a = d with a(0) = a′(0) = 0.

	Written with the roots r₁, r₂ of r² + νr + k = 0 (complex when the mode oscillates);
	a double root and k = 0 are treated separately.

	:param n: mode index
	:param params: physical constants
	:param shift: added to the stiffness κn²π²
	:param drive_coeff: the constant right-hand side d
	:param t: time or array of times ≥ 0
	'''
	n = _check_index("n", n)
	t = np.asarray(t, dtype=np.double)
	nu = params.nu
	k = params.kappa * (n * math.pi)**2 + float(shift)
	d = float(drive_coeff)

	if k == 0:
		a = d / nu * (t + np.expm1(-nu * t) / nu)
		b = -d / nu * np.expm1(-nu * t)
		return a, b

	disc = nu**2 - 4. * k
	if abs(disc) <= 1e-12 * max(nu**2, 4. * abs(k)):
		r = -nu / 2.
		e = np.exp(r * t)
		homogeneous = e * (1. - r * t)
		impulse = t * e
	else:
		root = np.emath.sqrt(disc)
		r1 = (-nu + root) / 2.
		r2 = (-nu - root) / 2.
		e1 = np.exp(r1 * t)
		e2 = np.exp(r2 * t)
		homogeneous = np.real((r2 * e1 - r1 * e2) / (r2 - r1))
		impulse = np.real((e1 - e2) / (r1 - r2))
	return d / k * (1. - homogeneous), d * impulse
