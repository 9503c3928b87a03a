
'''
The linear part of the telegraph equation written as a first-order system.

With V = (u, v), v = u_t, the equation u_tt = -ν u_t + κ u_xx reads V_t = U V where
U(u, v) = (v, κu″ - νv). On the sine mode φₖ (eigenvalue λₖ = κk²π² of -κ d²/dx²)
the generator is the 2×2 matrix [[0, 1], [-λₖ, -ν]] and the semigroup T(t) is the
matrix exponential of it, which is known in closed form. The form depends on the
sign of θₖ = 4k²π²κ - ν²:

	.. code-block::

		θₖ > 0   underdamped   ωₖ = √θₖ / 2
		θₖ = 0   critical
		θₖ < 0   overdamped    ρₖ = √(-θₖ) / 2

Everything in this module is evaluated mode by mode with these closed forms.
'''

import math
import logging
import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import roots_legendre

from .errors import CapacityError, IncompatibleSamplingError, OutOfScopeError
from .spectral import PhysicalParams, StateVector, ModalVector, h1_norm, du_norm, l2_norm
from .utilities import _check_index, _check_positive, _lagrange_basis, _wavenumbers

logger = logging.getLogger("telegraph_logger")

CRITICAL_RTOL = 1e-12
OMEGA_SAFETY = 1.05
DEFAULT_TIME_ORDER = 8

class ModeKind(str, enum.Enum):
	UNDERDAMPED = "underdamped"
	CRITICAL = "critical"
	OVERDAMPED = "overdamped"

@dataclass(frozen=True)
class ModeRegime:
	'''
	Damping regime of a single sine mode.

	``omega_n`` is set only for underdamped modes, ``rho_n`` only for overdamped modes.
	'''
	n: int
	theta_n: float
	kind: ModeKind
	omega_n: Optional[float] = None
	rho_n: Optional[float] = None

	def to_dict(self) -> Dict[str, Any]:
		return {"n": self.n, "theta_n": self.theta_n, "kind": self.kind.value,
				"omega_n": self.omega_n, "rho_n": self.rho_n}

def _mode_constants(params:PhysicalParams, modes:np.ndarray) -> Tuple[np.ndarray, ...]:
	'''
	Per-mode constants for the integer mode indices ``modes``.

	:returns: λₖ, θₖ, kind codes (1 under, 0 critical, -1 over), ωₖ (0 where undefined), ρₖ (0 where undefined)
	'''
	k = math.pi * np.asarray(modes, dtype=np.double)
	lam = params.kappa * k**2
	theta = 4. * lam - params.nu**2
	scale = np.maximum(4. * lam, params.nu**2)
	code = np.where(np.abs(theta) <= CRITICAL_RTOL * scale, 0, np.sign(theta)).astype(int)
	omega = np.where(code == 1, 0.5 * np.sqrt(np.abs(theta)), 0.)
	rho = np.where(code == -1, 0.5 * np.sqrt(np.abs(theta)), 0.)
	return lam, theta, code, omega, rho

def classify_mode(n:int, params:PhysicalParams) -> ModeRegime:
	'''
	Classify mode ``n`` as underdamped, critical or overdamped.

	θₙ within a relative tolerance of 1e-12 of zero counts as critical.

	:param n: mode index, n ≥ 1
	:param params: physical constants
	'''
	n = _check_index("n", n)
	lam, theta, code, omega, rho = _mode_constants(params, np.array([n]))
	code = int(code[0])
	if code == 1:
		return ModeRegime(n=n, theta_n=float(theta[0]), kind=ModeKind.UNDERDAMPED, omega_n=float(omega[0]))
	elif code == -1:
		return ModeRegime(n=n, theta_n=float(theta[0]), kind=ModeKind.OVERDAMPED, rho_n=float(rho[0]))
	return ModeRegime(n=n, theta_n=float(theta[0]), kind=ModeKind.CRITICAL)

@dataclass(frozen=True)
class SpectralSummary:
	'''
	Result of :py:func:`spectral_abscissa`.

	``branch`` is "all_nonnegative" when every θₙ ≥ 0 (θ = -ν/2) and
	"overdamped_max" otherwise.
	'''
	theta: float
	branch: str
	per_mode: List[ModeRegime]

	def to_dict(self) -> Dict[str, Any]:
		return {"theta": self.theta, "branch": self.branch,
				"per_mode": [m.to_dict() for m in self.per_mode]}

def overdamped_mode_count(params:PhysicalParams) -> int:
	'''
	Number of modes with θₙ < 0; these are exactly the n with n < ν/(2π√κ).
	'''
	bound = params.nu / (2. * math.pi * math.sqrt(params.kappa))
	count = int(math.floor(bound))
	# n = bound exactly is critical, not overdamped
	while count > 0 and classify_mode(count, params).kind != ModeKind.OVERDAMPED:
		count -= 1
	return count

def spectral_abscissa(params:PhysicalParams, n_max:int=16) -> SpectralSummary:
	'''
	The bound θ of the dichotomy: θ = -ν/2 if θₙ ≥ 0 for all n, otherwise
	θ = max over {n: θₙ < 0} of (-ν/2 + ρₙ).

	The per-mode table lists modes 1..n_max; if n_max does not cover every
	overdamped mode it is extended so that the maximum is taken over all of them.

	:param params: physical constants
	:param n_max: number of modes in the table
	'''
	n_max = _check_index("n_max", n_max)
	n_over = overdamped_mode_count(params)
	if n_over >= n_max:
		logger.debug(f"spectral_abscissa: extending n_max from {n_max} to {n_over + 1} to cover all overdamped modes")
		n_max = n_over + 1

	per_mode = [classify_mode(n, params) for n in range(1, n_max+1)]
	overdamped = [m for m in per_mode if m.kind == ModeKind.OVERDAMPED]
	if len(overdamped) == 0:
		return SpectralSummary(theta=-params.nu / 2., branch="all_nonnegative", per_mode=per_mode)
	theta = max(-params.nu / 2. + m.rho_n for m in overdamped)
	return SpectralSummary(theta=theta, branch="overdamped_max", per_mode=per_mode)

# -------------------------------------------------------------------
# propagators
# -------------------------------------------------------------------

def _propagator(params:PhysicalParams, modes:np.ndarray, times:np.ndarray) -> np.ndarray:
	'''
	Closed-form mode propagators.

	:param modes: integer mode indices, shape (M,)
	:param times: times ≥ 0, any shape S
	:returns: array of shape S + (M, 2, 2)
	'''
	times = np.asarray(times, dtype=np.double)
	if np.any(times < 0):
		raise ValueError(f"Propagator times must be ≥ 0; was given a minimum of {float(np.min(times))}.")

	lam, theta, code, omega, rho = _mode_constants(params, modes)
	mu = params.nu / 2.
	t = times[..., None]

	under = code == 1
	over = code == -1
	om = np.where(under, omega, 1.)
	# rh = mu off the overdamped modes keeps the unused branch bounded
	rh = np.where(over, rho, mu)

	decay = np.exp(-mu * t)
	# underdamped
	C = decay * np.cos(om * t)
	S = decay * np.sin(om * t)
	u11 = C + (mu / om) * S
	u12 = S / om
	u22 = C - (mu / om) * S
	# overdamped, written so that no growing exponential is formed
	D = np.exp((rh - mu) * t)
	E1 = np.expm1(-2. * rh * t)
	cosh_part = 0.5 * D * (2. + E1)
	sinh_part = -0.5 * D * E1
	o11 = cosh_part + (mu / rh) * sinh_part
	o12 = sinh_part / rh
	o22 = cosh_part - (mu / rh) * sinh_part
	# critical
	s = t * decay
	c11 = decay + mu * s
	c12 = s
	c22 = decay - mu * s

	m11 = np.where(under, u11, np.where(over, o11, c11))
	m12 = np.where(under, u12, np.where(over, o12, c12))
	m22 = np.where(under, u22, np.where(over, o22, c22))
	m21 = -lam * m12

	out = np.empty(m11.shape + (2, 2), dtype=np.double)
	out[..., 0, 0] = m11
	out[..., 0, 1] = m12
	out[..., 1, 0] = m21
	out[..., 1, 1] = m22
	return out

def propagator_matrices(params:PhysicalParams, capacity:int, times) -> np.ndarray:
	'''
	Propagators of modes 1..capacity at the given times.

	:param params: physical constants
	:param capacity: number of modes M
	:param times: scalar or array of times ≥ 0 (shape S)
	:returns: array of shape S + (M, 2, 2); entry [..., k-1, :, :] maps (aₖ, bₖ) at time 0 to time t
	'''
	capacity = _check_index("capacity", capacity)
	return _propagator(params, np.arange(1, capacity+1), times)

@dataclass(frozen=True)
class ModePropagator:
	'''
	The 2×2 matrix sending the mode-n coefficients (a, b) of (u, v) at time 0 to time t.
	'''
	n: int
	t: float
	m11: float
	m12: float
	m21: float
	m22: float
	kind: ModeKind

	@property
	def matrix(self) -> np.ndarray:
		return np.array([[self.m11, self.m12], [self.m21, self.m22]])

	@property
	def det(self) -> float:
		return self.m11 * self.m22 - self.m12 * self.m21

	def apply(self, a:float, b:float) -> Tuple[float, float]:
		return (self.m11 * a + self.m12 * b, self.m21 * a + self.m22 * b)

def propagate_mode(n:int, t:float, params:PhysicalParams) -> ModePropagator:
	'''
	The exact propagator of mode ``n`` at time ``t``.

	The second column is the response to (0, φₙ); the first column is the solution
	of the same mode equation with a(0) = 1, b(0) = 0.

	:param n: mode index, n ≥ 1
	:param t: time ≥ 0
	:param params: physical constants
	'''
	n = _check_index("n", n)
	t = float(t)
	if not (t >= 0):
		raise ValueError(f"The time must be ≥ 0; was given '{t}'.")
	m = _propagator(params, np.array([n]), t)[0]
	return ModePropagator(n=n, t=t, m11=float(m[0,0]), m12=float(m[0,1]), m21=float(m[1,0]), m22=float(m[1,1]),
						  kind=classify_mode(n, params).kind)

def apply_semigroup(state:StateVector, t:float, params:PhysicalParams) -> StateVector:
	'''
	Return T(t) state.

	:param state: the state at time 0
	:param t: time ≥ 0
	:param params: physical constants
	'''
	if not isinstance(state, StateVector):
		raise TypeError(f"apply_semigroup expects a StateVector; was given '{type(state).__name__}'.")
	t = float(t)
	if not (t >= 0):
		raise ValueError(f"The time must be ≥ 0; was given '{t}'.")
	T = propagator_matrices(params, state.capacity, t)
	return StateVector.from_array(np.einsum('kab,bk->ak', T, state.as_array()))

def generator_apply(state:StateVector, params:PhysicalParams) -> StateVector:
	'''
	Return U(u, v) = (v, -κk²π² u - ν v) mode by mode.
	'''
	lam = params.stiffness(state.capacity)
	u = state.u.coeffs
	v = state.v.coeffs
	return StateVector(ModalVector(v), ModalVector(-lam * u - params.nu * v))

def hilbert_inner(f:StateVector, g:StateVector, params:PhysicalParams) -> float:
	''' The ℋ inner product κ Σ k²π² uₖ ũₖ + Σ vₖ ṽₖ. '''
	if f.capacity != g.capacity:
		raise CapacityError(f"Capacity mismatch: {f.capacity} vs {g.capacity}.")
	lam = params.stiffness(f.capacity)
	return float(np.sum(lam * f.u.coeffs * g.u.coeffs) + np.sum(f.v.coeffs * g.v.coeffs))

def du_inner(f:StateVector, g:StateVector, params:PhysicalParams) -> float:
	''' The D(U) inner product Σ (k⁴π⁴ + κk²π²) uₖ ũₖ + κ Σ k²π² vₖ ṽₖ. '''
	if f.capacity != g.capacity:
		raise CapacityError(f"Capacity mismatch: {f.capacity} vs {g.capacity}.")
	k = _wavenumbers(f.capacity)
	lam = params.kappa * k**2
	return float(np.sum((k**4 + lam) * f.u.coeffs * g.u.coeffs) + np.sum(lam * f.v.coeffs * g.v.coeffs))

def energy_rate(state:StateVector, params:PhysicalParams) -> float:
	'''
	Return (U f, f)_ℋ for f = ``state``. Analytically this is -ν ‖v‖²_L2.
	'''
	return hilbert_inner(generator_apply(state, params), state, params)

def resolvent_apply(lam:float, rhs:StateVector, params:PhysicalParams) -> StateVector:
	'''
	Apply R(λ, U) = (λ𝓘 - U)⁻¹ for real λ > 0.

	With rhs = (w, z) mode by mode:

		uₖ = (zₖ + (λ+ν) wₖ) / (κk²π² + λ(λ+ν)),  vₖ = λ uₖ - wₖ

	:param lam: real λ > 0
	:param rhs: the right-hand side (w, z)
	:param params: physical constants
	:raises OutOfScopeError: for λ ≤ 0
	'''
	lam = float(lam)
	if not (lam > 0) or not math.isfinite(lam):
		raise OutOfScopeError(f"The resolvent is only implemented for real λ > 0; was given '{lam}'.")
	stiff = params.stiffness(rhs.capacity)
	w = rhs.u.coeffs
	z = rhs.v.coeffs
	u = (z + (lam + params.nu) * w) / (stiff + lam * (lam + params.nu))
	return StateVector(ModalVector(u), ModalVector(lam * u - w))

# -------------------------------------------------------------------
# D(U) norm bound
# -------------------------------------------------------------------

def default_omega_times(params:PhysicalParams, n_max:int=16) -> np.ndarray:
	'''
	Default time grid for :py:func:`du_norm_bound`: 2001 points on [0, 1] and 2001 points
	on [1, t_max] with t_max = max(20, 10/|θ|).
	'''
	theta = spectral_abscissa(params, n_max).theta
	t_max = max(20., 10. / abs(theta))
	return np.concatenate((np.linspace(0., 1., 2001), np.linspace(1., t_max, 2001)[1:]))

def _weighted_norms(params:PhysicalParams, n_max:int, times:np.ndarray) -> np.ndarray:
	''' D(U) operator norm of each mode propagator; shape (T, n_max). '''
	k = _wavenumbers(n_max)
	ratio = np.sqrt(k**4 + params.kappa * k**2) / np.sqrt(params.kappa * k**2)
	A = propagator_matrices(params, n_max, times)
	A[..., 0, 1] *= ratio
	A[..., 1, 0] /= ratio
	return np.linalg.norm(A, ord=2, axis=(-2, -1))

@dataclass
class DecayProfile:
	'''
	The D(U) operator norm of T(t), taken as the supremum over modes of the weighted mode
	propagator norms, as a function of t.

	:param times: the time grid
	:param profile: sup over modes at each time
	:param sup: the grid supremum (ω before the safety factor)
	:param refined_sup: the grid supremum on the 2× refined grid (None if not checked)
	'''
	times: np.ndarray
	profile: np.ndarray
	sup: float
	safety: float
	refined_sup: Optional[float] = None

	@property
	def refinement_change(self) -> Optional[float]:
		''' Relative change of the supremum under 2× grid refinement. '''
		if self.refined_sup is None:
			return None
		return abs(self.refined_sup - self.sup) / self.sup

	@property
	def omega(self) -> float:
		return self.safety * max(self.sup, self.refined_sup or 0.)

def du_norm_bound(params:PhysicalParams, t_grid=None, n_max:int=16, safety:float=OMEGA_SAFETY,
				  refine_check:bool=True) -> Tuple[float, DecayProfile]:
	'''
	Estimate ω with ‖T(t)‖_D(U) ≤ ω for t ≥ 0.

	On each mode the D(U) norm is the Euclidean norm weighted by
	W = diag(√(k⁴π⁴ + κk²π²), √(κk²π²)), so the operator norm of the mode propagator is
	‖W M(t) W⁻¹‖₂. ω is the supremum over the time grid and modes 1..n_max times ``safety``.

	:param params: physical constants
	:param t_grid: increasing times ≥ 0; default from :py:func:`default_omega_times`
	:param n_max: number of modes included
	:param safety: multiplicative safety factor (≥ 1)
	:param refine_check: recompute the supremum on a grid with all midpoints inserted and warn if it moves by more than 1 %
	:returns: (ω, :py:class:`DecayProfile`)
	'''
	n_max = _check_index("n_max", n_max)
	safety = _check_positive("safety", safety)
	if t_grid is None:
		t_grid = default_omega_times(params, n_max)
	times = np.asarray(t_grid, dtype=np.double)
	if times.ndim != 1 or len(times) == 0:
		raise ValueError("The time grid for du_norm_bound must be a non-empty one-dimensional array.")
	if np.any(np.diff(times) <= 0):
		raise ValueError("The time grid for du_norm_bound must be strictly increasing.")

	profile = np.max(_weighted_norms(params, n_max, times), axis=-1)
	decay = DecayProfile(times=times, profile=profile, sup=float(np.max(profile)), safety=safety)

	if refine_check and len(times) > 1:
		fine = np.sort(np.concatenate((times, 0.5 * (times[1:] + times[:-1]))))
		decay.refined_sup = float(np.max(_weighted_norms(params, n_max, fine)))
		if decay.refinement_change > 0.01:
			logger.warning(f"du_norm_bound: the supremum changed by {100*decay.refinement_change:.2f}% under grid refinement; use a denser grid.")

	logger.debug(f"du_norm_bound: sup={decay.sup:.6g}, omega={decay.omega:.6g}")
	return decay.omega, decay

# -------------------------------------------------------------------
# Duhamel integration
# -------------------------------------------------------------------

class TimeGrid:
	'''
	Uniform time grid on [0, t_end] with a Gauss–Legendre rule of ``order`` nodes in each cell.

	Sources of a Duhamel integral are sampled on :py:attr:`node_times`.

	:param t_end: final time > 0
	:param cells: number of cells
	:param order: Gauss nodes per cell
	'''
	def __init__(self, t_end:float, cells:int=64, order:int=DEFAULT_TIME_ORDER):
		self.t_end = _check_positive("t_end", t_end)
		self.cells = _check_index("cells", cells)
		self.order = _check_index("order", order)
		self.dt = self.t_end / self.cells
		self.times = np.linspace(0., self.t_end, self.cells + 1)

		xi, w = roots_legendre(self.order)
		self.xi = 0.5 * (np.asarray(xi) + 1.) # nodes on (0, 1)
		self.w = 0.5 * np.asarray(w)
		self.node_times = (self.times[:-1, None] + self.dt * self.xi[None, :]).ravel()

	@classmethod
	def from_times(cls, times, order:int=DEFAULT_TIME_ORDER) -> 'TimeGrid':
		'''
		Build a grid from explicit times; they must start at 0, increase, and be uniformly spaced.
		'''
		times = np.asarray(times, dtype=np.double)
		if times.ndim != 1 or len(times) < 2:
			raise ValueError("A time grid needs at least two times.")
		if times[0] != 0:
			raise ValueError(f"A time grid must start at 0; was given '{times[0]}'.")
		steps = np.diff(times)
		if np.any(steps <= 0):
			raise ValueError("The times of a time grid must be strictly increasing.")
		if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
			raise ValueError("The times of a time grid must be uniformly spaced.")
		return cls(t_end=float(times[-1]), cells=len(times) - 1, order=order)

	def __repr__(self):
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, t_end={self.t_end}, cells={self.cells}, order={self.order}>"

	@property
	def node_count(self) -> int:
		return self.cells * self.order

	def refined(self, factor:int=2) -> 'TimeGrid':
		''' The same interval with ``factor`` times as many cells. '''
		return TimeGrid(self.t_end, self.cells * _check_index("factor", factor), self.order)

class DuhamelIntegrator:
	'''
	Evaluates V(t) = ∫₀ᵗ T(t-s) F₁(s) ds on a :py:class:`TimeGrid`.

	The propagator kernels for one cell are computed once; each cell then costs a few
	tensor contractions. Grid values use the Gauss rule of the cell directly. Values at
	the interior nodes use the Lagrange interpolant of the source through the cell's nodes.

	:param params: physical constants
	:param capacity: number of modes M
	:param grid: the time grid
	'''
	def __init__(self, params:PhysicalParams, capacity:int, grid:TimeGrid):
		self.params = params
		self.capacity = _check_index("capacity", capacity)
		self.grid = grid

		dt = grid.dt
		xi = grid.xi
		w = grid.w
		modes = np.arange(1, self.capacity+1)

		self._step = _propagator(params, modes, dt)                                    # (M,2,2)
		self._end = (w * dt)[:, None, None, None] * _propagator(params, modes, dt * (1. - xi))  # (q,M,2,2)
		self._to_node = _propagator(params, modes, dt * xi)                            # (q,M,2,2)

		sub = dt * np.multiply.outer(xi, 1. - xi)                                      # (p,l)
		T_sub = _propagator(params, modes, sub)                                        # (p,l,M,2,2)
		L = _lagrange_basis(xi, np.multiply.outer(xi, xi))                             # (p,l,m)
		scale = dt * np.multiply.outer(xi, w)                                          # (p,l)
		self._node = np.einsum('pl,plkab,plm->pmkab', scale, T_sub, L)                # (p,m,M,2,2)

	def __repr__(self):
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, capacity={self.capacity}, cells={self.grid.cells}>"

	def sample_source(self, source) -> np.ndarray:
		'''
		Bring a source into the internal layout (cells, order, 2, M).

		:param source: a callable t ↦ StateVector (or array (2, M)), an array of shape
			(cells·order, 2, M) or (cells, order, 2, M), or a sequence of StateVector, one per node
		:raises IncompatibleSamplingError: if the samples do not match the time nodes
		'''
		g = self.grid
		if callable(source):
			values = [source(t) for t in g.node_times]
			return self.sample_source(values)

		if isinstance(source, np.ndarray):
			arr = np.asarray(source, dtype=np.double)
		else:
			values = list(source)
			arr = np.array([v.as_array() if isinstance(v, StateVector) else np.asarray(v, dtype=np.double) for v in values])

		if arr.ndim == 3 and arr.shape[0] == g.node_count:
			arr = arr.reshape(g.cells, g.order, *arr.shape[1:])
		if arr.ndim != 4 or arr.shape[:3] != (g.cells, g.order, 2):
			raise IncompatibleSamplingError(f"The source must be sampled on the {g.node_count} time quadrature nodes "
											f"({g.cells} cells × {g.order} nodes) as states; was given shape {arr.shape}.")
		if arr.shape[3] != self.capacity:
			raise CapacityError(f"The source has {arr.shape[3]} modes; the integrator expects {self.capacity}.")
		return arr

	def integrate(self, source) -> Tuple[np.ndarray, np.ndarray]:
		'''
		Integrate a sampled source.

		:param source: see :py:meth:`sample_source`
		:returns: (grid states of shape (cells+1, 2, M), node states of shape (cells, order, 2, M))
		'''
		src = self.sample_source(source)
		g = self.grid
		state = np.zeros((2, self.capacity), dtype=np.double)
		grid_states = np.empty((g.cells + 1, 2, self.capacity), dtype=np.double)
		node_states = np.empty((g.cells, g.order, 2, self.capacity), dtype=np.double)
		grid_states[0] = state

		for j in range(g.cells):
			s = src[j]
			node_states[j] = np.einsum('pkab,bk->pak', self._to_node, state) + np.einsum('pmkab,mbk->pak', self._node, s)
			state = np.einsum('kab,bk->ak', self._step, state) + np.einsum('mkab,mbk->ak', self._end, s)
			grid_states[j + 1] = state

		return grid_states, node_states

@dataclass
class Trajectory:
	'''
	Samples of a solution V = (u, v) of V_t = UV + F₁, V(0) = 0.

	Grid quantities have a leading axis of length cells+1 and node quantities
	a leading axis of length cells·order; the last axis indexes the modes.
	``source`` is the velocity component of F₁ at the nodes; ``drive`` is the part
	of it that came from an explicit drive term (zeros when there is none).
	'''
	params: PhysicalParams
	times: np.ndarray
	u: np.ndarray
	v: np.ndarray
	node_times: np.ndarray
	node_u: np.ndarray
	node_v: np.ndarray
	source: np.ndarray
	drive: Optional[np.ndarray] = None
	constraint_report: Optional[Any] = None
	weak_residuals: Optional[Any] = None
	diagnostics: Dict[str, Any] = field(default_factory=dict)

	@property
	def capacity(self) -> int:
		return self.u.shape[-1]

	@property
	def states(self) -> List[StateVector]:
		return [StateVector(ModalVector(u), ModalVector(v)) for u, v in zip(self.u, self.v)]

	def h_norms(self) -> np.ndarray:
		''' ℋ norm at every grid time. '''
		return np.sqrt(h1_norm(self.u, self.params)**2 + l2_norm(self.v)**2)

	def du_norms(self) -> np.ndarray:
		''' D(U) norm of the state at every grid time. '''
		return np.sqrt(du_norm(self.u, self.params)**2 + h1_norm(self.v, self.params)**2)

	def u_du_norms(self, nodes:bool=False) -> np.ndarray:
		''' 𝒟(U) norm of the displacement at every grid time (or node time). '''
		return du_norm(self.node_u if nodes else self.u, self.params)

	def acceleration(self) -> np.ndarray:
		''' u_tt at the node times from the equation: -κk²π² u - ν v + source. '''
		lam = self.params.stiffness(self.capacity)
		return -lam * self.node_u - self.params.nu * self.node_v + self.source

def duhamel(source, t_grid, params:PhysicalParams, capacity:int=None, order:int=DEFAULT_TIME_ORDER) -> Trajectory:
	'''
	Evaluate V(t) = ∫₀ᵗ T(t-s) F₁(s) ds on a uniform time grid.

	:param source: F₁ as a callable t ↦ StateVector, or sampled on the time quadrature nodes (see :py:meth:`DuhamelIntegrator.sample_source`)
	:param t_grid: a :py:class:`TimeGrid` or uniformly spaced times starting at 0
	:param params: physical constants
	:param capacity: number of modes; inferred from the source when omitted
	:param order: Gauss nodes per cell (ignored when a TimeGrid is given)
	:returns: a :py:class:`Trajectory`
	'''
	grid = t_grid if isinstance(t_grid, TimeGrid) else TimeGrid.from_times(t_grid, order=order)

	if capacity is None:
		if callable(source):
			first = source(0.)
			capacity = first.capacity if isinstance(first, StateVector) else np.asarray(first).shape[-1]
		elif isinstance(source, np.ndarray):
			capacity = source.shape[-1]
		else:
			source = list(source)
			if len(source) == 0:
				raise IncompatibleSamplingError("The source has no samples.")
			first = source[0]
			capacity = first.capacity if isinstance(first, StateVector) else np.asarray(first).shape[-1]

	integrator = DuhamelIntegrator(params, capacity, grid)
	src = integrator.sample_source(source)
	grid_states, node_states = integrator.integrate(src)
	nodes = node_states.reshape(grid.node_count, 2, integrator.capacity)
	flat_src = src.reshape(grid.node_count, 2, integrator.capacity)
	if np.any(flat_src[:, 0, :] != 0):
		logger.debug("duhamel: the source has a displacement component; acceleration() accounts only for the velocity component")

	return Trajectory(params=params, times=grid.times,
					  u=grid_states[:, 0, :], v=grid_states[:, 1, :],
					  node_times=grid.node_times, node_u=nodes[:, 0, :], node_v=nodes[:, 1, :],
					  source=flat_src[:, 1, :])
