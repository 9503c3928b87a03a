
'''
Sine basis on I = (-1,1), quadrature, projections and norms.

The basis functions are φₖ(x) = sin(kπx), k = 1..M. They are orthonormal in L²(I)
and vanish at x = ±1. Note that they span only the odd-symmetric part of the
Dirichlet problem on (-1,1); everything in this package works inside that span.

Norms (κ is the stiffness coefficient):

	.. code-block::

		‖u‖²_L2   = Σ aₖ²
		‖u‖²_H10  = κ Σ aₖ² k²π²              (equivalent norm on H¹₀)
		‖u‖²_D(U) = Σ aₖ² (k⁴π⁴ + κ k²π²)      (first component of the generator domain)
'''

import math
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Union

import numpy as np
from scipy.special import roots_legendre

from .errors import CapacityError, ConfigurationError, PreconditionError, PropertyViolationError
from .utilities import _as_coeff_array, _check_index, _check_positive, _wavenumbers

logger = logging.getLogger("telegraph_logger")

DEFAULT_CAPACITY = 64
MAX_QUADRATURE_ORDER = 16384
GRAM_TOLERANCE = 1e-12

@dataclass(frozen=True)
class PhysicalParams:
	'''
	The physical constants of u_tt = -ν u_t + κ u_xx + F(u).

	:param nu: damping coefficient ν > 0
	:param kappa: stiffness coefficient κ > 0
	'''
	nu: float
	kappa: float

	def __post_init__(self):
		object.__setattr__(self, "nu", _check_positive("nu", self.nu))
		object.__setattr__(self, "kappa", _check_positive("kappa", self.kappa))

	def stiffness(self, capacity:int) -> np.ndarray:
		'''
		Return κk²π² for k = 1..capacity (the eigenvalues of -κ d²/dx² on the sine modes).
		'''
		return self.kappa * _wavenumbers(capacity)**2

# -------------------------------------------------------------------
# norms on coefficient arrays (last axis = modes)
# -------------------------------------------------------------------

def l2_norm(coeffs:np.ndarray) -> Union[float,np.ndarray]:
	''' L² norm of coefficient arrays; the last axis indexes the modes. '''
	coeffs = np.asarray(coeffs, dtype=np.double)
	return np.sqrt(np.sum(coeffs**2, axis=-1))

def h1_norm(coeffs:np.ndarray, params:PhysicalParams) -> Union[float,np.ndarray]:
	''' Equivalent H¹₀ norm, ‖u‖² = κ Σ aₖ² k²π². '''
	coeffs = np.asarray(coeffs, dtype=np.double)
	return np.sqrt(np.sum(params.stiffness(coeffs.shape[-1]) * coeffs**2, axis=-1))

def du_norm(coeffs:np.ndarray, params:PhysicalParams) -> Union[float,np.ndarray]:
	''' Norm of the first component of D(U), ‖u‖² = Σ aₖ² (k⁴π⁴ + κk²π²). '''
	coeffs = np.asarray(coeffs, dtype=np.double)
	k = _wavenumbers(coeffs.shape[-1])
	return np.sqrt(np.sum((k**4 + params.kappa * k**2) * coeffs**2, axis=-1))

class ModalVector:
	'''
	A function u(x) = Σ aₖ sin(kπx), k = 1..M, stored by its coefficients.

	The coefficient array is read-only; arithmetic returns new vectors.

	:param coeffs: the coefficients a₁..a_M; the capacity M is their number
	'''
	__slots__ = ("_coeffs",)

	def __init__(self, coeffs:Iterable[float]):
		arr = _as_coeff_array(coeffs, "coeffs")
		if arr.size == 0:
			raise CapacityError("A ModalVector needs a capacity of at least one mode.")
		arr.flags.writeable = False
		self._coeffs = arr

	@classmethod
	def zeros(cls, capacity:int) -> 'ModalVector':
		''' The zero function with the given capacity. '''
		return cls(np.zeros(_check_index("capacity", capacity), dtype=np.double))

	@classmethod
	def basis(cls, k:int, capacity:int, scale:float=1.0) -> 'ModalVector':
		'''
		Return ``scale`` · φₖ.

		:param k: mode index, 1 ≤ k ≤ capacity
		:param capacity: number of modes M
		:param scale: coefficient of the mode
		'''
		k = _check_index("k", k)
		capacity = _check_index("capacity", capacity)
		if k > capacity:
			raise CapacityError(f"Mode {k} does not fit a capacity of {capacity}.")
		a = np.zeros(capacity, dtype=np.double)
		a[k-1] = scale
		return cls(a)

	def __repr__(self):
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, capacity={self.capacity}>"

	@property
	def coeffs(self) -> np.ndarray:
		''' The (read-only) coefficient array. '''
		return self._coeffs

	@property
	def capacity(self) -> int:
		''' Number of modes M. '''
		return len(self._coeffs)

	def l2_norm(self) -> float:
		return float(l2_norm(self._coeffs))

	def h1_norm(self, params:PhysicalParams) -> float:
		return float(h1_norm(self._coeffs, params))

	def du_norm(self, params:PhysicalParams) -> float:
		return float(du_norm(self._coeffs, params))

	def evaluate(self, x) -> np.ndarray:
		'''
		Evaluate u at the points ``x``.
		'''
		x = np.asarray(x, dtype=np.double)
		return np.sin(np.multiply.outer(x, _wavenumbers(self.capacity))) @ self._coeffs

	def derivative(self, x) -> np.ndarray:
		''' Evaluate u′ at the points ``x``. '''
		x = np.asarray(x, dtype=np.double)
		k = _wavenumbers(self.capacity)
		return np.cos(np.multiply.outer(x, k)) @ (k * self._coeffs)

	def second_derivative(self, x) -> np.ndarray:
		''' Evaluate u″ at the points ``x``. '''
		x = np.asarray(x, dtype=np.double)
		k = _wavenumbers(self.capacity)
		return -np.sin(np.multiply.outer(x, k)) @ (k**2 * self._coeffs)

	def lipschitz_bound(self) -> float:
		''' Upper bound Σ|aₖ|kπ for sup|u′|. '''
		return float(np.sum(np.abs(self._coeffs) * _wavenumbers(self.capacity)))

	def _check_same(self, other):
		if not isinstance(other, ModalVector):
			return NotImplemented
		if other.capacity != self.capacity:
			raise CapacityError(f"Capacity mismatch: {self.capacity} vs {other.capacity}.")
		return None

	def __add__(self, other):
		if self._check_same(other) is NotImplemented:
			return NotImplemented
		return ModalVector(self._coeffs + other._coeffs)

	def __sub__(self, other):
		if self._check_same(other) is NotImplemented:
			return NotImplemented
		return ModalVector(self._coeffs - other._coeffs)

	def __mul__(self, scalar):
		if not np.isscalar(scalar):
			return NotImplemented
		return ModalVector(float(scalar) * self._coeffs)

	__rmul__ = __mul__

	def __neg__(self):
		return ModalVector(-self._coeffs)

class StateVector:
	'''
	The pair (u, v) = (u, u_t) of ℋ = H¹₀(I) × L²(I), both components in the sine basis.

	Every finite modal state lies in D(U).

	:param u: displacement
	:param v: velocity (same capacity as u)
	'''
	__slots__ = ("u", "v")

	def __init__(self, u:ModalVector, v:ModalVector):
		if not isinstance(u, ModalVector):
			u = ModalVector(u)
		if not isinstance(v, ModalVector):
			v = ModalVector(v)
		if u.capacity != v.capacity:
			raise CapacityError(f"The components of a state must share a capacity; was given {u.capacity} and {v.capacity}.")
		self.u = u
		self.v = v

	@classmethod
	def zeros(cls, capacity:int) -> 'StateVector':
		return cls(ModalVector.zeros(capacity), ModalVector.zeros(capacity))

	@classmethod
	def from_array(cls, values:np.ndarray) -> 'StateVector':
		'''
		Create a state from an array of shape (2, M): row 0 = u, row 1 = v.
		'''
		values = np.asarray(values, dtype=np.double)
		if values.ndim != 2 or values.shape[0] != 2:
			raise ValueError(f"A state array must have shape (2, M); was given {values.shape}.")
		return cls(ModalVector(values[0]), ModalVector(values[1]))

	def __repr__(self):
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, capacity={self.capacity}>"

	@property
	def capacity(self) -> int:
		return self.u.capacity

	def as_array(self) -> np.ndarray:
		''' Return the state as a new array of shape (2, M). '''
		return np.vstack((self.u.coeffs, self.v.coeffs))

	def h_norm(self, params:PhysicalParams) -> float:
		''' ℋ norm: ‖u‖²_H10 + ‖v‖²_L2. '''
		return math.sqrt(self.u.h1_norm(params)**2 + self.v.l2_norm()**2)

	def du_norm(self, params:PhysicalParams) -> float:
		''' D(U) norm: ‖u‖²_D(U) + ‖v‖²_H10. '''
		return math.sqrt(self.u.du_norm(params)**2 + self.v.h1_norm(params)**2)

# -------------------------------------------------------------------
# quadrature
# -------------------------------------------------------------------

def default_quadrature_order(capacity:int, degree:int=1) -> int:
	'''
	Number of Gauss–Legendre nodes used for a given capacity.

	With ``degree`` = 1 the rule resolves products φⱼφₖ for j, k ≤ 2M (highest frequency 4Mπ).
	For a pointwise nonlinearity of polynomial degree p, the integrand f(u)φₖ has frequencies
	up to (p+1)Mπ; the order grows accordingly. A rule with N nodes integrates
	frequencies up to about 2N exactly to roundoff, the factor 1.25 and the
	additive guard give the margin.

	:param capacity: number of modes M
	:param degree: polynomial degree of the nonlinearity being integrated
	'''
	capacity = _check_index("capacity", capacity)
	degree = _check_index("degree", degree)
	base = math.ceil(1.25 * 2. * math.pi * capacity) + 32
	dealias = math.ceil(1.25 * (degree + 1) * math.pi * capacity / 2.) + 32
	return max(base, dealias)

class QuadratureGrid:
	'''
	A Gauss–Legendre rule on (-1,1) together with the sine/cosine synthesis matrices.

	On construction the Gram matrix of φ₁..φ₂M under the rule is checked against the identity;
	a rule that fails the check raises ConfigurationError.

	:param capacity: number of modes M served by this grid
	:param order: number of nodes; default from :py:func:`default_quadrature_order`
	:param verify: perform the Gram matrix check
	'''
	def __init__(self, capacity:int=DEFAULT_CAPACITY, order:int=None, verify:bool=True):
		self.capacity = _check_index("capacity", capacity)
		if order is None:
			order = default_quadrature_order(self.capacity)
		self.order = _check_index("order", order)
		if self.order > MAX_QUADRATURE_ORDER:
			raise ConfigurationError(f"A quadrature order of {self.order} exceeds the maximum ({MAX_QUADRATURE_ORDER}); reduce the capacity or the forcing degree.")

		nodes, weights = roots_legendre(self.order)
		self.nodes = np.asarray(nodes, dtype=np.double)
		self.weights = np.asarray(weights, dtype=np.double)
		self.nodes.flags.writeable = False
		self.weights.flags.writeable = False

		k = _wavenumbers(self.capacity)
		self._sin = np.sin(np.multiply.outer(self.nodes, k)) # (order, M)
		self._cos = np.cos(np.multiply.outer(self.nodes, k))

		if verify:
			error = self.gram_error(2 * self.capacity)
			if error > GRAM_TOLERANCE:
				raise ConfigurationError(f"A quadrature rule with {self.order} nodes does not integrate the sine products to {GRAM_TOLERANCE} (error {error:.3e}).")
			logger.debug(f"quadrature grid: capacity={self.capacity}, order={self.order}, gram error={error:.2e}")

	def __repr__(self):
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, capacity={self.capacity}, order={self.order}>"

	def gram_error(self, modes:int) -> float:
		'''
		Return max |G - I| where G is the quadrature Gram matrix of φ₁..φ_modes.
		'''
		B = np.sin(np.multiply.outer(self.nodes, _wavenumbers(modes)))
		G = B.T @ (self.weights[:,None] * B)
		return float(np.max(np.abs(G - np.eye(modes))))

	def synthesize(self, coeffs:np.ndarray) -> np.ndarray:
		'''
		Coefficients (..., M) → samples at the nodes (..., order).
		'''
		return np.asarray(coeffs, dtype=np.double) @ self._sin.T

	def synthesize_derivative(self, coeffs:np.ndarray) -> np.ndarray:
		''' Coefficients (..., M) → samples of u′ at the nodes. '''
		coeffs = np.asarray(coeffs, dtype=np.double)
		return (coeffs * _wavenumbers(self.capacity)) @ self._cos.T

	def analyze(self, samples:np.ndarray) -> np.ndarray:
		'''
		Samples at the nodes (..., order) → L² inner products with φ₁..φ_M (..., M).
		'''
		samples = np.asarray(samples, dtype=np.double)
		return (samples * self.weights) @ self._sin

	def inner(self, f:np.ndarray, g:np.ndarray) -> np.ndarray:
		''' Quadrature of f·g over (-1,1) for sample arrays (last axis = nodes). '''
		return np.sum(self.weights * np.asarray(f) * np.asarray(g), axis=-1)

	@property
	def sine_samples(self) -> np.ndarray:
		''' φₖ at the nodes, shape (order, M). '''
		return self._sin

	@property
	def sine_derivative_samples(self) -> np.ndarray:
		''' φₖ′ = kπ cos(kπx) at the nodes, shape (order, M). '''
		return self._cos * _wavenumbers(self.capacity)

@lru_cache(maxsize=32)
def quadrature_grid(capacity:int, order:Optional[int]=None) -> QuadratureGrid:
	'''
	Return a (cached) :py:class:`QuadratureGrid`; grids are read-only and safe to share.
	'''
	return QuadratureGrid(capacity=capacity, order=order)

# -------------------------------------------------------------------
# projections
# -------------------------------------------------------------------

def project_Q(u:Union[ModalVector,Callable,np.ndarray], n:int, capacity:int=None) -> ModalVector:
	'''
	The projection Qₙ onto span{φ₁..φₙ}: Σ_{k≤n} (u, φₖ) φₖ.

	``u`` is either a :py:class:`ModalVector` (coefficients beyond n are set to zero) or a
	function of x; a function is sampled on a Gauss–Legendre grid and its
	L² inner products with the sine modes are taken by quadrature.

	:param u: a modal vector, a coefficient array, or a callable f(x) accepting arrays
	:param n: projection order, n ≥ 1
	:param capacity: capacity of the returned vector when ``u`` is a function (default n)
	:returns: the projection, with the capacity of ``u`` (or ``capacity``)
	'''
	n = _check_index("n", n)

	if callable(u) and not isinstance(u, ModalVector):
		capacity = n if capacity is None else _check_index("capacity", capacity)
		if n > capacity:
			raise CapacityError(f"The projection order n={n} exceeds the capacity ({capacity}).")
		grid = quadrature_grid(capacity)
		coeffs = grid.analyze(np.asarray(u(grid.nodes), dtype=np.double))
	else:
		if not isinstance(u, ModalVector):
			u = ModalVector(u)
		coeffs = np.array(u.coeffs)
		if n > u.capacity:
			raise CapacityError(f"The projection order n={n} exceeds the capacity ({u.capacity}).")

	coeffs[n:] = 0.
	return ModalVector(coeffs)

def project_P(trajectory:Union[Sequence[ModalVector],np.ndarray], n:int) -> Union[List[ModalVector],np.ndarray]:
	'''
	The projection Pₙ of a time-indexed family onto 𝒫ₙ, i.e. Qₙ applied at every time.

	:param trajectory: a sequence of :py:class:`ModalVector` or an array of shape (..., M)
	:param n: projection order
	:returns: same kind of object as given
	'''
	n = _check_index("n", n)

	if isinstance(trajectory, np.ndarray):
		if trajectory.size == 0:
			raise ValueError("Cannot project an empty trajectory.")
		if n > trajectory.shape[-1]:
			raise CapacityError(f"The projection order n={n} exceeds the capacity ({trajectory.shape[-1]}).")
		out = np.array(trajectory, dtype=np.double)
		out[..., n:] = 0.
		return out

	samples = list(trajectory)
	if len(samples) == 0:
		raise ValueError("Cannot project an empty trajectory.")
	capacities = set(s.capacity for s in samples)
	if len(capacities) != 1:
		raise CapacityError(f"All samples of a trajectory must share one capacity; found {sorted(capacities)}.")
	return [project_Q(s, n) for s in samples]

# -------------------------------------------------------------------
# n-widths
# -------------------------------------------------------------------

def n_width(b:float, n:int, params:PhysicalParams) -> float:
	'''
	L² n-width of the H¹₀ ball of radius b: dₙ = b / ((n+1)π√κ).

	The width is attained by the subspace span{φ₁..φₙ}.
	'''
	b = _check_positive("b", b)
	n = _check_index("n", n)
	return b / ((n + 1) * math.pi * math.sqrt(params.kappa))

def extremal_element(b:float, n:int, params:PhysicalParams, capacity:int=None) -> ModalVector:
	'''
	The element (b/(√κ(n+1)π)) φₙ₊₁ of H¹₀ norm b whose distance to span{φ₁..φₙ} is dₙ.

	:param capacity: capacity of the returned vector (default n+1)
	'''
	n = _check_index("n", n)
	capacity = n + 1 if capacity is None else capacity
	return ModalVector.basis(n + 1, capacity, scale=n_width(b, n, params))

@dataclass(frozen=True)
class ProjectionErrorReport:
	'''
	Result of :py:func:`projection_error_bound_check`.
	'''
	n: int
	bound: float
	h1_norm: float
	error: float
	width: float

	@property
	def slack(self) -> float:
		return self.width - self.error

	@property
	def passed(self) -> bool:
		return self.error <= self.width + 1e-12

	def to_dict(self):
		return {"n": self.n, "bound": self.bound, "h1_norm": self.h1_norm,
				"error": self.error, "width": self.width, "slack": self.slack, "passed": self.passed}

def projection_error_bound_check(h:ModalVector, b:float, n:int, params:PhysicalParams) -> ProjectionErrorReport:
	'''
	Measure ‖Qₙh - h‖_L2 for an element of the H¹₀ ball of radius b and check it against dₙ.

	:raises PreconditionError: if ‖h‖_H10 > b
	:raises PropertyViolationError: if the error exceeds the n-width (cannot happen in exact arithmetic)
	'''
	b = _check_positive("b", b)
	n = _check_index("n", n)
	if n > h.capacity:
		raise CapacityError(f"The projection order n={n} exceeds the capacity ({h.capacity}).")

	norm = h.h1_norm(params)
	if norm > b * (1. + 1e-12):
		raise PreconditionError(f"The element has H¹₀ norm {norm:.6g}, outside the ball of radius {b:.6g}.", measured=norm, bound=b)

	error = float(l2_norm(h.coeffs[n:]))
	report = ProjectionErrorReport(n=n, bound=b, h1_norm=norm, error=error, width=n_width(b, n, params))
	if not report.passed:
		raise PropertyViolationError(f"The projection error {error:.6g} exceeds the n-width {report.width:.6g}.", report=report)
	return report
