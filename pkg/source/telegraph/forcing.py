
'''
Forcing operators F, constraint operators G and explicit drive terms.

A forcing operator maps a displacement u (sine coefficients) to F(u), again in
sine coefficients, with F(0) = 0. It also reports a local bound c(C) with

	‖F(u)‖_H10 ≤ c(C)  whenever  ‖u‖_D(U) ≤ C.

Built-in forcings:

	.. code-block::

		monomial   F(u) = a·u^p            (pointwise, pseudo-spectral)
		sinh       F(u) = a·sinh(u)        (pointwise, pseudo-spectral)
		linear     F(u) = s·u
		bvp        F(u) = w with -w″ + w = u, w(±1) = 0

Note that an even function f of an odd function u is even, so for even f
(e.g. f(s) = s²) the projection of f(u) onto the sine modes vanishes identically.
'''

import abc
import math
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import CapacityError, ConfigurationError
from .spectral import (PhysicalParams, ModalVector, QuadratureGrid, default_quadrature_order,
					   quadrature_grid, h1_norm, l2_norm)
from .utilities import _as_coeff_array, _check_index, _check_positive, _pad_modes, _wavenumbers

logger = logging.getLogger("telegraph_logger")

def _h1_radius(radius:float, params:PhysicalParams) -> float:
	'''
	Largest H¹₀ norm of an element of the D(U) ball of the given radius: C·√(κ/(π²+κ)).
	'''
	return radius * math.sqrt(params.kappa / (math.pi**2 + params.kappa))

def sup_norm_bound(h1:float, params:PhysicalParams) -> float:
	'''
	Embedding constant on I = (-1,1): ‖u‖_∞ ≤ ‖u‖_H10 / √(2κ) for u ∈ H¹₀(I).
	'''
	return h1 / math.sqrt(2. * params.kappa)

class ForcingOperator(abc.ABC):
	'''
	Abstract forcing operator acting on sine coefficient arrays.

	Subclasses implement :py:meth:`apply` (batched over leading axes) and :py:meth:`local_bound`.
	'''
	name = "abstract"
	#: polynomial degree used to choose the quadrature order for nonlinear evaluation
	dealias_degree = 1

	def __repr__(self):
		params = ", ".join(f"{k}={v}" for k, v in self.descriptor.items() if k != "name")
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, {params}>"

	@abc.abstractmethod
	def apply(self, coeffs:np.ndarray) -> np.ndarray:
		'''
		Apply F to coefficient arrays of shape (..., M); returns the same shape.
		'''
		pass

	@abc.abstractmethod
	def local_bound(self, radius:float, params:PhysicalParams) -> float:
		'''
		Return c(C) such that ‖F(u)‖_H10 ≤ c(C) whenever ‖u‖_D(U) ≤ C.
		'''
		pass

	@property
	@abc.abstractmethod
	def descriptor(self) -> Dict[str, Any]:
		''' Name and parameters, as used in scenario configuration files. '''
		pass

	def evaluate(self, u:ModalVector) -> ModalVector:
		''' F(u) for a single modal vector. '''
		return ModalVector(self.apply(u.coeffs))

	def __call__(self, u:ModalVector) -> ModalVector:
		return self.evaluate(u)

	def samples(self, coeffs:np.ndarray, grid:QuadratureGrid) -> np.ndarray:
		'''
		Values of F(u) at the nodes of ``grid`` (grid capacity ≥ number of modes of u).
		'''
		return grid.synthesize(_pad_modes(self.apply(coeffs), grid.capacity))

class PointwiseForcing(ForcingOperator):
	'''
	F(u)(x) = f(u(x)) for a smooth scalar function f with f(0) = 0.

	Evaluation is pseudo-spectral: u is synthesized on Gauss–Legendre nodes, f is applied
	to the samples and the result is projected back onto the sine modes. The number of
	nodes grows with ``dealias_degree`` so that the projection of a polynomial f of that
	degree is exact to roundoff.

	:param function: vectorised f
	:param derivative: vectorised f′, used for the local bound (sampled by finite differences when omitted)
	:param dealias_degree: polynomial degree used to choose the quadrature order
	:param bound: optional override for c(C), a number or a callable (radius, params) → number
	:param name: name used in the descriptor
	'''
	name = "pointwise"

	def __init__(self, function:Callable, derivative:Optional[Callable]=None, dealias_degree:int=3,
				 bound:Union[None,float,Callable]=None, name:str=None):
		self.function = function
		self.derivative = derivative
		self.dealias_degree = _check_index("dealias_degree", dealias_degree)
		self._bound = bound
		if name is not None:
			self.name = name
		f0 = float(np.asarray(function(np.zeros(1)))[0])
		if abs(f0) > 1e-14:
			raise ValueError(f"A forcing function must satisfy f(0) = 0; f(0) = {f0}.")

	@property
	def descriptor(self):
		return {"name": self.name, "dealias_degree": self.dealias_degree}

	def grid_for(self, capacity:int) -> QuadratureGrid:
		''' The (cached) quadrature grid used for a given capacity. '''
		return quadrature_grid(capacity, default_quadrature_order(capacity, self.dealias_degree))

	def apply(self, coeffs):
		coeffs = np.asarray(coeffs, dtype=np.double)
		grid = self.grid_for(coeffs.shape[-1])
		return grid.analyze(self.function(grid.synthesize(coeffs)))

	def samples(self, coeffs, grid):
		return self.function(grid.synthesize(_pad_modes(coeffs, grid.capacity)))

	def derivative_sup(self, rho:float) -> float:
		'''
		sup |f′(s)| over |s| ≤ rho.
		'''
		s = np.linspace(-rho, rho, 2001)
		if self.derivative is not None:
			return float(np.max(np.abs(self.derivative(s))))
		return float(np.max(np.abs(np.gradient(self.function(s), s))))

	def local_bound(self, radius, params):
		'''
		c(C) = r·sup_{|s|≤ρ}|f′(s)| with r = C·√(κ/(π²+κ)) the H¹₀ radius of the D(U) ball
		and ρ = r/√(2κ) the resulting bound on ‖u‖_∞. Uses ‖f(u)‖_H10 = √κ‖f′(u)u′‖_L2.
		'''
		radius = _check_positive("radius", radius)
		if self._bound is not None:
			return float(self._bound(radius, params)) if callable(self._bound) else float(self._bound)
		r = _h1_radius(radius, params)
		return r * self.derivative_sup(sup_norm_bound(r, params))

class MonomialForcing(PointwiseForcing):
	'''
	F(u) = coefficient · u^degree.
	'''
	name = "monomial"

	def __init__(self, degree:int=2, coefficient:float=1.0, bound=None):
		self.degree = _check_index("degree", degree)
		self.coefficient = float(coefficient)
		p = self.degree
		a = self.coefficient
		super().__init__(lambda s: a * s**p, lambda s: a * p * s**(p - 1),
						 dealias_degree=p, bound=bound)

	@property
	def descriptor(self):
		return {"name": self.name, "degree": self.degree, "coefficient": self.coefficient}

	def derivative_sup(self, rho):
		return self.degree * abs(self.coefficient) * rho**(self.degree - 1)

class SinhForcing(PointwiseForcing):
	'''
	F(u) = coefficient · sinh(u).
	'''
	name = "sinh"

	def __init__(self, coefficient:float=1.0, dealias_degree:int=7, bound=None):
		self.coefficient = float(coefficient)
		a = self.coefficient
		super().__init__(lambda s: a * np.sinh(s), lambda s: a * np.cosh(s),
						 dealias_degree=dealias_degree, bound=bound)

	@property
	def descriptor(self):
		return {"name": self.name, "coefficient": self.coefficient, "dealias_degree": self.dealias_degree}

	def derivative_sup(self, rho):
		return abs(self.coefficient) * math.cosh(rho)

class LinearForcing(ForcingOperator):
	'''
	F(u) = scale · u.
	'''
	name = "linear"

	def __init__(self, scale:float=1.0):
		self.scale = float(scale)

	@property
	def descriptor(self):
		return {"name": self.name, "scale": self.scale}

	def apply(self, coeffs):
		return self.scale * np.asarray(coeffs, dtype=np.double)

	def local_bound(self, radius, params):
		''' c(C) = |s|·C·√(κ/(π²+κ)). '''
		return abs(self.scale) * _h1_radius(_check_positive("radius", radius), params)

class BVPCompositionForcing(ForcingOperator):
	'''
	F(u) = w where -w″ + w = u on I with w(±1) = 0.

	The operator is diagonal in the sine basis: wₖ = uₖ/(k²π² + 1).
	'''
	name = "bvp"

	@property
	def descriptor(self):
		return {"name": self.name}

	def apply(self, coeffs):
		coeffs = np.asarray(coeffs, dtype=np.double)
		return coeffs / (_wavenumbers(coeffs.shape[-1])**2 + 1.)

	def local_bound(self, radius, params):
		''' c(C) = C·√(κ/((π²+1)²(π²+κ))); the mode-1 factor is the largest. '''
		radius = _check_positive("radius", radius)
		return radius * math.sqrt(params.kappa / ((math.pi**2 + 1.)**2 * (math.pi**2 + params.kappa)))

FORCINGS = {
	"monomial": MonomialForcing,
	"sinh": SinhForcing,
	"linear": LinearForcing,
	"bvp": BVPCompositionForcing,
}

def forcing_from_descriptor(descriptor:Dict[str, Any]) -> ForcingOperator:
	'''
	Create a forcing operator from its descriptor, e.g. ``{"name": "monomial", "degree": 3}``.
	'''
	d = dict(descriptor)
	name = d.pop("name", None)
	if name not in FORCINGS:
		raise ConfigurationError(f"Unknown forcing '{name}'; expected one of {sorted(FORCINGS)}.")
	try:
		return FORCINGS[name](**d)
	except TypeError as e:
		raise ConfigurationError(f"Invalid parameters for forcing '{name}': {e}")
	except ValueError as e:
		raise ConfigurationError(f"Invalid parameters for forcing '{name}': {e}")

def pointwise_forcing(f_symbol:Union[str,tuple,Callable,PointwiseForcing], u:ModalVector) -> ModalVector:
	'''
	The modal representation of x ↦ f(u(x)).

	:param f_symbol: "sinh", ("monomial", p), a :py:class:`PointwiseForcing`, or a vectorised callable with f(0) = 0
	:param u: the displacement
	'''
	if isinstance(f_symbol, PointwiseForcing):
		forcing = f_symbol
	elif isinstance(f_symbol, str) and f_symbol == "sinh":
		forcing = SinhForcing()
	elif isinstance(f_symbol, tuple) and len(f_symbol) == 2 and f_symbol[0] == "monomial":
		forcing = MonomialForcing(degree=f_symbol[1])
	elif callable(f_symbol):
		forcing = PointwiseForcing(f_symbol)
	else:
		raise ValueError(f"Unrecognised pointwise function '{f_symbol}'.")
	return forcing.evaluate(u)

def bvp_composition_forcing(u:ModalVector) -> ModalVector:
	''' Solve -w″ + w = u, w(±1) = 0 mode by mode. '''
	return BVPCompositionForcing().evaluate(u)

# -------------------------------------------------------------------
# closure property
# -------------------------------------------------------------------

@dataclass
class ClosureReport:
	'''
	Result of :py:func:`closure_property_check`.

	``status`` is "passed", "failed" or "not applicable" (the input sequence does not converge).
	``rate`` is the least-squares slope of log(output error) against log(input H¹₀ error);
	it is None when fewer than two nonzero errors are available.
	'''
	status: str
	input_l2_errors: List[float]
	input_h1_errors: List[float]
	output_l2_errors: List[float]
	output_h1_norms: List[float]
	rate: Optional[float] = None

	@property
	def passed(self) -> bool:
		return self.status == "passed"

	def to_dict(self):
		return {"status": self.status, "input_l2_errors": self.input_l2_errors,
				"input_h1_errors": self.input_h1_errors, "output_l2_errors": self.output_l2_errors,
				"output_h1_norms": self.output_h1_norms, "rate": self.rate}

def closure_property_check(F:ForcingOperator, u_seq:Sequence[ModalVector], params:PhysicalParams,
						   limit:Optional[ModalVector]=None, atol:float=1e-12) -> ClosureReport:
	'''
	Check that F(uₖ) → F(u) in L² along a sequence uₖ → u in H¹₀, and that the
	H¹₀ norms of F(uₖ) stay bounded.

	:param F: the forcing operator
	:param u_seq: the sequence (at least two elements, one capacity)
	:param params: physical constants (for the H¹₀ norm)
	:param limit: the limit u; the last element of the sequence is used when omitted
	:param atol: errors below this are treated as zero
	'''
	u_seq = list(u_seq)
	if limit is None:
		if len(u_seq) < 2:
			raise ValueError("A closure check without an explicit limit needs at least two sequence elements.")
		limit = u_seq[-1]
		u_seq = u_seq[:-1]
	if len(u_seq) == 0:
		raise ValueError("The sequence for the closure check is empty.")
	capacities = set(u.capacity for u in u_seq) | {limit.capacity}
	if len(capacities) != 1:
		raise CapacityError(f"All sequence elements must share one capacity; found {sorted(capacities)}.")

	U = np.array([u.coeffs for u in u_seq])
	diff = U - limit.coeffs
	in_l2 = l2_norm(diff)
	in_h1 = h1_norm(diff, params)

	# per vector: equal inputs give bitwise equal outputs
	FU = np.array([F.apply(u) for u in U])
	FL = F.apply(limit.coeffs)
	out_l2 = l2_norm(FU - FL)
	out_h1 = h1_norm(FU, params)

	report = ClosureReport(status="passed", input_l2_errors=in_l2.tolist(), input_h1_errors=in_h1.tolist(),
						   output_l2_errors=out_l2.tolist(), output_h1_norms=out_h1.tolist())

	converging = in_h1[-1] <= atol or in_h1[-1] < in_h1[0]
	if not converging:
		report.status = "not applicable"
		return report

	mask = (in_h1 > atol) & (out_l2 > atol)
	if np.count_nonzero(mask) >= 2:
		report.rate = float(np.polyfit(np.log(in_h1[mask]), np.log(out_l2[mask]), 1)[0])

	if not np.all(np.isfinite(out_h1)):
		report.status = "failed"
	elif out_l2[-1] > atol and not (out_l2[-1] < out_l2[0] and (report.rate is None or report.rate > 0)):
		report.status = "failed"
	return report

# -------------------------------------------------------------------
# constraint operators
# -------------------------------------------------------------------

class ConstraintInf(NamedTuple):
	'''
	Infimum of G(u) over I: the smallest sample, a certified lower bound
	for the true infimum, and the location of the smallest sample.
	'''
	inf_value: float
	certified_lower_bound: float
	location: float

class ConstraintOperator(abc.ABC):
	'''
	Abstract constraint operator G: the admissibility condition is inf_I G(u) > 0.
	'''
	name = "abstract"

	def __repr__(self):
		params = ", ".join(f"{k}={v}" for k, v in self.descriptor.items() if k != "name")
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, {params}>"

	@abc.abstractmethod
	def evaluate_inf(self, u:ModalVector) -> ConstraintInf:
		pass

	@property
	@abc.abstractmethod
	def descriptor(self) -> Dict[str, Any]:
		pass

	def at_zero(self, capacity:int=1) -> ConstraintInf:
		''' inf_I G(0). '''
		return self.evaluate_inf(ModalVector.zeros(capacity))

class AffineConstraint(ConstraintOperator):
	'''
	G(u) = offset + scale·u; the default is G(u) = 1 + u.

	The infimum is sampled on ``samples`` equally spaced points of [-1, 1]. With
	L = |scale|·Σ|aₖ|kπ ≥ sup|G(u)′| and spacing h, min(samples) - h·L is a rigorous
	lower bound. It is refined by bisecting every cell whose Lipschitz lower bound
	(g_left + g_right)/2 - L·width/2 lies more than ``tolerance`` below the smallest
	sample found so far.

	:param offset: constant term
	:param scale: multiplier of u
	:param samples: number of uniform samples (≥ 2)
	:param tolerance: target gap between the certified bound and the smallest sample
	:param max_cells: cap on the number of bisected cells
	'''
	name = "affine"

	def __init__(self, offset:float=1.0, scale:float=1.0, samples:int=1025, tolerance:float=1e-9, max_cells:int=2**20):
		self.offset = float(offset)
		self.scale = float(scale)
		self.samples = _check_index("samples", samples, minimum=2)
		self.tolerance = _check_positive("tolerance", tolerance)
		self.max_cells = _check_index("max_cells", max_cells)

	@property
	def descriptor(self):
		return {"name": self.name, "offset": self.offset, "scale": self.scale,
				"samples": self.samples, "tolerance": self.tolerance}

	def evaluate(self, u:ModalVector, x) -> np.ndarray:
		''' G(u) at the points ``x``. '''
		return self.offset + self.scale * u.evaluate(x)

	def evaluate_inf(self, u:ModalVector) -> ConstraintInf:
		x = np.linspace(-1., 1., self.samples)
		g = self.evaluate(u, x)
		h = x[1] - x[0]
		L = abs(self.scale) * u.lipschitz_bound()

		i = int(np.argmin(g))
		best = float(g[i])
		location = float(x[i])
		fill_in = best - h * L

		# branch and bound over the sampling cells
		a, b = x[:-1], x[1:]
		ga, gb = g[:-1], g[1:]
		certified = best
		evaluated = 0
		while len(a) > 0:
			lower = 0.5 * (ga + gb) - 0.5 * L * (b - a)
			settled = lower >= best - self.tolerance
			if np.any(settled):
				certified = min(certified, float(np.min(lower[settled])))
			a, b, ga, gb = a[~settled], b[~settled], ga[~settled], gb[~settled]
			if len(a) == 0:
				break
			if evaluated + len(a) > self.max_cells:
				certified = min(certified, float(np.min(0.5 * (ga + gb) - 0.5 * L * (b - a))))
				logger.debug(f"constraint_inf: bisection stopped after {evaluated} cells")
				break

			m = 0.5 * (a + b)
			gm = self.evaluate(u, m)
			evaluated += len(a)
			j = int(np.argmin(gm))
			if gm[j] < best:
				best = float(gm[j])
				location = float(m[j])
			a, b = np.concatenate((a, m)), np.concatenate((m, b))
			ga, gb = np.concatenate((ga, gm)), np.concatenate((gm, gb))

		certified = min(max(fill_in, certified), best)
		return ConstraintInf(inf_value=best, certified_lower_bound=certified, location=location)

CONSTRAINTS = {
	"affine": AffineConstraint,
}

def constraint_from_descriptor(descriptor:Dict[str, Any]) -> ConstraintOperator:
	''' Create a constraint operator from its descriptor. '''
	d = dict(descriptor)
	name = d.pop("name", None)
	if name not in CONSTRAINTS:
		raise ConfigurationError(f"Unknown constraint '{name}'; expected one of {sorted(CONSTRAINTS)}.")
	try:
		return CONSTRAINTS[name](**d)
	except (TypeError, ValueError) as e:
		raise ConfigurationError(f"Invalid parameters for constraint '{name}': {e}")

def constraint_inf(G:ConstraintOperator, u:ModalVector) -> ConstraintInf:
	'''
	Return (inf_value, certified_lower_bound, location) for inf_I G(u).
	'''
	return G.evaluate_inf(u)

# -------------------------------------------------------------------
# drive terms
# -------------------------------------------------------------------

def _modes_to_array(modes:Union[Dict,Sequence[float],np.ndarray]) -> np.ndarray:
	''' {"1": 0.01, "3": 0.2} or a list of coefficients → coefficient array. '''
	if isinstance(modes, dict):
		if len(modes) == 0:
			raise ValueError("A drive needs at least one mode.")
		indices = {_check_index("mode", int(k) if isinstance(k, str) and k.isdigit() else k): float(v) for k, v in modes.items()}
		arr = np.zeros(max(indices), dtype=np.double)
		for k, v in indices.items():
			arr[k-1] = v
		return arr
	return _as_coeff_array(modes, "modes")

class DriveTerm:
	'''
	An explicit source g(t) added to the velocity equation: u_tt = ... + g(t).

	:param function: t ↦ coefficient array (length = number of drive modes)
	:param modes: number of drive modes
	:param descriptor: configuration descriptor
	'''
	def __init__(self, function:Callable[[float], np.ndarray], modes:int, descriptor:Dict[str, Any]=None):
		self.function = function
		self.modes = _check_index("modes", modes)
		self.descriptor = descriptor or {"name": "custom"}

	def __repr__(self):
		return f"<{self.__class__.__module__.split('.')[0]}.{self.__class__.__name__} at {hex(id(self))}, name={self.descriptor.get('name')}, modes={self.modes}>"

	@classmethod
	def constant(cls, modes) -> 'DriveTerm':
		''' g(t) = Σ gₖ φₖ, independent of t. '''
		coeffs = _modes_to_array(modes)
		coeffs.flags.writeable = False
		return cls(lambda t: coeffs, len(coeffs),
				   {"name": "constant", "modes": {str(k+1): float(c) for k, c in enumerate(coeffs) if c != 0}})

	@classmethod
	def harmonic(cls, modes, frequency:float=1.0, phase:float=0.0) -> 'DriveTerm':
		''' g(t) = cos(frequency·t + phase) Σ gₖ φₖ (frequency in radians per unit time). '''
		coeffs = _modes_to_array(modes)
		frequency = float(frequency)
		phase = float(phase)
		return cls(lambda t: math.cos(frequency * t + phase) * coeffs, len(coeffs),
				   {"name": "harmonic", "modes": {str(k+1): float(c) for k, c in enumerate(coeffs) if c != 0},
					"frequency": frequency, "phase": phase})

	def sample(self, times, capacity:int) -> np.ndarray:
		'''
		Drive coefficients at the given times as an array of shape (len(times), capacity).

		:raises CapacityError: if a nonzero drive mode does not fit the capacity
		'''
		times = np.atleast_1d(np.asarray(times, dtype=np.double))
		values = np.array([np.asarray(self.function(t), dtype=np.double) for t in times])
		if values.shape[-1] > capacity:
			if np.any(values[:, capacity:] != 0):
				raise CapacityError(f"The drive excites mode {self.modes}, beyond the capacity ({capacity}).")
			values = values[:, :capacity]
		if not np.all(np.isfinite(values)):
			raise ValueError("The drive produced non-finite values.")
		return _pad_modes(values, capacity)

def drive_from_descriptor(descriptor:Optional[Dict[str, Any]]) -> Optional[DriveTerm]:
	'''
	Create a drive term from its descriptor; {"name": "none"} (or None) means no drive.
	'''
	if descriptor is None:
		return None
	d = dict(descriptor)
	name = d.pop("name", None)
	try:
		if name == "none":
			if len(d) > 0:
				raise ValueError(f"unexpected keys {sorted(d)}")
			return None
		elif name == "constant":
			return DriveTerm.constant(**d)
		elif name == "harmonic":
			return DriveTerm.harmonic(**d)
	except (TypeError, ValueError) as e:
		raise ConfigurationError(f"Invalid parameters for drive '{name}': {e}")
	raise ConfigurationError(f"Unknown drive '{name}'; expected one of ['constant', 'harmonic', 'none'].")
