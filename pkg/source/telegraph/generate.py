import math
from typing import Callable

import numpy as np

from .spectral import PhysicalParams, ModalVector, StateVector
from .utilities import _check_index, _check_positive, _wavenumbers

def _rng(seed) -> np.random.Generator:
	if isinstance(seed, np.random.Generator):
		return seed
	return np.random.default_rng(seed)

def random_modal_vector(capacity:int, seed=None, decay:float=1.0) -> ModalVector:
	'''
	A random modal vector with coefficients aₖ ~ N(0, 1)/k^decay.

	The same vector is returned for the same ``seed``; ``seed`` may also be a numpy Generator.

	:param capacity: number of modes
	:param seed: integer seed or ``numpy.random.Generator``
	:param decay: algebraic decay of the coefficient standard deviation
	'''
	capacity = _check_index("capacity", capacity)
	k = np.arange(1, capacity+1, dtype=np.double)
	return ModalVector(_rng(seed).standard_normal(capacity) / k**decay)

def random_state(capacity:int, seed=None, decay:float=1.0) -> StateVector:
	''' A random state (u, v), both components from :py:func:`random_modal_vector`. '''
	rng = _rng(seed)
	return StateVector(random_modal_vector(capacity, rng, decay), random_modal_vector(capacity, rng, decay))

def random_sphere_element(radius:float, capacity:int, params:PhysicalParams, seed=None, norm:str="du") -> ModalVector:
	'''
	A random element with ‖u‖ = radius, in the D(U) norm (``norm="du"``) or the H¹₀ norm (``norm="h1"``).

	The direction is uniform with respect to the chosen norm.
	'''
	radius = _check_positive("radius", radius)
	capacity = _check_index("capacity", capacity)
	k = _wavenumbers(capacity)
	if norm == "du":
		weights = np.sqrt(k**4 + params.kappa * k**2)
	elif norm == "h1":
		weights = np.sqrt(params.kappa) * k
	else:
		raise ValueError(f"The norm must be 'du' or 'h1'; was given '{norm}'.")
	y = _rng(seed).standard_normal(capacity)
	return ModalVector(radius * (y / np.linalg.norm(y)) / weights)

def random_ball_element(radius:float, capacity:int, params:PhysicalParams, seed=None, norm:str="h1") -> ModalVector:
	'''
	A random element of the ball of the given radius (H¹₀ norm by default).

	The norm is radius·U^(1/capacity) with U uniform, i.e. uniform in the ball volume.
	'''
	rng = _rng(seed)
	capacity = _check_index("capacity", capacity)
	scale = rng.uniform() ** (1. / capacity)
	return random_sphere_element(radius, capacity, params, rng, norm) * scale

def random_ball_path(radius:float, n:int, capacity:int, params:PhysicalParams, seed=None) -> Callable[[np.ndarray], np.ndarray]:
	'''
	A random smooth path z(t) = r·cos(2πft + φ)·e with e a unit H¹₀ vector in span{φ₁..φₙ},
	0 ≤ r ≤ radius, so that ‖z(t)‖_H10 ≤ radius for all t.

	:returns: a function mapping an array of times (N,) to coefficients (N, capacity)
	'''
	rng = _rng(seed)
	n = _check_index("n", n)
	capacity = _check_index("capacity", capacity)
	if n > capacity:
		raise ValueError(f"The projection order n={n} exceeds the capacity ({capacity}).")
	e = np.zeros(capacity)
	e[:n] = random_sphere_element(1., n, params, rng, norm="h1").coeffs
	r = radius * rng.uniform()
	f = rng.uniform(0., 2.)
	phase = rng.uniform(0., 2. * math.pi)

	def path(times):
		times = np.asarray(times, dtype=np.double)
		return np.multiply.outer(r * np.cos(2. * math.pi * f * times + phase), e)
	return path
