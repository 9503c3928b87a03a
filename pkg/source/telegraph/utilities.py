
'''
Note:

This file contains helpers used for calculations in this package.
They are not intended to be general purpose.
'''

import math
import numbers
from typing import Union

import numpy as np

def _as_coeff_array(values, name:str="coeffs") -> np.ndarray:
	'''
	Convert a list or array of coefficients to a 1-D float64 array (always a copy).

	:param values: sequence of real numbers
	:param name: parameter name used in error messages
	'''
	arr = np.array(values, dtype=np.double, copy=True)
	if arr.ndim != 1:
		raise ValueError(f"The '{name}' values must be a one-dimensional sequence; was given shape {arr.shape}.")
	if not np.all(np.isfinite(arr)):
		raise ValueError(f"The '{name}' values must be finite.")
	return arr

def _check_positive(name:str, value:Union[int,float]) -> float:
	'''
	Return ``value`` as a float, raising ValueError unless it is a finite number > 0.
	'''
	if not isinstance(value, numbers.Real) or isinstance(value, bool):
		raise ValueError(f"The value for '{name}' must be a real number; was given '{value}'.")
	value = float(value)
	if not (math.isfinite(value) and value > 0):
		raise ValueError(f"The value for '{name}' must be > 0; was given '{value}'.")
	return value

def _check_index(name:str, value, minimum:int=1) -> int:
	'''
	Return ``value`` as an int, raising ValueError unless it is an integer ≥ minimum.
	'''
	if isinstance(value, bool) or not isinstance(value, numbers.Integral):
		# allow 4.0 but not 4.5
		if isinstance(value, numbers.Real) and float(value) % 1 == 0:
			value = int(value)
		else:
			raise ValueError(f"The value '{name}' must be an integer; was given '{value}'.")
	value = int(value)
	if value < minimum:
		raise ValueError(f"The value '{name}' must be ≥ {minimum}; was given '{value}'.")
	return value

def _wavenumbers(capacity:int) -> np.ndarray:
	'''
	Return kπ for k = 1..capacity.
	'''
	return math.pi * np.arange(1, capacity+1, dtype=np.double)

def _lagrange_basis(nodes:np.ndarray, x:np.ndarray) -> np.ndarray:
	'''
	Evaluate the Lagrange basis polynomials defined on ``nodes`` at the points ``x``.

	:param nodes: distinct interpolation nodes, shape (q,)
	:param x: evaluation points, any shape
	:returns: array of shape x.shape + (q,) where [..., m] is the m-th basis polynomial
	'''
	nodes = np.asarray(nodes, dtype=np.double)
	x = np.asarray(x, dtype=np.double)
	q = len(nodes)
	basis = np.ones(x.shape + (q,), dtype=np.double)
	for m in range(q):
		for l in range(q):
			if l != m:
				basis[..., m] *= (x - nodes[l]) / (nodes[m] - nodes[l])
	return basis

def _pad_modes(coeffs:np.ndarray, capacity:int) -> np.ndarray:
	'''
	Zero-pad (or check) the last axis of a coefficient array to ``capacity`` modes.
	'''
	coeffs = np.asarray(coeffs, dtype=np.double)
	extra = capacity - coeffs.shape[-1]
	if extra < 0:
		raise ValueError(f"Cannot pad {coeffs.shape[-1]} modes down to {capacity}.")
	if extra == 0:
		return coeffs
	pad = [(0, 0)] * (coeffs.ndim - 1) + [(0, extra)]
	return np.pad(coeffs, pad)
