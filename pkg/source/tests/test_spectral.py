
import math

import numpy as np
import pytest
import scipy.fft
from numpy.testing import assert_allclose
from hypothesis import given, settings, strategies as st

import telegraph
from telegraph import (CapacityError, ConfigurationError, ModalVector, PhysicalParams, PreconditionError,
					   StateVector)
from telegraph.spectral import (QuadratureGrid, default_quadrature_order, extremal_element, n_width, project_P,
								project_Q, projection_error_bound_check, quadrature_grid)
from telegraph.generate import random_ball_element, random_modal_vector

UNIT = PhysicalParams(nu=1., kappa=1.)

def _dst_coefficients(f, capacity, N=256):
	'''
	Sine coefficients of an odd function with a smooth 2-periodic extension,
	from a type-I DST of its samples on (0, 1).
	'''
	x = np.arange(1, N) / N
	return scipy.fft.dst(f(x), type=1)[:capacity] / N

@pytest.mark.parametrize("nu, kappa", [(0., 1.), (1., 0.), (-1., 1.), (math.inf, 1.), (math.nan, 1.)])
def test_physical_params_rejects(nu, kappa):
	'''
	ν and κ must be finite and strictly positive.
	'''
	with pytest.raises(ValueError):
		PhysicalParams(nu=nu, kappa=kappa)

def test_norms_of_the_first_mode():
	'''
	φ₁ has ‖φ₁‖_L2 = 1, ‖φ₁‖_H10 = π√κ and ‖φ₁‖_D(U) = √(π⁴ + κπ²).
	'''
	params = PhysicalParams(nu=1., kappa=2.)
	u = ModalVector.basis(1, 4)
	assert_allclose(u.l2_norm(), 1., rtol=1e-15)
	assert_allclose(u.h1_norm(params), math.pi * math.sqrt(2.), rtol=1e-15)
	assert_allclose(u.du_norm(params), math.sqrt(math.pi**4 + 2. * math.pi**2), rtol=1e-15)

def test_norms_of_a_combination():
	'''
	With κ = 2 and coefficients (1, 2, 3): ‖u‖²_H10 = 2π²(1 + 16 + 81), so ‖u‖_H10 = 14π.
	'''
	params = PhysicalParams(nu=1., kappa=2.)
	u = ModalVector([1., 2., 3.])
	assert_allclose(u.l2_norm(), math.sqrt(14.), rtol=1e-15)
	assert_allclose(u.h1_norm(params), 14. * math.pi, rtol=1e-14)

@pytest.mark.parametrize("capacity", [4, 16, 64])
def test_norms_match_quadrature(capacity):
	'''
	The coefficient norms agree with ∫u² and κ∫(u′)² evaluated on the quadrature grid.
	'''
	params = PhysicalParams(nu=1., kappa=0.7)
	u = random_modal_vector(capacity, seed=capacity)
	grid = quadrature_grid(capacity)
	values = grid.synthesize(u.coeffs)
	derivative = grid.synthesize_derivative(u.coeffs)
	assert_allclose(np.sqrt(grid.inner(values, values)), u.l2_norm(), rtol=1e-12)
	assert_allclose(np.sqrt(params.kappa * grid.inner(derivative, derivative)), u.h1_norm(params), rtol=1e-12)

def test_modal_vector_is_read_only():
	'''
	Coefficients cannot be changed in place.
	'''
	u = ModalVector([1., 2.])
	with pytest.raises(ValueError):
		u.coeffs[0] = 5.

def test_modal_vector_errors():
	'''
	Empty vectors, basis modes beyond the capacity and mixed capacities are rejected.
	'''
	with pytest.raises(CapacityError):
		ModalVector([])
	with pytest.raises(CapacityError):
		ModalVector.basis(5, 4)
	with pytest.raises(CapacityError):
		ModalVector.zeros(3) + ModalVector.zeros(4)

def test_modal_vector_evaluation():
	'''
	Point values, first and second derivatives of φ₂ + 0.5φ₃.
	'''
	u = ModalVector([0., 1., 0.5])
	x = np.linspace(-1., 1., 33)
	p = math.pi
	assert_allclose(u.evaluate(x), np.sin(2*p*x) + 0.5*np.sin(3*p*x), atol=1e-14)
	assert_allclose(u.derivative(x), 2*p*np.cos(2*p*x) + 1.5*p*np.cos(3*p*x), atol=1e-13)
	assert_allclose(u.second_derivative(x), -4*p**2*np.sin(2*p*x) - 4.5*p**2*np.sin(3*p*x), atol=1e-12)
	assert_allclose(u.evaluate([-1., 1.]), [0., 0.], atol=1e-14, err_msg="Dirichlet conditions")
	assert_allclose(u.lipschitz_bound(), 2*p + 1.5*p, rtol=1e-15)

def test_state_vector_from_array():
	'''
	A state is built from an array of shape (2, M).
	'''
	state = StateVector.from_array(np.array([[1., 2.], [3., 4.]]))
	assert_allclose(state.u.coeffs, [1., 2.])
	assert_allclose(state.v.coeffs, [3., 4.])
	with pytest.raises(ValueError):
		StateVector.from_array(np.zeros((3, 2)))
	with pytest.raises(CapacityError):
		StateVector(ModalVector.zeros(2), ModalVector.zeros(3))

# capacity, degree, expected default order
expected_orders = [
	(64, 1, 535),
	(64, 3, 535),
	(64, 7, 1038),
	(8, 1, 95),
]

@pytest.mark.parametrize("capacity, degree, order", expected_orders)
def test_default_quadrature_order(capacity, degree, order):
	'''
	The default order is ⌈1.25·max(2, (degree+1)/2)·πM⌉ + 32.
	'''
	assert default_quadrature_order(capacity, degree) == order

@pytest.mark.parametrize("capacity", [1, 8, 64, 256])
def test_gram_matrix(capacity):
	'''
	The Gram matrix of the sine modes on the default grid is the identity to 1e-12.
	'''
	assert quadrature_grid(capacity).gram_error(capacity) <= 1e-12

def test_quadrature_grid_errors():
	'''
	A grid too coarse for its capacity, and an order above the cap, are configuration errors.
	'''
	with pytest.raises(ConfigurationError):
		QuadratureGrid(capacity=16, order=10)
	with pytest.raises(ConfigurationError):
		QuadratureGrid(capacity=16, order=20000)

def test_quadrature_grid_is_cached():
	'''
	Grids are shared between calls with the same arguments.
	'''
	assert quadrature_grid(12) is quadrature_grid(12)

def test_project_q_example():
	'''
	Q₂(φ₁ + 3φ₃) = φ₁.
	'''
	u = ModalVector([1., 0., 3.])
	q = project_Q(u, 2)
	assert_allclose(q.coeffs, [1., 0., 0.], atol=0)

@given(st.integers(min_value=1, max_value=16), st.integers(min_value=0, max_value=2**31))
@settings(max_examples=50, deadline=None)
def test_project_q_idempotent(n, seed):
	'''
	Qₙ is idempotent and contracts the L², H¹₀ and D(U) norms.
	'''
	u = random_modal_vector(16, seed=seed)
	q = project_Q(u, n)
	assert_allclose(project_Q(q, n).coeffs, q.coeffs, atol=0)
	assert q.l2_norm() <= u.l2_norm() * (1 + 1e-15)
	assert q.h1_norm(UNIT) <= u.h1_norm(UNIT) * (1 + 1e-15)
	assert q.du_norm(UNIT) <= u.du_norm(UNIT) * (1 + 1e-15)

def test_project_q_of_a_function():
	'''
	Projection of sin(πx)·exp(cos(πx)) agrees with a DST of refined samples.
	'''
	f = lambda x: np.sin(np.pi * x) * np.exp(np.cos(np.pi * x))
	q = project_Q(f, 4, capacity=4)
	assert_allclose(q.coeffs, _dst_coefficients(f, 4), atol=1e-10)

def test_project_q_of_an_even_function():
	'''
	An even function such as x·sin(πx) is orthogonal to every sine mode.
	'''
	q = project_Q(lambda x: x * np.sin(np.pi * x), 4, capacity=8)
	assert_allclose(q.coeffs, np.zeros(8), atol=1e-12)

def test_project_q_errors():
	'''
	n larger than the capacity is a capacity error.
	'''
	with pytest.raises(CapacityError):
		project_Q(ModalVector.zeros(4), 5)
	with pytest.raises(ValueError):
		project_Q(ModalVector.zeros(4), 0)

def test_project_p():
	'''
	Pₙ applies Qₙ at every time, for arrays and sequences of vectors.
	'''
	traj = np.outer(np.linspace(0., 1., 5), [1., 2., 3., 4.])
	p = project_P(traj, 2)
	assert_allclose(p[:, :2], traj[:, :2])
	assert np.all(p[:, 2:] == 0)

	vectors = project_P([ModalVector(row) for row in traj], 3)
	assert len(vectors) == 5
	assert_allclose(vectors[-1].coeffs, [1., 2., 3., 0.])

	with pytest.raises(ValueError):
		project_P([], 2)
	with pytest.raises(CapacityError):
		project_P(traj, 5)

# b, n, kappa, expected width
expected_widths = [
	(1., 1, 1., 1. / (2. * math.pi)),
	(math.pi, 3, 1., 0.25),
	(2., 1, 4., 1. / (2. * math.pi)),
]

@pytest.mark.parametrize("b, n, kappa, width", expected_widths)
def test_n_width(b, n, kappa, width):
	'''
	dₙ = b / ((n+1)π√κ).
	'''
	assert_allclose(n_width(b, n, PhysicalParams(nu=1., kappa=kappa)), width, rtol=1e-15)

@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_extremal_element(n):
	'''
	b/((n+1)π√κ)·φₙ₊₁ lies on the sphere of radius b and attains the n-width.
	'''
	params = PhysicalParams(nu=1., kappa=0.5)
	b = 1.5
	e = extremal_element(b, n, params, capacity=16)
	assert_allclose(e.h1_norm(params), b, rtol=1e-14)
	report = projection_error_bound_check(e, b, n, params)
	assert_allclose(report.error, report.width, rtol=1e-14)
	assert report.passed

@given(st.integers(min_value=1, max_value=30), st.integers(min_value=0, max_value=2**31))
@settings(max_examples=100, deadline=None)
def test_projection_error_bound(n, seed):
	'''
	‖Qₙh - h‖_L2 ≤ dₙ on the H¹₀ ball of radius 1.
	'''
	h = random_ball_element(1., 32, UNIT, seed=seed)
	report = projection_error_bound_check(h, 1., n, UNIT)
	assert report.error <= report.width * (1 + 1e-12)
	assert report.slack >= -1e-15

def test_projection_error_bound_precondition():
	'''
	An element outside the ball is rejected.
	'''
	h = ModalVector.basis(1, 4, scale=1.)
	with pytest.raises(PreconditionError) as e:
		projection_error_bound_check(h, 1., 1, UNIT)
	assert_allclose(e.value.measured, math.pi)

def test_repr():
	'''
	The representation names the package and class; the inner products and energy rate are exported at top level.
	'''
	assert repr(ModalVector.zeros(3)).startswith("<telegraph.ModalVector at 0x")
	assert telegraph.__version__ == "1.0.0"
	assert callable(telegraph.energy_rate) and callable(telegraph.hilbert_inner) and callable(telegraph.du_inner)
