
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad
from hypothesis import given, settings, strategies as st

from telegraph import CapacityError, ConfigurationError, ModalVector, PhysicalParams
from telegraph.forcing import (FORCINGS, AffineConstraint, BVPCompositionForcing, DriveTerm, LinearForcing,
							   MonomialForcing, PointwiseForcing, SinhForcing, bvp_composition_forcing,
							   closure_property_check, constraint_from_descriptor, constraint_inf,
							   drive_from_descriptor, forcing_from_descriptor, pointwise_forcing, sup_norm_bound)
from telegraph.generate import random_modal_vector, random_sphere_element
from telegraph.spectral import quadrature_grid

UNIT = PhysicalParams(nu=1., kappa=1.)

def _galerkin_oracle(f, u, capacity):
	''' (f(u), φₖ) by adaptive quadrature. '''
	return np.array([quad(lambda x: f(u.evaluate(x)) * math.sin(k * math.pi * x), -1., 1.,
						  limit=200, epsabs=1e-13, epsrel=1e-12)[0]
					 for k in range(1, capacity+1)])

all_forcings = [
	MonomialForcing(2),
	MonomialForcing(3, coefficient=-2.),
	SinhForcing(),
	LinearForcing(0.5),
	BVPCompositionForcing(),
	PointwiseForcing(np.tanh, name="tanh"),
]

@pytest.mark.parametrize("F", all_forcings)
def test_forcing_of_zero(F):
	'''
	F(0) = 0 for every forcing.
	'''
	assert_allclose(F.apply(np.zeros(8)), np.zeros(8), atol=1e-15)
	assert_allclose(F(ModalVector.zeros(4)).coeffs, np.zeros(4), atol=1e-15)

def test_pointwise_forcing_rejects_offset():
	'''
	A function with f(0) ≠ 0 is not a forcing.
	'''
	with pytest.raises(ValueError):
		PointwiseForcing(lambda s: s + 1.)

def test_cubic_of_first_mode():
	'''
	sin³(πx) = (3 sin(πx) - sin(3πx))/4.
	'''
	out = pointwise_forcing(("monomial", 3), ModalVector.basis(1, 8))
	expected = np.zeros(8)
	expected[0] = 0.75
	expected[2] = -0.25
	assert_allclose(out.coeffs, expected, atol=1e-14)

def test_square_projects_to_zero():
	'''
	u² is even for odd u, so its sine coefficients vanish.
	'''
	u = ModalVector([0.3, -0.2, 0.1, 0.05])
	out = pointwise_forcing(("monomial", 2), u)
	assert_allclose(out.coeffs, _galerkin_oracle(lambda s: s**2, u, 4), atol=1e-12)
	assert_allclose(out.coeffs, np.zeros(4), atol=1e-14)

@pytest.mark.parametrize("symbol, f", [("sinh", np.sinh), (("monomial", 3), lambda s: s**3), (np.tanh, np.tanh)])
def test_pseudospectral_matches_galerkin(symbol, f):
	'''
	The pseudo-spectral evaluation agrees with (f(u), φₖ) computed by adaptive quadrature.
	'''
	u = ModalVector([0.3, -0.2, 0., 0., 0., 0., 0., 0.])
	out = pointwise_forcing(symbol, u)
	assert_allclose(out.coeffs, _galerkin_oracle(f, u, 8), atol=1e-10)

def test_pointwise_forcing_symbols():
	'''
	Unknown symbols are rejected.
	'''
	with pytest.raises(ValueError):
		pointwise_forcing("cosh", ModalVector.zeros(2))

def test_dealiased_grid():
	'''
	The quadrature order grows with the polynomial degree of the nonlinearity.
	'''
	assert MonomialForcing(7).grid_for(16).order > MonomialForcing(2).grid_for(16).order
	assert MonomialForcing(7).grid_for(16) is MonomialForcing(7).grid_for(16)

def test_monomial_local_bound():
	'''
	For F(u) = u³ and C = 1: r = √(κ/(π²+κ)), ρ = r/√(2κ), c = 3ρ²r.
	'''
	r = 1. / math.sqrt(math.pi**2 + 1.)
	rho = r / math.sqrt(2.)
	assert_allclose(MonomialForcing(3).local_bound(1., UNIT), 3. * rho**2 * r, rtol=1e-14)
	assert_allclose(sup_norm_bound(r, UNIT), rho, rtol=1e-15)

@pytest.mark.parametrize("F", [MonomialForcing(3), MonomialForcing(2, coefficient=3.), SinhForcing(), LinearForcing(-2.),
							   BVPCompositionForcing()])
def test_local_bound_holds(F):
	'''
	‖F(u)‖_H10 ≤ c(C) on random elements of the D(U) sphere of radius C.
	'''
	params = PhysicalParams(nu=1., kappa=0.5)
	rng = np.random.default_rng(17)
	for radius in (0.5, 1., 4.):
		c = F.local_bound(radius, params)
		for _ in range(100):
			u = random_sphere_element(radius, 16, params, rng)
			assert F(u).h1_norm(params) <= c * (1 + 1e-10), f"radius {radius}"

def test_local_bound_override():
	'''
	A given bound, number or callable, replaces the computed one.
	'''
	assert MonomialForcing(2, bound=7.).local_bound(1., UNIT) == 7.
	assert MonomialForcing(2, bound=lambda C, p: 2. * C).local_bound(3., UNIT) == 6.

def test_pointwise_derivative_sampling():
	'''
	Without an explicit derivative, sup|f′| is sampled by finite differences.
	'''
	F = PointwiseForcing(lambda s: s**3)
	assert_allclose(F.derivative_sup(0.5), 0.75, rtol=2e-3)

def test_bvp_composition_first_mode():
	'''
	-w″ + w = φ₁ gives w = φ₁/(π² + 1).
	'''
	w = bvp_composition_forcing(ModalVector.basis(1, 4))
	assert_allclose(w.coeffs, [1. / (math.pi**2 + 1.), 0., 0., 0.], rtol=1e-15)

def test_bvp_composition_residual():
	'''
	w = F(u) satisfies -w″ + w - u = 0 in L².
	'''
	u = random_modal_vector(16, seed=4)
	w = bvp_composition_forcing(u)
	grid = quadrature_grid(16)
	x = grid.nodes
	residual = -w.second_derivative(x) + w.evaluate(x) - u.evaluate(x)
	assert math.sqrt(grid.inner(residual, residual)) <= 1e-10

@given(st.floats(min_value=-10., max_value=10.), st.integers(min_value=0, max_value=2**31))
@settings(max_examples=50, deadline=None)
def test_bvp_composition_linear(a, seed):
	'''
	The BVP forcing is linear.
	'''
	rng = np.random.default_rng(seed)
	u = random_modal_vector(8, rng)
	v = random_modal_vector(8, rng)
	F = BVPCompositionForcing()
	assert_allclose(F(u * a + v).coeffs, (F(u) * a + F(v)).coeffs, rtol=1e-12, atol=1e-14)

def test_closure_constant_sequence():
	'''
	A constant sequence converges trivially.
	'''
	u = ModalVector.basis(1, 8)
	report = closure_property_check(MonomialForcing(3), [u] * 5, UNIT)
	assert report.passed
	assert_allclose(report.output_l2_errors, 0., atol=0)

@pytest.mark.parametrize("F", [MonomialForcing(3), SinhForcing(), BVPCompositionForcing(), LinearForcing(2.)])
def test_closure_repeated_limit_is_exact(F):
	'''
	Elements equal to the limit give output errors of exactly zero.
	'''
	u = random_modal_vector(16, seed=11, decay=2.) * 0.1
	report = closure_property_check(F, [u] * 3, UNIT, limit=u)
	assert report.output_l2_errors == [0., 0., 0.]
	assert report.input_h1_errors == [0., 0., 0.]
	assert report.passed

def test_closure_rate_for_cubic():
	'''
	uₖ = (1 - 1/k)φ₁ → φ₁: the cubic forcing converges at rate one.
	'''
	u = ModalVector.basis(1, 8)
	seq = [u * (1. - 1. / k) for k in (10, 20, 40, 80, 160, 320)]
	report = closure_property_check(MonomialForcing(3), seq, UNIT, limit=u)
	assert report.passed
	assert 0.95 <= report.rate <= 1.05
	assert np.all(np.diff(report.output_l2_errors) < 0)

def test_closure_bvp_smoothing():
	'''
	Truncations Qₖu → u: the BVP forcing reduces the L² error by at least π² + 1.
	'''
	u = ModalVector(1. / np.arange(1, 33)**3)
	seq = [ModalVector(np.where(np.arange(32) < k, u.coeffs, 0.)) for k in (2, 4, 8, 16)]
	report = closure_property_check(BVPCompositionForcing(), seq, UNIT, limit=u)
	assert report.passed
	bound = np.array(report.input_l2_errors) / (math.pi**2 + 1.)
	assert np.all(np.array(report.output_l2_errors) <= bound * (1 + 1e-12))

def test_closure_not_applicable():
	'''
	A sequence moving away from its limit is not tested.
	'''
	u = ModalVector.basis(1, 4)
	seq = [u * (1. + k) for k in range(4)]
	report = closure_property_check(MonomialForcing(3), seq, UNIT, limit=ModalVector.zeros(4))
	assert report.status == "not applicable"

def test_closure_errors():
	'''
	Sequences must be non-empty and share one capacity.
	'''
	with pytest.raises(ValueError):
		closure_property_check(MonomialForcing(3), [ModalVector.zeros(2)], UNIT)
	with pytest.raises(CapacityError):
		closure_property_check(MonomialForcing(3), [ModalVector.zeros(2), ModalVector.zeros(3)], UNIT)

@pytest.mark.parametrize("descriptor", [F.descriptor for F in all_forcings[:-1]])
def test_forcing_descriptor_round_trip(descriptor):
	'''
	A forcing rebuilt from its descriptor has the same descriptor.
	'''
	assert forcing_from_descriptor(descriptor).descriptor == descriptor

@pytest.mark.parametrize("descriptor", [{"name": "cosh"}, {"name": "monomial", "degree": 0},
										{"name": "monomial", "exponent": 2}, {}])
def test_forcing_descriptor_errors(descriptor):
	'''
	Unknown names and invalid parameters are configuration errors.
	'''
	with pytest.raises(ConfigurationError):
		forcing_from_descriptor(descriptor)

def test_registry_names():
	'''
	Every registered forcing reports its registry name.
	'''
	for name, cls in FORCINGS.items():
		assert cls.name == name

def test_constraint_of_zero():
	'''
	G(u) = 1 + u: inf G(0) = 1, certified exactly.
	'''
	result = constraint_inf(AffineConstraint(), ModalVector.zeros(4))
	assert result.inf_value == 1.
	assert result.certified_lower_bound == 1.

def test_constraint_negative_half_mode():
	'''
	u = -½φ₁: inf G(u) = ½, attained at x = ½.
	'''
	result = constraint_inf(AffineConstraint(), ModalVector([-0.5, 0.]))
	assert_allclose(result.inf_value, 0.5, atol=1e-15)
	assert_allclose(result.location, 0.5, atol=1e-12)
	assert result.certified_lower_bound <= result.inf_value
	assert result.certified_lower_bound >= 0.5 - 1e-6

@pytest.mark.parametrize("samples", [17, 65, 257, 1025])
def test_constraint_refinement(samples):
	'''
	The certified bound converges to the infimum as the sampling is refined.
	'''
	u = ModalVector([0.3, -0.2])
	result = constraint_inf(AffineConstraint(samples=samples), u)
	x = np.linspace(-1., 1., 1_000_001)
	brute = float(np.min(1. + u.evaluate(x)))
	assert result.certified_lower_bound <= brute + 1e-12
	assert abs(result.inf_value - brute) <= 1e-6
	assert abs(result.certified_lower_bound - brute) <= 1e-6

@given(st.integers(min_value=0, max_value=2**31))
@settings(max_examples=30, deadline=None)
def test_constraint_certified_is_lower_bound(seed):
	'''
	The certified bound never exceeds the sampled infimum.
	'''
	u = random_modal_vector(8, seed)
	G = AffineConstraint(offset=2., scale=-1.5, samples=129)
	result = constraint_inf(G, u)
	assert result.certified_lower_bound <= result.inf_value
	assert_allclose(G.evaluate(u, result.location), result.inf_value, rtol=1e-14, atol=1e-13)

def test_constraint_descriptor():
	'''
	Constraints round-trip through their descriptors; unknown names are rejected.
	'''
	G = AffineConstraint(offset=2., scale=-1.)
	assert constraint_from_descriptor(G.descriptor).descriptor == G.descriptor
	assert G.at_zero().inf_value == 2.
	with pytest.raises(ConfigurationError):
		constraint_from_descriptor({"name": "quadratic"})
	with pytest.raises(ConfigurationError):
		constraint_from_descriptor({"name": "affine", "samples": 1})

def test_constant_drive():
	'''
	A constant drive is padded to the capacity.
	'''
	drive = DriveTerm.constant({"1": 0.5, "3": -1.})
	values = drive.sample([0., 1., 2.], 4)
	assert values.shape == (3, 4)
	assert_allclose(values[1], [0.5, 0., -1., 0.])
	assert drive.descriptor == {"name": "constant", "modes": {"1": 0.5, "3": -1.}}
	with pytest.raises(CapacityError):
		drive.sample([0.], 2)

def test_harmonic_drive():
	'''
	g(t) = cos(ωt + φ) Σ gₖ φₖ.
	'''
	drive = DriveTerm.harmonic([0., 2.], frequency=3., phase=0.25)
	t = np.array([0., 0.5, 1.])
	values = drive.sample(t, 2)
	assert_allclose(values[:, 1], 2. * np.cos(3. * t + 0.25), rtol=1e-15)
	assert np.all(values[:, 0] == 0)

def test_drive_descriptors():
	'''
	"none" means no drive; unknown drives and invalid parameters are configuration errors.
	'''
	assert drive_from_descriptor({"name": "none"}) is None
	assert drive_from_descriptor(None) is None
	drive = drive_from_descriptor({"name": "harmonic", "modes": {"2": 1.}, "frequency": 2.})
	assert drive.modes == 2
	with pytest.raises(ConfigurationError):
		drive_from_descriptor({"name": "pulse"})
	with pytest.raises(ConfigurationError):
		drive_from_descriptor({"name": "constant", "modes": {}})
	with pytest.raises(ConfigurationError):
		drive_from_descriptor({"name": "constant", "modes": {"0": 1.}})
