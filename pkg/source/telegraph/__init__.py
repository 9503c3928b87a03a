
from .version import __version__

from .errors import (TelegraphError, CapacityError, OutOfScopeError, ConfigurationError, IncompatibleSamplingError,
					 PreconditionError, InvarianceViolationError, NonConvergenceError, AdmissibilityError,
					 StepSizeError, PropertyViolationError)
from .spectral import PhysicalParams, ModalVector, StateVector, QuadratureGrid
from .spectral import project_Q, project_P, n_width, extremal_element, projection_error_bound_check
from .semigroup import ModeKind, classify_mode, spectral_abscissa, propagate_mode, apply_semigroup
from .semigroup import generator_apply, energy_rate, hilbert_inner, du_inner, resolvent_apply, du_norm_bound
from .semigroup import TimeGrid, DuhamelIntegrator, Trajectory, duhamel
from .forcing import PointwiseForcing, MonomialForcing, SinhForcing, LinearForcing, BVPCompositionForcing
from .forcing import pointwise_forcing, bvp_composition_forcing, closure_property_check
from .forcing import AffineConstraint, constraint_inf, DriveTerm
from .solver import SolveConfig, terminal_time, apply_K, fixed_point_solve, constrained_solve
from .solver import admissibility_report, weak_residual, residual_tail, equicontinuity_modulus, validate_constraint_level
from .oracle import fd_solve, fd_l2_distance, modal_ode_closed_form
from .config import ScenarioConfig, load_config
