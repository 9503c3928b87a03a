
'''
Exceptions raised by the telegraph package.

Errors caused by bad arguments also derive from ``ValueError`` so that
callers catching ``ValueError`` keep working.
'''

from typing import Any, Dict, List, Optional

class TelegraphError(Exception):
	'''
	Base class of all errors raised by this package.
	'''
	def to_dict(self) -> Dict[str, Any]:
		'''
		Return a JSON-serialisable description of the error (used for the CLI error output).
		'''
		d = {"error": self.__class__.__name__, "message": str(self)}
		d.update(self._fields())
		return d

	def _fields(self) -> Dict[str, Any]:
		return dict()

class CapacityError(TelegraphError, ValueError):
	''' A projection order or coefficient count does not fit the mode capacity. '''
	pass

class OutOfScopeError(TelegraphError, ValueError):
	''' The requested computation is outside what is implemented (e.g. resolvent with λ ≤ 0). '''
	pass

class ConfigurationError(TelegraphError, ValueError):
	''' Invalid scenario configuration or numerical setup. '''
	pass

class IncompatibleSamplingError(TelegraphError, ValueError):
	''' A time-dependent source was not sampled on the time quadrature nodes. '''
	pass

class PreconditionError(TelegraphError, ValueError):
	'''
	A measured precondition failed.

	:param message: description
	:param measured: the measured quantity
	:param bound: the bound it should satisfy
	'''
	def __init__(self, message:str, measured:float=None, bound:float=None):
		super().__init__(message)
		self.measured = measured
		self.bound = bound

	def _fields(self):
		return {"measured": self.measured, "bound": self.bound}

class InvarianceViolationError(TelegraphError):
	'''
	A fixed-point iterate left the projected ball.
	'''
	def __init__(self, message:str, measured:float, bound:float, iteration:int):
		super().__init__(message)
		self.measured = measured
		self.bound = bound
		self.iteration = iteration

	def _fields(self):
		return {"measured": self.measured, "bound": self.bound, "iteration": self.iteration}

class NonConvergenceError(TelegraphError):
	'''
	The fixed-point iteration did not reach the requested tolerance.

	:param residual_history: residual after each application of the map
	'''
	def __init__(self, message:str, residual_history:List[float]):
		super().__init__(message)
		self.residual_history = list(residual_history)

	def _fields(self):
		return {"residual_history": self.residual_history,
				"iterations": len(self.residual_history)}

class AdmissibilityError(TelegraphError):
	'''
	The trajectory violates the constraint level.

	:param time: first grid time where the certified bound drops below the level
	:param location: point in [-1,1] where the sampled minimum was found at that time
	:param certified: the certified lower bound at that time
	:param alpha: the required constraint level
	:param trajectory: the (complete) offending trajectory
	'''
	def __init__(self, message:str, time:float, location:float, certified:float, alpha:float, trajectory:Optional[Any]=None):
		super().__init__(message)
		self.time = time
		self.location = location
		self.certified = certified
		self.alpha = alpha
		self.trajectory = trajectory

	def _fields(self):
		return {"time": self.time, "location": self.location,
				"certified": self.certified, "alpha": self.alpha}

class StepSizeError(TelegraphError):
	''' The explicit finite-difference integrator became unstable. '''
	def __init__(self, message:str, time:float):
		super().__init__(message)
		self.time = time

	def _fields(self):
		return {"time": self.time}

class PropertyViolationError(TelegraphError):
	'''
	A checked mathematical property does not hold.

	:param report: the report object describing the check (must provide ``to_dict()``)
	'''
	def __init__(self, message:str, report:Any=None):
		super().__init__(message)
		self.report = report

	def _fields(self):
		if self.report is not None and hasattr(self.report, "to_dict"):
			return {"report": self.report.to_dict()}
		return dict()
