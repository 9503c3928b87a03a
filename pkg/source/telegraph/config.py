
'''
Scenario configuration files.

A scenario is a JSON object with the sections "physics", "forcing", "constraint",
"drive", "numerics", "verify" and the integer "seed". Every key is optional; unknown
keys are rejected. See the documentation (usage) for the full schema.
'''

import json
import hashlib
import logging
import numbers
from dataclasses import dataclass, field, fields, asdict
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .errors import ConfigurationError
from .forcing import (ConstraintOperator, DriveTerm, ForcingOperator, constraint_from_descriptor,
					  drive_from_descriptor, forcing_from_descriptor)
from .spectral import PhysicalParams
from .utilities import _check_index

logger = logging.getLogger("telegraph_logger")

@dataclass
class PhysicsSection:
	nu: float = 1.0
	kappa: float = 1.0

@dataclass
class NumericsSection:
	n: int = 8
	capacity: int = 16
	radius: float = 1.0
	c: Optional[float] = None
	omega: Optional[float] = None
	horizon: Optional[float] = None
	cells: int = 64
	time_order: int = 8
	fp_tol: float = 1e-10
	fp_max_iter: int = 100
	relaxation: float = 1.0
	alpha: float = 0.5
	equicontinuity_delta: float = 0.1
	validation_samples: int = 64
	residual_modes: Optional[int] = None

@dataclass
class VerifySection:
	samples: int = 1000

def _section(cls, values:Any, name:str):
	''' Build a section dataclass from a dict, rejecting unknown keys and non-numeric values. '''
	if values is None:
		return cls()
	if not isinstance(values, dict):
		raise ConfigurationError(f"The '{name}' section must be an object; was given '{values}'.")
	known = {f.name: f for f in fields(cls)}
	unknown = sorted(set(values) - set(known))
	if unknown:
		raise ConfigurationError(f"Unknown key(s) in section '{name}': {unknown}.")
	for key, value in values.items():
		if value is None and known[key].default is None:
			continue
		if isinstance(value, bool) or not isinstance(value, numbers.Real):
			raise ConfigurationError(f"The value of '{name}.{key}' must be a number; was given '{value}'.")
	return cls(**values)

@dataclass
class ScenarioConfig:
	'''
	A validated scenario.
	'''
	physics: PhysicsSection = field(default_factory=PhysicsSection)
	forcing: Dict[str, Any] = field(default_factory=lambda: {"name": "monomial", "degree": 2, "coefficient": 1.0})
	constraint: Dict[str, Any] = field(default_factory=lambda: {"name": "affine"})
	drive: Dict[str, Any] = field(default_factory=lambda: {"name": "none"})
	numerics: NumericsSection = field(default_factory=NumericsSection)
	verify: VerifySection = field(default_factory=VerifySection)
	seed: int = 1

	SECTIONS = ("physics", "forcing", "constraint", "drive", "numerics", "verify", "seed")

	@classmethod
	def from_dict(cls, values:Dict[str, Any]) -> 'ScenarioConfig':
		'''
		Validate a scenario given as a (parsed JSON) dictionary.

		:raises ConfigurationError: for unknown keys, wrong types or invalid values
		'''
		if not isinstance(values, dict):
			raise ConfigurationError("A scenario must be a JSON object.")
		unknown = sorted(set(values) - set(cls.SECTIONS))
		if unknown:
			raise ConfigurationError(f"Unknown top-level key(s): {unknown}.")

		config = cls()
		config.physics = _section(PhysicsSection, values.get("physics"), "physics")
		config.numerics = _section(NumericsSection, values.get("numerics"), "numerics")
		config.verify = _section(VerifySection, values.get("verify"), "verify")
		for name in ("forcing", "constraint", "drive"):
			if name in values:
				if not isinstance(values[name], dict):
					raise ConfigurationError(f"The '{name}' section must be an object; was given '{values[name]}'.")
				setattr(config, name, dict(values[name]))
		if "seed" in values:
			config.seed = values["seed"]
		config.validate()
		return config

	def validate(self):
		''' Build every component once so that invalid values fail early. '''
		try:
			self.build_params()
			self.seed = _check_index("seed", self.seed, minimum=0)
			_check_index("verify.samples", self.verify.samples)
			for name in ("n", "capacity", "cells", "time_order", "fp_max_iter"):
				_check_index(f"numerics.{name}", getattr(self.numerics, name))
		except ValueError as e:
			raise ConfigurationError(str(e))
		self.build_forcing()
		self.build_constraint()
		self.build_drive()

	def build_params(self) -> PhysicalParams:
		try:
			return PhysicalParams(nu=self.physics.nu, kappa=self.physics.kappa)
		except ValueError as e:
			raise ConfigurationError(f"Invalid physics section: {e}")

	def build_forcing(self) -> ForcingOperator:
		return forcing_from_descriptor(self.forcing)

	def build_constraint(self) -> ConstraintOperator:
		return constraint_from_descriptor(self.constraint)

	def build_drive(self) -> Optional[DriveTerm]:
		return drive_from_descriptor(self.drive)

	def build_solve_config(self, forcing:ForcingOperator=None):
		'''
		The :py:class:`~telegraph.solver.SolveConfig` of this scenario (c and ω computed when null).
		'''
		from .solver import SolveConfig
		forcing = forcing or self.build_forcing()
		numerics = asdict(self.numerics)
		try:
			return SolveConfig.build(self.build_params(), forcing, **numerics)
		except ValueError as e:
			raise ConfigurationError(f"Invalid numerics section: {e}")

	def resolved(self) -> Dict[str, Any]:
		''' The scenario with all defaults filled in (descriptors as the components report them). '''
		drive = self.build_drive()
		return {
			"physics": asdict(self.physics),
			"forcing": self.build_forcing().descriptor,
			"constraint": self.build_constraint().descriptor,
			"drive": {"name": "none"} if drive is None else drive.descriptor,
			"numerics": asdict(self.numerics),
			"verify": asdict(self.verify),
			"seed": self.seed,
		}

	def sha256(self) -> str:
		''' SHA-256 of the canonical JSON of :py:meth:`resolved`. '''
		text = json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))
		return hashlib.sha256(text.encode("utf-8")).hexdigest()

def load_config(path:Union[str, Path, None]) -> ScenarioConfig:
	'''
	Read and validate a scenario file; ``None`` returns the default scenario.

	:raises ConfigurationError: if the file cannot be read or parsed, or is invalid
	'''
	if path is None:
		return ScenarioConfig()
	path = Path(path)
	try:
		text = path.read_text(encoding="utf-8")
	except OSError as e:
		raise ConfigurationError(f"Cannot read the configuration file '{path}': {e}")
	try:
		values = json.loads(text)
	except json.JSONDecodeError as e:
		raise ConfigurationError(f"The configuration file '{path}' is not valid JSON: {e}")
	logger.debug(f"loaded configuration from {path}")
	return ScenarioConfig.from_dict(values)
