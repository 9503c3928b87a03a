
import json
import math

import numpy as np
import pytest

from telegraph import ConfigurationError
from telegraph.config import ScenarioConfig, load_config
from telegraph.results import format_value, read_csv, write_csv, write_json

def test_default_scenario():
	'''
	No file gives the default scenario.
	'''
	config = load_config(None)
	assert config.physics.nu == 1. and config.physics.kappa == 1.
	assert config.numerics.n == 8 and config.numerics.capacity == 16
	assert config.forcing["name"] == "monomial"
	assert config.build_drive() is None
	assert config.seed == 1
	assert config.verify.samples == 1000

def test_sections_are_read(tmp_path):
	'''
	Values given in the file replace the defaults; the rest stay.
	'''
	path = tmp_path / "scenario.json"
	path.write_text(json.dumps({"physics": {"kappa": 0.5}, "numerics": {"n": 4, "capacity": 8}, "seed": 7}))
	config = load_config(path)
	assert config.physics.kappa == 0.5 and config.physics.nu == 1.
	assert config.numerics.n == 4 and config.numerics.cells == 64
	assert config.seed == 7
	solve = config.build_solve_config()
	assert solve.n == 4 and solve.capacity == 8

# scenario dictionaries that must be rejected
invalid_scenarios = [
	{"physic": {"nu": 1.}},
	{"physics": {"mu": 1.}},
	{"physics": {"nu": "one"}},
	{"physics": {"nu": True}},
	{"physics": {"nu": -1.}},
	{"physics": {"kappa": 0.}},
	{"physics": [1., 2.]},
	{"numerics": {"n": 0}},
	{"numerics": {"n": 2.5}},
	{"numerics": {"cells": -4}},
	{"forcing": {"name": "exponential"}},
	{"forcing": "monomial"},
	{"constraint": {"name": "affine", "samples": 1}},
	{"drive": {"name": "pulse"}},
	{"verify": {"samples": 0}},
	{"seed": -1},
]

@pytest.mark.parametrize("values", invalid_scenarios)
def test_invalid_scenarios(values):
	'''
	Unknown keys, wrong types and out-of-range values are configuration errors.
	'''
	with pytest.raises(ConfigurationError):
		ScenarioConfig.from_dict(values)

def test_numerics_checked_when_building():
	'''
	A horizon beyond the terminal time is only detected once c and ω are known.
	'''
	config = ScenarioConfig.from_dict({"forcing": {"name": "linear"},
									   "numerics": {"n": 2, "capacity": 4, "c": 0.5, "omega": 1.25, "horizon": 2.}})
	with pytest.raises(ConfigurationError):
		config.build_solve_config()

def test_unreadable_files(tmp_path):
	'''
	Missing files and malformed JSON are configuration errors.
	'''
	with pytest.raises(ConfigurationError):
		load_config(tmp_path / "missing.json")
	path = tmp_path / "broken.json"
	path.write_text("{\"physics\": ")
	with pytest.raises(ConfigurationError):
		load_config(path)
	path.write_text("[1, 2, 3]")
	with pytest.raises(ConfigurationError):
		load_config(path)

def test_sha256():
	'''
	The hash depends on the resolved scenario, not on how it was written down.
	'''
	default = ScenarioConfig().sha256()
	assert len(default) == 64
	assert ScenarioConfig.from_dict({}).sha256() == default
	assert ScenarioConfig.from_dict({"physics": {"nu": 1.0}}).sha256() == default
	assert ScenarioConfig.from_dict({"seed": 2}).sha256() != default
	assert ScenarioConfig.from_dict({"physics": {"kappa": 2.}}).sha256() != default

def test_resolved_is_json():
	'''
	The resolved scenario serializes to JSON and reads back to the same scenario.
	'''
	config = ScenarioConfig.from_dict({"drive": {"name": "constant", "modes": {"1": 0.5}}})
	resolved = json.loads(json.dumps(config.resolved()))
	again = ScenarioConfig.from_dict(resolved)
	assert again.sha256() == config.sha256()

# value, text
formatted_values = [
	(True, "true"),
	(np.bool_(False), "false"),
	(3, "3"),
	(np.int64(-2), "-2"),
	(0.1, "0.10000000000000001"),
	(1.0, "1"),
	(math.pi, "3.1415926535897931"),
	(None, ""),
	("constant", "constant"),
]

@pytest.mark.parametrize("value, text", formatted_values)
def test_format_value(value, text):
	'''
	Floats are written with 17 significant digits; booleans in lower case.
	'''
	assert format_value(value) == text

def test_csv_file(tmp_path):
	'''
	CSV files carry the version and hash header; floats read back exactly.
	'''
	values = [0.1, 1. / 3., math.pi * 1e-20]
	path = write_csv(tmp_path / "out.csv", "abc", ["i", "value"], enumerate(values))
	comments, columns, rows = read_csv(path)
	assert comments == ["telegraph 1.0.0", "config_sha256 abc"]
	assert columns == ["i", "value"]
	assert [float(r[1]) for r in rows] == values
	assert [int(r[0]) for r in rows] == [0, 1, 2]

def test_json_file(tmp_path):
	'''
	JSON files hold the payload plus a header; numpy values become plain JSON.
	'''
	path = write_json(tmp_path / "out.json", "abc", {"x": np.array([1., 2.]), "n": np.int64(3),
												   "ok": np.bool_(True), "bound": math.inf})
	document = json.loads(path.read_text())
	assert document["header"] == {"version": "1.0.0", "config_sha256": "abc"}
	assert document["x"] == [1., 2.] and document["n"] == 3 and document["ok"] is True
	assert document["bound"] == "inf"
