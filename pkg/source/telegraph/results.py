
'''
Writers for the CSV and JSON result files.

Every file starts with a header naming the package version and the SHA-256 of the
resolved scenario. Floats are written with 17 significant digits so that they
read back to the same double.
'''

import csv
import json
import math
import numbers
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Union

import numpy as np

from .version import __version__

def format_value(value:Any) -> str:
	''' Integers as integers, floats with ".17g", everything else with str(). '''
	if isinstance(value, (bool, np.bool_)):
		return str(bool(value)).lower()
	if isinstance(value, numbers.Integral):
		return str(int(value))
	if isinstance(value, numbers.Real):
		return format(float(value), ".17g")
	if value is None:
		return ""
	return str(value)

def header(config_sha256:str) -> Dict[str, str]:
	return {"version": __version__, "config_sha256": config_sha256}

def write_csv(path:Union[str, Path], config_sha256:str, columns:Sequence[str], rows:Iterable[Sequence[Any]]) -> Path:
	'''
	Write a CSV file with a "#" header block followed by the column row.

	:param path: output file
	:param config_sha256: hash of the resolved scenario
	:param columns: column names
	:param rows: row values (formatted with :py:func:`format_value`)
	'''
	path = Path(path)
	with open(path, "w", newline="", encoding="utf-8") as f:
		f.write(f"# telegraph {__version__}\n")
		f.write(f"# config_sha256 {config_sha256}\n")
		writer = csv.writer(f, lineterminator="\n")
		writer.writerow(columns)
		for row in rows:
			writer.writerow([format_value(v) for v in row])
	return path

def _jsonable(value:Any) -> Any:
	if isinstance(value, dict):
		return {str(k): _jsonable(v) for k, v in value.items()}
	if isinstance(value, (list, tuple)):
		return [_jsonable(v) for v in value]
	if isinstance(value, np.ndarray):
		return [_jsonable(v) for v in value.tolist()]
	if isinstance(value, (bool, np.bool_)):
		return bool(value)
	if isinstance(value, numbers.Integral):
		return int(value)
	if isinstance(value, numbers.Real):
		value = float(value)
		return value if math.isfinite(value) else str(value)
	return value

def write_json(path:Union[str, Path], config_sha256:str, payload:Dict[str, Any]) -> Path:
	'''
	Write ``payload`` plus a "header" object as JSON (sorted keys, indent 2).
	'''
	path = Path(path)
	document = dict(_jsonable(payload))
	document["header"] = header(config_sha256)
	with open(path, "w", encoding="utf-8") as f:
		json.dump(document, f, sort_keys=True, indent=2)
		f.write("\n")
	return path

def read_csv(path:Union[str, Path]):
	'''
	Read a result CSV file.

	:returns: (header lines without "# ", column names, rows as lists of strings)
	'''
	comments = list()
	with open(path, newline="", encoding="utf-8") as f:
		lines = f.read().splitlines()
	while lines and lines[0].startswith("#"):
		comments.append(lines.pop(0)[2:])
	reader = csv.reader(lines)
	columns = next(reader)
	return comments, columns, [row for row in reader]
