#!/usr/bin/env python

'''
Regenerate source/tests/data/linear_reference_summary.json.

The linear scenario is solved twice; the script stops if the two runs do not
write identical files. Only fields that do not depend on floating-point
details of the solve are stored.
'''

import sys
import json
import argparse
import tempfile
from pathlib import Path

from telegraph.cli import main as telegraph_main

DATA = Path(__file__).resolve().parent.parent / "source" / "tests" / "data"
GOLDEN_KEYS = ("nu", "kappa", "n", "capacity", "radius", "c", "omega", "T0", "t_end", "cells", "alpha", "admissible")
OUTPUTS = ("trajectory.csv", "constraint.csv", "residuals.csv", "summary.json")

def main(argv=None) -> int:
	parser = argparse.ArgumentParser(description="Regenerate the golden summary of the linear scenario.")
	parser.add_argument("--config", default=str(DATA / "linear_reference.json"), help="scenario file")
	parser.add_argument("--output", default=str(DATA / "linear_reference_summary.json"), help="golden file to write")
	args = parser.parse_args(argv)

	with tempfile.TemporaryDirectory() as tmp:
		runs = [Path(tmp) / "a", Path(tmp) / "b"]
		for out in runs:
			status = telegraph_main(["solve", "--config", args.config, "--out", str(out)])
			if status != 0:
				print(f"ERROR: telegraph solve exited with status {status}", file=sys.stderr)
				return status
		for name in OUTPUTS:
			if (runs[0] / name).read_bytes() != (runs[1] / name).read_bytes():
				print(f"ERROR: {name} differs between two runs", file=sys.stderr)
				return 1
		summary = json.loads((runs[0] / "summary.json").read_text())

	golden = {key: summary[key] for key in GOLDEN_KEYS}
	with open(args.output, "w", encoding="utf-8") as f:
		json.dump(golden, f, sort_keys=True, indent=2)
		f.write("\n")
	print(f"Wrote: {args.output}")
	return 0

if __name__ == "__main__":
	raise SystemExit(main())
