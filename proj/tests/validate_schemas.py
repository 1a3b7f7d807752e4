#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Runs each JSON-emitting CLI command and validates its output against docs/schemas."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    tool, root = sys.argv[1], Path(sys.argv[2])
    schemas = root / "docs" / "schemas"
    fixture = root / "fixtures" / "skewed.csv"
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp)
        cases = [
            ("risk", ["risk", "--prior", "jeffreys", "--lambda", "0.4", "--r", "1,1,1", "--s", "1"]),
            ("risk", ["risk-diff", "--prior", "shift-point:alpha=0.5", "--lambda", "0.5",
                      "--r", "1,1,1", "--s", "1", "--n", "2000"]),
            ("predict", ["predict", "--x", "1,0,4", "--r", "1", "--s", "1", "--prior", "jeffreys",
                         "--emit", "mean"]),
            ("predict", ["predict", "--x", "1,0,4", "--y", "0,1,3", "--r", "1", "--s", "1",
                         "--prior", "shift-point:alpha=0.5", "--emit", "loglik"]),
            ("predict", ["predict", "--x", "1,0,4", "--r", "1", "--s", "1", "--prior",
                         "gamma:alpha=1,beta=0.5", "--emit", "sample", "--n", "3"]),
            ("bounds", ["bounds", "--r", "1,1,1", "--s", "1,1,1"]),
            ("check", ["check", "--prior", "shift-point:alpha=0.5", "--r-grid", "1,1,1;2,2,2",
                       "--zmax", "2"]),
            ("evaluate", ["evaluate", "--data", str(fixture), "--r", "2", "--s", "2",
                          "--priors", "jeffreys;mix-coord-subspace:alpha=0.5"]),
            ("lemma-l", ["lemma-l", "--lambda", "3,4,5"]),
        ]
        failures = 0
        for k, (schema_name, args) in enumerate(cases):
            target = out / f"case{k}.json"
            subprocess.run([tool, *args, "--out", str(target)], check=True,
                           stdout=subprocess.DEVNULL)
            failures += validate(schemas / f"{schema_name}.schema.json", target, args[0])

        exp_dir = out / "experiment"
        subprocess.run([tool, "experiment", "1", "--grid", "0.5,2,2", "--n", "2000",
                        "--out", str(exp_dir)], check=True, stdout=subprocess.DEVNULL)
        failures += validate(schemas / "experiment.schema.json", exp_dir / "experiment1.json",
                             "experiment")
        header = (exp_dir / "experiment1.csv").read_text().splitlines()[0]
        if header != "Lambda,prior,reduction,se,log_reduction":
            print(f"FAIL experiment csv header: {header}")
            failures += 1
    return 1 if failures else 0


def validate(schema_path: Path, document_path: Path, label: str) -> int:
    schema = json.loads(schema_path.read_text())
    document = json.loads(document_path.read_text())
    try:
        jsonschema.validate(document, schema)
    except jsonschema.ValidationError as e:
        print(f"FAIL {label}: {e.message}")
        return 1
    print(f"ok   {label} against {schema_path.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
