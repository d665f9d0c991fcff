#!/usr/bin/env python3
"""Run the CLI over a handful of configs and validate every JSON report
against the schemas. Also checks that repeated runs are byte-identical.

usage: validate_reports.py <cuntzlab binary> <schemas dir>
"""
import json
import pathlib
import subprocess
import sys

import jsonschema

RUNS = [
    ("build", ["--group", "Z2", "--eta", "1/4", "--stages", "3"], 0),
    ("build", ["--group", "Q8", "--eta", "1/16", "--stages", "2"], 0),
    ("verify", ["--group", "Z2", "--eta", "1/4", "--stages", "3", "--matrix-cap", "256",
                "--seed", "5", "--trials", "3"], 0),
    ("verify", ["--group", "Z2", "--eta", "1/4", "--stages", "1", "--seed", "5",
                "--trials", "2", "--timing"], 0),
    ("rc-table", ["--group", "S3", "--eta", "1/12", "--stages", "5", "--decimals"], 0),
    ("certificate", ["--group", "Z2", "--eta", "1/4", "--lambda", "1/5"], 0),
    ("crossed-report", ["--group", "D4", "--eta", "1/16", "--stages", "1", "--trials", "3"], 0),
    ("verify", ["--group", "Z2", "--eta", "1/4"], 2),
    ("certificate", ["--group", "Z2", "--eta", "1/4", "--lambda", "1/4"], 2),
    ("build", ["--group", "Z2", "--eta", "0.25"], 2),
]


def run(cli, command, args):
    p = subprocess.run([cli, command, *args], capture_output=True, check=False)
    return p.returncode, p.stdout


def main():
    cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text())
               for p in schema_dir.glob("*.schema.json")}
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)
    failures = 0
    for command, args, want in RUNS:
        code, out = run(cli, command, args)
        label = " ".join([command, *args])
        try:
            doc = json.loads(out)
            schema = schemas["error"] if want != 0 else schemas[command]
            jsonschema.validate(doc, schema)
            if code != want:
                raise AssertionError(f"exit code {code}, expected {want}")
            if "--timing" not in args:
                code2, out2 = run(cli, command, args)
                if out2 != out or code2 != code:
                    raise AssertionError("output differs between identical runs")
            print(f"ok   {label}")
        except (json.JSONDecodeError, jsonschema.ValidationError, AssertionError) as e:
            failures += 1
            print(f"FAIL {label}: {str(e).splitlines()[0]}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
