"""Validate analyze and validate reports against the published JSON schema."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

cli, source = sys.argv[1], Path(sys.argv[2])
schema = json.loads((source / "tools" / "report.schema.json").read_text())


def run(*args):
    return json.loads(subprocess.run([cli, *args], check=True, capture_output=True, text=True).stdout)


reports = [
    run("analyze", str(source / "networks" / "enzyme.rxn"), "--mi", "S1;S2;P1,P2"),
    run("analyze", "builtin:ou", "--n", "3", "--no-timestamp", "--validate", "--samples", "5000"),
    run("analyze", "builtin:ou", "--n", "14", "--no-timestamp"),
]
with tempfile.TemporaryDirectory() as tmp:
    ens = str(Path(tmp) / "ou.bin")
    subprocess.run([cli, "simulate", "builtin:ou", "--n", "2", "--samples", "5000", "--out", ens],
                   check=True, capture_output=True)
    validation = run("validate", ens, "builtin:ou")

for i, report in enumerate(reports):
    jsonschema.validate(report, schema)
    print(f"report {i}: valid ({report['schema_version']})")

document = {"$ref": "#/definitions/validation_document", "definitions": schema["definitions"]}
jsonschema.validate(validation, document)
print(f"validation document: valid ({validation['schema_version']})")
