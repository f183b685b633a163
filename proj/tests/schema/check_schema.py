"""Checks that the published config schema and the CLI agree.

Every document is validated by jsonschema and fed to `cloudgan --config doc init`;
both must accept it or both must reject it (exit code 2).
"""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
schema = json.loads(pathlib.Path(schema_path).read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

valid = [
    {},
    {"train": {"epochs": 3, "lr": 1e-3, "seed": 9}, "generator": {"variant": "DUAL", "mode": "EIGHT"}},
    {"dataset": {"root": "data", "resize": 128, "pool": 0}, "losses": {"lambda_att": 0}},
    {"detect": {"threshold": 0.5, "rules": [{"band": "B10", "threshold": 0.02, "weight": 0.2, "kind": "boost"}]}},
]
invalid = [
    {"extra": {}},
    {"train": {"learning_rate": 0.1}},
    {"train": {"lr": -1}},
    {"train": {"epochs": 0}},
    {"generator": {"mode": "SIX"}},
    {"losses": {"adversarial": "hinge"}},
    {"detect": {"threshold": 1.5}},
    {"detect": {"rules": [{"band": "B10", "kind": "shadow"}]}},
    {"dataset": {"resize": -4}},
]

failures = 0
with tempfile.TemporaryDirectory() as tmp:
    out = subprocess.run([cli, "--out", tmp, "init"], capture_output=True, text=True, check=True)
    run_dir = pathlib.Path(out.stdout.split("run directory: ")[1].splitlines()[0])
    valid.append(json.loads((run_dir / "config.json").read_text()))  # the defaults the CLI writes

    for expected, docs in ((True, valid), (False, invalid)):
        for doc in docs:
            path = pathlib.Path(tmp) / "doc.json"
            path.write_text(json.dumps(doc))
            schema_ok = validator.is_valid(doc)
            code = subprocess.run([cli, "--config", str(path), "--out", tmp, "init"], capture_output=True).returncode
            cli_ok = code == 0
            if schema_ok != expected or cli_ok != expected or (not expected and code != 2):
                failures += 1
                print(f"mismatch: {json.dumps(doc)} schema={schema_ok} cli_exit={code} expected_valid={expected}")

print(f"{len(valid) + len(invalid) - failures} of {len(valid) + len(invalid)} documents agree")
sys.exit(1 if failures else 0)
