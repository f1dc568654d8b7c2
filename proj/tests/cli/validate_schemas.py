"""Validate fermat_lab JSON outputs and checkpoint files against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def load_schema(directory, name):
    with open(directory / name) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


def run(binary, *args, expect=0):
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise SystemExit(f"{' '.join(args)}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return proc.stdout


def main():
    binary = sys.argv[1]
    schemas = pathlib.Path(sys.argv[2])
    verdict = load_schema(schemas, "verdict_record.schema.json")
    checkpoint = load_schema(schemas, "checkpoint.schema.json")
    audit = load_schema(schemas, "audit_summary.schema.json")
    factor = load_schema(schemas, "factor_result.schema.json")
    order = load_schema(schemas, "order_result.schema.json")

    cases = [
        (verdict, ["pepin", "4"]),
        (verdict, ["pepin", "9", "--base", "5"]),
        (verdict, ["classify", "5", "--base", "2"]),
        (verdict, ["classify", "4", "--base", "3"]),
        (verdict, ["classify", "7", "--base", "0x1d"]),
        (audit, ["audit", "--n-range", "5..6", "--bases", "2,3,641"]),
        (audit, ["audit", "--n-range", "2..4", "--bases", "3"]),
        (factor, ["factor", "5", "--k-max", "60000"]),
        (factor, ["factor", "3"]),
        (order, ["order", "5", "--base", "2"]),
        (order, ["order", "5", "--base", "3"]),
        (order, ["order", "2", "--base", "3"]),
    ]
    checked = 0
    for validator, args in cases:
        validator.validate(json.loads(run(binary, *args)))
        checked += 1

    with tempfile.TemporaryDirectory() as tmp:
        run(binary, "pepin", "10", "--checkpoint-dir", tmp, "--checkpoint-every", "100",
            "--stop-at", "350", expect=130)
        files = list(pathlib.Path(tmp).glob("*.ckpt.json"))
        if len(files) != 1:
            raise SystemExit(f"expected one checkpoint, found {files}")
        with open(files[0]) as f:
            checkpoint.validate(json.load(f))
        checked += 1
        resumed = json.loads(run(binary, "pepin", "10", "--checkpoint-dir", tmp))
        verdict.validate(resumed)
        if resumed["timing"]["resumed_from"] != 300:
            raise SystemExit(f"resumed from {resumed['timing']['resumed_from']}, expected 300")
        checked += 1

    # A record with an unexpected field must be rejected.
    bad = json.loads(run(binary, "pepin", "4"))
    bad["extra"] = 1
    if verdict.is_valid(bad):
        raise SystemExit("schema accepted an unknown field")

    print(f"{checked} documents valid")


if __name__ == "__main__":
    main()
