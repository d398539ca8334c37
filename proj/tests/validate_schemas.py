"""Runs every subcommand on the sample inputs and validates the JSON it prints."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main() -> int:
    cli, samples, schemas = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    s = str(samples)

    cases = [
        ("analyze", 0, ["analyze", "--file", f"{s}/two_balls.set"]),
        ("analyze", 0, ["analyze", "--file", f"{s}/example2.set", "--format", "ndjson"]),
        ("analyze", 1, ["analyze", "--file", f"{s}/three_balls.set"]),
        ("analyze", 0, ["analyze", "p=5; {Z_p}"]),
        ("verdict", 1, ["classify", "--p", "2", "--gamma", "2", "--set", "0,1,2", "--set", "1,3", "--oracle"]),
        ("verdict", 0, ["classify", "--p", "3", "--gamma", "2", "--set", "0,4,8"]),
        ("verdict", 0, ["enumerate", "--p", "2", "--gamma", "3", "--oracle"]),
        ("verdict", 0, ["enumerate", "--p", "3", "--gamma", "2", "--I", "1", "--limit", "20"]),
        ("verify", 0, ["verify", "--file", f"{s}/two_balls.set", "--spectrum", f"@{s}/two_balls_spectrum.json",
                       "--certificate"]),
        ("verify", 1, ["verify", "--file", f"{s}/two_balls.set", "--spectrum", f"@{s}/two_balls_bad_spectrum.json"]),
        ("verify", 0, ["verify", "--file", f"{s}/two_balls.set", "--complement", f"@{s}/two_balls_complement.json",
                       "--certificate"]),
        ("verify", 1, ["verify", "--file", f"{s}/two_balls.set", "--complement",
                       f"@{s}/two_balls_bad_complement.json"]),
        ("verify", 0, ["verify", "--file", f"{s}/example2.set", "--spectrum", "canonical", "--certificate"]),
        ("verify", 0, ["verify", "--file", f"{s}/example1.set", "--complement", "canonical"]),
        ("tree", 0, ["tree", "--file", f"{s}/example2.set"]),
        ("tree", 0, ["tree", "--file", f"{s}/three_balls.set", "--format", "ndjson"]),
        ("measure", 0, ["measure", "--spec", "example1", "--gamma", "6", "--verify", "3"]),
        ("measure", 0, ["measure", "--spec", f"@{s}/table_measure.json", "--gamma", "4"]),
        ("oracle", 0, ["oracle", "--p", "3", "--gamma", "2"]),
        ("oracle", 0, ["oracle", "--p", "3", "--gamma", "3", "--samples", "200", "--seed", "7"]),
    ]

    failures = 0
    for name, expected, args in cases:
        schema = json.loads((schemas / f"{name}.schema.json").read_text())
        validator = jsonschema.Draft202012Validator(schema)
        proc = subprocess.run([cli, *args], capture_output=True, text=True)
        label = " ".join(args)
        if proc.returncode != expected:
            print(f"FAIL exit {proc.returncode} != {expected}: {label}\n{proc.stderr}")
            failures += 1
            continue
        out = proc.stdout
        docs = [json.loads(line) for line in out.splitlines() if line.strip()] if not out.startswith("{\n") \
            else [json.loads(out)]
        if not docs:
            print(f"FAIL no output: {label}")
            failures += 1
        for doc in docs:
            errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
            for e in errors:
                print(f"FAIL {label}: {list(e.path)}: {e.message}")
            failures += bool(errors)
        if not failures:
            print(f"ok   {len(docs):5d} doc(s): {label}")

    # Negative controls: the schemas must reject these.
    bad = [
        ("analyze", {"p": 2, "gamma": 1, "digits": [0], "scale": 0, "offset": "0", "homogeneous": True, "I": [],
                     "J": [0], "I_Omega": {"finite": [], "tail": 1}, "measure": "1/2"}),
        ("analyze", {"p": 2, "gamma": 1, "digits": [0], "scale": 0, "offset": "0", "homogeneous": False, "I": [],
                     "J": [], "I_Omega": {"finite": [], "tail": 1}, "measure": "0.5"}),
        ("verify", {"kind": "spectral", "ok": False, "spectrum": {"p": 2, "level": 3, "finite": ["0"]}}),
        ("verify", {"kind": "tiling", "ok": True, "spectrum": {"p": 2, "level": 3, "finite": ["0"]}}),
        ("oracle", {"p": 2, "gamma": 1, "mode": "random", "seed": 0, "checked": 3, "homogeneous": 3,
                    "disagreements": 0}),
    ]
    for name, doc in bad:
        schema = json.loads((schemas / f"{name}.schema.json").read_text())
        if jsonschema.Draft202012Validator(schema).is_valid(doc):
            print(f"FAIL {name} schema accepted {doc}")
            failures += 1

    for path in sorted(schemas.glob("*.schema.json")):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
