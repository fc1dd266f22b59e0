#!/usr/bin/env python3
"""Runs the scbta binary on the sample programs and validates its JSON output
against docs/schema and its DOT output with pydot's DOT parser."""

import argparse
import json
import pathlib
import subprocess
import sys

import jsonschema
import pydot
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        schemas[path.name] = json.loads(path.read_text())
    registry = Registry().with_resources(
        (name, Resource.from_contents(doc)) for name, doc in schemas.items()
    )
    return schemas, registry


def run(binary, args):
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return proc.stdout


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--binary", required=True)
    ap.add_argument("--root", required=True)
    opts = ap.parse_args()
    root = pathlib.Path(opts.root)
    progs = root / "programs"
    schemas, registry = load_registry(root / "docs" / "schema")

    inclist = ["--program", str(progs / "inclist.pl"), "--entry", "incList/3: d,s,d"]
    countdown = ["--program", str(progs / "countdown.pl"), "--division",
                 str(progs / "countdown.div")]
    facts = ["--program", str(progs / "facts.pl")]
    json_cases = [
        ("annotation.schema.json", ["analyze", *inclist, "--format", "json"]),
        ("annotation.schema.json", ["analyze", *inclist, "--min-memo", "--format", "json"]),
        ("annotation.schema.json", ["analyze", *inclist, "--norm", "list_length", "--format", "json"]),
        ("annotation.schema.json", ["analyze", *countdown, "--relations", str(progs / "countdown.rel"),
                                    "--unfoldable", "q/2", "--format", "json"]),
        ("run.schema.json", ["run", "--program", str(progs / "inclist.pl"),
                             "--goal", "incList([0,s(0)],s(0),R)", "--format", "json"]),
    ]
    dot_cases = []
    for sel in ("--base", "--closure", "--idempotent"):
        json_cases.append(("graphs.schema.json", ["graphs", *inclist, sel, "--format", "json"]))
        dot_cases.append(["graphs", *inclist, sel, "--format", "dot"])
    json_cases.append(("graphs.schema.json", ["graphs", *facts, "--format", "json"]))
    dot_cases.append(["graphs", *facts, "--format", "dot"])

    failures = 0
    for schema_name, args in json_cases:
        doc = json.loads(run(opts.binary, args))
        validator = jsonschema.Draft202012Validator(schemas[schema_name], registry=registry)
        errors = list(validator.iter_errors(doc))
        status = "ok" if not errors else f"INVALID: {errors[0].message}"
        failures += bool(errors)
        print(f"json {schema_name:24} {' '.join(args[:1] + args[-3:])}: {status}")
    for args in dot_cases:
        text = run(opts.binary, args)
        graphs = pydot.graph_from_dot_data(text)
        ok = graphs is not None and len(graphs) == 1
        failures += not ok
        print(f"dot  {' '.join(args[:1] + args[-3:])}: {'ok' if ok else 'PARSE ERROR'}")
    print(f"{len(json_cases) + len(dot_cases) - failures} of {len(json_cases) + len(dot_cases)} outputs valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
