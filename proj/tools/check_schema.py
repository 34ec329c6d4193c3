"""Validate a JSON document against a schema in docs/ (relative $refs resolved there)."""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: check_schema.py SCHEMA DOCUMENT", file=sys.stderr)
        return 2
    schema_path = pathlib.Path(sys.argv[1])
    schema = json.loads(schema_path.read_text())
    registry = Registry()
    for p in schema_path.parent.glob("*.schema.json"):
        registry = registry.with_resource(p.name, Resource.from_contents(json.loads(p.read_text())))
    doc = json.loads(pathlib.Path(sys.argv[2]).read_text())
    jsonschema.Draft202012Validator(schema, registry=registry).validate(doc)
    print("valid:", sys.argv[2])
    return 0


if __name__ == "__main__":
    sys.exit(main())
