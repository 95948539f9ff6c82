"""JSON schemas for every file the command line reads or writes."""

from __future__ import annotations

import json

import jsonschema

from .codes import SCHEMA_VERSION
from .errors import SchemaError

__all__ = ["SCHEMA_VERSION", "CODE", "POINT_SET", "FUNCTION", "NET", "REPORT", "validate", "load"]

_int_rows = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}

CODE = {
    "type": "object",
    "required": ["q", "k", "n"],
    "properties": {
        "schema_version": {"type": "string"},
        "q": {"type": "integer", "minimum": 2},
        "k": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "linear": {"type": "boolean"},
        "generator": _int_rows,
        "words": _int_rows,
    },
    "anyOf": [{"required": ["generator"]}, {"required": ["words"]}],
}

POINT_SET = {
    "type": "object",
    "required": ["q", "k"],
    "properties": {
        "schema_version": {"type": "string"},
        "q": {"type": "integer", "minimum": 2},
        "k": {"type": "integer", "minimum": 1},
        "points": _int_rows,
        "hyperplanes": _int_rows,
        "reference": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
    "anyOf": [{"required": ["points"]}, {"required": ["hyperplanes"]}],
}

FUNCTION = {
    "type": "object",
    "required": ["q", "values"],
    "properties": {
        "schema_version": {"type": "string"},
        "q": {"type": "integer", "minimum": 2},
        "values": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}

NET = {
    "type": "object",
    "required": ["q", "classes"],
    "properties": {
        "schema_version": {"type": "string"},
        "q": {"type": "integer", "minimum": 2},
        "n": {"type": "integer", "minimum": 0},
        "classes": {"type": "array", "items": _int_rows},
    },
}

REPORT = {
    "type": "object",
    "required": ["schema_version", "command", "inputs_digest", "tool_version", "field",
                 "results", "search_stats"],
    "properties": {
        "schema_version": {"type": "string"},
        "command": {"type": "string"},
        "inputs_digest": {"type": "string"},
        "tool_version": {"type": "string"},
        "field": {"type": ["object", "null"]},
        "results": {},
        "search_stats": {"type": "object"},
    },
}


def validate(obj, schema: dict, what: str = "input"):
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{what}: {exc.message}") from exc
    return obj


def load(path: str, schema: dict):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    return validate(obj, schema, path)
