"""Diagram files: a versioned JSON envelope around supercomplexes, systems, extensions and morphisms.

    {"version": "1", "ring": "Z", "kind": "pro", "payload": {...}}

Scalars are strings ("3/7", "-2") so no value ever passes through a float.
"""
from __future__ import annotations

from dataclasses import dataclass
import json

import jsonschema

from .errors import ProkomError, SchemaError
from .exactbase.rings import ring_from_name
from .indpro.extensions import ExtensionTriple
from .indpro.systems import IndComplex, IndMorphism, ProIndComplex, ProIndMorphism
from .supercomplex import GradedMap, SuperComplex

VERSION = "1"
KINDS = ("supercomplex", "ind", "pro", "extension", "morphism")

_MATRIX = {
    "type": "object",
    "required": ["rows", "cols", "entries"],
    "properties": {
        "rows": {"type": "integer", "minimum": 0},
        "cols": {"type": "integer", "minimum": 0},
        "entries": {"type": "array", "items": {"type": "string", "pattern": r"^\s*-?\d+(/\d+)?\s*$"}},
    },
}
_ORDERS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_CHAIN = {"type": "object", "required": ["f0", "f1"], "properties": {"f0": {"$ref": "#/$defs/matrix"},
                                                                   "f1": {"$ref": "#/$defs/matrix"}}}
_WINDOW = {"type": "object", "required": ["length", "tail"],
           "properties": {"length": {"type": "integer", "minimum": 1},
                          "tail": {"enum": ["stabilizing", "unknown"]}}}
_SUPER = {"type": "object", "required": ["c0", "c1", "d0", "d1"],
          "properties": {"ring": {"type": "string"}, "c0": _ORDERS, "c1": _ORDERS,
                         "d0": {"$ref": "#/$defs/matrix"}, "d1": {"$ref": "#/$defs/matrix"}}}
_IND = {"type": "object", "required": ["window", "levels", "transitions"],
        "properties": {"window": {"$ref": "#/$defs/window"},
                       "levels": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/supercomplex"}},
                       "transitions": {"type": "array", "items": {"$ref": "#/$defs/chain"}}}}
_IND_MAP = {"type": "object", "required": ["level_map", "components"],
            "properties": {"level_map": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                           "components": {"type": "array", "items": {"$ref": "#/$defs/chain"}}}}
_PRO = {"type": "object", "required": ["window", "levels", "transitions"],
        "properties": {"window": {"$ref": "#/$defs/window"},
                       "levels": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/ind"}},
                       "transitions": {"type": "array", "items": {"$ref": "#/$defs/ind_map"}}}}
_MORPHISM = {"type": "object", "required": ["source", "target", "components"],
             "properties": {"source": {"$ref": "#/$defs/pro"}, "target": {"$ref": "#/$defs/pro"},
                            "components": {"type": "array",
                                           "items": {"type": "array", "items": {"$ref": "#/$defs/chain"}}}}}
_EXTENSION = {"type": "object", "required": ["level", "K", "E", "Q", "incl", "proj"],
              "properties": {"level": {"enum": ["base", "ind", "pro"]}}}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "ring", "kind", "payload"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": VERSION},
        "ring": {"type": "string"},
        "kind": {"enum": list(KINDS)},
        "payload": {"type": "object"},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": k}}}, "then": {"properties": {"payload": {"$ref": f"#/$defs/{k}"}}}}
        for k in KINDS
    ],
    "$defs": {"matrix": _MATRIX, "chain": _CHAIN, "window": _WINDOW, "supercomplex": _SUPER, "ind": _IND,
              "ind_map": _IND_MAP, "pro": _PRO, "morphism": _MORPHISM, "extension": _EXTENSION},
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


@dataclass
class DiagramFile:
    ring: object
    kind: str
    value: object
    version: str = VERSION

    def to_json(self):
        return {"version": self.version, "ring": self.ring.name, "kind": self.kind, "payload": self.value.to_json()}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def kind_of(value) -> str:
    if isinstance(value, SuperComplex):
        return "supercomplex"
    if isinstance(value, IndComplex):
        return "ind"
    if isinstance(value, ProIndComplex):
        return "pro"
    if isinstance(value, ExtensionTriple):
        return "extension"
    if isinstance(value, (ProIndMorphism, IndMorphism, GradedMap)):
        return "morphism"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def diagram(value) -> DiagramFile:
    """Wrap a value; morphisms are stored as levelwise pro-ind morphisms."""
    kind = kind_of(value)
    if kind == "morphism" and not isinstance(value, ProIndMorphism):
        from .modelcheck import as_pro_map
        value = as_pro_map(value)
    return DiagramFile(value.ring, kind, value)


def _payload_rings(obj):
    if isinstance(obj, dict):
        if isinstance(obj.get("ring"), str):
            yield obj["ring"]
        for v in obj.values():
            yield from _payload_rings(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _payload_rings(v)


def _where(err) -> str:
    path = "/".join(str(p) for p in err.absolute_path)
    return f"at /{path}" if path else "at the top level"


def parse_diagram(text: str, source="<input>") -> DiagramFile:
    """Parse and validate a diagram file; errors carry line positions or JSON paths."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    errors = sorted(_VALIDATOR.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(f"{source}: {err.message} ({_where(err)})")
    try:
        ring = ring_from_name(obj["ring"])
    except (KeyError, ValueError, ProkomError) as exc:
        raise SchemaError(f"{source}: unknown ring {obj['ring']!r}") from exc
    for name in _payload_rings(obj["payload"]):
        if name != ring.name:
            raise SchemaError(f"{source}: payload ring {name!r} differs from envelope ring {ring.name!r}")
    loader = {"supercomplex": SuperComplex.from_json, "ind": IndComplex.from_json, "pro": ProIndComplex.from_json,
              "extension": ExtensionTriple.from_json, "morphism": ProIndMorphism.from_json}[obj["kind"]]
    try:
        value = loader(obj["payload"], ring)
    except (ProkomError, KeyError, IndexError, TypeError, ValueError) as exc:
        raise SchemaError(f"{source}: inconsistent payload: {exc}") from exc
    return DiagramFile(ring, obj["kind"], value)


def load_diagram(path) -> DiagramFile:
    with open(path) as fh:
        return parse_diagram(fh.read(), str(path))


def save_diagram(value, path):
    d = value if isinstance(value, DiagramFile) else diagram(value)
    with open(path, "w") as fh:
        fh.write(d.dumps() + "\n")
    return d
