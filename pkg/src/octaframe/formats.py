"""File formats: trajectory CSV, field-spec JSON, Wavefront OBJ.

Floats are serialized with ``repr`` (shortest string that round-trips the
exact double), writes are atomic (temp file + rename), and document key
order is fixed, so identical inputs always produce identical bytes.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import List, Optional, Tuple

import jsonschema
import numpy as np

from . import sampling, sh3
from .descent import DescentConfig
from .field import FieldOptConfig, FrameField, grid_boundary_mask
from .semisymmetry import PenaltyWeights

TRAJECTORY_HEADER = "iter,a_m3,a_m2,a_m1,a_0,a_1,a_2,a_3,penalty,sqrt_penalty,distance"


def format_float(x: float) -> str:
    """Shortest decimal string that parses back to exactly this double."""
    return repr(float(x))


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never observe
    a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Trajectory CSV
# ---------------------------------------------------------------------------


def trajectory_csv_text(trajectory) -> str:
    lines = [TRAJECTORY_HEADER]
    for p in trajectory.points:
        cells = [str(p.iteration)]
        cells += [format_float(c) for c in p.octupole]
        cells += [
            format_float(p.penalty),
            format_float(p.sqrt_penalty),
            format_float(p.distance),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_trajectory_csv(path: str, trajectory) -> None:
    atomic_write_text(path, trajectory_csv_text(trajectory))


# ---------------------------------------------------------------------------
# Field spec / field result JSON
# ---------------------------------------------------------------------------

_COEFFS = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 7,
    "maxItems": 7,
}
_ANGLES = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 3,
    "maxItems": 3,
}
_VALUE_KEYS = {"coeffs": _COEFFS, "angles": _ANGLES}

FIELD_SPEC_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "grid": {
            "type": "array",
            "items": {"type": "integer", "minimum": 1},
            "minItems": 3,
            "maxItems": 3,
        },
        "boundary": {
            "type": "object",
            "properties": _VALUE_KEYS,
            "additionalProperties": False,
            "minProperties": 1,
            "maxProperties": 1,
        },
        "pins": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"node": {"type": "integer", "minimum": 0}, **_VALUE_KEYS},
                "required": ["node"],
                "additionalProperties": False,
                "minProperties": 2,
                "maxProperties": 2,
            },
        },
        "nodes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {"pinned": {"type": "boolean"}, **_VALUE_KEYS},
                "additionalProperties": False,
                "not": {"required": ["coeffs", "angles"]},
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "seed": {"type": "integer", "minimum": 0},
        "weights": {
            "type": "object",
            "properties": {
                "w1": {"type": "number", "exclusiveMinimum": 0},
                "w2": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "optimizer": {
            "type": "object",
            "properties": {
                "step": {"type": "number", "exclusiveMinimum": 0},
                "max_iters": {"type": "integer", "minimum": 1},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "backtrack": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "armijo": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "levels": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "energy_history": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}},
        },
    },
    "additionalProperties": False,
    "oneOf": [
        {"required": ["grid"], "properties": {"nodes": False, "edges": False}},
        {
            "required": ["nodes", "edges"],
            "properties": {"grid": False, "boundary": False, "pins": False},
        },
    ],
}


def validate_field_spec(doc: dict) -> None:
    """Raise jsonschema.ValidationError (with a JSON path) on a bad spec."""
    jsonschema.validate(doc, FIELD_SPEC_SCHEMA)


def _pin_value(entry: dict) -> np.ndarray:
    if "coeffs" in entry:
        return np.asarray(entry["coeffs"], dtype=np.float64)
    return sh3.semisymmetric_from_angles(*entry["angles"])


def read_field_spec(doc: dict) -> Tuple[FrameField, FieldOptConfig]:
    """Build the initial field and optimizer settings from a validated
    spec document.  Unpinned nodes without explicit values start as seeded
    random unit octupoles."""
    validate_field_spec(doc)
    rng = sampling.make_rng(int(doc.get("seed", 0)))

    if "grid" in doc:
        nx, ny, nz = doc["grid"]
        f = FrameField.grid(nx, ny, nz)
        values = np.array(
            [sampling.random_unit_octupole(rng) for _ in range(f.n_nodes)]
        )
        pinned = np.zeros(f.n_nodes, dtype=bool)
        if "boundary" in doc:
            mask = grid_boundary_mask(f.dims)
            values[mask] = _pin_value(doc["boundary"])
            pinned[mask] = True
        for pin in doc.get("pins", ()):
            node = pin["node"]
            if node >= f.n_nodes:
                raise ValueError(f"pin index {node} out of range")
            values[node] = _pin_value(pin)
            pinned[node] = True
        field = FrameField(values, pinned, f.edges, f.dims)
    else:
        rows = []
        pinned = []
        for node in doc["nodes"]:
            if "coeffs" in node or "angles" in node:
                rows.append(_pin_value(node))
            else:
                rows.append(sampling.random_unit_octupole(rng))
            pinned.append(bool(node.get("pinned", False)))
        field = FrameField(
            np.array(rows), np.array(pinned, dtype=bool), doc["edges"], None
        )

    weights = PenaltyWeights(**doc.get("weights", {}))
    optimizer = dict(doc.get("optimizer", {}))
    levels = optimizer.pop("levels", 1)
    defaults = FieldOptConfig()
    descent_args = {
        "step": defaults.descent.step,
        "max_iters": defaults.descent.max_iters,
        "tol": defaults.descent.tol,
        "backtrack": defaults.descent.backtrack,
        "armijo": defaults.descent.armijo,
    }
    descent_args.update(optimizer)
    cfg = FieldOptConfig(
        weights=weights, descent=DescentConfig(**descent_args), levels=levels
    )
    return field, cfg


def field_json_text(
    field: FrameField, energy_history: Optional[List[List[float]]] = None
) -> str:
    """Serialize a field as an explicit-graph document (always re-readable
    as a field spec)."""
    doc = {
        "nodes": [
            {"coeffs": [float(c) for c in row], "pinned": bool(pin)}
            for row, pin in zip(field.values, field.pinned)
        ],
        "edges": [[int(i), int(j)] for i, j in field.edges],
    }
    if energy_history is not None:
        doc["energy_history"] = energy_history
    return json.dumps(doc, indent=2) + "\n"


def write_field_json(
    path: str,
    field: FrameField,
    energy_history: Optional[List[List[float]]] = None,
) -> None:
    atomic_write_text(path, field_json_text(field, energy_history))


def read_field_json(path: str) -> Tuple[FrameField, Optional[List[List[float]]]]:
    """Load an emitted (or hand-written explicit-graph) field document."""
    with open(path) as handle:
        doc = json.load(handle)
    field, _ = read_field_spec(doc)
    history = doc.get("energy_history")
    return field, history


# ---------------------------------------------------------------------------
# Wavefront OBJ
# ---------------------------------------------------------------------------


def obj_text(vertices: np.ndarray, faces: np.ndarray) -> str:
    lines = []
    for x, y, z in vertices:
        lines.append(f"v {format_float(x)} {format_float(y)} {format_float(z)}")
    for i, j, k in faces:
        lines.append(f"f {i + 1} {j + 1} {k + 1}")
    return "\n".join(lines) + "\n"


def write_obj(path: str, vertices: np.ndarray, faces: np.ndarray) -> None:
    atomic_write_text(path, obj_text(vertices, faces))
