"""JSON rendering of slices.

A slice renders as a 2-D array (rows of cells); a free cell is JSON
``null``, so counting nulls across the stream counts free cells.  The
default output is one top-level array of slices, addressable as
slices -> rows -> cells; ``--ndjson`` writes one slice per line instead.
The normative schema ships in docs/slice_schema.json.
"""

from __future__ import annotations

import json
from typing import IO

from .slicer import CellView, Slice

SLICE_SCHEMA: dict = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "slice",
    "description": "One lattice time step: rows of cells; null means a free cell.",
    "type": "array",
    "items": {
        "type": "array",
        "items": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "properties": {
                        "kind": {
                            "enum": [
                                "qubit",
                                "ancilla_patch",
                                "route",
                                "magic_queue",
                                "distillation",
                            ]
                        },
                        "patch": {"type": "integer", "minimum": 0},
                        "orientation": {"enum": ["rough_ns", "rough_ew"]},
                        "state": {"enum": ["0", "+", "m"]},
                        "activity": {"type": "integer", "minimum": 1},
                        "region": {"type": "integer", "minimum": 0},
                        "countdown": {"type": "integer", "minimum": 0},
                    },
                    "required": ["kind"],
                    "additionalProperties": False,
                },
            ]
        },
    },
}


def cell_to_json(cell: CellView | None) -> dict | None:
    if cell is None:
        return None
    out: dict = {"kind": cell.kind}
    for key in ("patch", "orientation", "state", "activity", "region", "countdown"):
        value = getattr(cell, key)
        if value is not None:
            out[key] = value
    return out


def slice_to_json(s: Slice) -> list[list[dict | None]]:
    return [[cell_to_json(cell) for cell in row] for row in s.cells]


def emit_slice_json(s: Slice) -> str:
    """Compact single-slice JSON text."""
    return json.dumps(slice_to_json(s), separators=(",", ":"))


class SliceJsonWriter:
    """Visitor streaming slices to a file as one array or as NDJSON."""

    def __init__(self, out: IO[str], ndjson: bool = False):
        self.out = out
        self.ndjson = ndjson
        self._count = 0

    def __call__(self, s: Slice) -> None:
        text = emit_slice_json(s)
        if self.ndjson:
            self.out.write(text)
            self.out.write("\n")
        else:
            self.out.write("[" if self._count == 0 else ",\n")
            self.out.write(text)
        self._count += 1

    def close(self) -> None:
        if not self.ndjson:
            self.out.write("[]" if self._count == 0 else "]")
            self.out.write("\n")
