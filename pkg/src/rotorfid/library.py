"""Pulse-library files and the built-in starter sequences.

A library is a single JSON document:

    {"sequences": [{"name": "180x",
                    "pulses": [{"angle_deg": 180.0, "phase_deg": 0.0}]}]}

Angles and phases are degrees in files (NMR convention) and are
converted to radians exactly once at load; saving converts back.
Sequence names must be unique within a file.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Mapping

from .pulses import CompositeSequence, Pulse


class LibraryError(ValueError):
    """Malformed or inconsistent pulse-library content."""


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise LibraryError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise LibraryError(f"{where}: value must be finite, got {value!r}")
    return float(value)


def _parse_pulse(entry, where: str) -> Pulse:
    if not isinstance(entry, dict):
        raise LibraryError(f"{where}: expected an object, got {type(entry).__name__}")
    for key in ("angle_deg", "phase_deg"):
        if key not in entry:
            raise LibraryError(f"{where}: missing field {key!r}")
    angle = _number(entry["angle_deg"], f"{where}.angle_deg")
    phase = _number(entry["phase_deg"], f"{where}.phase_deg")
    if angle < 0.0:
        raise LibraryError(f"{where}.angle_deg: must be >= 0, got {angle!r}")
    return Pulse(math.radians(angle), math.radians(phase))


def parse_library(data) -> dict[str, CompositeSequence]:
    """Build sequences from an already-decoded library document."""
    if not isinstance(data, dict) or "sequences" not in data:
        raise LibraryError("top level must be an object with a 'sequences' field")
    raw = data["sequences"]
    if not isinstance(raw, list):
        raise LibraryError("'sequences' must be a list")
    out: dict[str, CompositeSequence] = {}
    for i, item in enumerate(raw):
        where = f"sequences[{i}]"
        if not isinstance(item, dict):
            raise LibraryError(f"{where}: expected an object")
        name = item.get("name")
        if not isinstance(name, str) or not name:
            raise LibraryError(f"{where}.name: expected a non-empty string")
        if name in out:
            raise LibraryError(f"{where}.name: duplicate sequence name {name!r}")
        pulses = item.get("pulses")
        if not isinstance(pulses, list) or not pulses:
            raise LibraryError(f"{where}.pulses: expected a non-empty list")
        out[name] = CompositeSequence(
            name, tuple(_parse_pulse(p, f"{where}.pulses[{k}]") for k, p in enumerate(pulses))
        )
    return out


def load_library(path) -> dict[str, CompositeSequence]:
    """Load a pulse-library JSON file, keyed by sequence name."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LibraryError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return parse_library(data)
    except LibraryError as exc:
        raise LibraryError(f"{path}: {exc}") from None


def library_document(sequences: Mapping[str, CompositeSequence]) -> dict:
    """Serializable library document (radians converted back to degrees)."""
    return {
        "sequences": [
            {
                "name": seq.name,
                "pulses": [
                    {"angle_deg": math.degrees(p.flip_angle), "phase_deg": math.degrees(p.phase)}
                    for p in seq.pulses
                ],
            }
            for seq in sequences.values()
        ]
    }


def save_library(sequences: Mapping[str, CompositeSequence], path) -> None:
    """Write sequences as a pulse-library JSON file."""
    text = json.dumps(library_document(sequences), indent=2)
    Path(path).write_text(text + "\n")


# Starter set.  The single-pulse entries and the 90-180-90 composite are
# standard; the three error-compensating entries use the published
# literature parameter values (attributions in the README) and are plain
# data here, with a 180 degree rotation about x as their design target.
_BB1_PHASE_DEG = math.degrees(math.acos(-0.25))

_BUILTIN_PULSES_DEG = {
    "90x": [(90.0, 0.0)],
    "90y": [(90.0, 90.0)],
    "180x": [(180.0, 0.0)],
    "180y": [(180.0, 90.0)],
    "90x180y90x": [(90.0, 0.0), (180.0, 90.0), (90.0, 0.0)],
    "bb1_180x": [
        (180.0, 0.0),
        (180.0, _BB1_PHASE_DEG),
        (360.0, 3.0 * _BB1_PHASE_DEG),
        (180.0, _BB1_PHASE_DEG),
    ],
    "corpse_180x": [(420.0, 0.0), (300.0, 180.0), (60.0, 0.0)],
    "scrofulous_180x": [(180.0, 60.0), (180.0, 300.0), (180.0, 60.0)],
}


def builtin_library() -> dict[str, CompositeSequence]:
    """The built-in starter sequences, keyed by name."""
    return {
        name: CompositeSequence(
            name, tuple(Pulse(math.radians(a), math.radians(p)) for a, p in pulses)
        )
        for name, pulses in _BUILTIN_PULSES_DEG.items()
    }
