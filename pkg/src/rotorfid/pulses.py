"""Hard pulses, composite sequences, and their propagators under systematic errors.

The error model is the standard one for composite-pulse analysis: a
pulse-length error is an RF-amplitude miscalibration at fixed duration,
and off-resonance adds a constant z field, both in units of the nominal
RF amplitude.  One ErrorPoint applies to every pulse of a sequence
(fully correlated systematic error); sequences are back-to-back hard
pulses with no inter-pulse delays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .su2 import Unitary2, _axis_angle, compose, rotation

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Pulse:
    """One hard pulse: nominal flip angle (radians, >= 0) and transverse phase.

    The phase is reduced to [0, 2*pi) at construction.  The flip angle
    keeps its winding: a 420 degree pulse is not a 60 degree pulse once
    amplitude errors scale it.
    """

    flip_angle: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.flip_angle) or self.flip_angle < 0.0:
            raise ValueError(f"flip_angle must be finite and >= 0, got {self.flip_angle!r}")
        if not math.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase!r}")
        object.__setattr__(self, "phase", self.phase % _TWO_PI)


@dataclass(frozen=True)
class CompositeSequence:
    """Named, ordered pulse train; pulses are applied left to right in time."""

    name: str
    pulses: tuple[Pulse, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pulses", tuple(self.pulses))
        if not self.pulses:
            raise ValueError("a composite sequence must contain at least one pulse")


@dataclass(frozen=True)
class ErrorPoint:
    """Systematic spectrometer error.

    ``eps_p`` is the fractional pulse-length (RF amplitude) error, so the
    actual amplitude is nominal * (1 + eps_p); ``f_off`` is the resonance
    offset divided by the nominal RF amplitude.  (0, 0) is the ideal
    spectrometer.
    """

    eps_p: float = 0.0
    f_off: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.eps_p) and math.isfinite(self.f_off)):
            raise ValueError("error fractions must be finite")


@dataclass(frozen=True)
class TargetRotation:
    """The ideal rotation a sequence is meant to implement."""

    axis_polar: float
    axis_azimuth: float
    angle: float

    def __post_init__(self) -> None:
        for field in ("axis_polar", "axis_azimuth", "angle"):
            if not math.isfinite(getattr(self, field)):
                raise ValueError(f"{field} must be finite")


def pulse_propagator(p: Pulse, e: ErrorPoint) -> Unitary2:
    """Propagator of one hard pulse at the given error point.

    Returns ``exp(-i * t * H)`` with the rotating-frame Hamiltonian
    ``H = (1+eps_p)(cos(phase) Ix + sin(phase) Iy) + f_off Iz`` in units
    of the nominal RF amplitude and ``t = flip_angle``: a rotation by
    ``flip_angle * sqrt((1+eps_p)^2 + f_off^2)`` about the tilted axis
    proportional to ((1+eps_p)cos(phase), (1+eps_p)sin(phase), f_off).
    """
    wx = (1.0 + e.eps_p) * math.cos(p.phase)
    wy = (1.0 + e.eps_p) * math.sin(p.phase)
    wz = e.f_off
    w = math.sqrt(wx * wx + wy * wy + wz * wz)
    if w == 0.0:
        return Unitary2(np.eye(2))
    return _axis_angle(wx / w, wy / w, wz / w, p.flip_angle * w)


def sequence_propagator(s: CompositeSequence, e: ErrorPoint) -> Unitary2:
    """Time-ordered product of the per-pulse propagators, first pulse first."""
    u = pulse_propagator(s.pulses[0], e)
    for p in s.pulses[1:]:
        u = compose(u, pulse_propagator(p, e))
    return u


def target_propagator(t: TargetRotation) -> Unitary2:
    return rotation(t.axis_polar, t.axis_azimuth, t.angle)
