"""Spin-1/2 rotation algebra: 2x2 unitaries, product operators, quaternions.

Conventions used throughout the package:

* rotations are right-handed, ``U = exp(-i * angle * (n . I_vec))`` with
  ``I_vec = (Ix, Iy, Iz)`` the half-Pauli product operators;
* composition is time ordered, ``compose(first, second) == second @ first``;
* unitaries keep whatever global phase they were built with; quaternion
  extraction strips the phase and reports the ``a >= 0`` hemisphere.

All types are immutable after construction and all operations are pure
functions, so everything here is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

UNITARITY_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-12


def _frozen(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


# Product operator basis: half the identity and half the Pauli matrices.
I0 = _frozen(np.array([[0.5, 0.0], [0.0, 0.5]], dtype=complex))
Ix = _frozen(np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex))
Iy = _frozen(np.array([[0.0, -0.5j], [0.5j, 0.0]], dtype=complex))
Iz = _frozen(np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex))


class ProductOperator(Enum):
    """Basis tags for the single-spin product operators {I0, Ix, Iy, Iz}."""

    I0 = "0"
    IX = "x"
    IY = "y"
    IZ = "z"

    @property
    def matrix(self) -> np.ndarray:
        return _OPERATOR_MATRICES[self]


_OPERATOR_MATRICES = {
    ProductOperator.I0: I0,
    ProductOperator.IX: Ix,
    ProductOperator.IY: Iy,
    ProductOperator.IZ: Iz,
}


class Unitary2:
    """A 2x2 unitary propagator.

    The matrix is validated at construction (unitarity and unimodular
    determinant to within ``UNITARITY_TOL`` entrywise) and stored
    read-only.  Inputs that fail the check are rejected, never
    renormalized.  The global phase is preserved as given.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        defect = np.abs(m @ m.conj().T - np.eye(2)).max()
        if defect > UNITARITY_TOL:
            raise ValueError(
                f"matrix is not unitary: defect {defect:.3e} exceeds {UNITARITY_TOL:.0e}"
            )
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(abs(det) - 1.0) > UNITARITY_TOL:
            raise ValueError(
                f"|det| deviates from 1 by {abs(abs(det) - 1.0):.3e}, "
                f"more than {UNITARITY_TOL:.0e}"
            )
        self.matrix = _frozen(m)

    def dagger(self) -> "Unitary2":
        """Adjoint (inverse) propagator."""
        return Unitary2(self.matrix.conj().T)

    def __repr__(self) -> str:
        return f"Unitary2({self.matrix.tolist()!r})"


@dataclass(frozen=True)
class Quaternion:
    """Unit quaternion (a, b, c, d): scalar part ``a``, vector part (b, c, d)."""

    a: float
    b: float
    c: float
    d: float

    def norm(self) -> float:
        return math.sqrt(self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d)

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize a zero quaternion")
        return Quaternion(self.a / n, self.b / n, self.c / n, self.d / n)

    def dot(self, other: "Quaternion") -> float:
        """Four-component dot product."""
        return self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a, -self.b, -self.c, -self.d)


class Rotation3:
    """A proper rotation in SO(3), validated at construction."""

    __slots__ = ("matrix",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
        defect = np.abs(m.T @ m - np.eye(3)).max()
        if defect > ORTHOGONALITY_TOL:
            raise ValueError(
                f"matrix is not orthogonal: defect {defect:.3e} exceeds {ORTHOGONALITY_TOL:.0e}"
            )
        det = np.linalg.det(m)
        if abs(det - 1.0) > ORTHOGONALITY_TOL:
            raise ValueError(f"det = {det!r} is not +1 within {ORTHOGONALITY_TOL:.0e}")
        self.matrix = _frozen(m)

    def __repr__(self) -> str:
        return f"Rotation3({self.matrix.tolist()!r})"


@dataclass(frozen=True)
class BlochState:
    """Pure spin-1/2 state at Bloch-sphere angles (theta, phi).

    Its density matrix expands over {I0, Ix, Iy, Iz} with coefficients
    (1, sin(theta)cos(phi), sin(theta)sin(phi), cos(theta)).
    """

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi!r}")

    def coefficients(self) -> np.ndarray:
        """Expansion coefficients (c0, cx, cy, cz)."""
        st = math.sin(self.theta)
        return np.array(
            [1.0, st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )

    def ket(self) -> np.ndarray:
        """State vector (cos(theta/2), e^{i phi} sin(theta/2))."""
        half = 0.5 * self.theta
        return np.array(
            [math.cos(half), math.sin(half) * complex(math.cos(self.phi), math.sin(self.phi))]
        )


def _axis_angle(nx: float, ny: float, nz: float, angle: float) -> Unitary2:
    # closed form of exp(-i*angle*(n . I_vec)) for a unit axis n:
    # cos(angle/2) * 1 - i * sin(angle/2) * (n . sigma)
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    return Unitary2(
        [
            [complex(c, -s * nz), complex(-s * ny, -s * nx)],
            [complex(s * ny, -s * nx), complex(c, s * nz)],
        ]
    )


def rotation(axis_polar: float, axis_azimuth: float, angle: float) -> Unitary2:
    """Rotation by ``angle`` about the axis at spherical angles (polar, azimuth).

    Returns ``exp(-i * angle * (nx*Ix + ny*Iy + nz*Iz))`` with the unit axis
    ``n = (sin(polar)cos(azimuth), sin(polar)sin(azimuth), cos(polar))``.
    Angles are unrestricted; the axis is a unit vector by construction.
    """
    sp = math.sin(axis_polar)
    return _axis_angle(
        sp * math.cos(axis_azimuth), sp * math.sin(axis_azimuth), math.cos(axis_polar), angle
    )


def to_quaternion(u: Unitary2) -> Quaternion:
    """Quaternion of the rotation implemented by ``u``.

    The global phase is stripped through the determinant, the scalar part
    is read off the trace and the vector part off the traceless
    anti-Hermitian component, the result is normalized, and components
    are negated if needed so that ``a >= 0`` (canonical hemisphere).
    """
    m = u.matrix
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    half_phase = 0.5 * math.atan2(det.imag, det.real)
    w = m * complex(math.cos(half_phase), -math.sin(half_phase))
    q = Quaternion(
        0.5 * (w[0, 0] + w[1, 1]).real,
        -0.5 * (w[0, 1] + w[1, 0]).imag,
        0.5 * (w[1, 0] - w[0, 1]).real,
        -0.5 * (w[0, 0] - w[1, 1]).imag,
    ).normalized()
    if q.a < 0.0:
        q = -q
    return q


def to_rotation3(u: Unitary2) -> Rotation3:
    """SO(3) image of ``u``: column j expands U Ij U^dag over {Ix, Iy, Iz}."""
    m = u.matrix
    md = m.conj().T
    axes = (Ix, Iy, Iz)
    r = np.empty((3, 3))
    for j, op in enumerate(axes):
        conjugated = m @ op @ md
        for k, ok in enumerate(axes):
            r[k, j] = 2.0 * np.trace(ok @ conjugated).real
    return Rotation3(r)


def compose(first: Unitary2, second: Unitary2) -> Unitary2:
    """Propagator of ``first`` applied first, then ``second``."""
    return Unitary2(second.matrix @ first.matrix)
