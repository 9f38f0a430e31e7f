"""Rotor fidelity of spin-1/2 composite pulses.

Library plus CLI for scoring how well a composite pulse realizes an
ideal rotation for every initial state, sweeping that score over
systematic-error grids, and designing error-robust composite rotors.
"""

from .design import (
    DesignProblem,
    ErrorGrid,
    FidelitySurface,
    OptimizationResult,
    aggregate_objective,
    optimize,
    sweep,
    sweep_reports,
)
from .fidelity import (
    FidelityReport,
    InternalConsistencyError,
    coefficient_integral,
    coefficient_integral_quadrature,
    monte_carlo_fidelity,
    quaternion_fidelity,
    quaternion_overlap_signed,
    report,
    rotor_fidelity,
    transfer_efficiency,
)
from .library import LibraryError, builtin_library, load_library, parse_library, save_library
from .pulses import (
    CompositeSequence,
    ErrorPoint,
    Pulse,
    TargetRotation,
    pulse_propagator,
    sequence_propagator,
    target_propagator,
)
from .su2 import (
    BlochState,
    I0,
    Ix,
    Iy,
    Iz,
    ProductOperator,
    Quaternion,
    Rotation3,
    Unitary2,
    compose,
    rotation,
    to_quaternion,
    to_rotation3,
)

__version__ = "0.1.0"

__all__ = [
    "BlochState",
    "CompositeSequence",
    "DesignProblem",
    "ErrorGrid",
    "ErrorPoint",
    "FidelityReport",
    "FidelitySurface",
    "I0",
    "InternalConsistencyError",
    "Ix",
    "Iy",
    "Iz",
    "LibraryError",
    "OptimizationResult",
    "ProductOperator",
    "Pulse",
    "Quaternion",
    "Rotation3",
    "TargetRotation",
    "Unitary2",
    "aggregate_objective",
    "builtin_library",
    "coefficient_integral",
    "coefficient_integral_quadrature",
    "compose",
    "load_library",
    "monte_carlo_fidelity",
    "optimize",
    "parse_library",
    "pulse_propagator",
    "quaternion_fidelity",
    "quaternion_overlap_signed",
    "report",
    "rotation",
    "rotor_fidelity",
    "save_library",
    "sequence_propagator",
    "sweep",
    "sweep_reports",
    "target_propagator",
    "to_quaternion",
    "to_rotation3",
    "transfer_efficiency",
]
