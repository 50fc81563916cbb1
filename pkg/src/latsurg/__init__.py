"""Surface-code lattice-surgery compiler toolkit."""

from .angles import ExactAngle
from .pauli import PauliOperator, PauliProduct, PauliRotation, pauli_multiply
from .lli import (
    Basis,
    BoundaryRotate,
    ConditionalCorrection,
    Init,
    InitState,
    Lli,
    LliParseError,
    MeasureSingle,
    MultiBodyMeasure,
    OutcomeReference,
    RequestMagicState,
    SGate,
    TransversalHadamard,
    TransversalPauli,
    parse_lli,
    read_lli_stream,
    serialize_lli,
    write_lli_stream,
)
from .qasm import Circuit, Gate, GateKind, QasmError, generate_qft, parse_program, print_program

__version__ = "0.1.0"

__all__ = [
    "ExactAngle",
    "PauliOperator",
    "PauliProduct",
    "PauliRotation",
    "pauli_multiply",
    "Basis",
    "BoundaryRotate",
    "ConditionalCorrection",
    "Init",
    "InitState",
    "Lli",
    "LliParseError",
    "MeasureSingle",
    "MultiBodyMeasure",
    "OutcomeReference",
    "RequestMagicState",
    "SGate",
    "TransversalHadamard",
    "TransversalPauli",
    "parse_lli",
    "read_lli_stream",
    "serialize_lli",
    "write_lli_stream",
    "Circuit",
    "Gate",
    "GateKind",
    "QasmError",
    "generate_qft",
    "parse_program",
    "print_program",
    "__version__",
]
