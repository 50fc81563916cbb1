"""Frontend for a minimal OpenQASM 2.0 dialect, plus a QFT generator.

Supported programs: a mandatory ``OPENQASM 2.0;`` header, one quantum
register, and one gate per line from {h, x, z, s, sdg, t, tdg, cx/cnot,
cz, rx, rz, crx, crz}.  Rotation arguments are exact dyadic fractions of
pi (``pi/D`` or ``N*pi/D`` with D a power of two) of arbitrary size; no
floats are ever constructed.  Classical registers, barriers and include
directives are ignored; measurements and classical control are rejected.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator

from .angles import ExactAngle


class QasmError(ValueError):
    """Rejected program, with the offending line in the message."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)


class GateKind(enum.Enum):
    H = "h"
    X = "x"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    CX = "cx"
    CZ = "cz"
    RX = "rx"
    RZ = "rz"
    CRX = "crx"
    CRZ = "crz"


ROTATION_KINDS = frozenset({GateKind.RX, GateKind.RZ, GateKind.CRX, GateKind.CRZ})
TWO_QUBIT_KINDS = frozenset({GateKind.CX, GateKind.CZ, GateKind.CRX, GateKind.CRZ})


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: ExactAngle | None = None

    def __post_init__(self) -> None:
        expected = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind.value} takes {expected} qubit(s)")
        if (self.angle is not None) != (self.kind in ROTATION_KINDS):
            raise ValueError(f"angle present iff rotation gate, got {self.kind.value}")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for gate in self.gates:
            if any(q >= self.num_qubits for q in gate.qubits):
                raise ValueError(f"gate {gate.kind.value} out of range for {self.num_qubits} qubits")


_HEADER_RE = re.compile(r"^OPENQASM\s+2\.0$")
_QREG_RE = re.compile(r"^qreg\s+[A-Za-z_][A-Za-z0-9_]*\[(\d+)\]$")
_GATE_RE = re.compile(
    r"^(?P<name>[a-z]+)(?:\((?P<angle>[^)]*)\))?\s+(?P<args>.+)$"
)
_OPERAND_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*\[(\d+)\]$")
_ANGLE_RE = re.compile(r"^(?:(?P<num>-?\d+)\*)?pi/(?P<den>\d+)$")

_IGNORED_PREFIXES = ("include", "creg", "barrier")


def parse_angle(expression: str) -> ExactAngle:
    """Parse ``pi/D`` or ``N*pi/D`` with D a power of two, exactly."""
    match = _ANGLE_RE.match(expression)
    if not match:
        raise ValueError(
            f"bad angle {expression!r}: expected pi/D or N*pi/D with no whitespace"
        )
    numerator = int(match.group("num")) if match.group("num") else 1
    denominator = int(match.group("den"))
    if denominator <= 0 or denominator & (denominator - 1):
        raise ValueError(f"bad angle {expression!r}: denominator must be a power of two")
    return ExactAngle.from_pi_fraction(numerator, denominator)


def format_angle(angle: ExactAngle) -> str:
    """Render an exact angle in the dialect's N*pi/D form."""
    denominator = 1 << angle.denom_power
    if angle.numerator == 1:
        return f"pi/{denominator}"
    return f"{angle.numerator}*pi/{denominator}"


def parse_program(text: str, target_first_cx: bool = False) -> Circuit:
    """Parse dialect text into a Circuit; gate order matches source order.

    ``target_first_cx`` selects the strict dialect where ``cx q[n],q[m]``
    lists the target first; the default follows standard OpenQASM with the
    control first.
    """
    statements = list(_statements(text))
    if not statements:
        raise QasmError("empty program: expected OPENQASM 2.0; header")
    first_line, first = statements[0]
    if not _HEADER_RE.match(first):
        raise QasmError("program must begin with OPENQASM 2.0;", first_line)

    num_qubits: int | None = None
    gates: list[Gate] = []
    for line_number, statement in statements[1:]:
        lowered = statement.strip()
        if lowered.startswith(_IGNORED_PREFIXES):
            continue
        if lowered.startswith("measure"):
            raise QasmError("measurement not supported", line_number)
        if lowered.startswith("if"):
            raise QasmError("classical control not supported", line_number)
        qreg = _QREG_RE.match(lowered)
        if qreg:
            if num_qubits is not None:
                raise QasmError("only one quantum register is supported", line_number)
            num_qubits = int(qreg.group(1))
            continue
        if num_qubits is None:
            raise QasmError("gate before qreg declaration", line_number)
        gates.append(_parse_gate(lowered, line_number, num_qubits, target_first_cx))

    if num_qubits is None:
        raise QasmError("missing qreg declaration")
    return Circuit(num_qubits, tuple(gates))


def _statements(text: str) -> Iterator[tuple[int, str]]:
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        for part in line.split(";"):
            part = part.strip()
            if part:
                yield line_number, part


def _parse_gate(statement: str, line_number: int, num_qubits: int, target_first_cx: bool) -> Gate:
    match = _GATE_RE.match(statement)
    if not match:
        raise QasmError(f"cannot parse statement {statement!r}", line_number)
    name = match.group("name")
    if name == "cnot":
        name = "cx"
    try:
        kind = GateKind(name)
    except ValueError:
        raise QasmError(f"unsupported gate {name!r}", line_number) from None

    operands = []
    for token in match.group("args").split(","):
        token = token.strip()
        operand = _OPERAND_RE.match(token)
        if not operand:
            raise QasmError(f"bad operand {token!r}, expected q[n]", line_number)
        index = int(operand.group(1))
        if index >= num_qubits:
            raise QasmError(f"qubit index {index} out of range (register size {num_qubits})", line_number)
        operands.append(index)

    angle: ExactAngle | None = None
    raw_angle = match.group("angle")
    if kind in ROTATION_KINDS:
        if raw_angle is None:
            raise QasmError(f"{name} requires an angle argument", line_number)
        try:
            angle = parse_angle(raw_angle)
        except ValueError as exc:
            raise QasmError(str(exc), line_number) from exc
    elif raw_angle is not None:
        raise QasmError(f"{name} takes no angle argument", line_number)

    if kind in TWO_QUBIT_KINDS:
        if len(operands) != 2:
            raise QasmError(f"{name} takes two operands", line_number)
        if operands[0] == operands[1]:
            raise QasmError(f"{name} operands must differ", line_number)
        if target_first_cx and kind in (GateKind.CX, GateKind.CRX, GateKind.CRZ):
            operands = [operands[1], operands[0]]
    elif len(operands) != 1:
        raise QasmError(f"{name} takes one operand", line_number)

    # Internally operands are always (control, target) for two-qubit gates.
    try:
        return Gate(kind, tuple(operands), angle)
    except ValueError as exc:
        raise QasmError(str(exc), line_number) from exc


def print_program(circuit: Circuit) -> str:
    """Render a Circuit back to dialect text (control-first operand order)."""
    lines = ["OPENQASM 2.0;", f"qreg q[{circuit.num_qubits}];"]
    for gate in circuit.gates:
        args = ",".join(f"q[{q}]" for q in gate.qubits)
        if gate.angle is not None:
            lines.append(f"{gate.kind.value}({format_angle(gate.angle)}) {args};")
        else:
            lines.append(f"{gate.kind.value} {args};")
    return "\n".join(lines) + "\n"


def generate_qft(num_qubits: int) -> str:
    """Textbook QFT netlist in the dialect, control-first operand order.

    For each qubit i: an ``h``, then for each j > i a ``crz(pi/2^(j-i))``
    with control j and target i.  The final qubit-reversal swaps are
    omitted: they amount to relabeling the outputs, which downstream
    stages do not require.
    """
    if num_qubits < 1:
        raise ValueError("QFT needs at least one qubit")
    lines = ["OPENQASM 2.0;", f"qreg q[{num_qubits}];"]
    for i in range(num_qubits):
        lines.append(f"h q[{i}];")
        for j in range(i + 1, num_qubits):
            lines.append(f"crz(pi/{1 << (j - i)}) q[{j}],q[{i}];")
    return "\n".join(lines) + "\n"
