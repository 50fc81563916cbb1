"""Logical lattice instructions (LLI) and their line-oriented text format.

LLI is the intermediate representation between gate-level processing and
layout: one logical surface-code operation per instruction, with no
knowledge of cell positions or routing.  The wire format is plain ASCII,
one instruction per line, so streams compose through POSIX pipes:

    INIT 5 +              initialize patch 5 in |+>
    INIT 4 0              initialize patch 4 in |0>
    MEAS 5 X              measure patch 5 in the X basis
    MBM +Z0,Z3            multi-body measurement of +Z(0)Z(3)
    MBM -X1,Y2,Z7         multi-body measurement of -X(1)Y(2)Z(7)
    TP X3                 transversal Pauli X on patch 3
    TH 3                  transversal Hadamard on patch 3
    BR 3                  boundary rotation (patch deformation) on patch 3
    SG 3                  S gate (twist-based) on patch 3
    RMS 9                 bind the next distilled magic state to patch 9
    IF 12=1 TP X3         conditional on measurement #12 reading bit 1

`#` starts a comment; blank lines are ignored.  Instructions are numbered
by their zero-based position among instruction lines; an `IF` condition
refers to the number of an earlier MEAS or MBM line.  A full grammar lives
in docs/lli_format.md.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

from .pauli import PauliOperator, PauliProduct


class LliParseError(ValueError):
    """Malformed LLI text; carries the line number and offending token."""

    def __init__(self, message: str, line_number: int | None = None, token: str | None = None):
        self.line_number = line_number
        self.token = token
        prefix = f"line {line_number}: " if line_number is not None else ""
        suffix = f" (at token {token!r})" if token is not None else ""
        super().__init__(f"{prefix}{message}{suffix}")


class InitState(enum.Enum):
    ZERO = "0"
    PLUS = "+"


class Basis(enum.Enum):
    X = "X"
    Z = "Z"


@dataclass(frozen=True)
class OutcomeReference:
    """Points at the outcome bit of an earlier measurement instruction."""

    sequence_number: int
    expected_bit: int

    def __post_init__(self) -> None:
        if self.expected_bit not in (0, 1):
            raise ValueError("expected_bit must be 0 or 1")


@dataclass(frozen=True)
class Init:
    patch: int
    state: InitState


@dataclass(frozen=True)
class MeasureSingle:
    patch: int
    basis: Basis


@dataclass(frozen=True)
class MultiBodyMeasure:
    operands: tuple[tuple[int, PauliOperator], ...]
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if len(self.operands) < 2:
            raise ValueError("multi-body measurement needs at least 2 patches")
        patches = [p for p, _ in self.operands]
        if len(set(patches)) != len(patches):
            raise ValueError("duplicate patch in multi-body measurement")
        if any(op is PauliOperator.I for _, op in self.operands):
            raise ValueError("identity operand in multi-body measurement")

    @property
    def observable(self) -> PauliProduct:
        return PauliProduct(self.operands, self.sign)

    @classmethod
    def of(cls, observable: PauliProduct) -> MultiBodyMeasure:
        return cls(observable.operators, observable.sign)


@dataclass(frozen=True)
class TransversalPauli:
    patch: int
    op: PauliOperator

    def __post_init__(self) -> None:
        if self.op not in (PauliOperator.X, PauliOperator.Z):
            raise ValueError("transversal Pauli is X or Z only")


@dataclass(frozen=True)
class TransversalHadamard:
    patch: int


@dataclass(frozen=True)
class BoundaryRotate:
    patch: int


@dataclass(frozen=True)
class SGate:
    patch: int


@dataclass(frozen=True)
class RequestMagicState:
    patch: int


@dataclass(frozen=True)
class ConditionalCorrection:
    condition: OutcomeReference
    body: "Lli"


Lli = Union[
    Init,
    MeasureSingle,
    MultiBodyMeasure,
    TransversalPauli,
    TransversalHadamard,
    BoundaryRotate,
    SGate,
    RequestMagicState,
    ConditionalCorrection,
]

MEASUREMENT_KINDS = (MeasureSingle, MultiBodyMeasure)


def innermost(instruction: Lli) -> Lli:
    """The body of an instruction with all conditional wrappers stripped."""
    while isinstance(instruction, ConditionalCorrection):
        instruction = instruction.body
    return instruction


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def serialize_lli(instruction: Lli) -> str:
    """One-line text form of an instruction (no trailing newline)."""
    if isinstance(instruction, Init):
        return f"INIT {instruction.patch} {instruction.state.value}"
    if isinstance(instruction, MeasureSingle):
        return f"MEAS {instruction.patch} {instruction.basis.value}"
    if isinstance(instruction, MultiBodyMeasure):
        sign = "+" if instruction.sign == 1 else "-"
        body = ",".join(f"{op.value}{patch}" for patch, op in instruction.operands)
        return f"MBM {sign}{body}"
    if isinstance(instruction, TransversalPauli):
        return f"TP {instruction.op.value}{instruction.patch}"
    if isinstance(instruction, TransversalHadamard):
        return f"TH {instruction.patch}"
    if isinstance(instruction, BoundaryRotate):
        return f"BR {instruction.patch}"
    if isinstance(instruction, SGate):
        return f"SG {instruction.patch}"
    if isinstance(instruction, RequestMagicState):
        return f"RMS {instruction.patch}"
    if isinstance(instruction, ConditionalCorrection):
        cond = instruction.condition
        return f"IF {cond.sequence_number}={cond.expected_bit} {serialize_lli(instruction.body)}"
    raise TypeError(f"not an LLI: {instruction!r}")


_MBM_OPERAND_RE = re.compile(r"^([XYZ])(\d+)$")
_IF_COND_RE = re.compile(r"^(\d+)=([01])$")
_PAULI_OPERAND_RE = re.compile(r"^([XZ])(\d+)$")


def parse_lli(line: str, line_number: int | None = None) -> Lli:
    """Parse one instruction line (comments already stripped)."""
    tokens = line.split()
    if not tokens:
        raise LliParseError("empty instruction", line_number)
    return _parse_tokens(tokens, line_number)


def _parse_tokens(tokens: list[str], line_number: int | None) -> Lli:
    kind = tokens[0]
    if kind == "IF":
        if len(tokens) < 3:
            raise LliParseError("IF needs a condition and a body", line_number, tokens[-1])
        match = _IF_COND_RE.match(tokens[1])
        if not match:
            raise LliParseError("bad IF condition, expected <seq>=<0|1>", line_number, tokens[1])
        condition = OutcomeReference(int(match.group(1)), int(match.group(2)))
        body = _parse_tokens(tokens[2:], line_number)
        return ConditionalCorrection(condition, body)

    if kind == "INIT":
        _expect_arity(tokens, 3, line_number)
        patch = _parse_patch(tokens[1], line_number)
        if tokens[2] not in ("0", "+"):
            raise LliParseError("INIT state must be 0 or +", line_number, tokens[2])
        return Init(patch, InitState(tokens[2]))

    if kind == "MEAS":
        _expect_arity(tokens, 3, line_number)
        patch = _parse_patch(tokens[1], line_number)
        if tokens[2] not in ("X", "Z"):
            raise LliParseError("MEAS basis must be X or Z", line_number, tokens[2])
        return MeasureSingle(patch, Basis(tokens[2]))

    if kind == "MBM":
        _expect_arity(tokens, 2, line_number)
        spec = tokens[1]
        if not spec or spec[0] not in "+-":
            raise LliParseError("MBM operands must start with a sign", line_number, spec)
        sign = 1 if spec[0] == "+" else -1
        operands = []
        for part in spec[1:].split(","):
            match = _MBM_OPERAND_RE.match(part)
            if not match:
                raise LliParseError("bad MBM operand, expected <op><patch>", line_number, part)
            operands.append((int(match.group(2)), PauliOperator(match.group(1))))
        try:
            return MultiBodyMeasure(tuple(operands), sign)
        except ValueError as exc:
            raise LliParseError(str(exc), line_number, spec) from exc

    if kind == "TP":
        _expect_arity(tokens, 2, line_number)
        match = _PAULI_OPERAND_RE.match(tokens[1])
        if not match:
            raise LliParseError("bad TP operand, expected X<patch> or Z<patch>", line_number, tokens[1])
        return TransversalPauli(int(match.group(2)), PauliOperator(match.group(1)))

    if kind in ("TH", "BR", "SG", "RMS"):
        _expect_arity(tokens, 2, line_number)
        patch = _parse_patch(tokens[1], line_number)
        return {
            "TH": TransversalHadamard,
            "BR": BoundaryRotate,
            "SG": SGate,
            "RMS": RequestMagicState,
        }[kind](patch)

    raise LliParseError(f"unknown instruction {kind!r}", line_number, kind)


def _expect_arity(tokens: list[str], n: int, line_number: int | None) -> None:
    if len(tokens) != n:
        raise LliParseError(
            f"{tokens[0]} takes {n - 1} argument(s), got {len(tokens) - 1}",
            line_number,
            tokens[-1],
        )


def _parse_patch(token: str, line_number: int | None) -> int:
    if not token.isdigit():
        raise LliParseError("patch id must be a non-negative integer", line_number, token)
    return int(token)


# ---------------------------------------------------------------------------
# streams
# ---------------------------------------------------------------------------

def read_lli_stream(lines: Iterable[str]) -> Iterator[Lli]:
    """Yield instructions from text lines, skipping comments and blanks."""
    for line_number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield parse_lli(line, line_number)


def write_lli_stream(instructions: Iterable[Lli], out: IO[str]) -> int:
    """Serialize instructions one per line; returns the count written."""
    count = 0
    for instruction in instructions:
        out.write(serialize_lli(instruction))
        out.write("\n")
        count += 1
    return count
