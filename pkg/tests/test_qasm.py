"""Frontend dialect parsing, printing, and the QFT generator."""

import pytest

from latsurg.angles import ExactAngle
from latsurg.qasm import (
    Circuit,
    Gate,
    GateKind,
    QasmError,
    generate_qft,
    parse_angle,
    parse_program,
    print_program,
)


class TestParseBasics:
    def test_minimal_program(self):
        circuit = parse_program("OPENQASM 2.0;\nqreg q[2];\nh q[0];\ncx q[1],q[0];")
        assert circuit.num_qubits == 2
        assert [g.kind for g in circuit.gates] == [GateKind.H, GateKind.CX]
        assert circuit.gates[1].qubits == (1, 0)  # control first by default

    def test_target_first_dialect(self):
        circuit = parse_program(
            "OPENQASM 2.0;\nqreg q[2];\ncx q[1],q[0];", target_first_cx=True
        )
        assert circuit.gates[0].qubits == (0, 1)

    def test_cnot_alias(self):
        circuit = parse_program("OPENQASM 2.0;\nqreg q[2];\ncnot q[0],q[1];")
        assert circuit.gates[0].kind is GateKind.CX

    def test_ignored_directives(self):
        text = (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\ncreg c[1];\n'
            "barrier q;\nh q[0]; // comment\n"
        )
        circuit = parse_program(text)
        assert len(circuit.gates) == 1

    def test_huge_exact_angle(self):
        big = 1 << 127
        circuit = parse_program(
            f"OPENQASM 2.0;\nqreg q[128];\ncrz(pi/{big}) q[127],q[0];"
        )
        assert circuit.gates[0].angle == ExactAngle(1, 127)

    def test_n_times_pi_form(self):
        circuit = parse_program("OPENQASM 2.0;\nqreg q[1];\nrz(-3*pi/8) q[0];")
        assert circuit.gates[0].angle == ExactAngle(-3, 3)


class TestRejections:
    def test_missing_header(self):
        with pytest.raises(QasmError, match="OPENQASM 2.0"):
            parse_program("qreg q[1];\nh q[0];")

    def test_two_registers(self):
        with pytest.raises(QasmError, match="one quantum register"):
            parse_program("OPENQASM 2.0;\nqreg q[1];\nqreg p[1];")

    def test_unsupported_gate(self):
        with pytest.raises(QasmError, match="unsupported gate"):
            parse_program("OPENQASM 2.0;\nqreg q[3];\nccx q[0],q[1],q[2];")

    def test_measurement_rejected(self):
        with pytest.raises(QasmError, match="measurement not supported"):
            parse_program("OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];")

    def test_classical_control_rejected(self):
        with pytest.raises(QasmError, match="classical control"):
            parse_program("OPENQASM 2.0;\nqreg q[1];\nif(c==1) x q[0];")

    def test_out_of_range_index(self):
        with pytest.raises(QasmError, match="out of range"):
            parse_program("OPENQASM 2.0;\nqreg q[2];\nh q[2];")

    @pytest.mark.parametrize("expr", ["pi/3", "0.5", "pi /4", "2*pi/6", "pi"])
    def test_malformed_angles(self, expr):
        with pytest.raises(QasmError):
            parse_program(f"OPENQASM 2.0;\nqreg q[1];\nrz({expr}) q[0];")

    def test_angle_on_plain_gate(self):
        with pytest.raises(QasmError):
            parse_program("OPENQASM 2.0;\nqreg q[1];\nh(pi/2) q[0];")


class TestAngleExpr:
    def test_pi_over(self):
        assert parse_angle("pi/4") == ExactAngle(1, 2)

    def test_no_whitespace(self):
        with pytest.raises(ValueError):
            parse_angle("3 * pi/4")


class TestRoundTrip:
    def test_print_parse_identity(self):
        source = parse_program(generate_qft(5))
        again = parse_program(print_program(source))
        assert again == source

    def test_round_trip_all_kinds(self):
        gates = (
            Gate(GateKind.H, (0,)),
            Gate(GateKind.SDG, (1,)),
            Gate(GateKind.TDG, (0,)),
            Gate(GateKind.CX, (0, 1)),
            Gate(GateKind.CZ, (1, 0)),
            Gate(GateKind.RX, (0,), ExactAngle(1, 4)),
            Gate(GateKind.CRX, (0, 1), ExactAngle(-5, 6)),
        )
        circuit = Circuit(2, gates)
        assert parse_program(print_program(circuit)) == circuit


class TestQft:
    def test_three_qubits(self):
        circuit = parse_program(generate_qft(3))
        kinds = [g.kind for g in circuit.gates]
        assert kinds.count(GateKind.H) == 3
        assert kinds.count(GateKind.CRZ) == 3
        angles = sorted(str(g.angle) for g in circuit.gates if g.angle)
        assert angles == ["pi/2", "pi/2", "pi/4"]

    def test_qft128_counts(self):
        text = generate_qft(128)
        crz = [line for line in text.splitlines() if line.startswith("crz")]
        assert len(crz) == 128 * 127 // 2 == 8128
        smallest = ExactAngle(1, 127)
        assert f"crz(pi/{1 << 127})" in crz[-1].replace(" ", " ").split(" ")[0] or any(
            f"pi/{1 << 127}" in line for line in crz
        )

    @pytest.mark.parametrize("n", [2, 7, 16, 64])
    def test_gate_count_formula(self, n):
        circuit = parse_program(generate_qft(n))
        assert len(circuit.gates) == n + n * (n - 1) // 2

    def test_control_is_later_qubit(self):
        circuit = parse_program(generate_qft(3))
        crz = [g for g in circuit.gates if g.kind is GateKind.CRZ]
        assert all(g.qubits[0] > g.qubits[1] for g in crz)
