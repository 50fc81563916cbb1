"""Multi-command entry point: compile, slice, qft, verify, estimate, sweep.

Pipe-safe by construction: data goes to stdout, diagnostics to stderr,
no prompts.  Exit codes: 0 success, 1 input error, 2 internal invariant
violation.  The commands compose the way the pipeline stages do, e.g.:

    latsurg qft 8 --lli | latsurg slice -l layout.txt | jq '.[][][]'
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dense import simulate_circuit
from .layout import LayoutError, parse_layout
from .lli import LliParseError, read_lli_stream, write_lli_stream
from .ltsvs import BudgetExceeded, LazySimulationError, verified_run
from .pipeline import PipelineConfig, compile_circuit
from .qasm import QasmError, generate_qft, parse_program
from .resources import (
    ErrorModel,
    EstimateError,
    ResourceQuery,
    min_distance,
    sweep,
    sweep_csv_rows,
)
from .slice_json import SliceJsonWriter
from .slicer import Deadlock, RunStats, SlicerConfig, SlicerError, run_stream

LAYOUT_DIR_VARIABLE = "LATSURG_LAYOUT_DIR"


class InputError(ValueError):
    pass


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.handler(args)
    except (InputError, QasmError, LayoutError, LliParseError, EstimateError,
            Deadlock, SlicerError, BudgetExceeded, LazySimulationError,
            FileNotFoundError, ValueError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except AssertionError as error:
        print(f"internal invariant violation: {error}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latsurg",
        description="Compile circuits to lattice-surgery instructions and lay them out.",
    )
    parser.add_argument("--version", action="version", version=f"latsurg {__version__}")
    parser.set_defaults(command=None)
    sub = parser.add_subparsers(dest="command")

    compile_p = sub.add_parser("compile", help="circuit text -> LLI stream")
    compile_p.add_argument("input", nargs="?", default="-", help="circuit file or - for stdin")
    _pipeline_flags(compile_p)
    compile_p.add_argument("-o", "--output", default="-")
    compile_p.set_defaults(handler=_cmd_compile)

    slice_p = sub.add_parser("slice", help="LLI stream + layout -> JSON slices")
    slice_p.add_argument("input", nargs="?", default="-", help="LLI file or - for stdin")
    slice_p.add_argument("-l", "--layout", required=True, help="layout file")
    slice_p.add_argument("-f", "--format", choices=["json", "stats", "none"], default="json")
    slice_p.add_argument("--ndjson", action="store_true", help="one slice per line")
    slice_p.add_argument("--distill-period", type=int, default=6)
    slice_p.add_argument("--no-route-cache", action="store_true")
    slice_p.add_argument("-o", "--output", default="-")
    slice_p.set_defaults(handler=_cmd_slice)

    qft_p = sub.add_parser("qft", help="generate a QFT benchmark circuit")
    qft_p.add_argument("qubits", type=int)
    qft_p.add_argument("--lli", action="store_true", help="compile inline, stream LLI")
    _pipeline_flags(qft_p)
    qft_p.add_argument("-o", "--output", default="-")
    qft_p.set_defaults(handler=_cmd_qft)

    verify_p = sub.add_parser("verify", help="compile, simulate, compare to dense")
    verify_p.add_argument("input", nargs="?", default="-")
    _pipeline_flags(verify_p)
    verify_p.add_argument("--seed", type=int, default=0)
    verify_p.add_argument("--budget", type=int, default=1 << 22, help="amplitude budget")
    verify_p.add_argument("--tolerance", type=float, default=None,
                          help="trace-distance bound (default from epsilon)")
    verify_p.add_argument("--snapshots", default=None, help="write partition snapshots (JSON)")
    verify_p.set_defaults(handler=_cmd_verify)

    estimate_p = sub.add_parser("estimate", help="code distance for a compiled run")
    estimate_p.add_argument("--p", type=float, required=True, help="physical error rate")
    estimate_p.add_argument("--success", type=float, required=True)
    estimate_p.add_argument("--stats", default=None, help="RunStats JSON file (from slice -f stats)")
    estimate_p.add_argument("--cells", type=int, default=None)
    estimate_p.add_argument("--slices", type=int, default=None)
    estimate_p.add_argument("--prefactor", type=float, default=0.1)
    estimate_p.add_argument("--threshold", type=float, default=1e-2)
    estimate_p.set_defaults(handler=_cmd_estimate)

    sweep_p = sub.add_parser("sweep", help="resource landscape over random circuits")
    sweep_p.add_argument("--widths", required=True, help="comma list or a:b:step")
    sweep_p.add_argument("--depths", required=True)
    sweep_p.add_argument("--p", type=float, required=True)
    sweep_p.add_argument("--success", type=float, required=True)
    sweep_p.add_argument("--seed", type=int, default=0)
    sweep_p.add_argument("-o", "--output", default="-")
    sweep_p.set_defaults(handler=_cmd_sweep)
    return parser


def _pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=float, default=1e-3, help="approximation precision")
    parser.add_argument("--mode", choices=["direct", "compressed"], default="direct")
    parser.add_argument("--litinski", action="store_true",
                        help="Clifford elimination (outcome-only semantics)")
    parser.add_argument("--cache", default=None, help="approximation sequence cache file")
    parser.add_argument("--cache-only", action="store_true",
                        help="never search; fail on a cache miss")
    parser.add_argument("--no-boundary-restore", action="store_true",
                        help="skip the deformation after each transversal Hadamard")
    parser.add_argument("--target-first-cx", action="store_true",
                        help="strict dialect: cx lists the target operand first")


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        epsilon=args.epsilon,
        mode=args.mode,
        litinski=args.litinski,
        boundary_restore=not args.no_boundary_restore,
        cache_path=args.cache,
        cache_only=args.cache_only,
    )


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _open_output(path: str):
    if path == "-":
        return sys.stdout
    return open(path, "w")


def _resolve_layout(path: str) -> Path:
    candidate = Path(path)
    if candidate.exists():
        return candidate
    directory = os.environ.get(LAYOUT_DIR_VARIABLE)
    if directory and (Path(directory) / path).exists():
        return Path(directory) / path
    raise InputError(f"layout file {path!r} not found")


def _cmd_compile(args) -> int:
    circuit = parse_program(_read_input(args.input), target_first_cx=args.target_first_cx)
    out = _open_output(args.output)
    try:
        write_lli_stream(compile_circuit(circuit, _pipeline_config(args)), out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_slice(args) -> int:
    layout = parse_layout(_resolve_layout(args.layout).read_text())
    if args.input == "-":
        source = read_lli_stream(sys.stdin)
    else:
        source = read_lli_stream(Path(args.input).read_text().splitlines())
    config = SlicerConfig(
        distill_period=args.distill_period,
        route_cache=not args.no_route_cache,
        record_events=args.format == "json",
    )
    out = _open_output(args.output)
    try:
        if args.format == "json":
            writer = SliceJsonWriter(out, ndjson=args.ndjson)
            stats = run_stream(source, layout, visitor=writer, config=config)
            writer.close()
        else:
            stats = run_stream(source, layout, visitor=None, config=config)
            if args.format == "stats":
                json.dump(stats.to_json_dict(), out, indent=2)
                out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_qft(args) -> int:
    if args.qubits < 1:
        raise InputError("QFT needs at least one qubit")
    text = generate_qft(args.qubits)
    out = _open_output(args.output)
    try:
        if args.lli:
            circuit = parse_program(text)
            write_lli_stream(compile_circuit(circuit, _pipeline_config(args)), out)
        else:
            out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_verify(args) -> int:
    circuit = parse_program(_read_input(args.input), target_first_cx=args.target_first_cx)
    config = _pipeline_config(args)
    instructions = list(compile_circuit(circuit, config))
    state, snapshots = verified_run(
        instructions,
        seed=args.seed,
        budget=args.budget,
        auto_correct_rotations=(config.mode == "compressed"),
        snapshot_every=0 if args.snapshots is None else 1,
        data_patches=circuit.num_qubits,
    )
    if args.snapshots:
        payload = [snap.to_json_dict() for snap in snapshots]
        Path(args.snapshots).write_text(json.dumps(payload, indent=2) + "\n")

    achieved = simulate_circuit(circuit)
    lazy = state.full_state(list(range(circuit.num_qubits)))
    fidelity = abs(np.vdot(achieved, lazy)) ** 2
    trace_distance = math.sqrt(max(0.0, 1.0 - fidelity))
    # Per-gate approximation error compounds linearly at worst.
    approximated = sum(
        1 for g in circuit.gates if g.angle is not None and g.angle.eighths() is None
    )
    tolerance = args.tolerance if args.tolerance is not None else max(
        1e-6, 4 * config.epsilon * max(3 * approximated, 1)
    )
    verdict = "PASS" if trace_distance <= tolerance else "FAIL"
    print(f"{verdict} trace-distance {trace_distance:.3e} (tolerance {tolerance:.3e}, "
          f"{len(instructions)} LLI, seed {args.seed})")
    return 0 if verdict == "PASS" else 1


def _cmd_estimate(args) -> int:
    if args.stats is not None:
        stats = json.loads(Path(args.stats).read_text())
        slices = int(stats["slice_count"])
        cells = args.cells
        if cells is None:
            raise InputError("--cells is required with --stats (layout size)")
    elif args.cells is not None and args.slices is not None:
        cells, slices = args.cells, args.slices
    else:
        raise InputError("provide --stats with --cells, or --cells and --slices")
    model = ErrorModel(prefactor=args.prefactor, threshold=args.threshold)
    report = min_distance(
        ResourceQuery(args.p, cells, slices, args.success), model
    )
    json.dump(
        {
            "code_distance": report.code_distance,
            "physical_qubits_per_patch": report.physical_qubits_per_patch,
            "total_physical_qubits": report.total_physical_qubits,
            "volume": report.volume,
            "failure_bound": report.failure_bound,
        },
        sys.stdout,
        indent=2,
    )
    sys.stdout.write("\n")
    return 0


def _parse_range(text: str) -> list[int]:
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        if len(parts) == 2:
            return list(range(parts[0], parts[1] + 1))
        if len(parts) == 3:
            return list(range(parts[0], parts[1] + 1, parts[2]))
        raise InputError(f"bad range {text!r}")
    return [int(x) for x in text.split(",") if x]


def _cmd_sweep(args) -> int:
    points = sweep(
        _parse_range(args.widths),
        _parse_range(args.depths),
        args.p,
        args.success,
        seed=args.seed,
    )
    out = _open_output(args.output)
    try:
        for row in sweep_csv_rows(points):
            out.write(row)
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
