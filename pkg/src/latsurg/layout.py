"""ASCII floorplan parsing: qubit patches, routing, ancillae, distillation.

A layout file is a grid of characters: ``Q`` holds a logical qubit,
``r`` is routing space, ``A`` hosts freshly allocated ancilla patches,
and digits mark distillation regions (same-digit 4-connected areas form
one region, so more than ten regions are possible).  Non-rectangular
content is padded with routing cells to its bounding box.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

Coord = tuple[int, int]  # (row, col)


class LayoutError(ValueError):
    pass


class CellKind(enum.Enum):
    QUBIT = "Q"
    ROUTING = "r"
    ANCILLA = "A"
    DISTILLATION = "D"  # digit cells; region id lives in Layout.region_at


@dataclass(frozen=True)
class DistillationRegion:
    """A same-digit 4-connected component with its routing outlets."""

    region_id: int
    digit: str
    cells: tuple[Coord, ...]
    output_cells: tuple[Coord, ...]  # adjacent routing cells


@dataclass(frozen=True)
class Layout:
    rows: int
    cols: int
    grid: tuple[tuple[CellKind, ...], ...]
    qubit_cells: tuple[Coord, ...]          # reading order = qubit index
    ancilla_cells: tuple[Coord, ...]
    regions: tuple[DistillationRegion, ...]
    region_at: dict[Coord, int] = field(default_factory=dict, hash=False, compare=False)

    def kind(self, cell: Coord) -> CellKind:
        return self.grid[cell[0]][cell[1]]

    def in_bounds(self, cell: Coord) -> bool:
        return 0 <= cell[0] < self.rows and 0 <= cell[1] < self.cols

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_cells)


def neighbors(layout: Layout, cell: Coord) -> list[Coord]:
    """In-bounds 4-connected neighbors (up, down, left, right)."""
    if not layout.in_bounds(cell):
        raise LayoutError(f"cell {cell} out of bounds")
    row, col = cell
    out = []
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        nxt = (row + dr, col + dc)
        if layout.in_bounds(nxt):
            out.append(nxt)
    return out


def parse_layout(text: str) -> Layout:
    """Parse layout text; see the module docstring for the cell alphabet."""
    raw_lines = text.splitlines()
    while raw_lines and not raw_lines[-1].strip():
        raw_lines.pop()
    while raw_lines and not raw_lines[0].strip():
        raw_lines.pop(0)
    if not raw_lines:
        raise LayoutError("empty layout")
    lines = [line.rstrip() for line in raw_lines]
    cols = max(len(line) for line in lines)
    rows = len(lines)

    grid: list[list[CellKind]] = []
    digits: dict[Coord, str] = {}
    qubits: list[Coord] = []
    ancillae: list[Coord] = []
    for r, line in enumerate(lines):
        row_cells: list[CellKind] = []
        for c in range(cols):
            ch = line[c] if c < len(line) else " "
            if ch in (" ", "r"):
                row_cells.append(CellKind.ROUTING)  # padding is routing space
            elif ch == "Q":
                row_cells.append(CellKind.QUBIT)
                qubits.append((r, c))
            elif ch == "A":
                row_cells.append(CellKind.ANCILLA)
                ancillae.append((r, c))
            elif ch.isdigit():
                row_cells.append(CellKind.DISTILLATION)
                digits[(r, c)] = ch
            else:
                raise LayoutError(f"invalid character {ch!r} at row {r}, col {c}")
        grid.append(row_cells)

    regions, region_at = _find_regions(grid, digits, rows, cols)
    layout = Layout(
        rows=rows,
        cols=cols,
        grid=tuple(tuple(row) for row in grid),
        qubit_cells=tuple(qubits),
        ancilla_cells=tuple(ancillae),
        regions=tuple(regions),
        region_at=region_at,
    )
    for region in regions:
        if not region.output_cells:
            warnings.warn(
                f"distillation region {region.region_id} (digit {region.digit}) "
                "has no adjacent routing cell and can never emit a magic state",
                stacklevel=2,
            )
    return layout


def _find_regions(
    grid: list[list[CellKind]], digits: dict[Coord, str], rows: int, cols: int
) -> tuple[list[DistillationRegion], dict[Coord, int]]:
    regions: list[DistillationRegion] = []
    region_at: dict[Coord, int] = {}
    visited: set[Coord] = set()
    for start in sorted(digits):
        if start in visited:
            continue
        digit = digits[start]
        component: list[Coord] = []
        stack = [start]
        visited.add(start)
        while stack:
            cell = stack.pop()
            component.append(cell)
            r, c = cell
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                nxt = (r + dr, c + dc)
                if nxt in digits and digits[nxt] == digit and nxt not in visited:
                    visited.add(nxt)
                    stack.append(nxt)
        component.sort()
        outputs: list[Coord] = []
        for r, c in component:
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                nr, nc = r + dr, c + dc
                if 0 <= nr < rows and 0 <= nc < cols and grid[nr][nc] is CellKind.ROUTING:
                    if (nr, nc) not in outputs:
                        outputs.append((nr, nc))
        outputs.sort()
        region_id = len(regions)
        regions.append(
            DistillationRegion(region_id, digit, tuple(component), tuple(outputs))
        )
        for cell in component:
            region_at[cell] = region_id
    return regions, region_at


def print_layout(layout: Layout) -> str:
    """Render back to text (padding becomes explicit routing cells)."""
    lines = []
    for r in range(layout.rows):
        chars = []
        for c in range(layout.cols):
            kind = layout.grid[r][c]
            if kind is CellKind.DISTILLATION:
                chars.append(layout.regions[layout.region_at[(r, c)]].digit)
            else:
                chars.append(kind.value)
        lines.append("".join(chars))
    return "\n".join(lines) + "\n"


def generate_layout(
    num_qubits: int,
    distillation_regions: int = 2,
    region_size: tuple[int, int] = (2, 3),
) -> str:
    """A simple layout with enough patches, ancillae, and distillation.

    Qubit patches sit in rows of pairs separated by routing space (the
    arrangement of the bundled examples); an ancilla column and the
    requested distillation blocks go below.
    """
    if num_qubits < 1:
        raise LayoutError("need at least one qubit")
    pairs_per_row = max(2, math_ceil(num_qubits, 6))
    width = max(4 * pairs_per_row + 1, region_size[1] * distillation_regions + distillation_regions + 1)
    lines = ["r" * width]
    placed = 0
    while placed < num_qubits:
        qubit_row = ["r"] * width
        ancilla_row = ["r"] * width
        col = 1
        while placed < num_qubits and col + 1 < width:
            qubit_row[col] = "Q"
            placed += 1
            if placed < num_qubits and col + 1 < width - 1:
                qubit_row[col + 1] = "Q"
                placed += 1
            ancilla_row[col] = "A"
            col += 4
        lines.append("".join(qubit_row))
        lines.append("".join(ancilla_row))
        lines.append("r" * width)
    if distillation_regions:
        height, span = region_size
        for _ in range(height):
            row = ["r"] * width
            col = 1
            for digit in range(distillation_regions):
                for k in range(span):
                    if col + k < width:
                        row[col + k] = str(digit % 10)
                col += span + 1
            lines.append("".join(row))
        lines.append("r" * width)
    return "\n".join(lines) + "\n"


def math_ceil(a: int, b: int) -> int:
    return -(-a // b)
