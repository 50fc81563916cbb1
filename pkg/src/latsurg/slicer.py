"""Streaming slicer: LLI plus a layout in, a stream of slices out.

The slicer packs instructions greedily, in order, into discrete time
steps.  An instruction is placed in the current slice when every cell it
needs is free; otherwise the slice is finalized (handed to the visitor)
and a new one begins.  Routes for multi-body measurements are shortest
paths over free routing/ancilla cells, found with an in-place Dijkstra
directly on the cell grid and reused through a route cache.  Magic
states are produced by distillation regions on a fixed period, queue in
adjacent routing cells, and are consumed by RequestMagicState.  Only the
current slice is ever held in memory.
"""

from __future__ import annotations

import heapq
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .layout import CellKind, Layout
from .lli import (
    BoundaryRotate,
    ConditionalCorrection,
    Init,
    Lli,
    MeasureSingle,
    MultiBodyMeasure,
    RequestMagicState,
    SGate,
    TransversalHadamard,
    TransversalPauli,
    innermost,
)
from .pauli import PauliOperator

Coord = tuple[int, int]


class SlicerError(RuntimeError):
    pass


class UnknownPatch(SlicerError):
    pass


class Deadlock(SlicerError):
    pass


class _CannotPlace(Exception):
    """Internal: the instruction does not fit in the current slice."""


@dataclass
class SlicerConfig:
    distill_period: int = 6
    boundary_rotate_duration: int = 3
    route_cache: bool = True
    record_events: bool = True       # keep per-slice event lists (JSON/visitor mode)


@dataclass
class RunStats:
    """Aggregates the run; bounded in size regardless of stream length."""

    lli_count: int = 0
    slice_count: int = 0
    stalls: int = 0
    routing_occupancy: dict[int, int] = field(default_factory=dict)
    magic_queue_histogram: dict[int, int] = field(default_factory=dict)
    magic_queue_series: list[int] = field(default_factory=list)
    _series_stride: int = 1
    _series_seen: int = 0

    def note_slice(self, busy_routing: int, queued: int) -> None:
        self.slice_count += 1
        self.routing_occupancy[busy_routing] = self.routing_occupancy.get(busy_routing, 0) + 1
        self.magic_queue_histogram[queued] = self.magic_queue_histogram.get(queued, 0) + 1
        if self._series_seen % self._series_stride == 0:
            self.magic_queue_series.append(queued)
            if len(self.magic_queue_series) >= 2048:
                self.magic_queue_series = self.magic_queue_series[::2]
                self._series_stride *= 2
        self._series_seen += 1

    def to_json_dict(self) -> dict:
        return {
            "lli_count": self.lli_count,
            "slice_count": self.slice_count,
            "stalls": self.stalls,
            "routing_occupancy": {str(k): v for k, v in sorted(self.routing_occupancy.items())},
            "magic_queue_histogram": {str(k): v for k, v in sorted(self.magic_queue_histogram.items())},
            "magic_queue_series": list(self.magic_queue_series),
            "magic_queue_series_stride": self._series_stride,
        }


@dataclass(frozen=True)
class SliceEvent:
    instruction: Lli
    cells: tuple[Coord, ...]


@dataclass(frozen=True)
class Slice:
    """One finalized time step: what every cell was doing."""

    index: int
    cells: tuple[tuple[object, ...], ...]   # row-major CellView | None
    events: tuple[SliceEvent, ...]


@dataclass(frozen=True)
class CellView:
    kind: str
    patch: int | None = None
    orientation: str | None = None
    state: str | None = None
    activity: int | None = None
    region: int | None = None
    countdown: int | None = None


# Neighbor offsets in deterministic order: up, down, left, right.
_SIDES = ((-1, 0), (1, 0), (0, -1), (0, 1))
_DIAGONALS = ((-1, -1), (-1, 1), (1, -1), (1, 1))


class SlicerState:
    """Mutable grid state evolved one instruction at a time."""

    def __init__(self, layout: Layout, config: SlicerConfig | None = None):
        self.layout = layout
        self.config = config or SlicerConfig()
        self.rows, self.cols = layout.rows, layout.cols
        n = self.rows * self.cols
        self.routable = [
            layout.grid[i // self.cols][i % self.cols] in (CellKind.ROUTING, CellKind.ANCILLA)
            for i in range(n)
        ]
        self.static_block = [False] * n      # patches and queued magic states
        self.slice_busy = [0] * n            # activity id + 1, per current slice
        self.patch_cell: dict[int, int] = {}
        self.patch_orientation: dict[int, bool] = {}  # True = rough north-south
        self.patch_state: dict[int, str] = {}
        self.patch_busy_until: dict[int, int] = {}
        self.magic_cells: list[int] = []     # queued magic states (flat cells)
        # Bound outcome slots, kept over a sliding window so memory stays
        # independent of stream length; corrections reference outcomes from
        # a few instructions back, never from the distant past.
        self.outcome_horizon = 1 << 12
        self.bound_outcomes: OrderedDict[int, None] = OrderedDict()
        self.slice_index = 0
        self.next_activity = 1
        self.route_cache: dict[tuple, tuple[int, ...]] = {}
        self.reservations: list[list] = []   # [cells, remaining_slices, activity]
        self.pending_removals: list[int] = []
        self.events: list[SliceEvent] = []
        self.stats = RunStats()
        self.countdowns = [self.config.distill_period for _ in layout.regions]
        self.ancilla_cells = [r * self.cols + c for r, c in layout.ancilla_cells]
        self.region_outputs = [
            [r * self.cols + c for r, c in region.output_cells] for region in layout.regions
        ]
        for index, (r, c) in enumerate(layout.qubit_cells):
            flat = r * self.cols + c
            self.patch_cell[index] = flat
            self.patch_orientation[index] = True
            self.static_block[flat] = True
        self.used_patches: set[int] = set()
        self._placed_this_slice = 0
        self._busy_routing = 0               # incremental slice statistic
        self.adjacency: list[tuple[int, ...]] = [
            tuple(
                (i // self.cols + dr) * self.cols + (i % self.cols + dc)
                for dr, dc in _SIDES
                if 0 <= i // self.cols + dr < self.rows and 0 <= i % self.cols + dc < self.cols
            )
            for i in range(n)
        ]

    # -- geometry ----------------------------------------------------------

    def _flat(self, cell: Coord) -> int:
        return cell[0] * self.cols + cell[1]

    def _coord(self, flat: int) -> Coord:
        return divmod(flat, self.cols)

    def _free(self, flat: int) -> bool:
        return self.routable[flat] and not self.static_block[flat] and not self.slice_busy[flat]

    def _attach_cells(self, patch: int, op: PauliOperator, static_only: bool = False) -> list[int]:
        """Free cells from which a route may touch the patch for this operator.

        X attaches through the rough boundary, Z through the smooth one;
        default orientation is rough north-south.  A Y operand needs a
        corner cell touching both boundary kinds, so it attaches
        diagonally; no boundary rotation is inserted implicitly.
        """
        flat = self.patch_cell[patch]
        row, col = self._coord(flat)
        canonical = self.patch_orientation[patch]
        if op is PauliOperator.Y:
            offsets: tuple[tuple[int, int], ...] = _DIAGONALS
        else:
            rough = (op is PauliOperator.X)
            vertical = rough == canonical
            offsets = ((-1, 0), (1, 0)) if vertical else ((0, -1), (0, 1))
        free = self._static_routable if static_only else self._free
        cells = []
        for dr, dc in offsets:
            r, c = row + dr, col + dc
            if 0 <= r < self.rows and 0 <= c < self.cols:
                f = r * self.cols + c
                if free(f):
                    cells.append(f)
        return cells

    def _neighbors(self, flat: int) -> tuple[int, ...]:
        return self.adjacency[flat]

    # -- routing -----------------------------------------------------------

    def shortest_route(
        self, starts: list[int], targets: set[int], static_only: bool = False
    ) -> tuple[int, ...] | None:
        """In-place Dijkstra directly over the cell grid, no graph built.

        Deterministic: equal-cost ties resolve by the smaller (row, col)
        of the settled cell.  With ``static_only`` the search ignores
        dynamic occupancy and sees only the layout's routable cells.
        """
        if not starts or not targets:
            return None
        free = self._static_routable if static_only else self._free
        dist: dict[int, int] = {}
        parent: dict[int, int] = {}
        heap: list[tuple[int, int]] = []
        for s in sorted(starts):
            dist[s] = 1
            parent[s] = -1
            heapq.heappush(heap, (1, s))
        while heap:
            d, cell = heapq.heappop(heap)
            if d > dist.get(cell, 1 << 30):
                continue
            if cell in targets:
                path = []
                while cell != -1:
                    path.append(cell)
                    cell = parent[cell]
                path.reverse()
                return tuple(path)
            for nxt in self.adjacency[cell]:
                if nxt not in dist and free(nxt):
                    dist[nxt] = d + 1
                    parent[nxt] = cell
                    heapq.heappush(heap, (d + 1, nxt))
        return None

    def _static_routable(self, flat: int) -> bool:
        return self.routable[flat]

    def route(self, src: tuple[int, PauliOperator], dst: tuple[int, PauliOperator]) -> tuple[int, ...]:
        """Shortest free path between two patch boundaries; raises _CannotPlace.

        The routing policy is: take the canonical geometric path (the
        deterministic shortest path on the empty lattice) whenever its
        cells are all free, otherwise search again under the current
        occupancy.  The cache memoizes canonical paths only, so enabling
        or disabling it cannot change any routing decision.
        """
        for patch, _ in (src, dst):
            if patch not in self.patch_cell:
                raise UnknownPatch(f"patch {patch} does not exist")
        key = (
            self.patch_cell[src[0]], src[1].value, self.patch_orientation[src[0]],
            self.patch_cell[dst[0]], dst[1].value, self.patch_orientation[dst[0]],
        )
        canonical = self.route_cache.get(key) if self.config.route_cache else None
        if canonical is None:
            canonical = self._canonical_route(src, dst)
            if self.config.route_cache and canonical is not None:
                self.route_cache[key] = canonical
        if canonical is not None:
            busy = self.slice_busy
            blocked = self.static_block
            for f in canonical:
                if busy[f] or blocked[f]:
                    break
            else:
                return canonical
        starts = self._attach_cells(*src)
        targets = set(self._attach_cells(*dst))
        if len(starts) == 1 and starts[0] in targets:
            return (starts[0],)
        path = self.shortest_route(starts, targets)
        if path is None:
            raise _CannotPlace("no free route")
        return path

    def _canonical_route(
        self, src: tuple[int, PauliOperator], dst: tuple[int, PauliOperator]
    ) -> tuple[int, ...] | None:
        starts = self._attach_cells(src[0], src[1], static_only=True)
        targets = set(self._attach_cells(dst[0], dst[1], static_only=True))
        if len(starts) == 1 and starts[0] in targets:
            return (starts[0],)
        return self.shortest_route(starts, targets, static_only=True)

    # -- placement ---------------------------------------------------------

    def _patch_free(self, patch: int) -> bool:
        if patch not in self.patch_cell:
            raise UnknownPatch(f"patch {patch} does not exist")
        self.used_patches.add(patch)
        return self.patch_busy_until.get(patch, 0) <= self.slice_index

    def _claim_patch_id(self, patch: int) -> None:
        """Free the id for a new patch; an untouched data binding yields it.

        The LLI stream is layout-agnostic: when the layout provisions more
        qubit cells than the circuit uses, the stream's fresh ancilla ids
        can collide with idle data patches, which simply cede the id.
        """
        if patch not in self.patch_cell:
            return
        if patch in self.used_patches:
            raise SlicerError(f"patch {patch} already exists")
        flat = self.patch_cell[patch]
        if self.layout.grid[flat // self.cols][flat % self.cols] is not CellKind.QUBIT:
            raise SlicerError(f"patch {patch} already exists")
        del self.patch_cell[patch]
        self.patch_orientation.pop(patch, None)
        self.static_block[flat] = False

    def _bind_outcome(self, seq: int) -> None:
        self.bound_outcomes[seq] = None
        while len(self.bound_outcomes) > self.outcome_horizon:
            self.bound_outcomes.popitem(last=False)

    def _mark_patch_busy(self, patch: int, slices: int = 1) -> None:
        self.patch_busy_until[patch] = self.slice_index + slices

    def _occupy(self, cells: Iterable[int], activity: int) -> None:
        for f in cells:
            if not self.slice_busy[f] and self.routable[f] and not self.static_block[f]:
                self._busy_routing += 1
            self.slice_busy[f] = activity

    def _record(self, instruction: Lli, cells: Iterable[int]) -> None:
        self.stats.lli_count += 1
        self._placed_this_slice += 1
        if self.config.record_events:
            coords = tuple(self._coord(f) for f in cells)
            self.events.append(SliceEvent(instruction, coords))

    def _adjacent_free_cell(self, patch: int) -> int:
        flat = self.patch_cell[patch]
        for nxt in self._neighbors(flat):
            if self._free(nxt):
                return nxt
        raise _CannotPlace("no free cell adjacent to patch")

    def try_place(self, instruction: Lli, seq: int, magic_hint: int | None = None) -> None:
        """Place into the current slice or raise _CannotPlace.

        ``magic_hint`` is the data patch a requested magic state will be
        measured with, used to pick the nearest queued state.
        """
        body = instruction
        while isinstance(body, ConditionalCorrection):
            if body.condition.sequence_number not in self.bound_outcomes:
                raise SlicerError(
                    f"instruction {seq} is conditioned on outcome "
                    f"{body.condition.sequence_number}, which is not bound yet"
                )
            body = body.body

        if isinstance(body, Init):
            self._claim_patch_id(body.patch)
            for f in self.ancilla_cells:
                if not self.static_block[f] and not self.slice_busy[f]:
                    activity = self._new_activity()
                    self.patch_cell[body.patch] = f
                    self.patch_orientation[body.patch] = True
                    self.patch_state[body.patch] = body.state.value
                    self.slice_busy[f] = activity
                    self.static_block[f] = True
                    self._mark_patch_busy(body.patch)
                    self.used_patches.add(body.patch)
                    self._record(instruction, (f,))
                    return
            if not self.ancilla_cells:
                raise Deadlock("layout has no ancilla cells; Init can never place")
            raise _CannotPlace("all ancilla cells in use")

        if isinstance(body, RequestMagicState):
            self._claim_patch_id(body.patch)
            if not self.layout.regions:
                raise Deadlock("layout has no distillation regions; magic states unavailable")
            if not self.magic_cells:
                raise _CannotPlace("no magic state queued")
            chosen = self._pick_magic_cell(magic_hint)
            self.magic_cells.remove(chosen)
            # Binding is classical bookkeeping: the patch is usable in the
            # same slice, so the consuming merge can follow immediately.
            self.patch_cell[body.patch] = chosen
            self.patch_orientation[body.patch] = True
            self.patch_state[body.patch] = "m"
            self.static_block[chosen] = True
            self.used_patches.add(body.patch)
            self._record(instruction, (chosen,))
            return

        if isinstance(body, MeasureSingle):
            if not self._patch_free(body.patch):
                raise _CannotPlace("patch busy")
            flat = self.patch_cell[body.patch]
            activity = self._new_activity()
            self.slice_busy[flat] = activity
            self._mark_patch_busy(body.patch)
            self._bind_outcome(seq)
            # The patch disappears; its cell frees at the next slice.
            self.pending_removals.append(body.patch)
            self._record(instruction, (flat,))
            return

        if isinstance(body, MultiBodyMeasure):
            self._place_mbm(instruction, body, seq)
            return

        if isinstance(body, (TransversalPauli, TransversalHadamard)):
            patch = body.patch
            if not self._patch_free(patch):
                raise _CannotPlace("patch busy")
            flat = self.patch_cell[patch]
            self.slice_busy[flat] = self._new_activity()
            self._mark_patch_busy(patch)
            if isinstance(body, TransversalHadamard):
                self.patch_orientation[patch] = not self.patch_orientation[patch]
            self._record(instruction, (flat,))
            return

        if isinstance(body, SGate):
            patch = body.patch
            if not self._patch_free(patch):
                raise _CannotPlace("patch busy")
            spare = self._adjacent_free_cell(patch)
            flat = self.patch_cell[patch]
            activity = self._new_activity()
            self._occupy((flat, spare), activity)
            self._mark_patch_busy(patch)
            self._record(instruction, (flat, spare))
            return

        if isinstance(body, BoundaryRotate):
            patch = body.patch
            if not self._patch_free(patch):
                raise _CannotPlace("patch busy")
            spare = self._adjacent_free_cell(patch)
            flat = self.patch_cell[patch]
            duration = self.config.boundary_rotate_duration
            activity = self._new_activity()
            self._occupy((flat, spare), activity)
            self._mark_patch_busy(patch, duration)
            if duration > 1:
                self.reservations.append([(flat, spare), duration - 1, activity])
            self.patch_orientation[patch] = not self.patch_orientation[patch]
            self._record(instruction, (flat, spare))
            return

        raise SlicerError(f"cannot place {body!r}")

    def _new_activity(self) -> int:
        activity = self.next_activity
        self.next_activity += 1
        return activity

    def _pick_magic_cell(self, hint: tuple[int, PauliOperator] | None) -> int:
        """Nearest queued state to the requesting patch that a route can
        actually reach on the operator's boundary side."""
        operator = PauliOperator.Z
        anchor: int | None = None
        if hint is not None:
            patch, operator = hint
            if patch in self.patch_cell:
                anchor = self.patch_cell[patch]
        if operator is PauliOperator.Y:
            offsets: tuple[tuple[int, int], ...] = _DIAGONALS
        elif operator is PauliOperator.X:
            offsets = ((-1, 0), (1, 0))
        else:
            offsets = ((0, -1), (0, 1))
        reachable = []
        for f in self.magic_cells:
            row, col = self._coord(f)
            for dr, dc in offsets:
                r, c = row + dr, col + dc
                if 0 <= r < self.rows and 0 <= c < self.cols and self._free(r * self.cols + c):
                    reachable.append(f)
                    break
        if not reachable:
            raise _CannotPlace("no queued magic state is reachable")
        if anchor is not None:
            hr, hc = self._coord(anchor)
            def key(f: int) -> tuple:
                r, c = self._coord(f)
                return (abs(r - hr) + abs(c - hc), r, c)
        else:
            def key(f: int) -> tuple:
                return self._coord(f)
        return min(reachable, key=key)

    def _place_mbm(self, instruction: Lli, body: MultiBodyMeasure, seq: int) -> None:
        patches = [p for p, _ in body.operands]
        for patch in patches:
            if not self._patch_free(patch):
                raise _CannotPlace("patch busy")
        operands = list(body.operands)
        route_cells: list[int] = []
        if len(operands) == 2:
            path = self.route(operands[0], operands[1])
            route_cells.extend(path)
        else:
            path = self.route(operands[0], operands[1])
            route_cells.extend(path)
            region = set(route_cells)
            for patch, op in operands[2:]:
                starts = self._attach_cells(patch, op)
                targets = {
                    n for f in region for n in self._neighbors(f)
                    if self._free(n) and n not in region
                }
                extension = self.shortest_route(starts, targets)
                if extension is None:
                    # Direct adjacency: an attach cell touching the region.
                    touching = [s for s in starts if any(n in region for n in self._neighbors(s))]
                    if not touching:
                        raise _CannotPlace("no free route to join measurement region")
                    extension = (min(touching),)
                route_cells.extend(extension)
                region.update(extension)
        activity = self._new_activity()
        self._occupy(route_cells, activity)
        for patch in patches:
            self._mark_patch_busy(patch)
        self._bind_outcome(seq)
        self._record(instruction, tuple(route_cells))

    # -- time --------------------------------------------------------------

    def finalize_slice(self) -> tuple[int, int]:
        """Stats for the closing slice: (busy routing cells, queue length)."""
        return self._busy_routing, len(self.magic_cells)

    def advance_slice(self) -> None:
        """Close the current slice and open the next one."""
        self.slice_index += 1
        self.slice_busy = [0] * len(self.slice_busy)
        self.events = []
        self._placed_this_slice = 0
        self._busy_routing = 0
        for patch in self.pending_removals:
            flat = self.patch_cell.pop(patch)
            self.static_block[flat] = False
            self.patch_orientation.pop(patch, None)
            self.patch_state.pop(patch, None)
            self.patch_busy_until.pop(patch, None)
            self.used_patches.discard(patch)
        self.pending_removals = []
        kept = []
        for reservation in self.reservations:
            cells, remaining, activity = reservation
            self._occupy(cells, activity)
            reservation[1] = remaining - 1
            if reservation[1] > 0:
                kept.append(reservation)
        self.reservations = kept
        self.tick_distillation()

    def tick_distillation(self) -> None:
        """Advance region countdowns; at zero, queue into a free output cell.

        Among the free output cells, only those that leave the new state
        with at least one free neighbor are used: a state sealed at birth
        could never be routed to and would clog the lattice for good.
        """
        bound_magic = {
            self.patch_cell[p] for p, tag in self.patch_state.items()
            if tag == "m" and p in self.patch_cell
        }
        for index, region in enumerate(self.layout.regions):
            if self.countdowns[index] > 0:
                self.countdowns[index] -= 1
            if self.countdowns[index] == 0:
                for f in self.region_outputs[index]:
                    if not self._free(f):
                        continue
                    open_neighbors = sum(1 for n in self._neighbors(f) if self._free(n))
                    if open_neighbors == 0:
                        continue
                    # Never wall in a bound magic state awaiting its merge.
                    if any(n in bound_magic for n in self._neighbors(f)):
                        continue
                    self.static_block[f] = True
                    self.magic_cells.append(f)
                    self.countdowns[index] = self.config.distill_period
                    break

    # -- snapshots -----------------------------------------------------------

    def snapshot(self) -> Slice:
        """A full view of the current slice (visitor / JSON mode)."""
        cell_of_patch = {flat: patch for patch, flat in self.patch_cell.items()}
        magic = set(self.magic_cells)
        rows = []
        for r in range(self.rows):
            row: list[object] = []
            for c in range(self.cols):
                f = r * self.cols + c
                kind = self.layout.grid[r][c]
                if f in cell_of_patch:
                    patch = cell_of_patch[f]
                    is_qubit = kind is CellKind.QUBIT
                    row.append(CellView(
                        kind="qubit" if is_qubit else "ancilla_patch",
                        patch=patch,
                        orientation="rough_ns" if self.patch_orientation[patch] else "rough_ew",
                        state=self.patch_state.get(patch),
                        activity=self.slice_busy[f] or None,
                    ))
                elif f in magic:
                    row.append(CellView(kind="magic_queue"))
                elif kind is CellKind.DISTILLATION:
                    region = self.layout.region_at[(r, c)]
                    row.append(CellView(
                        kind="distillation", region=region, countdown=self.countdowns[region],
                    ))
                elif self.slice_busy[f]:
                    row.append(CellView(kind="route", activity=self.slice_busy[f]))
                else:
                    row.append(None)
            rows.append(tuple(row))
        return Slice(self.slice_index, tuple(rows), tuple(self.events))


def run_stream(
    source: Iterable[Lli],
    layout: Layout,
    visitor: Callable[[Slice], None] | None = None,
    config: SlicerConfig | None = None,
) -> RunStats:
    """Consume an LLI stream, emitting each finalized slice to the visitor.

    At most one slice is retained in memory.  Raises Deadlock when a full
    distillation period (or the longest instruction duration) passes with
    nothing placed and the head instruction still does not fit.
    """
    config = config or SlicerConfig(record_events=visitor is not None)
    state = SlicerState(layout, config)
    patience = max(config.distill_period, config.boundary_rotate_duration) + 2

    def close_slice() -> None:
        busy, queued = state.finalize_slice()
        state.stats.note_slice(busy, queued)
        if visitor is not None:
            visitor(state.snapshot())
        state.advance_slice()

    iterator = iter(source)
    lookahead: list[Lli] = []
    seq = 0
    empty = True
    while True:
        if lookahead:
            instruction = lookahead.pop(0)
        else:
            try:
                instruction = next(iterator)
            except StopIteration:
                break
        empty = False
        hint = None
        if isinstance(innermost(instruction), RequestMagicState):
            target = innermost(instruction).patch
            try:
                upcoming = next(iterator)
                lookahead.append(upcoming)
                peek = innermost(upcoming)
                if isinstance(peek, MultiBodyMeasure):
                    magic_op = next((op for p, op in peek.operands if p == target), None)
                    others = [p for p, _ in peek.operands if p != target]
                    if others and magic_op is not None:
                        hint = (others[0], magic_op)
            except StopIteration:
                pass
        stalled_slices = 0
        while True:
            try:
                state.try_place(instruction, seq, hint)
                break
            except _CannotPlace as blocked:
                state.stats.stalls += 1
                made_progress = state._placed_this_slice > 0
                close_slice()
                stalled_slices = 0 if made_progress else stalled_slices + 1
                if stalled_slices > patience:
                    raise Deadlock(
                        f"instruction {seq} ({type(innermost(instruction)).__name__}) "
                        f"cannot be placed after {stalled_slices} idle slices: {blocked}"
                    ) from None
        seq += 1

    if not empty:
        close_slice()
        while state.reservations:
            close_slice()
    return state.stats
