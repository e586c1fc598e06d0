# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""First-hit ray traversal over hybrid volumes.

World units are finest voxels: the volume occupies the box ``[0, resolution]``
and a voxel ``(x, y, z)`` the unit cube at that corner. Rays are normalised, so
the ray parameter ``t`` is a distance in voxels.

Every level is traversed with the same boundary rule, so a hierarchical
traversal visits exactly the finest cells a flat grid walk would:

- A plane crossing is always computed as ``(plane - origin) * inverse`` on the
  absolute plane coordinate, whatever the level.
- A cell (or octant) is visited iff its slab interval clipped to the parent
  interval has positive length. Cells are half-open in the direction of
  travel; axis-parallel rays use ``[low, high)``.
- When several axes cross at the same ``t`` the walk steps them together, so
  cells touched only at an edge or corner are never visited.

Raw and DF levels are walked with an Amanatides-Woo grid walk; an empty DF cell
with distance ``d`` lets the walk take ``d`` unit steps before the next
occupancy test. SVO and SVDAG levels visit children in increasing entry ``t``
(ties by child index), either with an explicit stack of per-depth frames or,
with ``restart_sv``, stacklessly by re-descending from the sub-volume root for
every lookup.

Example::

    tracer = Tracer(buffer, plan, TraceOptions(restart_sv=True))
    hit = tracer.intersect(Ray((-1.0, 8.5, 8.5), (1.0, 0.0, 0.0)))
    if hit:
        print(hit.voxel, hit.normal)
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from pydantic import BaseModel, ConfigDict

from hybrid_voxels.core.buffer import EMPTY, VolumeBuffer
from hybrid_voxels.core.format import DFLevel, FormatPlan, RawLevel, SVDAGLevel
from hybrid_voxels.exceptions import CoordinateRangeError, TraversalError

__all__ = [
    "RAY_EPSILON",
    "RESTART_EPSILON",
    "Ray",
    "Hit",
    "TraceOptions",
    "TraversalTrace",
    "Tracer",
    "intersect_root",
    "dda_level",
    "traverse_sv",
    "point_query",
]

RAY_EPSILON = 1e-12
"""Direction components below this magnitude are treated as exactly zero."""

RESTART_EPSILON = 2.0**-16
"""Forced advance (in voxels) of restart traversal when rounding fails to move ``t``."""

_INF = math.inf


@dataclass(frozen=True, slots=True)
class Ray:
    """Ray with a normalised direction; ``t`` ranges over ``[t_min, t_max]``."""

    origin: tuple[float, float, float]
    direction: tuple[float, float, float]
    t_min: float = 0.0
    t_max: float = _INF

    def __post_init__(self) -> None:
        dx, dy, dz = (float(c) for c in self.direction)
        norm = math.sqrt(dx * dx + dy * dy + dz * dz)
        if not norm > 0.0 or not math.isfinite(norm):
            raise ValueError(f"ray direction must be finite and non-zero, got {self.direction}")
        unit = tuple(0.0 if abs(c / norm) < RAY_EPSILON else c / norm for c in (dx, dy, dz))
        object.__setattr__(self, "origin", tuple(float(c) for c in self.origin))
        object.__setattr__(self, "direction", unit)

    @property
    def inverse(self) -> tuple[float, float, float]:
        """Component-wise ``1 / direction``, infinite for zero components."""
        return tuple(_INF if c == 0.0 else 1.0 / c for c in self.direction)  # type: ignore[return-value]

    def at(self, t: float) -> tuple[float, float, float]:
        ox, oy, oz = self.origin
        dx, dy, dz = self.direction
        return (ox + t * dx, oy + t * dy, oz + t * dz)


@dataclass(frozen=True, slots=True)
class Hit:
    """First non-empty finest voxel along a ray.

    Attributes:
        color: The voxel's RGBA word (never 0).
        voxel: Finest-level coordinates.
        t: Ray parameter where the ray enters the voxel.
        normal: Axis-aligned unit normal of the entry face.
    """

    color: int
    voxel: tuple[int, int, int]
    t: float
    normal: tuple[int, int, int]


class TraceOptions(BaseModel):
    """Traversal switches; ``restart_sv`` selects stackless sparse traversal."""

    model_config = ConfigDict(frozen=True)

    restart_sv: bool = False


@dataclass(slots=True)
class TraversalTrace:
    """Optional record of what a traversal touched.

    Attributes:
        tested: Finest cells tested for occupancy, with their entry ``t``, in order.
        skipped: DF cells stepped over without a test, as ``(lower, side)``.
        node_visits: ``(level index, offset)`` of every sparse node whose
            children were examined.
    """

    tested: list[tuple[tuple[int, int, int], float]] = field(default_factory=list)
    skipped: list[tuple[tuple[int, int, int], int]] = field(default_factory=list)
    node_visits: list[tuple[int, int]] = field(default_factory=list)


def _box_interval(
    ray: Ray, lo: Sequence[float], hi: Sequence[float]
) -> tuple[float, float, int]:
    """Slab test of ``ray`` against ``[lo, hi]``: ``(t0, t1, entry axis)``."""
    t0, t1, axis = ray.t_min, ray.t_max, -1
    inverse = ray.inverse
    for k in range(3):
        o = ray.origin[k]
        if ray.direction[k] == 0.0:
            if not lo[k] <= o < hi[k]:
                return (_INF, -_INF, -1)
            continue
        ta = (lo[k] - o) * inverse[k]
        tb = (hi[k] - o) * inverse[k]
        near, far = (ta, tb) if ta < tb else (tb, ta)
        if near > t0:
            t0, axis = near, k
        if far < t1:
            t1 = far
    return (t0, t1, axis)


class _Walk:
    """Per-ray traversal state; a new one is created for every ray."""

    __slots__ = ("words", "plan", "restart", "trace", "o", "d", "inv", "last")

    def __init__(self, tracer: Tracer, ray: Ray, trace: TraversalTrace | None) -> None:
        self.words = tracer.words
        self.plan = tracer.plan
        self.restart = tracer.options.restart_sv
        self.trace = trace
        self.o = ray.origin
        self.d = ray.direction
        self.inv = ray.inverse
        self.last = tracer.plan.depth - 1

    # geometry ------------------------------------------------------------

    def plane_t(self, k: int, p: float) -> float:
        return (p - self.o[k]) * self.inv[k]

    def cell_at(self, k: int, t: float, s: int) -> int:
        """Absolute index (cells of side ``s``) of the cell holding the ray at ``t`` on axis ``k``."""
        o = self.o[k]
        d = self.d[k]
        if d == 0.0:
            return math.floor(o / s)
        inv = self.inv[k]
        c = math.floor((o + t * d) / s)
        if d > 0.0:
            while ((c + 1) * s - o) * inv <= t:
                c += 1
            while (c * s - o) * inv > t:
                c -= 1
        else:
            while (c * s - o) * inv <= t:
                c -= 1
            while ((c + 1) * s - o) * inv > t:
                c += 1
        return c

    def normal(self, axis: int) -> tuple[int, int, int]:
        if axis < 0:
            axis = max(range(3), key=lambda k: abs(self.d[k]))
        n = [0, 0, 0]
        n[axis] = -1 if self.d[axis] > 0.0 else 1
        return (n[0], n[1], n[2])

    # dispatch ------------------------------------------------------------

    def enter(
        self, idx: int, pointer: int, lower: tuple[int, int, int], t0: float, t1: float, axis: int
    ) -> Hit | None:
        level = self.plan.levels[idx]
        if isinstance(level, (RawLevel, DFLevel)):
            return self.dda(idx, pointer, lower, t0, t1, axis)
        if self.restart:
            return self.sv_restart(idx, pointer, lower, t0, t1, axis)
        return self.sv_stack(idx, pointer, lower, t0, t1, axis)

    def child(
        self, idx: int, term: int, lower: tuple[int, int, int], t0: float, t1: float, axis: int
    ) -> Hit | None:
        if idx == self.last:
            return Hit(color=term, voxel=lower, t=t0, normal=self.normal(axis))
        return self.enter(idx + 1, term, lower, t0, t1, axis)

    # Raw / DF ------------------------------------------------------------

    def dda(
        self, idx: int, base: int, lower: tuple[int, int, int], t0: float, t1: float, axis: int
    ) -> Hit | None:
        words = self.words
        trace = self.trace
        ext = self.plan.extents[idx]
        s = self.plan.cumulative[idx]
        is_df = isinstance(self.plan.levels[idx], DFLevel)
        finest = idx == self.last
        w, h, _ = ext

        first = [lower[k] // s for k in range(3)]
        cell = [0, 0, 0]
        step = [0, 0, 0]
        tmax = [_INF, _INF, _INF]
        for k in range(3):
            c = min(max(self.cell_at(k, t0, s) - first[k], 0), ext[k] - 1)
            cell[k] = c
            if self.d[k] > 0.0:
                step[k] = 1
                tmax[k] = self.plane_t(k, (first[k] + c + 1) * s)
            elif self.d[k] < 0.0:
                step[k] = -1
                tmax[k] = self.plane_t(k, (first[k] + c) * s)

        t_enter = t0
        budget = 0
        while True:
            t_exit = min(tmax[0], tmax[1], tmax[2], t1)
            if t_exit > t_enter:
                clower = (lower[0] + cell[0] * s, lower[1] + cell[1] * s, lower[2] + cell[2] * s)
                if budget > 0:
                    if trace is not None:
                        trace.skipped.append((clower, s))
                else:
                    index = cell[0] + w * (cell[1] + h * cell[2])
                    if is_df:
                        term = words[base + 2 * index]
                    else:
                        term = words[base + index]
                    if finest and trace is not None:
                        trace.tested.append((clower, t_enter))
                    if term != EMPTY:
                        hit = self.child(idx, term, clower, t_enter, t_exit, axis)
                        if hit is not None:
                            return hit
                    elif is_df:
                        budget = words[base + 2 * index + 1]

            t_next = min(tmax[0], tmax[1], tmax[2])
            if t_next >= t1:
                return None
            axis = -1
            moved = 0
            for k in range(3):
                if tmax[k] == t_next:
                    cell[k] += step[k]
                    if not 0 <= cell[k] < ext[k]:
                        return None
                    edge = first[k] + cell[k] + (1 if step[k] > 0 else 0)
                    tmax[k] = self.plane_t(k, edge * s)
                    if axis < 0:
                        axis = k
                    moved += 1
            t_enter = t_next
            if budget > 0:
                budget = max(budget - moved, 0)

    # SVO / SVDAG ---------------------------------------------------------

    def ordered_children(
        self,
        idx: int,
        node: int,
        lower: tuple[int, int, int],
        side: int,
        t0: float,
        t1: float,
        axis: int,
    ) -> list[tuple]:
        """Valid children of ``node`` with positive-length intervals, sorted by ``(t0, index)``.

        Entries are ``(t0, index, t1, axis, is_leaf, value, lower)`` where
        ``value`` is the child's terminating integer for leaves and its node
        offset otherwise.
        """
        words = self.words
        dag = isinstance(self.plan.levels[idx], SVDAGLevel)
        if self.trace is not None:
            self.trace.node_visits.append((idx, node))
        masks = words[node] if dag else words[node + 1]
        valid = masks & 0xFF
        leaf = (masks >> 8) & 0xFF
        half = side >> 1

        spans: list[tuple[tuple[float, float] | None, tuple[float, float] | None]] = []
        for k in range(3):
            lo = lower[k]
            d = self.d[k]
            if d == 0.0:
                o = self.o[k]
                inner = (-_INF, _INF)
                spans.append((inner if lo <= o < lo + half else None, inner if lo + half <= o < lo + side else None))
                continue
            p0 = self.plane_t(k, lo)
            p1 = self.plane_t(k, lo + half)
            p2 = self.plane_t(k, lo + side)
            spans.append(((p0, p1), (p1, p2)) if d > 0.0 else ((p1, p0), (p2, p1)))

        out: list[tuple] = []
        rank = 0
        for i in range(8):
            if not valid >> i & 1:
                continue
            if dag:
                ref = words[node + 1 + rank]
            else:
                ref = words[node] + 2 * rank
            rank += 1
            tn, tf, ax = t0, t1, axis
            for k in range(3):
                span = spans[k][i >> k & 1]
                if span is None:
                    tn = _INF
                    break
                if span[0] > tn:
                    tn, ax = span[0], k
                if span[1] < tf:
                    tf = span[1]
            if not tn < tf:
                continue
            is_leaf = bool(leaf >> i & 1)
            value = words[ref] if is_leaf else ref
            clower = (lower[0] + (i & 1) * half, lower[1] + (i >> 1 & 1) * half, lower[2] + (i >> 2 & 1) * half)
            out.append((tn, i, tf, ax, is_leaf, value, clower))
        out.sort(key=lambda e: (e[0], e[1]))
        return out

    def _leaf(self, idx: int, entry: tuple) -> Hit | None:
        tn, _, tf, ax, _, value, clower = entry
        if idx == self.last and self.trace is not None:
            self.trace.tested.append((clower, tn))
        if value == EMPTY:
            return None
        return self.child(idx, value, clower, tn, tf, ax)

    def sv_stack(
        self, idx: int, root: int, lower: tuple[int, int, int], t0: float, t1: float, axis: int
    ) -> Hit | None:
        depth = self.plan.levels[idx].params[0]
        side = self.plan.cumulative[idx] << depth
        frames = [self.ordered_children(idx, root, lower, side, t0, t1, axis)[::-1]]
        while frames:
            frame = frames[-1]
            if not frame:
                frames.pop()
                continue
            entry = frame.pop()
            if entry[4]:
                hit = self._leaf(idx, entry)
                if hit is not None:
                    return hit
                continue
            if len(frames) >= depth:
                raise TraversalError(f"sparse traversal deeper than {depth} levels at offset {entry[5]}")
            tn, _, tf, ax, _, node, clower = entry
            cside = side >> len(frames)
            frames.append(self.ordered_children(idx, node, clower, cside, tn, tf, ax)[::-1])
        return None

    def sv_restart(
        self, idx: int, root: int, lower: tuple[int, int, int], t0: float, t1: float, axis: int
    ) -> Hit | None:
        depth = self.plan.levels[idx].params[0]
        side = self.plan.cumulative[idx] << depth
        t_cur = t0
        while t_cur < t1:
            node, nlower, nside, nt0, nt1, nax = root, lower, side, t0, t1, axis
            t_next = nt1
            for node_depth in range(depth + 1):
                if node_depth == depth:
                    raise TraversalError(f"sparse traversal deeper than {depth} levels at offset {node}")
                entry = next(
                    (e for e in self.ordered_children(idx, node, nlower, nside, nt0, nt1, nax) if e[2] > t_cur),
                    None,
                )
                if entry is None:
                    t_next = nt1
                    break
                if entry[4]:
                    hit = self._leaf(idx, entry)
                    if hit is not None:
                        return hit
                    t_next = entry[2]
                    break
                nt0, _, nt1, nax, _, node, nlower = entry
                nside >>= 1
            if t_next <= t_cur:
                t_next = t_cur + RESTART_EPSILON
            t_cur = t_next
        return None

    # root ----------------------------------------------------------------

    def run(self, ray: Ray) -> Hit | None:
        root = self.words[0]
        if root == EMPTY:
            return None
        t0, t1, axis = _box_interval(ray, (0.0, 0.0, 0.0), self.plan.resolution)
        if not t0 < t1:
            return None
        return self.enter(0, root, (0, 0, 0), t0, t1, axis)


class Tracer:
    """Reusable ray tracer over one immutable volume.

    Words are read from the buffer's shared list, built once per buffer
    state, so repeated tracers and ``intersect_root`` calls do not copy it.
    ``intersect`` keeps all per-ray state local; one tracer can serve many
    threads.
    """

    def __init__(self, buffer: VolumeBuffer, plan: FormatPlan, options: TraceOptions | None = None) -> None:
        self.words: list[int] = buffer.shared_list()
        self.plan = plan
        self.options = options or TraceOptions()

    def intersect(self, ray: Ray, trace: TraversalTrace | None = None) -> Hit | None:
        """First non-empty voxel along ``ray``, or None."""
        return _Walk(self, ray, trace).run(ray)

    def dda_level(
        self,
        level_index: int,
        base: int,
        ray: Ray,
        lower: Sequence[int] = (0, 0, 0),
        trace: TraversalTrace | None = None,
    ) -> Hit | None:
        """Grid walk of the Raw/DF sub-volume at ``base`` whose corner is ``lower``."""
        return self._sub_volume(level_index, base, ray, lower, trace, sparse=False)

    def traverse_sv(
        self,
        level_index: int,
        root: int,
        ray: Ray,
        lower: Sequence[int] = (0, 0, 0),
        trace: TraversalTrace | None = None,
    ) -> Hit | None:
        """Ordered traversal of the SVO/SVDAG sub-volume rooted at ``root``."""
        return self._sub_volume(level_index, root, ray, lower, trace, sparse=True)

    def _sub_volume(
        self,
        level_index: int,
        pointer: int,
        ray: Ray,
        lower: Sequence[int],
        trace: TraversalTrace | None,
        *,
        sparse: bool,
    ) -> Hit | None:
        level = self.plan.levels[level_index]
        if sparse == isinstance(level, (RawLevel, DFLevel)):
            raise ValueError(f"level {level_index + 1} is {level.kind}, not a {'sparse' if sparse else 'grid'} level")
        origin = (int(lower[0]), int(lower[1]), int(lower[2]))
        span = self.plan.span(level_index)
        t0, t1, axis = _box_interval(ray, origin, tuple(origin[k] + span[k] for k in range(3)))
        if not t0 < t1 or pointer == EMPTY:
            return None
        return _Walk(self, ray, trace).enter(level_index, pointer, origin, t0, t1, axis)


def intersect_root(
    buffer: VolumeBuffer,
    plan: FormatPlan,
    ray: Ray,
    options: TraceOptions | None = None,
    trace: TraversalTrace | None = None,
) -> Hit | None:
    """First-hit query for a single ray; use :class:`Tracer` for many rays."""
    return Tracer(buffer, plan, options).intersect(ray, trace)


def dda_level(
    buffer: VolumeBuffer,
    plan: FormatPlan,
    level_index: int,
    base: int,
    ray: Ray,
    lower: Sequence[int] = (0, 0, 0),
) -> Hit | None:
    return Tracer(buffer, plan).dda_level(level_index, base, ray, lower)


def traverse_sv(
    buffer: VolumeBuffer,
    plan: FormatPlan,
    level_index: int,
    root: int,
    ray: Ray,
    lower: Sequence[int] = (0, 0, 0),
    options: TraceOptions | None = None,
) -> Hit | None:
    return Tracer(buffer, plan, options).traverse_sv(level_index, root, ray, lower)


def point_query(buffer: VolumeBuffer, plan: FormatPlan, x: int, y: int, z: int) -> int:
    """Voxel word stored at ``(x, y, z)`` (0 if empty), by structural descent.

    Raises:
        CoordinateRangeError: outside the plan's resolution.
    """
    rx, ry, rz = plan.resolution
    if not (0 <= x < rx and 0 <= y < ry and 0 <= z < rz):
        raise CoordinateRangeError((x, y, z), plan.resolution)
    term = buffer[0]
    for idx, level in enumerate(plan.levels):
        if term == EMPTY:
            return EMPTY
        base = term
        c = plan.cumulative[idx]
        if idx == 0:
            lx, ly, lz = x // c, y // c, z // c
        else:
            outer = plan.cumulative[idx - 1]
            lx, ly, lz = (x % outer) // c, (y % outer) // c, (z % outer) // c
        if isinstance(level, (RawLevel, DFLevel)):
            w, h, _ = plan.extents[idx]
            index = lx + w * (ly + h * lz)
            term = buffer[base + 2 * index] if isinstance(level, DFLevel) else buffer[base + index]
            continue
        dag = isinstance(level, SVDAGLevel)
        node = base
        depth = level.l
        for level_depth in range(depth):
            bit = depth - 1 - level_depth
            child = (lx >> bit & 1) | (ly >> bit & 1) << 1 | (lz >> bit & 1) << 2
            masks = buffer[node] if dag else buffer[node + 1]
            if not masks >> child & 1:
                return EMPTY
            rank = (masks & 0xFF & ((1 << child) - 1)).bit_count()
            ref = buffer[node + 1 + rank] if dag else buffer[node] + 2 * rank
            if masks >> (8 + child) & 1:
                term = buffer[ref]
                break
            node = ref
        else:
            raise TraversalError(f"no leaf reached after {depth} levels in {level.kind} sub-volume {base}")
    return term
