# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Bottom-up, out-of-core construction of hybrid volumes.

One builder per level maps the lower indices (finest-voxel coordinates) of a
sub-volume to its serialized form. A builder asks the next level's builder for
each of its children, writes every non-empty child to the buffer and keeps the
child's offset as a terminating integer; the last level asks the voxel source
directly. Children are always written before their parent, and the root
pointer in word 0 is patched last.

Per level:

- Raw: children visited in Morton order, offsets stored x-fastest.
- DF: as Raw, then an L1 distance transform of the child occupancy; words
  interleaved ``[term, dist]``.
- SVO: a recursive Morton walk where every node frame collects its eight child
  items (one 8-slot queue per depth). When a frame is complete its non-empty
  children are written contiguously and the parent keeps ``(first, masks)``.
  Leaf children are written as ``[term, 0]`` pairs. The sub-volume's root node
  is returned to the caller unwritten.
- SVDAG: the same walk, but every completed node is interned through a
  deduplication map (node words -> offset). Leaves are one word, internal nodes
  are the masks word followed by child pointers. The map lives for one
  sub-volume, or for the whole level with ``whole_level_dedup``.

Block short-cuts: before descending into an aligned child block larger than one
voxel, builders ask the source for the block state. EMPTY blocks are skipped;
UNIFORM blocks are built without touching the source, and an SVDAG last level
memoises uniform subtrees by ``(depth, colour)`` in the scope of its dedup map.
The output is bit-identical to a sweep without short-cuts.

Example::

    plan = compile_plan(parse_format("R(2, 2, 2) G(4)"))
    buffer = construct_volume(plan, DenseGridSource(grid), BuildOptions(whole_level_dedup=True))
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from hybrid_voxels.core.buffer import EMPTY, MAX_WORDS, SVMasks, VolumeBuffer
from hybrid_voxels.core.format import DFLevel, FormatPlan, RawLevel, SVDAGLevel, SVOLevel
from hybrid_voxels.core.morton import morton_children
from hybrid_voxels.core.source import BlockKind, VoxelSource
from hybrid_voxels.exceptions import ResolutionMismatchError

__all__ = [
    "BuildOptions",
    "MemoryMeter",
    "SubVolume",
    "LevelBuilder",
    "RawLevelBuilder",
    "DFLevelBuilder",
    "SVOLevelBuilder",
    "SVDAGLevelBuilder",
    "l1_distance_transform",
    "construct_volume",
]

logger = logging.getLogger("hybrid_voxels.construct")

_OCTANTS = tuple((i & 1, (i >> 1) & 1, i >> 2) for i in range(8))


class BuildOptions(BaseModel):
    """Construction switches.

    Attributes:
        whole_level_dedup: Share one SVDAG dedup map across all sub-volumes of a level.
        chunk_exp: Voxelizer chunk side is ``2 ** chunk_exp``.
        block_queries: Let the voxelizer answer empty/uniform block queries.
    """

    model_config = ConfigDict(frozen=True)

    whole_level_dedup: bool = False
    chunk_exp: int = Field(default=6, ge=0, le=10)
    block_queries: bool = True


class MemoryMeter:
    """Accounting of construction working memory, by category, with peaks.

    Categories used by construction: ``chunk`` (voxel payload held by the
    source), ``dedup`` (SVDAG map entries) and ``levels`` (Raw/DF flat arrays
    and distance-transform scratch).
    """

    def __init__(self) -> None:
        self.current: Counter[str] = Counter()
        self.peaks: Counter[str] = Counter()
        self.peak_total = 0

    @property
    def total(self) -> int:
        return sum(self.current.values())

    def set(self, category: str, nbytes: int) -> None:
        self.current[category] = nbytes
        self.peaks[category] = max(self.peaks[category], nbytes)
        self.peak_total = max(self.peak_total, self.total)

    def add(self, category: str, delta: int) -> None:
        self.set(category, self.current[category] + delta)


@dataclass(slots=True)
class SubVolume:
    """Result of building one sub-volume.

    ``words`` holds the unwritten sub-volume (Raw/DF grid, SVO root node);
    SVDAG roots are interned while building, so only ``pointer`` is set.
    """

    is_empty: bool
    words: list[int] | np.ndarray | None = None
    pointer: int = EMPTY


@dataclass(slots=True)
class _BuildContext:
    plan: FormatPlan
    source: VoxelSource
    buffer: VolumeBuffer
    options: BuildOptions
    meter: MemoryMeter


def l1_distance_transform(occupancy: np.ndarray, m: int) -> np.ndarray:
    """Per-cell L1 distance to the nearest occupied cell, clamped to ``m``.

    Multi-source breadth-first search over the 6-neighbourhood (exact for L1),
    run level-synchronously on whole arrays. An all-empty grid is ``m``
    everywhere.
    """
    occ = np.asarray(occupancy, dtype=bool)
    dist = np.full(occ.shape, m, dtype=np.uint32)
    dist[occ] = 0
    reached = occ.copy()
    frontier = occ
    nd = occ.ndim
    for step in range(1, m):
        grown = np.zeros_like(occ)
        for axis in range(nd):
            head = [slice(None)] * nd
            tail = [slice(None)] * nd
            head[axis] = slice(1, None)
            tail[axis] = slice(None, -1)
            grown[tuple(head)] |= frontier[tuple(tail)]
            grown[tuple(tail)] |= frontier[tuple(head)]
        frontier = grown & ~reached
        if not frontier.any():
            break
        dist[frontier] = step
        reached |= frontier
    return dist


class LevelBuilder:
    """Builds the sub-volumes of one level; ``next`` builds the level below."""

    def __init__(self, ctx: _BuildContext, index: int, next_builder: LevelBuilder | None) -> None:
        self.ctx = ctx
        self.index = index
        self.level = ctx.plan.levels[index]
        self.extent = ctx.plan.extents[index]
        self.child_size = ctx.plan.cumulative[index]
        self.next = next_builder
        self.subvolumes = 0

    def construct(self, lower: Sequence[int], uniform: int | None = None) -> SubVolume:
        raise NotImplementedError

    def emit(self, sub: SubVolume) -> int:
        """Write ``sub`` if needed and return its terminating integer."""
        if sub.is_empty:
            return EMPTY
        if sub.words is None:
            return sub.pointer
        return self.ctx.buffer.append(sub.words)

    def child_term(self, lower: Sequence[int], uniform: int | None) -> int:
        """Terminating integer of the child whose block starts at ``lower``."""
        if self.next is None:
            return uniform if uniform is not None else self.ctx.source.sample(*lower)
        if uniform is None:
            state = self.ctx.source.block_state(lower, self.child_size)
            if state.kind is BlockKind.EMPTY:
                return EMPTY
            if state.kind is BlockKind.UNIFORM:
                uniform = state.color
        return self.next.emit(self.next.construct(lower, uniform))


class RawLevelBuilder(LevelBuilder):
    """Flat grid of terminating integers."""

    def _terms(self, lower: Sequence[int], uniform: int | None) -> list[int]:
        w, h, d = self.extent
        count = w * h * d
        if uniform is not None and self.next is None:
            return [uniform] * count
        terms = [EMPTY] * count
        x0, y0, z0 = lower
        s = self.child_size
        for cx, cy, cz in morton_children(self.extent):
            terms[cx + w * (cy + h * cz)] = self.child_term((x0 + cx * s, y0 + cy * s, z0 + cz * s), uniform)
        return terms

    def construct(self, lower: Sequence[int], uniform: int | None = None) -> SubVolume:
        w, h, d = self.extent
        nbytes = 4 * w * h * d
        self.ctx.meter.add("levels", nbytes)
        try:
            terms = self._terms(lower, uniform)
        finally:
            self.ctx.meter.add("levels", -nbytes)
        self.subvolumes += 1
        if not any(terms):
            return SubVolume(is_empty=True)
        return SubVolume(is_empty=False, words=terms)


class DFLevelBuilder(RawLevelBuilder):
    """Raw grid plus clamped L1 distance, interleaved per voxel."""

    def construct(self, lower: Sequence[int], uniform: int | None = None) -> SubVolume:
        assert isinstance(self.level, DFLevel)
        w, h, d = self.extent
        count = w * h * d
        # terms, distances, and the boolean BFS scratch
        nbytes = 4 * count + 4 * count + 3 * count
        self.ctx.meter.add("levels", nbytes)
        try:
            terms = self._terms(lower, uniform)
            self.subvolumes += 1
            if not any(terms):
                return SubVolume(is_empty=True)
            grid = np.asarray(terms, dtype=np.uint32)
            dist = l1_distance_transform((grid != EMPTY).reshape(d, h, w), self.level.m)
            words = np.empty(2 * count, dtype=np.uint32)
            words[0::2] = grid
            words[1::2] = dist.reshape(-1)
        finally:
            self.ctx.meter.add("levels", -nbytes)
        return SubVolume(is_empty=False, words=words)


class _SparseLevelBuilder(LevelBuilder):
    """Shared Morton walk of the SVO and SVDAG builders."""

    def __init__(self, ctx: _BuildContext, index: int, next_builder: LevelBuilder | None) -> None:
        super().__init__(ctx, index, next_builder)
        assert isinstance(self.level, (SVOLevel, SVDAGLevel))
        self.depth = self.level.l

    def _side(self, depth: int) -> int:
        """Side in finest voxels of a node at ``depth`` (0 is the sub-volume root)."""
        return self.child_size << (self.depth - depth)

    def _octant(self, lower: tuple[int, int, int], depth: int, uniform: int | None) -> object:
        if depth == self.depth:
            term = self.child_term(lower, uniform)
            return term if term != EMPTY else None
        if uniform is None:
            state = self.ctx.source.block_state(lower, self._side(depth))
            if state.kind is BlockKind.EMPTY:
                return None
            if state.kind is BlockKind.UNIFORM:
                uniform = state.color
        return self._node(lower, depth, uniform)

    def _node(self, lower: tuple[int, int, int], depth: int, uniform: int | None) -> object:
        half = self._side(depth + 1)
        x, y, z = lower
        queue = [
            self._octant((x + ox * half, y + oy * half, z + oz * half), depth + 1, uniform)
            for ox, oy, oz in _OCTANTS
        ]
        return self._flush(queue, leaf_children=depth + 1 == self.depth)

    def _flush(self, queue: list, *, leaf_children: bool) -> object:
        raise NotImplementedError


class SVOLevelBuilder(_SparseLevelBuilder):
    """Sparse voxel octree; siblings are stored contiguously."""

    def _flush(self, queue: list, *, leaf_children: bool) -> list[int] | None:
        valid = 0
        words: list[int] = []
        for i, item in enumerate(queue):
            if item is None:
                continue
            valid |= 1 << i
            if leaf_children:
                words.append(item)
                words.append(0)
            else:
                words.extend(item)
        if not valid:
            return None
        first = self.ctx.buffer.append(words)
        return [first, SVMasks(valid=valid, leaf=valid if leaf_children else 0).pack()]

    def construct(self, lower: Sequence[int], uniform: int | None = None) -> SubVolume:
        root = self._node((lower[0], lower[1], lower[2]), 0, uniform)
        self.subvolumes += 1
        if root is None:
            return SubVolume(is_empty=True)
        return SubVolume(is_empty=False, words=root)  # type: ignore[arg-type]


class SVDAGLevelBuilder(_SparseLevelBuilder):
    """Sparse voxel DAG; nodes are hash-consed through ``dedup``."""

    def __init__(self, ctx: _BuildContext, index: int, next_builder: LevelBuilder | None) -> None:
        super().__init__(ctx, index, next_builder)
        self.dedup: dict[tuple[int, ...], int] = {}
        self.dedup_bytes = 0
        self.dedup_hits = 0
        # (depth, colour) -> node pointer, only valid when leaves are single voxels
        self.uniform_memo: dict[tuple[int, int], int] | None = {} if next_builder is None else None

    def _intern(self, words: list[int]) -> int:
        key = tuple(words)
        pointer = self.dedup.get(key)
        if pointer is not None:
            self.dedup_hits += 1
            return pointer
        pointer = self.ctx.buffer.append(words)
        self.dedup[key] = pointer
        entry = 4 * (len(key) + 1)
        self.dedup_bytes += entry
        self.ctx.meter.add("dedup", entry)
        return pointer

    def _node(self, lower: tuple[int, int, int], depth: int, uniform: int | None) -> object:
        if uniform is None or self.uniform_memo is None:
            return super()._node(lower, depth, uniform)
        key = (depth, uniform)
        pointer = self.uniform_memo.get(key)
        if pointer is None:
            pointer = super()._node(lower, depth, uniform)
            self.uniform_memo[key] = pointer  # type: ignore[assignment]
        return pointer

    def _flush(self, queue: list, *, leaf_children: bool) -> int | None:
        valid = 0
        pointers: list[int] = []
        for i, item in enumerate(queue):
            if item is None:
                continue
            valid |= 1 << i
            pointers.append(self._intern([item]) if leaf_children else item)
        if not valid:
            return None
        return self._intern([SVMasks(valid=valid, leaf=valid if leaf_children else 0).pack(), *pointers])

    def reset_scope(self) -> None:
        """Drop the dedup map and uniform memo (end of a per-sub-volume scope)."""
        self.ctx.meter.add("dedup", -self.dedup_bytes)
        self.dedup.clear()
        self.dedup_bytes = 0
        if self.uniform_memo is not None:
            self.uniform_memo.clear()

    def construct(self, lower: Sequence[int], uniform: int | None = None) -> SubVolume:
        try:
            root = self._node((lower[0], lower[1], lower[2]), 0, uniform)
        finally:
            if not self.ctx.options.whole_level_dedup:
                self.reset_scope()
        self.subvolumes += 1
        if root is None:
            return SubVolume(is_empty=True)
        return SubVolume(is_empty=False, pointer=root)  # type: ignore[arg-type]


_BUILDERS: dict[type, type[LevelBuilder]] = {
    RawLevel: RawLevelBuilder,
    DFLevel: DFLevelBuilder,
    SVOLevel: SVOLevelBuilder,
    SVDAGLevel: SVDAGLevelBuilder,
}


def construct_volume(
    plan: FormatPlan,
    source: VoxelSource,
    options: BuildOptions | None = None,
    *,
    meter: MemoryMeter | None = None,
    max_words: int = MAX_WORDS,
) -> VolumeBuffer:
    """Build the serialized volume of ``source`` in the format of ``plan``.

    Word 0 of the result is the root pointer, 0 iff the volume is empty.

    Raises:
        ResolutionMismatchError: plan and source resolutions differ.
        BufferOverflowError: the buffer would exceed ``max_words``.
        MortonOrderError: the source was accessed out of order (internal bug
            or a misbehaving source).
    """
    if tuple(plan.resolution) != tuple(source.resolution):
        raise ResolutionMismatchError(plan.resolution, source.resolution)
    options = options or BuildOptions()
    meter = meter or MemoryMeter()
    buffer = VolumeBuffer(max_words=max_words)
    buffer.append([EMPTY])
    source.rewind()
    meter.set("chunk", source.resident_bytes)

    ctx = _BuildContext(plan=plan, source=source, buffer=buffer, options=options, meter=meter)
    builder: LevelBuilder | None = None
    builders: list[LevelBuilder] = []
    for index in reversed(range(plan.depth)):
        builder = _BUILDERS[type(plan.levels[index])](ctx, index, builder)
        builders.append(builder)
    assert builder is not None

    logger.debug("constructing %s at %s", plan.signature, plan.resolution)
    root = builder.emit(builder.construct((0, 0, 0)))
    buffer[0] = root
    meter.set("chunk", source.resident_bytes)
    for b in reversed(builders):
        logger.debug(
            "level %d %s: %d sub-volumes", b.index + 1, b.level.kind, b.subvolumes
        )
    logger.debug("constructed %s: %d words, root %d", plan.signature, len(buffer), root)
    return buffer
