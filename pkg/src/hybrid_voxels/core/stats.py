# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Structural statistics of a constructed volume.

Walks the buffer from the root pointer and counts, per level, the distinct
sub-volumes reachable and the distinct sparse nodes they use. Shared nodes
(SVDAG deduplication, whole-level sharing) are counted once.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from hybrid_voxels.core.buffer import EMPTY, VolumeBuffer
from hybrid_voxels.core.format import DFLevel, FormatPlan, RawLevel, SVDAGLevel

__all__ = ["LevelStats", "VolumeStats", "volume_stats"]


@dataclass(frozen=True, slots=True)
class LevelStats:
    index: int
    kind: str
    subvolumes: int
    internal_nodes: int
    leaf_nodes: int
    words: int


@dataclass(frozen=True, slots=True)
class VolumeStats:
    signature: str
    resolution: tuple[int, int, int]
    total_words: int
    levels: tuple[LevelStats, ...]

    def as_dict(self) -> dict:
        return asdict(self)


def volume_stats(buffer: VolumeBuffer, plan: FormatPlan) -> VolumeStats:
    """Per-level counts of distinct sub-volumes, nodes and words."""
    words = buffer.shared_list()
    pointers: set[int] = {words[0]} - {EMPTY}
    levels: list[LevelStats] = []

    for idx, level in enumerate(plan.levels):
        next_pointers: set[int] = set()
        internal = 0
        leaves = 0
        used = 0
        if isinstance(level, (RawLevel, DFLevel)):
            w, h, d = plan.extents[idx]
            count = w * h * d
            stride = 2 if isinstance(level, DFLevel) else 1
            for base in pointers:
                used += stride * count
                next_pointers.update(words[base + stride * i] for i in range(count))
        else:
            dag = isinstance(level, SVDAGLevel)
            seen: set[int] = set()
            seen_leaves: set[int] = set()
            pending = list(pointers)
            while pending:
                node = pending.pop()
                if node in seen:
                    continue
                seen.add(node)
                masks = words[node] if dag else words[node + 1]
                valid = masks & 0xFF
                leaf = (masks >> 8) & 0xFF
                used += 1 + valid.bit_count() if dag else 2
                rank = 0
                for i in range(8):
                    if not valid >> i & 1:
                        continue
                    ref = words[node + 1 + rank] if dag else words[node] + 2 * rank
                    rank += 1
                    if leaf >> i & 1:
                        if ref not in seen_leaves:
                            seen_leaves.add(ref)
                            used += 1 if dag else 2
                            next_pointers.add(words[ref])
                    else:
                        pending.append(ref)
            internal = len(seen)
            leaves = len(seen_leaves)
        levels.append(
            LevelStats(
                index=idx + 1,
                kind=level.kind,
                subvolumes=len(pointers),
                internal_nodes=internal,
                leaf_nodes=leaves,
                words=used,
            )
        )
        pointers = next_pointers - {EMPTY}

    return VolumeStats(
        signature=plan.signature,
        resolution=plan.resolution,
        total_words=len(buffer),
        levels=tuple(levels),
    )
