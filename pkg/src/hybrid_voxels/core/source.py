# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Morton-ordered voxel sources.

Construction never sees a dense grid: it asks a :class:`VoxelSource` for single
voxels (``sample``) and, as a short-cut, for the state of aligned cubic blocks
(``block_state``). Both requests obey one access contract: their Morton codes
never decrease. A block answered EMPTY or UNIFORM is consumed whole (the cursor
moves to its last voxel); a MIXED block consumes nothing and the caller goes on
to its children.

The mesh voxelizer lives in :mod:`hybrid_voxels.voxelizer.chunked`; the
in-memory sources here serve tests and procedural volumes.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from hybrid_voxels.core.buffer import EMPTY
from hybrid_voxels.core.morton import encode3
from hybrid_voxels.exceptions import CoordinateRangeError, MortonOrderError

__all__ = [
    "BlockKind",
    "BlockState",
    "BLOCK_EMPTY",
    "BLOCK_MIXED",
    "classify_block",
    "VoxelSource",
    "DenseGridSource",
    "UniformSource",
    "sample_voxel",
]


class BlockKind(Enum):
    EMPTY = "empty"
    UNIFORM = "uniform"
    MIXED = "mixed"


@dataclass(frozen=True, slots=True)
class BlockState:
    """Answer to a block query; ``color`` is meaningful for UNIFORM only."""

    kind: BlockKind
    color: int = EMPTY


BLOCK_EMPTY = BlockState(BlockKind.EMPTY)
BLOCK_MIXED = BlockState(BlockKind.MIXED)


def classify_block(region: np.ndarray) -> BlockState:
    """EMPTY, UNIFORM or MIXED state of a dense voxel region."""
    if not region.any():
        return BLOCK_EMPTY
    first = region.flat[0]
    if first != EMPTY and bool((region == first).all()):
        return BlockState(BlockKind.UNIFORM, int(first))
    return BLOCK_MIXED


class VoxelSource:
    """Base class enforcing the Morton access contract.

    Subclasses implement ``_sample`` and may override ``_block_state`` (the
    default answers MIXED, which is always correct).
    """

    def __init__(self, resolution: Sequence[int]) -> None:
        self.resolution: tuple[int, int, int] = (
            int(resolution[0]),
            int(resolution[1]),
            int(resolution[2]),
        )
        self.last_code = 0
        self.samples = 0
        self.block_answers = 0

    def rewind(self) -> None:
        """Start a new sweep from Morton code 0."""
        self.last_code = 0

    @property
    def resident_bytes(self) -> int:
        """Bytes of voxel payload currently held by the source."""
        return 0

    def _check(self, lower: Sequence[int], size: int) -> int:
        x, y, z = lower
        rx, ry, rz = self.resolution
        if not (0 <= x and 0 <= y and 0 <= z and x + size <= rx and y + size <= ry and z + size <= rz):
            raise CoordinateRangeError((x, y, z), self.resolution)
        code = encode3(x, y, z)
        if code < self.last_code:
            raise MortonOrderError(code, self.last_code)
        return code

    def sample(self, x: int, y: int, z: int) -> int:
        """Voxel word at ``(x, y, z)``; 0 means empty.

        Raises:
            CoordinateRangeError: outside the source resolution.
            MortonOrderError: Morton code below the last one served.
        """
        self.last_code = self._check((x, y, z), 1)
        self.samples += 1
        return self._sample(x, y, z)

    def block_state(self, lower: Sequence[int], size: int) -> BlockState:
        """State of the aligned ``size``-cube at ``lower``.

        EMPTY and UNIFORM answers consume the block; MIXED does not.
        """
        code = self._check(lower, size)
        state = self._block_state((int(lower[0]), int(lower[1]), int(lower[2])), size)
        if state.kind is not BlockKind.MIXED:
            self.last_code = code + size**3 - 1
            self.block_answers += 1
        return state

    def _sample(self, x: int, y: int, z: int) -> int:
        raise NotImplementedError

    def _block_state(self, lower: tuple[int, int, int], size: int) -> BlockState:
        return BLOCK_MIXED


class DenseGridSource(VoxelSource):
    """In-memory grid ``uint32[z, y, x]``; the whole grid counts as resident."""

    def __init__(self, grid: np.ndarray, *, block_queries: bool = True) -> None:
        array = np.ascontiguousarray(grid, dtype=np.uint32)
        if array.ndim != 3:
            raise ValueError(f"grid must be 3-dimensional, got shape {array.shape}")
        super().__init__(array.shape[::-1])
        self.grid = array
        self.block_queries = block_queries

    @property
    def resident_bytes(self) -> int:
        return int(self.grid.nbytes)

    def _sample(self, x: int, y: int, z: int) -> int:
        return int(self.grid[z, y, x])

    def _block_state(self, lower: tuple[int, int, int], size: int) -> BlockState:
        if not self.block_queries:
            return BLOCK_MIXED
        x, y, z = lower
        return classify_block(self.grid[z : z + size, y : y + size, x : x + size])


class UniformSource(VoxelSource):
    """Every voxel has the same colour (0 gives an empty volume)."""

    def __init__(self, resolution: Sequence[int], color: int) -> None:
        super().__init__(resolution)
        self.color = int(color) & 0xFFFFFFFF

    def _sample(self, x: int, y: int, z: int) -> int:
        return self.color

    def _block_state(self, lower: tuple[int, int, int], size: int) -> BlockState:
        if self.color == EMPTY:
            return BLOCK_EMPTY
        return BlockState(BlockKind.UNIFORM, self.color)


def sample_voxel(source: VoxelSource, x: int, y: int, z: int) -> int:
    """Module-level form of :meth:`VoxelSource.sample`."""
    return source.sample(x, y, z)
