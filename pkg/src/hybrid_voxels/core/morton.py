# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Morton (Z-order) codes and hierarchical child enumeration.

Bits are interleaved with x in the least-significant position of every 3-bit
group, then y, then z. Octree child indices use the same convention (bit 0 = x,
bit 1 = y, bit 2 = z), so Morton order and octree child order coincide and a
bottom-up octree build can consume voxels in the order they are served.

Morton order is hierarchical over power-of-two blocks: every voxel of an
aligned ``s^3`` block is emitted before any voxel of the next block. All voxel
source accesses during construction follow this order.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import lru_cache
from itertools import product

from hybrid_voxels.exceptions import CoordinateRangeError

__all__ = [
    "MORTON_AXIS_LIMIT",
    "encode3",
    "decode3",
    "encode2",
    "decode2",
    "morton_children",
]

MORTON_AXIS_LIMIT = 1 << 20


def _part1by2(n: int) -> int:
    n &= 0x1FFFFF
    n = (n | (n << 32)) & 0x1F00000000FFFF
    n = (n | (n << 16)) & 0x1F0000FF0000FF
    n = (n | (n << 8)) & 0x100F00F00F00F00F
    n = (n | (n << 4)) & 0x10C30C30C30C30C3
    n = (n | (n << 2)) & 0x1249249249249249
    return n


def _compact1by2(n: int) -> int:
    n &= 0x1249249249249249
    n = (n ^ (n >> 2)) & 0x10C30C30C30C30C3
    n = (n ^ (n >> 4)) & 0x100F00F00F00F00F
    n = (n ^ (n >> 8)) & 0x1F0000FF0000FF
    n = (n ^ (n >> 16)) & 0x1F00000000FFFF
    n = (n ^ (n >> 32)) & 0x1FFFFF
    return n


def _part1by1(n: int) -> int:
    n &= 0xFFFFFFFF
    n = (n | (n << 16)) & 0x0000FFFF0000FFFF
    n = (n | (n << 8)) & 0x00FF00FF00FF00FF
    n = (n | (n << 4)) & 0x0F0F0F0F0F0F0F0F
    n = (n | (n << 2)) & 0x3333333333333333
    n = (n | (n << 1)) & 0x5555555555555555
    return n


def _compact1by1(n: int) -> int:
    n &= 0x5555555555555555
    n = (n ^ (n >> 1)) & 0x3333333333333333
    n = (n ^ (n >> 2)) & 0x0F0F0F0F0F0F0F0F
    n = (n ^ (n >> 4)) & 0x00FF00FF00FF00FF
    n = (n ^ (n >> 8)) & 0x0000FFFF0000FFFF
    n = (n ^ (n >> 16)) & 0x00000000FFFFFFFF
    return n


def encode3(x: int, y: int, z: int) -> int:
    """Interleave three coordinates below 2^20 into one Morton code.

    Raises:
        CoordinateRangeError: if any coordinate is negative or >= 2^20.
    """
    if not (0 <= x < MORTON_AXIS_LIMIT and 0 <= y < MORTON_AXIS_LIMIT and 0 <= z < MORTON_AXIS_LIMIT):
        raise CoordinateRangeError((x, y, z), (MORTON_AXIS_LIMIT,) * 3)
    return _part1by2(x) | (_part1by2(y) << 1) | (_part1by2(z) << 2)


def decode3(code: int) -> tuple[int, int, int]:
    """Inverse of :func:`encode3`."""
    return (_compact1by2(code), _compact1by2(code >> 1), _compact1by2(code >> 2))


def encode2(x: int, y: int) -> int:
    """Two-dimensional analogue of :func:`encode3` (x in the low bit)."""
    if not (0 <= x < MORTON_AXIS_LIMIT and 0 <= y < MORTON_AXIS_LIMIT):
        raise CoordinateRangeError((x, y), (MORTON_AXIS_LIMIT,) * 2)
    return _part1by1(x) | (_part1by1(y) << 1)


def decode2(code: int) -> tuple[int, int]:
    """Inverse of :func:`encode2`."""
    return (_compact1by1(code), _compact1by1(code >> 1))


def morton_children(extent: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Every coordinate of a power-of-two box, in (padded) Morton order.

    The order is that of the enclosing power-of-two cube with out-of-range
    coordinates left out, so a non-cubic first level keeps the locality of the
    cubic case. Only in-range coordinates are generated; cost follows the cell
    count, not the padded cube. Works for 2D and 3D extents. Results are cached
    per extent.
    """
    return _morton_children(tuple(int(e) for e in extent))


@lru_cache(maxsize=32)
def _morton_children(extent: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    if len(extent) not in (2, 3):
        raise ValueError(f"morton_children supports 2D and 3D extents, got {extent}")
    for e in extent:
        if e < 1 or e & (e - 1):
            raise ValueError(f"extent {extent} is not a power of two per axis")
    encode = encode3 if len(extent) == 3 else encode2
    cells = product(*(range(e) for e in extent))
    return tuple(sorted(cells, key=lambda coord: encode(*coord)))
