# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Out-of-core mesh voxelizer.

``ChunkedVoxelSource`` keeps a single cubic chunk of voxels resident,
voxelizing a chunk the first time a request lands in it and overwriting the
previous one. Requests follow the Morton contract of
:class:`~hybrid_voxels.core.source.VoxelSource`, and Morton order is
hierarchical over aligned power-of-two cubes, so once a sweep leaves a chunk it
never comes back: each touched chunk is voxelized exactly once.

Example::

    source = ChunkedVoxelSource(load_mesh("bunny.obj"), (256, 256, 256), chunk_exp=5)
    source.sample(0, 0, 0)
    source.voxelizations   # 1
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Sequence

import numpy as np

from hybrid_voxels.core.buffer import EMPTY
from hybrid_voxels.core.source import BLOCK_EMPTY, BLOCK_MIXED, BlockState, VoxelSource, classify_block
from hybrid_voxels.voxelizer.mesh import GridTransform, Mesh, fit_transform, voxel_color
from hybrid_voxels.voxelizer.overlap import triangle_boxes_overlap, triangles_box_overlap

__all__ = ["ChunkedVoxelSource"]

logger = logging.getLogger("hybrid_voxels.voxelizer")


class ChunkedVoxelSource(VoxelSource):
    """Lazy surface voxelizer with one resident chunk.

    A voxel is non-empty iff some triangle overlaps its closed cube; its colour
    is the one of the lowest-index overlapping triangle.

    Args:
        mesh: Triangles in model units.
        resolution: Grid size in finest voxels.
        transform: Model-to-grid mapping; defaults to :func:`fit_transform`.
        chunk_exp: Chunk side is ``2 ** chunk_exp`` voxels (clipped to the resolution).
        block_queries: Answer block queries; when False every block is MIXED
            and construction samples every voxel.

    Attributes:
        voxelizations: Number of chunk voxelizations performed.
        chunk_loads: Voxelizations per chunk origin.
        peak_resident_voxels: Largest voxel payload held at once, measured at
            each chunk load; 0 until the first load.
    """

    def __init__(
        self,
        mesh: Mesh,
        resolution: Sequence[int],
        *,
        transform: GridTransform | None = None,
        chunk_exp: int = 6,
        block_queries: bool = True,
    ) -> None:
        super().__init__(resolution)
        if transform is None:
            transform = GridTransform() if mesh.is_empty else fit_transform(mesh, self.resolution)
        self.mesh = mesh
        self.transform = transform
        self.chunk_extent = 1 << chunk_exp
        self.block_queries = block_queries

        corners = transform.apply(mesh.corners()) if not mesh.is_empty else np.zeros((0, 3, 3))
        self.triangles: np.ndarray = corners
        self._tri_min = corners.min(axis=1) if len(corners) else np.zeros((0, 3))
        self._tri_max = corners.max(axis=1) if len(corners) else np.zeros((0, 3))
        self._colors = np.asarray([voxel_color(int(c)) for c in mesh.colors], dtype=np.uint32)

        shape = tuple(min(self.chunk_extent, r) for r in self.resolution[::-1])
        self._scratch = np.zeros(shape, dtype=np.uint32)
        self._origin: tuple[int, int, int] | None = None

        self.voxelizations = 0
        self.chunk_loads: Counter[tuple[int, int, int]] = Counter()
        self.peak_resident_voxels = 0

    @property
    def resident_bytes(self) -> int:
        return int(self._scratch.nbytes)

    @property
    def chunk_shape(self) -> tuple[int, int, int]:
        """Chunk extent as ``(x, y, z)``."""
        z, y, x = self._scratch.shape
        return (x, y, z)

    def _chunk_origin(self, x: int, y: int, z: int) -> tuple[int, int, int]:
        cx, cy, cz = self.chunk_shape
        return (x - x % cx, y - y % cy, z - z % cz)

    def _candidates(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Indices of triangles whose AABB meets the closed box ``[lo, hi]``."""
        keep = np.all(self._tri_max >= lo, axis=1) & np.all(self._tri_min <= hi, axis=1)
        return np.nonzero(keep)[0]

    def _load(self, origin: tuple[int, int, int]) -> None:
        if origin == self._origin:
            return
        scratch = self._scratch
        scratch.fill(EMPTY)
        o = np.asarray(origin, dtype=np.int64)
        end = o + np.asarray(self.chunk_shape, dtype=np.int64)
        candidates = self._candidates(o.astype(np.float64), end.astype(np.float64))

        for t in candidates:
            lo = np.maximum(np.ceil(self._tri_min[t]).astype(np.int64) - 1, o)
            hi = np.minimum(np.floor(self._tri_max[t]).astype(np.int64), end - 1)
            if np.any(hi < lo):
                continue
            gz, gy, gx = np.meshgrid(
                np.arange(lo[2], hi[2] + 1),
                np.arange(lo[1], hi[1] + 1),
                np.arange(lo[0], hi[0] + 1),
                indexing="ij",
            )
            centers = np.stack([gx, gy, gz], axis=-1).reshape(-1, 3) + 0.5
            mask = triangle_boxes_overlap(self.triangles[t], centers, 0.5).reshape(gz.shape)
            region = scratch[
                lo[2] - o[2] : hi[2] - o[2] + 1,
                lo[1] - o[1] : hi[1] - o[1] + 1,
                lo[0] - o[0] : hi[0] - o[0] + 1,
            ]
            region[mask & (region == EMPTY)] = self._colors[t]

        covered = np.minimum(end, np.asarray(self.resolution, dtype=np.int64)) - o
        self.peak_resident_voxels = max(self.peak_resident_voxels, int(np.prod(covered)))
        self._origin = origin
        self.voxelizations += 1
        self.chunk_loads[origin] += 1
        logger.debug("voxelized chunk %s (%d candidate triangles)", origin, len(candidates))

    def _sample(self, x: int, y: int, z: int) -> int:
        origin = self._chunk_origin(x, y, z)
        self._load(origin)
        ox, oy, oz = origin
        return int(self._scratch[z - oz, y - oy, x - ox])

    def _block_state(self, lower: tuple[int, int, int], size: int) -> BlockState:
        if not self.block_queries:
            return BLOCK_MIXED
        lo = np.asarray(lower, dtype=np.float64)
        candidates = self._candidates(lo, lo + size)
        if len(candidates) == 0:
            return BLOCK_EMPTY
        if size > min(self.chunk_shape):
            center = lo + size / 2.0
            if triangles_box_overlap(self.triangles[candidates], center, size / 2.0).any():
                return BLOCK_MIXED
            return BLOCK_EMPTY
        origin = self._chunk_origin(*lower)
        self._load(origin)
        x, y, z = (lower[k] - origin[k] for k in range(3))
        return classify_block(self._scratch[z : z + size, y : y + size, x : x + size])
