# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Procedural benchmark scenes.

``sparse`` is a handful of coloured icospheres floating over a thin slab,
mostly empty space with a lot of surface. ``uniform`` fills the whole volume
with one colour, the best case for SVDAG deduplication.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import trimesh

from hybrid_voxels.core.buffer import pack_rgba
from hybrid_voxels.core.source import UniformSource, VoxelSource
from hybrid_voxels.voxelizer.chunked import ChunkedVoxelSource
from hybrid_voxels.voxelizer.mesh import Mesh

__all__ = [
    "SCENES",
    "mesh_from_trimesh",
    "combine_meshes",
    "sparse_scene",
    "uniform_scene",
    "scene_source",
]

SCENES = ("sparse", "uniform")

_SPHERES = (
    # centre, radius, colour
    ((0.30, 0.55, 0.30), 0.18, pack_rgba(220, 60, 50)),
    ((0.70, 0.60, 0.35), 0.14, pack_rgba(60, 180, 75)),
    ((0.45, 0.50, 0.72), 0.20, pack_rgba(50, 90, 220)),
    ((0.78, 0.30, 0.78), 0.10, pack_rgba(240, 200, 40)),
)


def mesh_from_trimesh(mesh: trimesh.Trimesh, color: int) -> Mesh:
    """Single-colour :class:`Mesh` from a trimesh object."""
    return Mesh.from_arrays(np.asarray(mesh.vertices), np.asarray(mesh.faces), color)


def combine_meshes(meshes: Sequence[Mesh]) -> Mesh:
    """Concatenate meshes, keeping per-triangle colours and triangle order."""
    if not meshes:
        return Mesh.empty()
    offsets = np.cumsum([0] + [len(m.vertices) for m in meshes[:-1]])
    return Mesh(
        np.concatenate([m.vertices for m in meshes]),
        np.concatenate([m.triangles + off for m, off in zip(meshes, offsets, strict=True)]),
        np.concatenate([m.colors for m in meshes]),
    )


def sparse_scene(subdivisions: int = 3) -> Mesh:
    """Icospheres over a slab, in the unit cube."""
    parts: list[Mesh] = []
    for center, radius, color in _SPHERES:
        sphere = trimesh.creation.icosphere(subdivisions=subdivisions, radius=radius)
        sphere.apply_translation(center)
        parts.append(mesh_from_trimesh(sphere, color))
    slab = trimesh.creation.box(extents=(1.0, 0.04, 1.0))
    slab.apply_translation((0.5, 0.02, 0.5))
    parts.append(mesh_from_trimesh(slab, pack_rgba(200, 200, 200)))
    return combine_meshes(parts)


def uniform_scene(resolution: Sequence[int], color: int = pack_rgba(255, 255, 255)) -> UniformSource:
    """Every voxel set to ``color``."""
    return UniformSource(resolution, color)


def scene_source(
    kind: str,
    resolution: Sequence[int],
    *,
    chunk_exp: int = 6,
    block_queries: bool = True,
    color: int = pack_rgba(255, 255, 255),
) -> VoxelSource:
    """Voxel source for a named procedural scene."""
    if kind == "sparse":
        return ChunkedVoxelSource(
            sparse_scene(), resolution, chunk_exp=chunk_exp, block_queries=block_queries
        )
    if kind == "uniform":
        return uniform_scene(resolution, color)
    raise ValueError(f"unknown scene '{kind}', expected one of {', '.join(SCENES)}")
