# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Triangle/box overlap by the separating axis theorem.

Thirteen candidate axes are tested: the three box normals, the triangle
normal and the nine cross products of a box normal with a triangle edge.
Boxes are closed, so touching counts as overlap. Degenerate triangles need no
special case: zero-length axes can never separate, and the remaining axes are
exactly those of the segment/point versus box test.

The vectorised core works on rows of triangles already expressed relative to
box centres, which serves both directions used by the voxelizer: one triangle
against many voxel boxes, and many triangles against one block box.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

__all__ = ["triangle_box_overlap", "triangle_boxes_overlap", "triangles_box_overlap"]


def _separated(p0: np.ndarray, p1: np.ndarray, p2: np.ndarray, r: np.ndarray) -> np.ndarray:
    lo = np.minimum(np.minimum(p0, p1), p2)
    hi = np.maximum(np.maximum(p0, p1), p2)
    return (lo > r) | (hi < -r)


def _sat(v0: np.ndarray, v1: np.ndarray, v2: np.ndarray, half: np.ndarray) -> np.ndarray:
    """Row-wise overlap of triangles ``(v0, v1, v2)`` with boxes centred at the origin."""
    separated = np.zeros(v0.shape[0], dtype=bool)

    for k in range(3):
        separated |= _separated(v0[:, k], v1[:, k], v2[:, k], half[..., k])

    e0 = v1 - v0
    e1 = v2 - v1
    e2 = v0 - v2

    normal = np.cross(e0, e1)
    r = (np.abs(normal) * half).sum(axis=-1)
    separated |= _separated(
        (v0 * normal).sum(axis=-1), (v1 * normal).sum(axis=-1), (v2 * normal).sum(axis=-1), r
    )

    zero = np.zeros(v0.shape[0])
    for edge in (e0, e1, e2):
        ex, ey, ez = edge[:, 0], edge[:, 1], edge[:, 2]
        for axis in (
            np.stack([zero, -ez, ey], axis=-1),
            np.stack([ez, zero, -ex], axis=-1),
            np.stack([-ey, ex, zero], axis=-1),
        ):
            r = (np.abs(axis) * half).sum(axis=-1)
            separated |= _separated(
                (v0 * axis).sum(axis=-1), (v1 * axis).sum(axis=-1), (v2 * axis).sum(axis=-1), r
            )
    return ~separated


def triangle_boxes_overlap(
    triangle: np.ndarray | Sequence[Sequence[float]],
    centers: np.ndarray,
    half: float | Sequence[float],
) -> np.ndarray:
    """Overlap of one triangle with ``len(centers)`` boxes of half-extent ``half``."""
    tri = np.asarray(triangle, dtype=np.float64).reshape(3, 3)
    c = np.asarray(centers, dtype=np.float64).reshape(-1, 3)
    h = np.broadcast_to(np.asarray(half, dtype=np.float64), (3,))
    return _sat(tri[0] - c, tri[1] - c, tri[2] - c, h)


def triangles_box_overlap(
    triangles: np.ndarray, center: Sequence[float], half: float | Sequence[float]
) -> np.ndarray:
    """Overlap of ``len(triangles)`` triangles with one box."""
    tris = np.asarray(triangles, dtype=np.float64).reshape(-1, 3, 3)
    c = np.asarray(center, dtype=np.float64).reshape(3)
    h = np.broadcast_to(np.asarray(half, dtype=np.float64), (3,))
    return _sat(tris[:, 0] - c, tris[:, 1] - c, tris[:, 2] - c, h)


def triangle_box_overlap(
    triangle: np.ndarray | Sequence[Sequence[float]],
    box_min: Sequence[float],
    box_max: Sequence[float],
) -> bool:
    """True iff the triangle intersects the closed box ``[box_min, box_max]``."""
    lo = np.asarray(box_min, dtype=np.float64)
    hi = np.asarray(box_max, dtype=np.float64)
    center = (lo + hi) / 2.0
    return bool(triangle_boxes_overlap(triangle, center[None, :], (hi - lo) / 2.0)[0])
