"""Mesh voxelization: OBJ loading, grid fitting, triangle/box overlap and the
chunked out-of-core voxel source."""

from .chunked import ChunkedVoxelSource
from .mesh import DEFAULT_COLOR, GridTransform, Mesh, fit_transform, load_mesh, voxel_color
from .overlap import triangle_box_overlap, triangle_boxes_overlap, triangles_box_overlap

__all__ = [
    "ChunkedVoxelSource",
    "DEFAULT_COLOR",
    "GridTransform",
    "Mesh",
    "fit_transform",
    "load_mesh",
    "voxel_color",
    "triangle_box_overlap",
    "triangle_boxes_overlap",
    "triangles_box_overlap",
]
