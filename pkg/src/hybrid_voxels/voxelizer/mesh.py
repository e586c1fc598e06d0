# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Triangle meshes, the OBJ subset reader and the model-to-grid fit.

Supported OBJ subset::

    v x y z [w]            vertex position (w ignored)
    f i j k ...            polygon, 1-based or negative (relative) indices,
                           ``i/t/n`` forms accepted; triangulated as a fan
    # color r g b [a]      colour for the faces that follow (0-255, a = 255)

Every other statement (``vt``, ``vn``, ``o``, ``g``, ``usemtl``, ...) and every
other comment is ignored. Files with another extension (PLY, STL, GLB, ...)
are read through trimesh and coloured with ``DEFAULT_COLOR``.

Example::

    mesh = load_mesh("bunny.obj")
    transform = fit_transform(mesh, (256, 256, 256))
    grid_vertices = transform.apply(mesh.vertices)
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import trimesh

from hybrid_voxels.core.buffer import EMPTY, pack_rgba
from hybrid_voxels.exceptions import MeshError

__all__ = ["Mesh", "GridTransform", "DEFAULT_COLOR", "MIN_ALPHA_VOXEL", "voxel_color", "load_mesh", "fit_transform"]

DEFAULT_COLOR = pack_rgba(255, 255, 255, 255)
MIN_ALPHA_VOXEL = 0x01000000


def voxel_color(word: int) -> int:
    """Colour stored for a voxel covered by a triangle of colour ``word``.

    The all-zero word is the empty sentinel, so a fully transparent black
    triangle is stored with the minimum alpha instead.
    """
    return MIN_ALPHA_VOXEL if word == EMPTY else word


@dataclass(frozen=True, slots=True)
class Mesh:
    """Immutable triangle soup with one RGBA word per triangle."""

    vertices: np.ndarray
    triangles: np.ndarray
    colors: np.ndarray

    def __post_init__(self) -> None:
        vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        colors = np.asarray(self.colors, dtype=np.uint32).reshape(-1)
        if len(colors) != len(triangles):
            raise MeshError(f"{len(colors)} colours for {len(triangles)} triangles")
        if len(triangles) and (triangles.min() < 0 or triangles.max() >= len(vertices)):
            raise MeshError("triangle vertex index out of range")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "triangles", triangles)
        object.__setattr__(self, "colors", colors)

    @classmethod
    def empty(cls) -> Mesh:
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), np.zeros(0, dtype=np.uint32))

    @classmethod
    def from_arrays(
        cls,
        vertices: Sequence[Sequence[float]] | np.ndarray,
        triangles: Sequence[Sequence[int]] | np.ndarray,
        color: int | Sequence[int] | np.ndarray = DEFAULT_COLOR,
    ) -> Mesh:
        """Build a mesh; ``color`` is one word for every triangle or one per triangle."""
        tris = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        colors = np.broadcast_to(np.asarray(color, dtype=np.uint32), (len(tris),)).copy()
        return cls(np.asarray(vertices, dtype=np.float64), tris, colors)

    def __len__(self) -> int:
        return len(self.triangles)

    @property
    def is_empty(self) -> bool:
        return len(self.triangles) == 0

    def corners(self) -> np.ndarray:
        """Triangle corner positions, shape ``(n, 3, 3)``."""
        return self.vertices[self.triangles]

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """AABB of the referenced vertices."""
        if self.is_empty:
            raise MeshError("empty mesh has no bounds")
        used = self.vertices[np.unique(self.triangles)]
        return used.min(axis=0), used.max(axis=0)


@dataclass(frozen=True, slots=True)
class GridTransform:
    """Uniform scale then translation from model units to finest-voxel units."""

    scale: float = 1.0
    offset: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=np.float64) * self.scale + np.asarray(self.offset)


def fit_transform(mesh: Mesh, resolution: Sequence[int], *, margin: float = 1.0) -> GridTransform:
    """Map the mesh AABB into the grid box, centred, aspect kept, ``margin`` voxels clear.

    Raises:
        MeshError: for an empty mesh or a zero-extent AABB.
    """
    lo, hi = mesh.bounds()
    size = hi - lo
    if not np.any(size > 0):
        raise MeshError("mesh bounding box has zero extent")
    room = np.asarray(resolution, dtype=np.float64) - 2.0 * margin
    if np.any(room <= 0):
        raise MeshError(f"resolution {tuple(resolution)} leaves no room inside a {margin}-voxel margin")
    with np.errstate(divide="ignore"):
        ratios = np.where(size > 0, room / np.where(size > 0, size, 1.0), np.inf)
    scale = float(ratios.min())
    center_model = (lo + hi) / 2.0
    center_grid = np.asarray(resolution, dtype=np.float64) / 2.0
    offset = center_grid - center_model * scale
    return GridTransform(scale=scale, offset=(float(offset[0]), float(offset[1]), float(offset[2])))


def _parse_index(token: str, count: int, path: Path, line_no: int) -> int:
    head = token.split("/", 1)[0]
    try:
        index = int(head)
    except ValueError:
        raise MeshError(f"malformed face index {token!r}", path=path, line=line_no) from None
    if index == 0:
        raise MeshError("face index 0 (OBJ indices are 1-based)", path=path, line=line_no)
    resolved = index - 1 if index > 0 else count + index
    if not 0 <= resolved < count:
        raise MeshError(f"face index {index} out of range ({count} vertices)", path=path, line=line_no)
    return resolved


def _parse_color(parts: list[str], path: Path, line_no: int) -> int:
    try:
        values = [int(round(float(p))) for p in parts]
    except ValueError:
        raise MeshError(f"malformed color directive {' '.join(parts)!r}", path=path, line=line_no) from None
    if len(values) not in (3, 4) or any(not 0 <= v <= 255 for v in values):
        raise MeshError("color directive needs 3 or 4 channels in 0..255", path=path, line=line_no)
    return pack_rgba(*values)


def _load_with_trimesh(path: Path) -> Mesh:
    try:
        loaded = trimesh.load(path, force="mesh")
    except Exception as exc:
        raise MeshError(f"cannot load mesh: {exc}", path=path) from exc
    faces = np.asarray(loaded.faces, dtype=np.int64).reshape(-1, 3)
    return Mesh(
        np.asarray(loaded.vertices, dtype=np.float64),
        faces,
        np.full(len(faces), DEFAULT_COLOR, dtype=np.uint32),
    )


def load_mesh(path: str | Path) -> Mesh:
    """Read a Wavefront OBJ subset into a :class:`Mesh`.

    Raises:
        MeshError: unreadable file, malformed statements, index 0 or an
            out-of-range index.
    """
    path = Path(path)
    if path.suffix.lower() != ".obj" and path.exists():
        return _load_with_trimesh(path)
    try:
        text = path.read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        raise MeshError(f"cannot read file: {exc.strerror or exc}", path=path) from exc

    vertices: list[tuple[float, float, float]] = []
    triangles: list[tuple[int, int, int]] = []
    colors: list[int] = []
    color = DEFAULT_COLOR

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0].lower() == "color":
                color = _parse_color(parts[1:], path, line_no)
            continue
        parts = line.split()
        if parts[0] == "v":
            if len(parts) < 4:
                raise MeshError("vertex needs 3 coordinates", path=path, line=line_no)
            try:
                vertices.append((float(parts[1]), float(parts[2]), float(parts[3])))
            except ValueError:
                raise MeshError("malformed vertex coordinate", path=path, line=line_no) from None
        elif parts[0] == "f":
            if len(parts) < 4:
                raise MeshError("face needs at least 3 vertices", path=path, line=line_no)
            indices = [_parse_index(t, len(vertices), path, line_no) for t in parts[1:]]
            for i in range(1, len(indices) - 1):
                triangles.append((indices[0], indices[i], indices[i + 1]))
                colors.append(color)

    if not triangles:
        return Mesh(
            np.asarray(vertices, dtype=np.float64).reshape(-1, 3),
            np.zeros((0, 3), dtype=np.int64),
            np.zeros(0, dtype=np.uint32),
        )
    return Mesh(np.asarray(vertices), np.asarray(triangles), np.asarray(colors, dtype=np.uint32))
