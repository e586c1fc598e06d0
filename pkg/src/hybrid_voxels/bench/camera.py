# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Pinhole camera producing one primary ray per pixel.

Pixel ``(0, 0)`` is the top-left corner; rays pass through pixel centres. The
vertical field of view is given in degrees and the horizontal one follows the
image aspect ratio.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from hybrid_voxels.core.intersect import Ray

__all__ = ["Camera", "Vec3"]

Vec3 = tuple[float, float, float]


class Camera(BaseModel):
    """Pinhole camera; validated on construction.

    Raises:
        pydantic.ValidationError: fov outside (0, 180), empty image, or a view
            direction that is zero or collinear with ``up``.
    """

    model_config = ConfigDict(frozen=True)

    position: Vec3
    target: Vec3
    up: Vec3 = (0.0, 1.0, 0.0)
    fov: float = Field(default=60.0, gt=0.0, lt=180.0)
    width: int = Field(default=512, ge=1)
    height: int = Field(default=512, ge=1)

    @model_validator(mode="after")
    def _check_orientation(self) -> Camera:
        view = np.subtract(self.target, self.position)
        if not np.linalg.norm(view) > 0.0:
            raise ValueError("camera target coincides with its position")
        if not np.linalg.norm(np.cross(view, self.up)) > 1e-12 * np.linalg.norm(view):
            raise ValueError("camera up vector is zero or collinear with the view direction")
        return self

    @classmethod
    def orbit(
        cls,
        resolution: Sequence[int],
        *,
        direction: Sequence[float] = (0.35, 0.45, 1.0),
        distance: float = 2.0,
        **kwargs: object,
    ) -> Camera:
        """Camera looking at the volume centre from ``distance`` volume diagonals away."""
        center = np.asarray(resolution, dtype=np.float64) / 2.0
        diagonal = float(np.linalg.norm(np.asarray(resolution, dtype=np.float64)))
        offset = np.asarray(direction, dtype=np.float64)
        offset = offset / np.linalg.norm(offset) * distance * diagonal
        position = center + offset
        return cls(
            position=(float(position[0]), float(position[1]), float(position[2])),
            target=(float(center[0]), float(center[1]), float(center[2])),
            **kwargs,  # type: ignore[arg-type]
        )

    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Orthonormal ``(forward, right, up)``."""
        forward = np.subtract(self.target, self.position).astype(np.float64)
        forward /= np.linalg.norm(forward)
        right = np.cross(forward, self.up)
        right /= np.linalg.norm(right)
        up = np.cross(right, forward)
        return forward, right, up

    def directions(self) -> np.ndarray:
        """Unnormalised ray directions for every pixel, shape ``(height, width, 3)``."""
        forward, right, up = self.basis()
        half_h = math.tan(math.radians(self.fov) / 2.0)
        half_w = half_h * self.width / self.height
        u = (2.0 * (np.arange(self.width) + 0.5) / self.width - 1.0) * half_w
        v = (1.0 - 2.0 * (np.arange(self.height) + 0.5) / self.height) * half_h
        return forward[None, None, :] + u[None, :, None] * right[None, None, :] + v[:, None, None] * up[None, None, :]

    def ray(self, px: int, py: int) -> Ray:
        """Primary ray through the centre of pixel ``(px, py)``."""
        forward, right, up = self.basis()
        half_h = math.tan(math.radians(self.fov) / 2.0)
        half_w = half_h * self.width / self.height
        u = (2.0 * (px + 0.5) / self.width - 1.0) * half_w
        v = (1.0 - 2.0 * (py + 0.5) / self.height) * half_h
        d = forward + u * right + v * up
        return Ray(self.position, (float(d[0]), float(d[1]), float(d[2])))
