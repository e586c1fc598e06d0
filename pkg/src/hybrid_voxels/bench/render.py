# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""CPU renderer, frame timing and image output.

Every pixel traces one primary ray. A hit is shaded with a headlight along the
ray: RGB channels are scaled by ``|normal . direction|`` and rounded half-up,
alpha is kept. Misses are the background word 0. Rows are rendered in bands
on a thread pool; each pixel is a pure function of the volume, the camera and
the pixel index, so the band partition never changes the image.

Images are written as binary PPM (P6, RGB only) with the alpha plane as a
separate binary PGM (P5).
"""

from __future__ import annotations

import logging
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from hybrid_voxels.bench.camera import Camera
from hybrid_voxels.core.buffer import VolumeBuffer, pack_rgba
from hybrid_voxels.core.format import FormatPlan
from hybrid_voxels.core.intersect import Hit, Ray, TraceOptions, Tracer

__all__ = [
    "Image",
    "RenderOptions",
    "shade",
    "render",
    "time_render",
    "write_ppm",
    "write_pgm_alpha",
]

logger = logging.getLogger("hybrid_voxels.bench")


@dataclass(frozen=True, slots=True)
class Image:
    """Row-major RGBA8 image, ``pixels[y, x] = (r, g, b, a)``."""

    width: int
    height: int
    pixels: np.ndarray

    @classmethod
    def blank(cls, width: int, height: int) -> Image:
        return cls(width, height, np.zeros((height, width, 4), dtype=np.uint8))

    def pixel(self, x: int, y: int) -> int:
        """Pixel as an RGBA word."""
        r, g, b, a = (int(c) for c in self.pixels[y, x])
        return pack_rgba(r, g, b, a)


class RenderOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    restart_sv: bool = False
    threads: int = Field(default=1, ge=1)
    band_rows: int = Field(default=16, ge=1)


def shade(hit: Hit, ray: Ray) -> tuple[int, int, int, int]:
    """Headlight shading of ``hit`` seen along ``ray``."""
    weight = abs(sum(n * d for n, d in zip(hit.normal, ray.direction, strict=True)))
    word = hit.color
    r, g, b = word & 0xFF, (word >> 8) & 0xFF, (word >> 16) & 0xFF
    return (
        int(r * weight + 0.5),
        int(g * weight + 0.5),
        int(b * weight + 0.5),
        (word >> 24) & 0xFF,
    )


def render(
    buffer: VolumeBuffer,
    plan: FormatPlan,
    camera: Camera,
    options: RenderOptions | None = None,
    *,
    tracer: Tracer | None = None,
) -> Image:
    """Render one frame of the volume seen from ``camera``."""
    options = options or RenderOptions()
    tracer = tracer or Tracer(buffer, plan, TraceOptions(restart_sv=options.restart_sv))
    image = Image.blank(camera.width, camera.height)
    directions = camera.directions().tolist()
    origin = camera.position

    def render_band(rows: range) -> None:
        for y in rows:
            row = directions[y]
            for x in range(camera.width):
                ray = Ray(origin, row[x])
                hit = tracer.intersect(ray)
                if hit is not None:
                    image.pixels[y, x] = shade(hit, ray)

    bands = [
        range(start, min(start + options.band_rows, camera.height))
        for start in range(0, camera.height, options.band_rows)
    ]
    if options.threads == 1:
        for band in bands:
            render_band(band)
    else:
        with ThreadPoolExecutor(max_workers=options.threads) as pool:
            list(pool.map(render_band, bands))
    return image


def time_render(
    buffer: VolumeBuffer,
    plan: FormatPlan,
    camera: Camera,
    frames: int = 16,
    options: RenderOptions | None = None,
) -> tuple[float, float]:
    """Mean and population standard deviation of frame time in milliseconds.

    One untimed warm-up frame is rendered first.
    """
    if frames < 1:
        raise ValueError(f"frames must be at least 1, got {frames}")
    options = options or RenderOptions()
    tracer = Tracer(buffer, plan, TraceOptions(restart_sv=options.restart_sv))
    render(buffer, plan, camera, options, tracer=tracer)
    samples: list[float] = []
    for _ in range(frames):
        start = time.perf_counter()
        render(buffer, plan, camera, options, tracer=tracer)
        samples.append((time.perf_counter() - start) * 1000.0)
    mean = statistics.fmean(samples)
    std = statistics.pstdev(samples)
    logger.debug("%s: %d frames, %.2f ms +- %.2f", plan.signature, frames, mean, std)
    return mean, std


def write_ppm(image: Image, path: str | Path) -> None:
    """Binary PPM (P6) of the RGB channels; alpha is dropped."""
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + np.ascontiguousarray(image.pixels[:, :, :3]).tobytes())


def write_pgm_alpha(image: Image, path: str | Path) -> None:
    """Binary PGM (P5) of the alpha channel."""
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + np.ascontiguousarray(image.pixels[:, :, 3]).tobytes())
