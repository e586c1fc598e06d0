# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Benchmark harness: build, measure, compare.

For every model and format of a manifest the harness constructs the volume
(recording peak construction memory), measures its serialized size, times a
series of frames and emits one :class:`BenchRecord`. Records go to CSV with
the columns::

    model,format,flags,size_bytes,frame_ms_mean,frame_ms_std,peak_mem_bytes

Manifests are TOML::

    width = 256
    height = 256
    frames = 16

    [[models]]
    name = "spheres"
    scene = "sparse"            # or: path = "bunny.obj"

    [[formats]]
    signature = "R(3³) G(6)"
    whole_level_dedup = true

``FORMATS_2048`` and ``FORMATS_512`` list the signatures of the reference
evaluation for 2048^3 and 512^3 volumes.
"""

from __future__ import annotations

import csv
import logging
import time
import tomllib
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from itertools import groupby
from pathlib import Path
from typing import Any, Literal, TypeVar

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from hybrid_voxels.bench.camera import Camera, Vec3
from hybrid_voxels.bench.render import RenderOptions, time_render
from hybrid_voxels.bench.scenes import scene_source
from hybrid_voxels.core.buffer import VolumeBuffer
from hybrid_voxels.core.construct import BuildOptions, MemoryMeter, construct_volume
from hybrid_voxels.core.format import FormatPlan, compile_plan, parse_format
from hybrid_voxels.core.hvox import hvox_size, save_hvox
from hybrid_voxels.core.source import VoxelSource
from hybrid_voxels.voxelizer.chunked import ChunkedVoxelSource
from hybrid_voxels.voxelizer.mesh import Mesh, load_mesh

__all__ = [
    "FORMATS_2048",
    "FORMATS_512",
    "CSV_FIELDS",
    "BenchRecord",
    "BenchFormat",
    "BenchModel",
    "BenchManifest",
    "ConstructionReport",
    "OptimizationRatio",
    "load_manifest",
    "build_volume",
    "peak_construction_memory",
    "pareto_frontier",
    "run_bench",
    "write_csv",
    "optimization_ratios",
]

logger = logging.getLogger("hybrid_voxels.bench")

T = TypeVar("T")

FORMATS_2048: tuple[str, ...] = (
    "D(4³, 6) D(3³, 6) G(4)",
    "D(4³, 6) R(3³) G(4)",
    "R(4³) R(3³) G(4)",
    "R(4³) S(3) G(4)",
    "R(4³) R(4³) R(3³)",
    "D(4³, 6) S(7)",
    "D(4³, 6) G(7)",
    "D(6³, 6) S(5)",
    "D(6³, 6) G(5)",
    "R(4³) S(7)",
    "R(4³) G(7)",
    "R(6³) S(5)",
    "R(6³) G(5)",
    "R(3³) G(8)",
    "R(8³) G(3)",
    "S(7) G(4)",
    "S(5) G(6)",
    "S(3) G(8)",
    "S(11)",
    "G(11)",
)

FORMATS_512: tuple[str, ...] = (
    "D(3³, 6) D(3³, 6) G(3)",
    "D(3³, 6) R(3³) G(3)",
    "R(3³) R(3³) G(3)",
    "R(3³) R(3³) R(3³)",
    "R(4³) R(1³) R(4³)",
    "D(4³, 6) S(5)",
    "D(4³, 6) G(5)",
    "R(4³) S(5)",
    "R(4³) G(5)",
    "R(2³) G(7)",
    "R(7³) G(2)",
    "S(5) R(4³)",
    "G(5) R(4³)",
    "D(5³, 6) D(4³, 6)",
    "D(5³, 6) R(4³)",
    "R(5³) R(4³)",
    "R(9³)",
    "D(9³, 6)",
    "S(9)",
    "G(9)",
)

CSV_FIELDS = ("model", "format", "flags", "size_bytes", "frame_ms_mean", "frame_ms_std", "peak_mem_bytes")


# -----------------------------------------------------------------------------
# Records and manifest
# -----------------------------------------------------------------------------


class BenchRecord(BaseModel):
    """One measured (model, format, flags) combination; ``size_bytes`` is the ``.hvox`` file size."""

    model_config = ConfigDict(frozen=True)

    model: str
    format: str
    flags: str = ""
    size_bytes: int
    frame_ms_mean: float
    frame_ms_std: float
    peak_mem_bytes: int

    @property
    def flag_set(self) -> frozenset[str]:
        return frozenset(f for f in self.flags.split("+") if f)


class BenchFormat(BaseModel):
    model_config = ConfigDict(frozen=True)

    signature: str
    whole_level_dedup: bool = False
    restart_sv: bool = False

    @field_validator("signature")
    @classmethod
    def _valid_signature(cls, value: str) -> str:
        return compile_plan(parse_format(value)).signature

    @property
    def flags(self) -> str:
        return "+".join(
            name for name, on in (("whole_level_dedup", self.whole_level_dedup), ("restart_sv", self.restart_sv)) if on
        )


class CameraSpec(BaseModel):
    """Camera placement in finest-voxel units; image size comes from the manifest."""

    model_config = ConfigDict(frozen=True)

    position: Vec3
    target: Vec3
    up: Vec3 = (0.0, 1.0, 0.0)
    fov: float = 60.0


class BenchModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    path: str | None = None
    scene: Literal["sparse", "uniform"] | None = None
    camera: CameraSpec | None = None

    @model_validator(mode="after")
    def _one_input(self) -> BenchModel:
        if (self.path is None) == (self.scene is None):
            raise ValueError(f"model '{self.name}' needs exactly one of 'path' or 'scene'")
        return self


class BenchManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    width: int = Field(default=512, ge=1)
    height: int = Field(default=512, ge=1)
    frames: int = Field(default=16, ge=1)
    threads: int = Field(default=1, ge=1)
    chunk_exp: int = Field(default=6, ge=0, le=10)
    block_queries: bool = True
    volumes_dir: str | None = None
    models: list[BenchModel] = Field(min_length=1)
    formats: list[BenchFormat] = Field(min_length=1)


def load_manifest(path: str | Path) -> BenchManifest:
    """Read and validate a TOML manifest; model paths become relative to its folder.

    Raises:
        pydantic.ValidationError: invalid manifest contents.
        tomllib.TOMLDecodeError: malformed TOML.
    """
    path = Path(path)
    with path.open("rb") as handle:
        data: dict[str, Any] = tomllib.load(handle)
    for model in data.get("models", []):
        if isinstance(model, dict) and model.get("path"):
            model["path"] = str((path.parent / model["path"]).resolve())
    if data.get("volumes_dir"):
        data["volumes_dir"] = str((path.parent / data["volumes_dir"]).resolve())
    return BenchManifest.model_validate(data)


# -----------------------------------------------------------------------------
# Construction measurement
# -----------------------------------------------------------------------------


@dataclass(slots=True)
class ConstructionReport:
    """What one construction cost."""

    signature: str
    words: int
    size_bytes: int
    peak_bytes: int
    elapsed_ms: float
    voxelizations: int = 0
    peaks: dict[str, int] = field(default_factory=dict)


def build_volume(
    plan: FormatPlan, source: VoxelSource, options: BuildOptions | None = None
) -> tuple[VolumeBuffer, ConstructionReport]:
    """Construct with memory accounting and timing."""
    meter = MemoryMeter()
    start = time.perf_counter()
    buffer = construct_volume(plan, source, options, meter=meter)
    elapsed = (time.perf_counter() - start) * 1000.0
    report = ConstructionReport(
        signature=plan.signature,
        words=len(buffer),
        size_bytes=hvox_size(buffer, plan),
        peak_bytes=meter.peak_total,
        elapsed_ms=elapsed,
        voxelizations=getattr(source, "voxelizations", 0),
        peaks=dict(meter.peaks),
    )
    return buffer, report


def peak_construction_memory(
    plan: FormatPlan, source: VoxelSource, options: BuildOptions | None = None
) -> int:
    """Peak of chunk + dedup + level working bytes while constructing ``plan``."""
    meter = MemoryMeter()
    construct_volume(plan, source, options, meter=meter)
    return meter.peak_total


# -----------------------------------------------------------------------------
# Analysis
# -----------------------------------------------------------------------------


def pareto_frontier(
    points: Iterable[T], key: Callable[[T], tuple[float, float]] | None = None
) -> list[T]:
    """Items not strictly dominated on ``(size, time)``, sorted by size.

    An item is dominated when another one is no worse on both axes and better
    on at least one. Exact duplicates do not dominate each other.
    """
    extract = key or (lambda p: p)  # type: ignore[assignment, return-value]
    ordered = sorted(points, key=lambda p: extract(p))  # type: ignore[arg-type]
    frontier: list[T] = []
    best = float("inf")
    for _, group in groupby(ordered, key=lambda p: extract(p)[0]):  # type: ignore[arg-type]
        items = list(group)
        fastest = extract(items[0])[1]  # type: ignore[arg-type]
        if fastest < best:
            frontier.extend(p for p in items if extract(p)[1] == fastest)  # type: ignore[arg-type]
            best = fastest
    return frontier


@dataclass(frozen=True, slots=True)
class OptimizationRatio:
    """``ratio`` is before/after: size for ``whole_level_dedup``, frame time for ``restart_sv``."""

    model: str
    format: str
    optimization: str
    ratio: float


def optimization_ratios(records: Sequence[BenchRecord]) -> list[OptimizationRatio]:
    """Pair records differing only by one flag and report the normalised decrease."""
    index = {(r.model, r.format, r.flag_set): r for r in records}
    out: list[OptimizationRatio] = []
    for (model, fmt, flags), after in index.items():
        for flag in ("whole_level_dedup", "restart_sv"):
            if flag not in flags:
                continue
            before = index.get((model, fmt, flags - {flag}))
            if before is None:
                continue
            if flag == "whole_level_dedup":
                ratio = before.size_bytes / after.size_bytes
            else:
                ratio = before.frame_ms_mean / after.frame_ms_mean if after.frame_ms_mean else float("inf")
            out.append(OptimizationRatio(model=model, format=fmt, optimization=flag, ratio=ratio))
    return out


def write_csv(records: Iterable[BenchRecord], path: str | Path) -> int:
    """Write records with :data:`CSV_FIELDS`; returns the number of rows."""
    count = 0
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for record in records:
            writer.writerow(record.model_dump(include=set(CSV_FIELDS)))
            count += 1
    return count


# -----------------------------------------------------------------------------
# Driver
# -----------------------------------------------------------------------------


def _camera(model: BenchModel, plan: FormatPlan, manifest: BenchManifest) -> Camera:
    if model.camera is None:
        return Camera.orbit(plan.resolution, width=manifest.width, height=manifest.height)
    return Camera(width=manifest.width, height=manifest.height, **model.camera.model_dump())


def run_bench(
    manifest: BenchManifest, *, on_record: Callable[[BenchRecord], None] | None = None
) -> list[BenchRecord]:
    """Measure every (model, format) pair of ``manifest`` sequentially."""
    meshes: dict[str, Mesh] = {}
    records: list[BenchRecord] = []
    for model in manifest.models:
        for entry in manifest.formats:
            plan = compile_plan(parse_format(entry.signature))
            options = BuildOptions(
                whole_level_dedup=entry.whole_level_dedup,
                chunk_exp=manifest.chunk_exp,
                block_queries=manifest.block_queries,
            )
            source: VoxelSource
            if model.path is not None:
                if model.path not in meshes:
                    meshes[model.path] = load_mesh(model.path)
                source = ChunkedVoxelSource(
                    meshes[model.path],
                    plan.resolution,
                    chunk_exp=options.chunk_exp,
                    block_queries=options.block_queries,
                )
            else:
                source = scene_source(
                    model.scene or "sparse",
                    plan.resolution,
                    chunk_exp=options.chunk_exp,
                    block_queries=options.block_queries,
                )
            buffer, report = build_volume(plan, source, options)
            if manifest.volumes_dir:
                folder = Path(manifest.volumes_dir)
                folder.mkdir(parents=True, exist_ok=True)
                stem = f"{model.name}_{len(records):03d}"
                save_hvox(buffer, plan, folder / f"{stem}.hvox")
            mean, std = time_render(
                buffer,
                plan,
                _camera(model, plan, manifest),
                manifest.frames,
                RenderOptions(restart_sv=entry.restart_sv, threads=manifest.threads),
            )
            record = BenchRecord(
                model=model.name,
                format=plan.signature,
                flags=entry.flags,
                size_bytes=report.size_bytes,
                frame_ms_mean=mean,
                frame_ms_std=std,
                peak_mem_bytes=report.peak_bytes,
            )
            logger.info(
                "%s %s [%s]: %d bytes, %.2f ms", record.model, record.format, record.flags, record.size_bytes, mean
            )
            records.append(record)
            if on_record is not None:
                on_record(record)
    return records
