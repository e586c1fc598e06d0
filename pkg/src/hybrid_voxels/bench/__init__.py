"""Benchmark tooling: camera, CPU renderer, procedural scenes and the
size/time/memory harness with Pareto analysis."""

from .camera import Camera
from .harness import (
    CSV_FIELDS,
    FORMATS_512,
    FORMATS_2048,
    BenchFormat,
    BenchManifest,
    BenchModel,
    BenchRecord,
    ConstructionReport,
    OptimizationRatio,
    build_volume,
    load_manifest,
    optimization_ratios,
    pareto_frontier,
    peak_construction_memory,
    run_bench,
    write_csv,
)
from .render import Image, RenderOptions, render, shade, time_render, write_pgm_alpha, write_ppm
from .scenes import SCENES, scene_source, sparse_scene, uniform_scene

__all__ = [
    "Camera",
    "CSV_FIELDS",
    "FORMATS_512",
    "FORMATS_2048",
    "BenchFormat",
    "BenchManifest",
    "BenchModel",
    "BenchRecord",
    "ConstructionReport",
    "OptimizationRatio",
    "build_volume",
    "load_manifest",
    "optimization_ratios",
    "pareto_frontier",
    "peak_construction_memory",
    "run_bench",
    "write_csv",
    "Image",
    "RenderOptions",
    "render",
    "shade",
    "time_render",
    "write_pgm_alpha",
    "write_ppm",
    "SCENES",
    "scene_source",
    "sparse_scene",
    "uniform_scene",
]
