# Copyright 2025 Softwell S.r.l. - Apache License 2.0
"""The ``hvox`` commands.

Each method is one subcommand; its signature is the command line (see
:mod:`hybrid_voxels.cli._type_map`) and its return value is printed as JSON
(or a table for list results with ``output_format="table"``).
"""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Any, Literal

from genro_toolbox import dictExtract

from hybrid_voxels.bench.camera import Camera
from hybrid_voxels.bench.harness import (
    build_volume,
    load_manifest,
    optimization_ratios,
    pareto_frontier,
    run_bench,
    write_csv,
)
from hybrid_voxels.bench.render import RenderOptions, render, write_pgm_alpha, write_ppm
from hybrid_voxels.bench.scenes import scene_source
from hybrid_voxels.core.buffer import unpack_rgba
from hybrid_voxels.core.construct import BuildOptions
from hybrid_voxels.core.format import compile_plan, parse_format
from hybrid_voxels.core.hvox import load_hvox, save_hvox
from hybrid_voxels.core.intersect import point_query
from hybrid_voxels.core.source import VoxelSource
from hybrid_voxels.core.stats import volume_stats
from hybrid_voxels.voxelizer.chunked import ChunkedVoxelSource
from hybrid_voxels.voxelizer.mesh import load_mesh

from ._decorators import command

__all__ = ["VoxelCommands"]

logger = logging.getLogger("hybrid_voxels.cli")

Vec3 = tuple[float, float, float]


class VoxelCommands:
    """Build, inspect, render and benchmark hybrid voxel volumes."""

    @command()
    def validate(self, signature: str) -> dict[str, Any]:
        """Parse and compile a format signature; print the compiled plan."""
        plan = compile_plan(parse_format(signature))
        return {
            "signature": plan.signature,
            "resolution": plan.resolution,
            "depth": plan.depth,
            "levels": [
                {
                    "index": i + 1,
                    "kind": level.kind,
                    "params": level.params,
                    "extent": plan.extents[i],
                    "voxel_span": plan.cumulative[i],
                }
                for i, level in enumerate(plan.levels)
            ],
        }

    @command(short={"output": "o"})
    def construct(
        self,
        mesh: str,
        signature: str,
        output: Path = Path("out.hvox"),
        whole_level_dedup: bool = False,
        chunk_exp: int = 6,
        block_queries: bool = True,
    ) -> dict[str, Any]:
        """Voxelize MESH (an OBJ file, or scene:sparse / scene:uniform) into SIGNATURE and save it."""
        plan = compile_plan(parse_format(signature))
        options = BuildOptions(
            whole_level_dedup=whole_level_dedup, chunk_exp=chunk_exp, block_queries=block_queries
        )
        source: VoxelSource
        if mesh.startswith("scene:"):
            source = scene_source(
                mesh.removeprefix("scene:"),
                plan.resolution,
                chunk_exp=options.chunk_exp,
                block_queries=options.block_queries,
            )
        else:
            source = ChunkedVoxelSource(
                load_mesh(mesh),
                plan.resolution,
                chunk_exp=options.chunk_exp,
                block_queries=options.block_queries,
            )
        buffer, report = build_volume(plan, source, options)
        written = save_hvox(buffer, plan, output)
        logger.info("wrote %s (%d bytes)", output, written)
        return {
            "output": str(output),
            "signature": report.signature,
            "words": report.words,
            "size_bytes": written,
            "peak_mem_bytes": report.peak_bytes,
            "voxelizations": report.voxelizations,
            "elapsed_ms": round(report.elapsed_ms, 3),
        }

    @command(short={"output": "o"})
    def render(
        self,
        volume: Path,
        output: Path = Path("out.ppm"),
        restart_sv: bool = False,
        width: int = 512,
        height: int = 512,
        camera_position: Vec3 | None = None,
        camera_target: Vec3 | None = None,
        camera_up: Vec3 = (0.0, 1.0, 0.0),
        camera_fov: float = 60.0,
        threads: int = 1,
    ) -> dict[str, Any]:
        """Ray trace VOLUME into a PPM image plus a PGM alpha plane next to it."""
        params = dict(locals())
        buffer, plan = load_hvox(volume)
        camera_kw = {
            k: v for k, v in dictExtract(params, "camera_", slice_prefix=True, pop=False).items() if v is not None
        }
        if "position" not in camera_kw:
            orbit = Camera.orbit(plan.resolution)
            camera_kw["position"] = orbit.position
            camera_kw.setdefault("target", orbit.target)
        camera_kw.setdefault("target", tuple(r / 2.0 for r in plan.resolution))
        camera = Camera(width=width, height=height, **camera_kw)

        start = time.perf_counter()
        image = render(buffer, plan, camera, RenderOptions(restart_sv=restart_sv, threads=threads))
        elapsed = (time.perf_counter() - start) * 1000.0
        alpha = output.with_suffix(".alpha.pgm")
        write_ppm(image, output)
        write_pgm_alpha(image, alpha)
        return {
            "output": str(output),
            "alpha": str(alpha),
            "width": width,
            "height": height,
            "hits": int((image.pixels[:, :, 3] > 0).sum()),
            "frame_ms": round(elapsed, 3),
        }

    @command()
    def query(self, volume: Path, x: int, y: int, z: int) -> dict[str, Any]:
        """Voxel stored at (X, Y, Z) of VOLUME; 0 means empty."""
        buffer, plan = load_hvox(volume)
        word = point_query(buffer, plan, x, y, z)
        return {"voxel": (x, y, z), "word": f"0x{word:08x}", "rgba": unpack_rgba(word), "empty": word == 0}

    @command()
    def stats(self, volume: Path) -> dict[str, Any]:
        """Per-level structure of VOLUME: sub-volumes, nodes and words."""
        buffer, plan = load_hvox(volume)
        return volume_stats(buffer, plan).as_dict()

    @command(short={"output": "o"})
    def bench(
        self,
        manifest: Path,
        output: Path = Path("results.csv"),
        frontier: Literal["all", "pareto"] = "all",
    ) -> list[dict[str, Any]]:
        """Run a TOML bench MANIFEST, write CSV and print records with Pareto membership."""
        records = run_bench(load_manifest(manifest))
        write_csv(records, output)
        logger.info("wrote %d records to %s", len(records), output)
        best = {
            id(r)
            for model in {r.model for r in records}
            for r in pareto_frontier(
                [r for r in records if r.model == model], key=lambda r: (r.size_bytes, r.frame_ms_mean)
            )
        }
        for ratio in optimization_ratios(records):
            logger.info("%s %s %s: x%.2f", ratio.model, ratio.format, ratio.optimization, ratio.ratio)
        rows = [r.model_dump() | {"pareto": id(r) in best} for r in records]
        return rows if frontier == "all" else [row for row in rows if row["pareto"]]
