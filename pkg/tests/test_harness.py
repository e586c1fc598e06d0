# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Tests for the benchmark harness and the procedural scenes."""

import csv

import numpy as np
import pytest
from pydantic import ValidationError

from hybrid_voxels.bench.harness import (
    CSV_FIELDS,
    BenchFormat,
    BenchManifest,
    BenchModel,
    BenchRecord,
    build_volume,
    load_manifest,
    optimization_ratios,
    pareto_frontier,
    peak_construction_memory,
    run_bench,
    write_csv,
)
from hybrid_voxels.bench.scenes import scene_source, sparse_scene, uniform_scene
from hybrid_voxels.core.format import compile_plan, parse_format
from hybrid_voxels.core.hvox import hvox_size, load_hvox
from hybrid_voxels.core.source import DenseGridSource
from hybrid_voxels.voxelizer.chunked import ChunkedVoxelSource
from hybrid_voxels.voxelizer.mesh import Mesh
from tests.oracles import dominance_frontier

TRIANGLE_OBJ = "v 0 0 0\nv 1 0 0\nv 0 1 1\nf 1 2 3\n"


def record(fmt: str, size: int, ms: float, flags: str = "", model: str = "m") -> BenchRecord:
    return BenchRecord(
        model=model,
        format=fmt,
        flags=flags,
        size_bytes=size,
        frame_ms_mean=ms,
        frame_ms_std=0.0,
        peak_mem_bytes=0,
    )


# ---------------------------------------------------------------------------
# Pareto frontier
# ---------------------------------------------------------------------------


class TestParetoFrontier:
    def test_simple(self):
        points = [(1, 9), (2, 5), (3, 7), (4, 1), (5, 1)]
        assert pareto_frontier(points) == [(1, 9), (2, 5), (4, 1)]

    def test_duplicates_kept(self):
        assert pareto_frontier([(2, 2), (2, 2), (3, 3)]) == [(2, 2), (2, 2)]

    def test_same_size_slower_dropped(self):
        assert pareto_frontier([(2, 3), (2, 2)]) == [(2, 2)]

    def test_matches_dominance_scan(self, rng):
        for _ in range(100):
            points = [tuple(int(v) for v in p) for p in rng.integers(0, 12, (int(rng.integers(1, 30)), 2))]
            assert pareto_frontier(points) == dominance_frontier(points)

    def test_key(self):
        records = [record("G(9)", 100, 4.0), record("S(9)", 200, 3.0), record("R(9³)", 300, 5.0)]
        frontier = pareto_frontier(records, key=lambda r: (r.size_bytes, r.frame_ms_mean))
        assert [r.format for r in frontier] == ["G(9)", "S(9)"]

    def test_empty(self):
        assert pareto_frontier([]) == []


# ---------------------------------------------------------------------------
# Records and ratios
# ---------------------------------------------------------------------------


class TestRecords:
    def test_flag_set(self):
        assert record("G(9)", 1, 1.0, "whole_level_dedup+restart_sv").flag_set == {
            "whole_level_dedup",
            "restart_sv",
        }
        assert record("G(9)", 1, 1.0).flag_set == frozenset()

    def test_write_csv(self, tmp_path):
        path = tmp_path / "results.csv"
        rows = [record("G(9)", 100, 4.5), record("S(9)", 200, 3.25, "restart_sv")]
        assert write_csv(rows, path) == 2
        with path.open(newline="") as handle:
            reader = csv.DictReader(handle)
            assert tuple(reader.fieldnames) == CSV_FIELDS
            loaded = list(reader)
        assert loaded[1]["format"] == "S(9)"
        assert loaded[1]["flags"] == "restart_sv"
        assert float(loaded[0]["frame_ms_mean"]) == 4.5
        assert int(loaded[1]["size_bytes"]) == 200

    def test_optimization_ratios(self):
        rows = [
            record("R(1, 1, 1) G(8)", 1000, 8.0),
            record("R(1, 1, 1) G(8)", 250, 8.0, "whole_level_dedup"),
            record("S(9)", 500, 6.0),
            record("S(9)", 500, 4.0, "restart_sv"),
            record("G(9)", 300, 2.0, "restart_sv"),
        ]
        ratios = {(r.format, r.optimization): r.ratio for r in optimization_ratios(rows)}
        assert ratios == {
            ("R(1, 1, 1) G(8)", "whole_level_dedup"): 4.0,
            ("S(9)", "restart_sv"): 1.5,
        }

    def test_combined_flags_pair_with_each_single_flag(self):
        rows = [
            record("G(9)", 400, 6.0, "restart_sv"),
            record("G(9)", 200, 3.0, "whole_level_dedup"),
            record("G(9)", 100, 2.0, "whole_level_dedup+restart_sv"),
        ]
        ratios = sorted((r.optimization, r.ratio) for r in optimization_ratios(rows))
        assert ratios == [("restart_sv", 1.5), ("whole_level_dedup", 4.0)]


# ---------------------------------------------------------------------------
# Manifest
# ---------------------------------------------------------------------------


class TestManifest:
    def test_format_canonicalised(self):
        fmt = BenchFormat(signature="R(4³)  G(7)", whole_level_dedup=True, restart_sv=True)
        assert fmt.signature == "R(4, 4, 4) G(7)"
        assert fmt.flags == "whole_level_dedup+restart_sv"
        assert BenchFormat(signature="S(11)").flags == ""

    def test_invalid_signature(self):
        with pytest.raises(ValidationError):
            BenchFormat(signature="R(1, 2)")
        with pytest.raises(ValidationError):
            BenchFormat(signature="R(1, 0, 2) R(1, 2, 2)")

    def test_model_needs_one_input(self):
        with pytest.raises(ValidationError):
            BenchModel(name="x")
        with pytest.raises(ValidationError):
            BenchModel(name="x", path="a.obj", scene="sparse")
        assert BenchModel(name="x", scene="uniform").path is None

    def test_needs_models_and_formats(self):
        with pytest.raises(ValidationError):
            BenchManifest(models=[], formats=[BenchFormat(signature="G(4)")])

    def test_load(self, tmp_path):
        (tmp_path / "meshes").mkdir()
        manifest_path = tmp_path / "bench.toml"
        manifest_path.write_text(
            """
width = 64
height = 48
frames = 2
volumes_dir = "volumes"

[[models]]
name = "tri"
path = "meshes/tri.obj"

[[models]]
name = "sparse"
scene = "sparse"
camera = { position = [40.0, 30.0, 50.0], target = [8.0, 8.0, 8.0] }

[[formats]]
signature = "R(4³) G(7)"
whole_level_dedup = true

[[formats]]
signature = "S(11)"
"""
        )
        manifest = load_manifest(manifest_path)
        assert (manifest.width, manifest.height, manifest.frames) == (64, 48, 2)
        assert manifest.models[0].path == str((tmp_path / "meshes" / "tri.obj").resolve())
        assert manifest.volumes_dir == str((tmp_path / "volumes").resolve())
        assert manifest.models[1].camera.target == (8.0, 8.0, 8.0)
        assert manifest.formats[0].signature == "R(4, 4, 4) G(7)"
        assert manifest.formats[1].flags == ""

    def test_load_rejects_bad_values(self, tmp_path):
        path = tmp_path / "bench.toml"
        path.write_text('frames = 0\n[[models]]\nname = "a"\nscene = "uniform"\n[[formats]]\nsignature = "G(4)"\n')
        with pytest.raises(ValidationError):
            load_manifest(path)


# ---------------------------------------------------------------------------
# Construction measurement
# ---------------------------------------------------------------------------


class TestBuildVolume:
    def test_report(self, grid16):
        plan = compile_plan(parse_format("R(2³) G(2)"))
        buffer, report = build_volume(plan, DenseGridSource(grid16))
        assert report.signature == "R(2, 2, 2) G(2)"
        assert report.words == len(buffer)
        assert report.size_bytes == hvox_size(buffer, plan)
        assert report.peak_bytes >= grid16.nbytes
        assert set(report.peaks) >= {"chunk", "dedup", "levels"}
        assert report.elapsed_ms >= 0.0
        assert report.voxelizations == 0

    def test_peak_memory_matches_report(self, grid16):
        plan = compile_plan(parse_format("S(2) G(2)"))
        _, report = build_volume(plan, DenseGridSource(grid16))
        assert peak_construction_memory(plan, DenseGridSource(grid16)) == report.peak_bytes


class TestPeakConstructionMemory:
    @pytest.mark.parametrize("signature", ["S(4)", "G(4)"])
    def test_empty_mesh_holds_one_chunk(self, signature):
        source = ChunkedVoxelSource(Mesh.empty(), (16, 16, 16), chunk_exp=2)
        plan = compile_plan(parse_format(signature))
        assert peak_construction_memory(plan, source) == 4**3 * 4
        assert source.voxelizations == 0

    def test_raw_plan_includes_level_array(self, grid16):
        plan = compile_plan(parse_format("R(4³)"))
        assert peak_construction_memory(plan, DenseGridSource(grid16)) == grid16.nbytes + 4 * 16**3

    def test_nested_raw_levels_stack_up(self, grid16):
        plan = compile_plan(parse_format("R(2³) R(2³)"))
        assert peak_construction_memory(plan, DenseGridSource(grid16)) == grid16.nbytes + 2 * 4 * 4**3

    def test_distance_field_plan_peaks_highest(self, grid16):
        peaks = {
            signature: peak_construction_memory(compile_plan(parse_format(signature)), DenseGridSource(grid16))
            for signature in ("R(4³)", "S(4)", "G(4)", "R(2³) G(2)", "S(2) G(2)", "D(4³, 3)")
        }
        # grid payload, terms, distances and the boolean scratch
        assert peaks["D(4³, 3)"] == grid16.nbytes + 11 * 16**3
        assert max(peaks, key=peaks.__getitem__) == "D(4³, 3)"


# ---------------------------------------------------------------------------
# Scenes
# ---------------------------------------------------------------------------


class TestScenes:
    def test_sparse_scene_in_unit_cube(self):
        mesh = sparse_scene(subdivisions=1)
        lo, hi = mesh.bounds()
        assert lo.min() >= -1e-9
        assert hi.max() <= 1.0 + 1e-9
        assert len(set(mesh.colors.tolist())) == 5

    def test_uniform_scene(self):
        source = uniform_scene((8, 8, 8), 7)
        assert source.sample(0, 0, 0) == 7

    def test_scene_source(self):
        assert scene_source("sparse", (16, 16, 16), chunk_exp=3).chunk_shape == (8, 8, 8)
        assert scene_source("uniform", (4, 4, 4)).resolution == (4, 4, 4)
        with pytest.raises(ValueError, match="unknown scene"):
            scene_source("dense", (4, 4, 4))


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


class TestRunBench:
    def test_small_run(self, tmp_path):
        mesh_path = tmp_path / "tri.obj"
        mesh_path.write_text(TRIANGLE_OBJ)
        manifest = BenchManifest(
            width=6,
            height=5,
            frames=1,
            chunk_exp=3,
            volumes_dir=str(tmp_path / "volumes"),
            models=[
                BenchModel(name="tri", path=str(mesh_path)),
                BenchModel(name="full", scene="uniform"),
            ],
            formats=[
                BenchFormat(signature="G(4)"),
                BenchFormat(signature="R(1³) G(3)", whole_level_dedup=True, restart_sv=True),
            ],
        )
        seen = []
        records = run_bench(manifest, on_record=seen.append)
        assert seen == records
        assert [(r.model, r.format, r.flags) for r in records] == [
            ("tri", "G(4)", ""),
            ("tri", "R(1, 1, 1) G(3)", "whole_level_dedup+restart_sv"),
            ("full", "G(4)", ""),
            ("full", "R(1, 1, 1) G(3)", "whole_level_dedup+restart_sv"),
        ]
        saved = sorted((tmp_path / "volumes").glob("*.hvox"), key=lambda p: p.stem.rsplit("_", 1)[1])
        assert len(saved) == 4
        for path, rec in zip(saved, records, strict=True):
            assert path.stat().st_size == rec.size_bytes
        # uniform G(4): one leaf and four 9-word nodes
        assert records[2].size_bytes == 12 + 4 + 20 + 4 * (2 + 9 * 4)
        buffer, plan = load_hvox(saved[2])
        assert np.all(buffer.words[1:2] != 0)
        assert plan.signature == "G(4)"
        assert all(r.frame_ms_mean > 0.0 and r.peak_mem_bytes > 0 for r in records)
