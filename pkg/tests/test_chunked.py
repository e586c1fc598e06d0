# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Tests for the out-of-core chunked voxelizer."""

import numpy as np
import pytest

from hybrid_voxels.core.construct import BuildOptions, MemoryMeter, construct_volume
from hybrid_voxels.core.format import compile_plan, parse_format
from hybrid_voxels.core.morton import morton_children
from hybrid_voxels.core.source import BlockKind, DenseGridSource
from hybrid_voxels.exceptions import MortonOrderError
from hybrid_voxels.voxelizer.chunked import ChunkedVoxelSource
from hybrid_voxels.voxelizer.mesh import GridTransform, Mesh
from hybrid_voxels.voxelizer.overlap import triangle_box_overlap
from tests.oracles import dense_voxelize

IDENTITY = GridTransform()


def random_mesh(rng, count: int = 20, extent: float = 16.0, size: float = 2.5) -> Mesh:
    """Small triangles inside the grid, coloured by index plus one."""
    centers = rng.uniform(0.5, extent - 0.5, (count, 1, 3))
    corners = np.clip(centers + rng.normal(0.0, size, (count, 3, 3)), 0.1, extent - 0.1)
    return Mesh.from_arrays(
        corners.reshape(-1, 3),
        np.arange(3 * count).reshape(-1, 3),
        np.arange(1, count + 1, dtype=np.uint32),
    )


def sweep(source) -> np.ndarray:
    """Every voxel of ``source`` sampled in Morton order, as ``uint32[z, y, x]``."""
    rx, ry, rz = source.resolution
    grid = np.zeros((rz, ry, rx), dtype=np.uint32)
    for x, y, z in morton_children((rx, ry, rz)):
        grid[z, y, x] = source.sample(x, y, z)
    return grid


class TestVoxelization:
    def setup_method(self):
        self.rng = np.random.default_rng(7)
        self.mesh = random_mesh(self.rng)
        self.expected = dense_voxelize(self.mesh.corners(), (16, 16, 16), triangle_box_overlap)

    @pytest.mark.parametrize("chunk_exp", [1, 2, 3, 4])
    def test_matches_dense_oracle(self, chunk_exp):
        source = ChunkedVoxelSource(
            self.mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=chunk_exp, block_queries=False
        )
        assert np.array_equal(sweep(source), self.expected)

    def test_lowest_index_wins(self):
        tri = [(0.2, 0.2, 0.2), (1.8, 0.2, 0.2), (0.2, 1.8, 0.2)]
        mesh = Mesh.from_arrays(tri + tri, [[0, 1, 2], [3, 4, 5]], [11, 22])
        source = ChunkedVoxelSource(mesh, (4, 4, 4), transform=IDENTITY, chunk_exp=2)
        assert source.sample(0, 0, 0) == 11

    def test_transparent_black_is_kept(self):
        tri = [(0.2, 0.2, 0.2), (1.8, 0.2, 0.2), (0.2, 1.8, 0.2)]
        mesh = Mesh.from_arrays(tri, [[0, 1, 2]], 0)
        source = ChunkedVoxelSource(mesh, (4, 4, 4), transform=IDENTITY, chunk_exp=2)
        assert source.sample(0, 0, 0) == 0x01000000

    def test_default_transform_fits_mesh(self):
        source = ChunkedVoxelSource(self.mesh, (32, 32, 32), chunk_exp=3)
        lo = source.triangles.reshape(-1, 3).min(axis=0)
        hi = source.triangles.reshape(-1, 3).max(axis=0)
        assert lo.min() >= 1.0 - 1e-9
        assert hi.max() <= 31.0 + 1e-9


class TestChunkResidency:
    def setup_method(self):
        self.mesh = random_mesh(np.random.default_rng(11))

    def test_each_chunk_voxelized_once(self):
        source = ChunkedVoxelSource(self.mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=2, block_queries=False)
        sweep(source)
        assert source.voxelizations == 64
        assert set(source.chunk_loads.values()) == {1}

    def test_construction_voxelizes_each_chunk_once(self):
        plan = compile_plan(parse_format("R(2³) G(2)"))
        source = ChunkedVoxelSource(self.mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=2)
        construct_volume(plan, source)
        assert set(source.chunk_loads.values()) == {1}
        assert source.voxelizations <= 64

    def test_going_back_is_rejected(self):
        source = ChunkedVoxelSource(self.mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=2)
        source.sample(8, 8, 8)
        with pytest.raises(MortonOrderError):
            source.sample(0, 0, 0)

    def test_resident_payload_is_one_chunk(self):
        small = ChunkedVoxelSource(self.mesh, (32, 32, 32), chunk_exp=3)
        large = ChunkedVoxelSource(self.mesh, (64, 64, 64), chunk_exp=3)
        assert small.peak_resident_voxels == large.peak_resident_voxels == 0
        construct_volume(compile_plan(parse_format("R(2³) G(3)")), small)
        construct_volume(compile_plan(parse_format("R(3³) G(3)")), large)
        assert small.voxelizations > 0 and large.voxelizations > 0
        assert small.peak_resident_voxels == large.peak_resident_voxels == 512
        assert small.resident_bytes == large.resident_bytes == 2048

    def test_resident_payload_of_clipped_chunk(self):
        source = ChunkedVoxelSource(self.mesh, (8, 4, 16), chunk_exp=3)
        source.sample(0, 0, 0)
        assert source.peak_resident_voxels == 8 * 4 * 8

    def test_chunk_clipped_to_resolution(self):
        source = ChunkedVoxelSource(self.mesh, (8, 4, 16), chunk_exp=3)
        assert source.chunk_shape == (8, 4, 8)

    def test_construction_memory_independent_of_resolution(self):
        peaks = []
        for side, signature in ((32, "R(2³) G(3)"), (64, "R(3³) G(3)")):
            meter = MemoryMeter()
            source = ChunkedVoxelSource(self.mesh, (side,) * 3, chunk_exp=3)
            construct_volume(compile_plan(parse_format(signature)), source, meter=meter)
            peaks.append(meter.peaks["chunk"])
        assert peaks[0] == peaks[1] == 2048


class TestBlockQueries:
    def setup_method(self):
        self.mesh = random_mesh(np.random.default_rng(3), count=6, size=1.0)

    def test_empty_block_far_from_mesh(self):
        tri = [(0.2, 0.2, 0.2), (1.8, 0.2, 0.2), (0.2, 1.8, 0.2)]
        mesh = Mesh.from_arrays(tri, [[0, 1, 2]])
        source = ChunkedVoxelSource(mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=2)
        assert source.block_state((8, 8, 8), 8).kind is BlockKind.EMPTY
        assert source.voxelizations == 0

    def test_large_block_answered_without_voxelizing(self):
        source = ChunkedVoxelSource(self.mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=2)
        assert source.block_state((0, 0, 0), 16).kind is BlockKind.MIXED
        assert source.voxelizations == 0

    @pytest.mark.parametrize("signature", ["R(4³)", "R(2³) G(2)", "S(2) R(2³)", "G(4)", "D(2³, 2) S(2)"])
    def test_same_volume_with_and_without_queries(self, signature):
        plan = compile_plan(parse_format(signature))
        fast = ChunkedVoxelSource(self.mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=2, block_queries=True)
        slow = ChunkedVoxelSource(self.mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=2, block_queries=False)
        assert construct_volume(plan, fast) == construct_volume(plan, slow)

    def test_same_volume_as_dense_grid(self):
        plan = compile_plan(parse_format("R(2³) G(2)"))
        expected = dense_voxelize(self.mesh.corners(), (16, 16, 16), triangle_box_overlap)
        source = ChunkedVoxelSource(self.mesh, (16, 16, 16), transform=IDENTITY, chunk_exp=3)
        options = BuildOptions(whole_level_dedup=True)
        assert construct_volume(plan, source, options) == construct_volume(plan, DenseGridSource(expected), options)

    def test_empty_mesh(self):
        plan = compile_plan(parse_format("R(2³) G(2)"))
        source = ChunkedVoxelSource(Mesh.empty(), (16, 16, 16), chunk_exp=2)
        assert construct_volume(plan, source).tolist() == [0]
        assert source.voxelizations == 0
