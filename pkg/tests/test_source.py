# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Tests for in-memory voxel sources and the Morton access contract."""

import numpy as np
import pytest

from hybrid_voxels.core.source import (
    BLOCK_EMPTY,
    BLOCK_MIXED,
    BlockKind,
    BlockState,
    DenseGridSource,
    UniformSource,
    classify_block,
    sample_voxel,
)
from hybrid_voxels.exceptions import CoordinateRangeError, MortonOrderError


class TestClassifyBlock:
    def test_empty(self):
        assert classify_block(np.zeros((2, 2, 2), dtype=np.uint32)) == BLOCK_EMPTY

    def test_uniform(self):
        region = np.full((2, 2, 2), 7, dtype=np.uint32)
        assert classify_block(region) == BlockState(BlockKind.UNIFORM, 7)

    def test_partly_filled_is_mixed(self):
        region = np.zeros((2, 2, 2), dtype=np.uint32)
        region[1, 1, 1] = 7
        assert classify_block(region) == BLOCK_MIXED

    def test_two_colours_is_mixed(self):
        region = np.full((2, 2, 2), 7, dtype=np.uint32)
        region[0, 0, 0] = 8
        assert classify_block(region).kind is BlockKind.MIXED


class TestDenseGridSource:
    def setup_method(self):
        self.grid = np.zeros((4, 4, 4), dtype=np.uint32)
        self.grid[0, 0, 1] = 5
        self.grid[2:4, 2:4, 2:4] = 9
        self.source = DenseGridSource(self.grid)

    def test_resolution_is_xyz(self):
        source = DenseGridSource(np.zeros((8, 4, 2), dtype=np.uint32))
        assert source.resolution == (2, 4, 8)

    def test_sample_in_order(self):
        assert self.source.sample(0, 0, 0) == 0
        assert self.source.sample(1, 0, 0) == 5
        assert sample_voxel(self.source, 0, 1, 0) == 0
        assert self.source.samples == 3

    def test_out_of_order_sample(self):
        self.source.sample(1, 0, 0)
        with pytest.raises(MortonOrderError) as exc_info:
            self.source.sample(0, 0, 0)
        assert exc_info.value.code == 0
        assert exc_info.value.last_code == 1

    def test_repeated_sample_allowed(self):
        self.source.sample(1, 0, 0)
        assert self.source.sample(1, 0, 0) == 5

    def test_rewind(self):
        self.source.sample(3, 3, 3)
        self.source.rewind()
        assert self.source.sample(0, 0, 0) == 0

    def test_block_states(self):
        assert self.source.block_state((0, 0, 0), 2).kind is BlockKind.MIXED
        assert self.source.block_state((2, 0, 0), 2) == BLOCK_EMPTY
        assert self.source.block_state((2, 2, 2), 2) == BlockState(BlockKind.UNIFORM, 9)
        assert self.source.block_answers == 2

    def test_mixed_block_consumes_nothing(self):
        self.source.block_state((0, 0, 0), 2)
        assert self.source.sample(0, 0, 0) == 0

    def test_empty_block_is_consumed(self):
        self.source.block_state((0, 0, 0), 2)
        self.source.sample(1, 0, 0)
        self.source.block_state((0, 2, 0), 2)
        with pytest.raises(MortonOrderError):
            self.source.sample(1, 2, 1)

    def test_block_queries_disabled(self):
        source = DenseGridSource(self.grid, block_queries=False)
        assert source.block_state((2, 2, 2), 2) == BLOCK_MIXED

    def test_block_must_fit(self):
        with pytest.raises(CoordinateRangeError):
            self.source.block_state((2, 2, 2), 4)

    def test_out_of_range_sample(self):
        with pytest.raises(CoordinateRangeError):
            self.source.sample(4, 0, 0)

    def test_resident_bytes(self):
        assert self.source.resident_bytes == self.grid.nbytes

    def test_rejects_flat_grid(self):
        with pytest.raises(ValueError):
            DenseGridSource(np.zeros((4, 4), dtype=np.uint32))


class TestUniformSource:
    def test_uniform(self):
        source = UniformSource((4, 4, 4), 0xFF00FF00)
        assert source.block_state((0, 0, 0), 4) == BlockState(BlockKind.UNIFORM, 0xFF00FF00)
        source.rewind()
        assert source.sample(3, 3, 3) == 0xFF00FF00

    def test_zero_colour_is_empty(self):
        assert UniformSource((4, 4, 4), 0).block_state((0, 0, 0), 2) == BLOCK_EMPTY
