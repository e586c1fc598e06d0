# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Tests for Morton codes and child enumeration."""

import time

import pytest

from hybrid_voxels.core.morton import (
    MORTON_AXIS_LIMIT,
    decode2,
    decode3,
    encode2,
    encode3,
    morton_children,
)
from hybrid_voxels.exceptions import CoordinateRangeError
from tests.oracles import interleave_bits


class TestEncode3:
    def test_unit_axes(self):
        assert encode3(1, 0, 0) == 1
        assert encode3(0, 1, 0) == 2
        assert encode3(0, 0, 1) == 4
        assert encode3(1, 1, 1) == 7
        assert encode3(2, 0, 0) == 8

    def test_matches_bit_loop(self, rng):
        for _ in range(500):
            x, y, z = (int(v) for v in rng.integers(0, MORTON_AXIS_LIMIT, 3))
            assert encode3(x, y, z) == interleave_bits(x, y, z)

    def test_decode_inverts_encode(self, rng):
        for _ in range(500):
            coords = tuple(int(v) for v in rng.integers(0, MORTON_AXIS_LIMIT, 3))
            assert decode3(encode3(*coords)) == coords

    def test_axis_limit(self):
        top = MORTON_AXIS_LIMIT - 1
        assert decode3(encode3(top, top, top)) == (top, top, top)
        with pytest.raises(CoordinateRangeError) as exc_info:
            encode3(MORTON_AXIS_LIMIT, 0, 0)
        assert exc_info.value.coords == (MORTON_AXIS_LIMIT, 0, 0)

    def test_negative(self):
        with pytest.raises(CoordinateRangeError):
            encode3(0, -1, 0)


class TestEncode2:
    def test_interleave(self):
        assert encode2(1, 0) == 1
        assert encode2(0, 1) == 2
        assert encode2(3, 3) == 15

    def test_decode_inverts_encode(self, rng):
        for _ in range(200):
            x, y = (int(v) for v in rng.integers(0, MORTON_AXIS_LIMIT, 2))
            assert decode2(encode2(x, y)) == (x, y)

    def test_out_of_range(self):
        with pytest.raises(CoordinateRangeError):
            encode2(0, MORTON_AXIS_LIMIT)


class TestMortonChildren:
    def test_octree_order(self):
        assert morton_children((2, 2, 2)) == (
            (0, 0, 0),
            (1, 0, 0),
            (0, 1, 0),
            (1, 1, 0),
            (0, 0, 1),
            (1, 0, 1),
            (0, 1, 1),
            (1, 1, 1),
        )

    def test_cube_is_increasing_codes(self):
        children = morton_children((8, 8, 8))
        codes = [encode3(*c) for c in children]
        assert codes == list(range(512))

    def test_blocks_are_contiguous(self):
        # every aligned 2^3 block of a 4^3 grid is served in one run
        children = morton_children((4, 4, 4))
        for start in range(0, 64, 8):
            blocks = {(x // 2, y // 2, z // 2) for x, y, z in children[start : start + 8]}
            assert len(blocks) == 1

    def test_non_cubic_skips_padding(self):
        children = morton_children((2, 1, 4))
        assert len(children) == 8
        assert len(set(children)) == 8
        assert all(x < 2 and y < 1 and z < 4 for x, y, z in children)
        codes = [encode3(*c) for c in children]
        assert codes == sorted(codes)

    def test_two_dimensional(self):
        assert morton_children((2, 2)) == ((0, 0), (1, 0), (0, 1), (1, 1))

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            morton_children((3, 4, 4))

    def test_rejects_bad_rank(self):
        with pytest.raises(ValueError):
            morton_children((2, 2, 2, 2))

    def test_thin_extent_matches_padded_order(self):
        extent = (1, 2, 16)
        padded = [decode3(code) for code in range(16**3)]
        expected = tuple(c for c in padded if c[0] < 1 and c[1] < 2 and c[2] < 16)
        assert morton_children(extent) == expected

    def test_thin_extent_cost_follows_cell_count(self):
        start = time.perf_counter()
        children = morton_children((1, 1, 4096))
        elapsed = time.perf_counter() - start
        assert children == tuple((0, 0, z) for z in range(4096))
        assert elapsed < 2.0
