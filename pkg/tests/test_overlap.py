# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Tests for triangle/box overlap."""

import numpy as np
import pytest

from hybrid_voxels.voxelizer.overlap import (
    triangle_box_overlap,
    triangle_boxes_overlap,
    triangles_box_overlap,
)
from tests.oracles import clip_triangle_to_box

EPS = 1e-6


class TestTriangleBoxOverlap:
    def test_triangle_through_box(self):
        tri = [(-1.0, 0.5, 0.5), (2.0, 0.5, 0.5), (0.5, 2.0, 0.5)]
        assert triangle_box_overlap(tri, (0, 0, 0), (1, 1, 1))

    def test_triangle_far_away(self):
        tri = [(5.0, 5.0, 5.0), (6.0, 5.0, 5.0), (5.0, 6.0, 5.0)]
        assert not triangle_box_overlap(tri, (0, 0, 0), (1, 1, 1))

    def test_large_triangle_containing_box_section(self):
        tri = [(-10.0, -10.0, 0.5), (10.0, -10.0, 0.5), (0.0, 10.0, 0.5)]
        assert triangle_box_overlap(tri, (0, 0, 0), (1, 1, 1))

    def test_plane_misses_box(self):
        tri = [(-10.0, -10.0, 1.5), (10.0, -10.0, 1.5), (0.0, 10.0, 1.5)]
        assert not triangle_box_overlap(tri, (0, 0, 0), (1, 1, 1))

    def test_touching_face_counts(self):
        tri = [(1.0, 0.2, 0.2), (1.0, 0.8, 0.2), (1.0, 0.2, 0.8)]
        assert triangle_box_overlap(tri, (0, 0, 0), (1, 1, 1))
        assert triangle_box_overlap(tri, (1, 0, 0), (2, 1, 1))

    def test_separated_by_edge_axis(self):
        # face axes all overlap; the cross product of z with the long edge separates
        tri = [(2.0, 0.4, 0.5), (0.4, 2.0, 0.5), (2.0, 2.0, 0.5)]
        assert not triangle_box_overlap(tri, (0, 0, 0), (1, 1, 1))
        tri = [(1.4, 0.4, 0.5), (0.4, 1.4, 0.5), (2.0, 2.0, 0.5)]
        assert triangle_box_overlap(tri, (0, 0, 0), (1, 1, 1))

    def test_degenerate_segment(self):
        seg = [(-1.0, 0.5, 0.5), (2.0, 0.5, 0.5), (2.0, 0.5, 0.5)]
        assert triangle_box_overlap(seg, (0, 0, 0), (1, 1, 1))
        seg = [(-1.0, 1.5, 0.5), (2.0, 1.5, 0.5), (2.0, 1.5, 0.5)]
        assert not triangle_box_overlap(seg, (0, 0, 0), (1, 1, 1))

    def test_degenerate_point(self):
        point = [(0.5, 0.5, 0.5)] * 3
        assert triangle_box_overlap(point, (0, 0, 0), (1, 1, 1))
        assert not triangle_box_overlap(point, (1, 1, 1), (2, 2, 2))

    def test_matches_clipping(self, rng):
        lo = np.zeros(3)
        hi = np.ones(3)
        checked = 0
        for _ in range(2000):
            tri = rng.uniform(-1.5, 2.5, (3, 3))
            inner = bool(clip_triangle_to_box(tri, lo + EPS, hi - EPS))
            outer = bool(clip_triangle_to_box(tri, lo - EPS, hi + EPS))
            if inner != outer:
                continue
            assert triangle_box_overlap(tri, lo, hi) == inner
            checked += 1
        assert checked > 1900


class TestVectorisedForms:
    def test_one_triangle_many_boxes(self, rng):
        tri = rng.uniform(0.0, 4.0, (3, 3))
        lowers = np.array([(x, y, z) for z in range(4) for y in range(4) for x in range(4)], dtype=np.float64)
        got = triangle_boxes_overlap(tri, lowers + 0.5, 0.5)
        expected = [triangle_box_overlap(tri, lo, lo + 1.0) for lo in lowers]
        assert got.tolist() == expected

    def test_many_triangles_one_box(self, rng):
        tris = rng.uniform(-1.0, 3.0, (50, 3, 3))
        got = triangles_box_overlap(tris, (1.0, 1.0, 1.0), 1.0)
        expected = [triangle_box_overlap(t, (0, 0, 0), (2, 2, 2)) for t in tris]
        assert got.tolist() == expected

    @pytest.mark.parametrize("half", [0.5, (0.5, 1.0, 2.0)])
    def test_half_extent_forms(self, half):
        tri = [(0.4, 0.0, 0.0), (0.4, 0.1, 0.0), (0.4, 0.0, 0.1)]
        assert triangle_boxes_overlap(tri, np.zeros((1, 3)), half).tolist() == [True]
