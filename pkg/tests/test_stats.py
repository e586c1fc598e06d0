# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Tests for structural volume statistics."""

import numpy as np

from hybrid_voxels.core.construct import BuildOptions, construct_volume
from hybrid_voxels.core.format import compile_plan, parse_format
from hybrid_voxels.core.source import DenseGridSource, UniformSource
from hybrid_voxels.core.stats import volume_stats

RED = 0xFF0000FF


def plan_of(signature: str):
    return compile_plan(parse_format(signature))


class TestVolumeStats:
    def test_uniform_dag(self):
        plan = plan_of("G(2)")
        buffer = construct_volume(plan, UniformSource((4, 4, 4), RED))
        stats = volume_stats(buffer, plan)
        assert stats.signature == "G(2)"
        assert stats.total_words == 20
        level = stats.levels[0]
        assert (level.kind, level.subvolumes, level.internal_nodes, level.leaf_nodes) == ("G", 1, 2, 1)
        assert level.words == 19

    def test_raw_over_dag(self):
        plan = plan_of("R(1³) G(2)")
        grid = np.full((8, 8, 8), RED, dtype=np.uint32)
        scoped = volume_stats(construct_volume(plan, DenseGridSource(grid)), plan)
        shared = volume_stats(
            construct_volume(plan, DenseGridSource(grid), BuildOptions(whole_level_dedup=True)), plan
        )
        assert scoped.levels[0].words == 8
        assert scoped.levels[1].subvolumes == 8
        assert scoped.levels[1].internal_nodes == 16
        assert shared.levels[1].subvolumes == 1
        assert shared.levels[1].internal_nodes == 2

    def test_svo_counts(self):
        grid = np.zeros((2, 2, 2), dtype=np.uint32)
        grid[0, 0, 1] = RED
        grid[1, 1, 1] = RED
        plan = plan_of("S(1)")
        stats = volume_stats(construct_volume(plan, DenseGridSource(grid)), plan)
        level = stats.levels[0]
        assert level.internal_nodes == 1
        assert level.leaf_nodes == 2
        assert level.words == 6

    def test_words_cover_buffer(self, grid16):
        for signature in ("R(2³) S(2)", "D(2³, 2) G(2)", "S(2) R(2³)"):
            plan = plan_of(signature)
            buffer = construct_volume(plan, DenseGridSource(grid16))
            stats = volume_stats(buffer, plan)
            assert sum(level.words for level in stats.levels) + 1 == len(buffer)

    def test_empty_volume(self):
        plan = plan_of("R(2³) G(2)")
        stats = volume_stats(construct_volume(plan, UniformSource((16, 16, 16), 0)), plan)
        assert stats.total_words == 1
        assert all(level.subvolumes == 0 for level in stats.levels)

    def test_as_dict(self):
        plan = plan_of("G(1)")
        stats = volume_stats(construct_volume(plan, UniformSource((2, 2, 2), RED)), plan)
        data = stats.as_dict()
        assert data["resolution"] == (2, 2, 2)
        assert data["levels"][0]["kind"] == "G"
