# Copyright 2025 Softwell S.r.l.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Pytest configuration for Hybrid Voxels tests."""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

# Plans over a 16^3 volume covering every base format and 1-3 levels.
PLANS_16 = (
    "R(4³)",
    "D(4³, 3)",
    "S(4)",
    "G(4)",
    "R(2³) R(2³)",
    "R(2³) S(2)",
    "R(2³) G(2)",
    "D(2³, 2) G(2)",
    "S(2) G(2)",
    "G(2) R(2³)",
    "S(1) S(3)",
    "R(1³) R(1³) G(2)",
    "D(1³, 1) R(1³) S(2)",
    "G(1) D(2³, 3) R(1³)",
)

PALETTE = np.array(
    [0xFF0000FF, 0xFF00FF00, 0xFFFF0000, 0x80FFFFFF, 0x01000000, 0xFF204060], dtype=np.uint32
)


def random_grid(rng: np.random.Generator, shape=(16, 16, 16), density=0.12, blocks=True) -> np.ndarray:
    """Random voxel grid ``uint32[z, y, x]`` from a small palette.

    With ``blocks`` a few solid single-colour boxes are added, so that empty,
    uniform and mixed regions all occur.
    """
    occupied = rng.random(shape) < density
    grid = np.where(occupied, rng.choice(PALETTE, size=shape), 0).astype(np.uint32)
    if blocks:
        for _ in range(3):
            lo = [int(rng.integers(0, s)) for s in shape]
            hi = [min(s, lo_k + int(rng.integers(1, 6))) for lo_k, s in zip(lo, shape, strict=True)]
            grid[lo[0] : hi[0], lo[1] : hi[1], lo[2] : hi[2]] = rng.choice(PALETTE)
    return grid


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20251017)


@pytest.fixture
def grid16(rng) -> np.ndarray:
    return random_grid(rng)
