# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Hybrid format signatures: parsing, printing and plan compilation.

A hybrid format is an ordered list of levels. Level 1 is the highest: each of
its voxels is a sub-volume stored in the format of level 2, and so on down to
the last level, whose voxels are single voxels. Four base formats exist::

    R(w, h, d)      Raw grid of 2^w x 2^h x 2^d voxels
    D(w, h, d, m)   the same grid plus per-voxel L1 distance clamped to m
    S(l)            sparse voxel octree of depth l (2^l per axis)
    G(l)            sparse voxel DAG of depth l (2^l per axis)

Grammar (whitespace is allowed inside parentheses and required between levels)::

    format := level (WS level)*
    level  := ('R'|'D'|'S'|'G') '(' param (',' param)* ')'
    param  := int | int '³' | int '^3'

The cube suffix is shorthand: ``R(4³)`` is ``R(4, 4, 4)`` and ``D(4³, 6)`` is
``D(4, 4, 4, 6)``. Parameters are log2 extents, never raw extents.

``compile_plan`` validates the composition rules (every level but the first is
cubic, sparse depths and DF distances are positive, total resolution per axis
at most 2^20) and derives the bookkeeping shared by construction and
intersection.

Example::

    plan = compile_plan(parse_format("R(1, 0, 2) R(2, 2, 2)"))
    plan.resolution        # (8, 4, 16)
    plan.cumulative[0]     # 4: one level-1 voxel covers 4^3 finest voxels
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TypeAlias

from hybrid_voxels.exceptions import FormatSyntaxError, FormatValidationError

__all__ = [
    "RawLevel",
    "DFLevel",
    "SVOLevel",
    "SVDAGLevel",
    "LevelDesc",
    "HybridFormat",
    "FormatPlan",
    "MAX_AXIS_LOG2",
    "parse_format",
    "format_to_string",
    "compile_plan",
]

MAX_AXIS_LOG2 = 20
"""Total resolution per axis is capped at 2^20 so Morton codes fit in 60 bits."""


@dataclass(frozen=True, slots=True)
class RawLevel:
    """Raw grid level: one terminating integer per voxel."""

    w: int
    h: int
    d: int

    @property
    def kind(self) -> str:
        return "R"

    @property
    def params(self) -> tuple[int, ...]:
        return (self.w, self.h, self.d)

    @property
    def extent(self) -> tuple[int, int, int]:
        return (1 << self.w, 1 << self.h, 1 << self.d)


@dataclass(frozen=True, slots=True)
class DFLevel:
    """Distance-field level: Raw grid plus an L1 distance clamped to ``m``."""

    w: int
    h: int
    d: int
    m: int

    @property
    def kind(self) -> str:
        return "D"

    @property
    def params(self) -> tuple[int, ...]:
        return (self.w, self.h, self.d, self.m)

    @property
    def extent(self) -> tuple[int, int, int]:
        return (1 << self.w, 1 << self.h, 1 << self.d)


@dataclass(frozen=True, slots=True)
class SVOLevel:
    """Sparse voxel octree level of depth ``l``."""

    l: int  # noqa: E741 - the format letter is part of the signature vocabulary

    @property
    def kind(self) -> str:
        return "S"

    @property
    def params(self) -> tuple[int, ...]:
        return (self.l,)

    @property
    def extent(self) -> tuple[int, int, int]:
        side = 1 << self.l
        return (side, side, side)


@dataclass(frozen=True, slots=True)
class SVDAGLevel:
    """Sparse voxel DAG level of depth ``l`` (deduplicated octree)."""

    l: int  # noqa: E741

    @property
    def kind(self) -> str:
        return "G"

    @property
    def params(self) -> tuple[int, ...]:
        return (self.l,)

    @property
    def extent(self) -> tuple[int, int, int]:
        side = 1 << self.l
        return (side, side, side)


LevelDesc: TypeAlias = RawLevel | DFLevel | SVOLevel | SVDAGLevel

_LEVEL_TYPES: dict[str, tuple[type, int]] = {
    "R": (RawLevel, 3),
    "D": (DFLevel, 4),
    "S": (SVOLevel, 1),
    "G": (SVDAGLevel, 1),
}


@dataclass(frozen=True, slots=True)
class HybridFormat:
    """Ordered list of level descriptors; ``levels[0]`` is level 1 (the highest)."""

    levels: tuple[LevelDesc, ...]

    def __str__(self) -> str:
        return format_to_string(self)


@dataclass(frozen=True, slots=True)
class FormatPlan:
    """Validated format plus derived per-level bookkeeping.

    Attributes:
        format: The validated format.
        extents: Per level, the number of voxels per axis of that level.
        cumulative: Per level, the side (in finest voxels) of the cube covered
            by one voxel of that level. Only the first level may be non-cubic,
            so this is always a single integer; the last level's is 1.
        resolution: Total resolution (x, y, z) in finest voxels.
    """

    format: HybridFormat
    extents: tuple[tuple[int, int, int], ...]
    cumulative: tuple[int, ...]
    resolution: tuple[int, int, int]

    @property
    def levels(self) -> tuple[LevelDesc, ...]:
        return self.format.levels

    @property
    def depth(self) -> int:
        """Number of levels."""
        return len(self.format.levels)

    @property
    def signature(self) -> str:
        return format_to_string(self.format)

    def span(self, index: int) -> tuple[int, int, int]:
        """Finest-voxel extent of one sub-volume stored at level ``index`` (0-based)."""
        ex, ey, ez = self.extents[index]
        c = self.cumulative[index]
        return (ex * c, ey * c, ez * c)


class _SignatureParser:
    """Recursive-descent parser over a signature string."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def fail(self, reason: str, position: int | None = None) -> FormatSyntaxError:
        return FormatSyntaxError(self.text, self.pos if position is None else position, reason)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.fail(f"expected '{char}', found {found}")
        self.pos += 1

    def parse(self) -> HybridFormat:
        levels: list[LevelDesc] = []
        self.skip_ws()
        if self.at_end():
            raise self.fail("empty signature")
        while not self.at_end():
            levels.append(self.parse_level())
            start = self.pos
            self.skip_ws()
            if not self.at_end() and self.pos == start:
                raise self.fail("expected whitespace between levels")
        return HybridFormat(tuple(levels))

    def parse_level(self) -> LevelDesc:
        start = self.pos
        letter = self.peek()
        if letter not in _LEVEL_TYPES:
            found = repr(letter) if letter else "end of input"
            raise self.fail(f"expected one of R, D, S, G, found {found}")
        self.pos += 1
        self.skip_ws()
        self.expect("(")
        params: list[int] = []
        while True:
            self.skip_ws()
            params.extend(self.parse_param())
            self.skip_ws()
            if self.peek() == ",":
                self.pos += 1
                continue
            self.expect(")")
            break
        cls, arity = _LEVEL_TYPES[letter]
        if len(params) != arity:
            raise self.fail(f"{letter} takes {arity} parameter(s), got {len(params)}", start)
        return cls(*params)

    def parse_param(self) -> list[int]:
        start = self.pos
        if self.peek() == "-":
            raise self.fail("negative parameter")
        while self.peek().isdigit() and self.peek().isascii():
            self.pos += 1
        if self.pos == start:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.fail(f"expected integer parameter, found {found}")
        if self.peek() == ".":
            raise self.fail("non-integer parameter", start)
        value = int(self.text[start : self.pos])
        if self.peek() == "³":
            self.pos += 1
            return [value, value, value]
        if self.text.startswith("^3", self.pos):
            self.pos += 2
            return [value, value, value]
        return [value]


def parse_format(signature: str) -> HybridFormat:
    """Parse a signature such as ``"R(1, 0, 2) D(2, 2, 2, 4)"``.

    Raises:
        FormatSyntaxError: on empty input, unknown letters, wrong arity,
            negative or non-integer parameters.
    """
    return _SignatureParser(signature).parse()


def format_to_string(fmt: HybridFormat) -> str:
    """Canonical signature text; ``parse_format`` is its exact inverse."""
    return " ".join(
        f"{level.kind}({', '.join(str(p) for p in level.params)})" for level in fmt.levels
    )


def compile_plan(fmt: HybridFormat) -> FormatPlan:
    """Validate ``fmt`` and derive per-level extents, cumulative sizes and resolution.

    Raises:
        FormatValidationError: zero levels, a non-cubic level after the first,
            a sparse level of depth 0, a DF level with ``m == 0`` or a total
            resolution above 2^20 per axis.
    """
    if not fmt.levels:
        raise FormatValidationError("format has no levels")
    for index, level in enumerate(fmt.levels, start=1):
        if isinstance(level, (SVOLevel, SVDAGLevel)) and level.l < 1:
            raise FormatValidationError("sparse level depth must be at least 1", index)
        if isinstance(level, DFLevel) and level.m < 1:
            raise FormatValidationError("distance field max distance must be at least 1", index)
        if index > 1 and len(set(level.extent)) != 1:
            raise FormatValidationError(
                "every level but the first must be a cubic power-of-two grid", index
            )

    extents = tuple(level.extent for level in fmt.levels)
    cumulative: list[int] = []
    side = 1
    for extent in reversed(extents):
        cumulative.append(side)
        side *= extent[0]
    cumulative.reverse()

    first = extents[0]
    resolution = (first[0] * cumulative[0], first[1] * cumulative[0], first[2] * cumulative[0])
    limit = 1 << MAX_AXIS_LOG2
    if max(resolution) > limit:
        raise FormatValidationError(
            f"total resolution {resolution} exceeds 2^{MAX_AXIS_LOG2} per axis "
            f"(log2 {math.log2(max(resolution)):.0f})"
        )
    return FormatPlan(
        format=fmt,
        extents=extents,
        cumulative=tuple(cumulative),
        resolution=resolution,
    )
