# Copyright 2025 Softwell S.r.l. - All Rights Reserved
# SPDX-License-Identifier: Apache-2.0
"""Exceptions for Hybrid Voxels.

Every error raised by the library derives from ``HybridVoxelError`` and keeps
the offending values as attributes, so callers (the CLI in particular) can
report them without parsing messages. Errors that describe a bad argument also
inherit the matching builtin (``ValueError``, ``IndexError``).
"""

from __future__ import annotations

from collections.abc import Sequence

__all__ = [
    "HybridVoxelError",
    "FormatSyntaxError",
    "FormatValidationError",
    "CoordinateRangeError",
    "MortonOrderError",
    "BufferOverflowError",
    "HvoxFormatError",
    "MeshError",
    "ResolutionMismatchError",
    "TraversalError",
]


class HybridVoxelError(Exception):
    """Base class of every error raised by hybrid_voxels."""


class FormatSyntaxError(HybridVoxelError, ValueError):
    """Raised when a format signature cannot be parsed.

    Attributes:
        signature: The text being parsed.
        position: Zero-based character offset where parsing failed.
        reason: Short description of the problem.
    """

    def __init__(self, signature: str, position: int, reason: str) -> None:
        self.signature = signature
        self.position = position
        self.reason = reason
        super().__init__(f"{reason} at position {position} in '{signature}'")


class FormatValidationError(HybridVoxelError, ValueError):
    """Raised when a parsed format violates a composition rule.

    Attributes:
        reason: Description of the violated rule.
        level_index: One-based level that broke the rule, or None for format-wide rules.
    """

    def __init__(self, reason: str, level_index: int | None = None) -> None:
        self.reason = reason
        self.level_index = level_index
        where = f" (level {level_index})" if level_index is not None else ""
        super().__init__(f"Invalid format{where}: {reason}")


class CoordinateRangeError(HybridVoxelError, IndexError):
    """Raised when coordinates or offsets fall outside their valid range.

    Attributes:
        coords: The offending coordinates (or a one-element offset tuple).
        bounds: Exclusive upper bounds per component.
    """

    def __init__(self, coords: Sequence[int], bounds: Sequence[int]) -> None:
        self.coords = tuple(coords)
        self.bounds = tuple(bounds)
        super().__init__(f"Coordinates {self.coords} out of range {self.bounds}")


class MortonOrderError(HybridVoxelError):
    """Raised when a voxel source is accessed out of Morton order.

    Attributes:
        code: Morton code of the rejected request.
        last_code: Last Morton code already served.
    """

    def __init__(self, code: int, last_code: int) -> None:
        self.code = code
        self.last_code = last_code
        super().__init__(f"Morton order violated: code {code} requested after {last_code}")


class BufferOverflowError(HybridVoxelError):
    """Raised when a volume buffer would exceed its word addressing limit.

    Attributes:
        requested_words: Buffer length the append would have produced.
        limit: Maximum number of words.
    """

    def __init__(self, requested_words: int, limit: int) -> None:
        self.requested_words = requested_words
        self.limit = limit
        super().__init__(f"Volume buffer of {requested_words} words exceeds limit of {limit}")


class HvoxFormatError(HybridVoxelError):
    """Raised when a ``.hvox`` file is malformed.

    Attributes:
        path: File being read.
        reason: Description of the problem.
    """

    def __init__(self, path: object, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"Invalid hvox file '{path}': {reason}")


class MeshError(HybridVoxelError):
    """Raised when a mesh cannot be loaded or used.

    Attributes:
        path: Source file, or None for in-memory meshes.
        line: One-based line number, or None.
        reason: Description of the problem.
    """

    def __init__(self, reason: str, *, path: object = None, line: int | None = None) -> None:
        self.path = path
        self.line = line
        self.reason = reason
        where = ""
        if path is not None:
            where = f" in '{path}'" + (f" line {line}" if line is not None else "")
        super().__init__(f"Mesh error{where}: {reason}")


class ResolutionMismatchError(HybridVoxelError, ValueError):
    """Raised when a plan and a voxel source disagree on resolution."""

    def __init__(self, plan_resolution: Sequence[int], source_resolution: Sequence[int]) -> None:
        self.plan_resolution = tuple(plan_resolution)
        self.source_resolution = tuple(source_resolution)
        super().__init__(
            f"Plan resolution {self.plan_resolution} does not match "
            f"source resolution {self.source_resolution}"
        )


class TraversalError(HybridVoxelError):
    """Raised when a traversal invariant is broken (corrupt buffer or internal bug)."""
