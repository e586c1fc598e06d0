# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""Word-addressable volume buffer and bit-exact node encodings.

A hybrid volume is serialized into one growable array of 32-bit words. Word 0
is the root pointer: it is reserved when construction starts and patched once
the root sub-volume has been written, since children are always emitted before
their parents. An offset of 0 therefore never addresses a sub-volume and doubles
as the empty marker.

Layouts (all little-endian 32-bit words):

- Voxel: ``R | G << 8 | B << 16 | A << 24``; the all-zero word is empty.
- Raw sub-volume: one terminating integer per voxel, x-fastest
  (``index = x + W * (y + H * z)``).
- DF sub-volume: two words per voxel, terminating integer then L1 distance,
  interleaved (``base + 2 * index`` and ``base + 2 * index + 1``).
- SVO node: two words, ``first`` then packed masks. ``first`` is the offset of
  the first of the contiguously stored child nodes, or a terminating integer
  for leaf nodes. Child ``i`` lives at ``first + 2 * popcount(valid & ((1 << i) - 1))``.
- SVDAG node: a leaf is one word (terminating integer); an internal node is the
  packed masks word followed by one child pointer per valid child, in child
  index order (1 to 9 words).
- Masks word: valid mask in bits 0-7, leaf mask in bits 8-15, bits 16-31 zero.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from hybrid_voxels.exceptions import BufferOverflowError, CoordinateRangeError

__all__ = [
    "MAX_WORDS",
    "EMPTY",
    "pack_rgba",
    "unpack_rgba",
    "VolumeBuffer",
    "SVMasks",
    "SVONode",
    "SVDAGNode",
    "svo_child_offset",
    "read_svo_node",
    "write_svo_node",
    "encode_svdag_node",
    "read_svdag_node",
    "write_svdag_node",
    "raw_index",
    "raw_entry",
    "df_entry",
]

MAX_WORDS = 1 << 32
EMPTY = 0


def pack_rgba(r: int, g: int, b: int, a: int = 255) -> int:
    """Pack 8-bit channels into a voxel word (R in the low byte)."""
    return (r & 0xFF) | ((g & 0xFF) << 8) | ((b & 0xFF) << 16) | ((a & 0xFF) << 24)


def unpack_rgba(word: int) -> tuple[int, int, int, int]:
    """Split a voxel word into ``(r, g, b, a)``."""
    return (word & 0xFF, (word >> 8) & 0xFF, (word >> 16) & 0xFF, (word >> 24) & 0xFF)


class VolumeBuffer:
    """Growable array of 32-bit words backed by numpy.

    Single writer during construction; treat it as immutable afterwards.
    ``max_words`` defaults to the 2^32 addressing limit and is lowered in
    tests to exercise overflow handling.
    """

    __slots__ = ("_data", "_size", "_shared", "max_words")

    def __init__(self, capacity: int = 1024, *, max_words: int = MAX_WORDS) -> None:
        self._data = np.zeros(max(capacity, 1), dtype=np.uint32)
        self._size = 0
        self._shared: list[int] | None = None
        self.max_words = max_words

    @classmethod
    def from_words(cls, words: Sequence[int] | np.ndarray, *, max_words: int = MAX_WORDS) -> VolumeBuffer:
        """Wrap an existing word sequence (copied)."""
        array = np.asarray(words, dtype=np.uint32)
        buffer = cls(len(array), max_words=max_words)
        buffer.append(array)
        return buffer

    def __len__(self) -> int:
        return self._size

    def __getitem__(self, offset: int) -> int:
        if not 0 <= offset < self._size:
            raise CoordinateRangeError((offset,), (self._size,))
        return int(self._data[offset])

    def __setitem__(self, offset: int, word: int) -> None:
        if not 0 <= offset < self._size:
            raise CoordinateRangeError((offset,), (self._size,))
        self._data[offset] = word
        self._shared = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VolumeBuffer):
            return NotImplemented
        return bool(np.array_equal(self.words, other.words))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"VolumeBuffer({self._size} words)"

    @property
    def words(self) -> np.ndarray:
        """Read-only view of the used words."""
        view = self._data[: self._size]
        view.flags.writeable = False
        return view

    @property
    def nbytes(self) -> int:
        return 4 * self._size

    def tolist(self) -> list[int]:
        return self._data[: self._size].tolist()

    def shared_list(self) -> list[int]:
        """Used words as a Python list, built once and reused until the next write.

        Readers share the returned list and must not modify it.
        """
        if self._shared is None:
            self._shared = self._data[: self._size].tolist()
        return self._shared

    def append(self, words: Iterable[int] | np.ndarray) -> int:
        """Append words and return the offset of the first one.

        Raises:
            BufferOverflowError: if the buffer would exceed ``max_words``.
        """
        array = np.asarray(words if isinstance(words, np.ndarray) else list(words), dtype=np.uint32)
        offset = self._size
        end = offset + len(array)
        if end > self.max_words:
            raise BufferOverflowError(end, self.max_words)
        if end > len(self._data):
            grown = np.zeros(max(end, 2 * len(self._data)), dtype=np.uint32)
            grown[: self._size] = self._data[: self._size]
            self._data = grown
        self._data[offset:end] = array
        self._size = end
        self._shared = None
        return offset

    def check_range(self, offset: int, count: int = 1) -> None:
        if offset < 0 or offset + count > self._size:
            raise CoordinateRangeError((offset,), (self._size,))


@dataclass(frozen=True, slots=True)
class SVMasks:
    """Per-node child masks: ``valid`` marks non-empty octants, ``leaf`` marks
    octants holding a terminating integer instead of further nodes."""

    valid: int = 0
    leaf: int = 0

    def pack(self) -> int:
        return (self.valid & 0xFF) | ((self.leaf & 0xFF) << 8)

    @classmethod
    def unpack(cls, word: int) -> SVMasks:
        return cls(valid=word & 0xFF, leaf=(word >> 8) & 0xFF)

    def rank(self, child: int) -> int:
        """Number of valid children with a lower index than ``child``."""
        return (self.valid & ((1 << child) - 1)).bit_count()


@dataclass(frozen=True, slots=True)
class SVONode:
    first: int
    masks: SVMasks


@dataclass(frozen=True, slots=True)
class SVDAGNode:
    """Decoded SVDAG node: ``leaf`` is set for leaf nodes, ``masks``/``children`` otherwise."""

    masks: SVMasks | None
    children: tuple[int, ...] = ()
    leaf: int | None = None

    @property
    def size(self) -> int:
        return 1 if self.leaf is not None else 1 + len(self.children)


def svo_child_offset(first: int, masks: SVMasks, child: int) -> int:
    """Offset of valid child ``child`` among contiguously stored 2-word nodes."""
    return first + 2 * masks.rank(child)


def read_svo_node(buffer: VolumeBuffer, offset: int) -> SVONode:
    buffer.check_range(offset, 2)
    return SVONode(first=buffer[offset], masks=SVMasks.unpack(buffer[offset + 1]))


def write_svo_node(buffer: VolumeBuffer, offset: int, node: SVONode) -> None:
    buffer.check_range(offset, 2)
    buffer[offset] = node.first
    buffer[offset + 1] = node.masks.pack()


def encode_svdag_node(node: SVDAGNode) -> list[int]:
    """Words of an SVDAG node, also used as its deduplication key."""
    if node.leaf is not None:
        return [node.leaf]
    masks = node.masks or SVMasks()
    if masks.valid.bit_count() != len(node.children):
        raise ValueError(
            f"SVDAG node has {len(node.children)} children for valid mask {masks.valid:#04x}"
        )
    return [masks.pack(), *node.children]


def read_svdag_node(buffer: VolumeBuffer, offset: int, *, is_leaf: bool) -> SVDAGNode:
    """Decode the node at ``offset``; leafness comes from the parent's leaf mask."""
    buffer.check_range(offset, 1)
    if is_leaf:
        return SVDAGNode(masks=None, leaf=buffer[offset])
    masks = SVMasks.unpack(buffer[offset])
    count = masks.valid.bit_count()
    buffer.check_range(offset, 1 + count)
    return SVDAGNode(
        masks=masks, children=tuple(buffer[offset + 1 + i] for i in range(count))
    )


def write_svdag_node(buffer: VolumeBuffer, offset: int, node: SVDAGNode) -> None:
    words = encode_svdag_node(node)
    buffer.check_range(offset, len(words))
    for i, word in enumerate(words):
        buffer[offset + i] = word


def raw_index(x: int, y: int, z: int, extent: Sequence[int]) -> int:
    """x-fastest linear index inside a grid of ``extent`` voxels."""
    w, h, d = extent
    if not (0 <= x < w and 0 <= y < h and 0 <= z < d):
        raise CoordinateRangeError((x, y, z), (w, h, d))
    return x + w * (y + h * z)


def raw_entry(buffer: VolumeBuffer, base: int, index: int, count: int) -> int:
    """Terminating integer ``index`` of a Raw sub-volume of ``count`` voxels at ``base``."""
    if not 0 <= index < count:
        raise CoordinateRangeError((index,), (count,))
    return buffer[base + index]


def df_entry(buffer: VolumeBuffer, base: int, index: int, count: int) -> tuple[int, int]:
    """``(terminating integer, L1 distance)`` of DF voxel ``index``."""
    if not 0 <= index < count:
        raise CoordinateRangeError((index,), (count,))
    return buffer[base + 2 * index], buffer[base + 2 * index + 1]
