# Copyright 2025 Softwell S.r.l.
# Licensed under the Apache License, Version 2.0

"""``.hvox`` file serialization.

Layout, every integer little-endian::

    offset  size        field
    0       4           magic b"HVOX"
    4       4 (u32)     version = 1
    8       4 (u32)     signature length n
    12      n           signature, canonical ASCII
    12+n    12 (3 u32)  total resolution x, y, z
    24+n    8 (u64)     payload word count
    32+n    4 * count   payload words (word 0 is the root pointer)

Loading re-parses and re-compiles the signature and checks the stored
resolution against the compiled plan, and the root pointer against the
payload length.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from hybrid_voxels.core.buffer import EMPTY, VolumeBuffer
from hybrid_voxels.core.format import DFLevel, FormatPlan, RawLevel, SVOLevel, compile_plan, parse_format
from hybrid_voxels.exceptions import HvoxFormatError, HybridVoxelError

__all__ = ["HVOX_MAGIC", "HVOX_VERSION", "hvox_bytes", "hvox_size", "save_hvox", "load_hvox"]

HVOX_MAGIC = b"HVOX"
HVOX_VERSION = 1

_PREAMBLE = struct.Struct("<4sII")
_TRAILER = struct.Struct("<IIIQ")


def _root_words(plan: FormatPlan) -> int:
    """Words the root sub-volume occupies at least, counted from the root pointer."""
    level = plan.levels[0]
    w, h, d = plan.extents[0]
    if isinstance(level, RawLevel):
        return w * h * d
    if isinstance(level, DFLevel):
        return 2 * w * h * d
    if isinstance(level, SVOLevel):
        return 2
    return 1


def hvox_size(buffer: VolumeBuffer, plan: FormatPlan) -> int:
    """Size in bytes of the serialized volume."""
    return _PREAMBLE.size + len(plan.signature.encode("ascii")) + _TRAILER.size + 4 * len(buffer)


def hvox_bytes(buffer: VolumeBuffer, plan: FormatPlan) -> bytes:
    """Serialize ``buffer`` and ``plan`` to the ``.hvox`` byte layout."""
    signature = plan.signature.encode("ascii")
    header = _PREAMBLE.pack(HVOX_MAGIC, HVOX_VERSION, len(signature)) + signature
    header += _TRAILER.pack(*plan.resolution, len(buffer))
    return header + buffer.words.astype("<u4").tobytes()


def save_hvox(buffer: VolumeBuffer, plan: FormatPlan, path: str | Path) -> int:
    """Write the volume to ``path``; returns the number of bytes written."""
    data = hvox_bytes(buffer, plan)
    Path(path).write_bytes(data)
    return len(data)


def load_hvox(path: str | Path) -> tuple[VolumeBuffer, FormatPlan]:
    """Read a volume written by :func:`save_hvox`.

    Raises:
        HvoxFormatError: unreadable file, bad magic or version, truncated data, or a header whose
            signature/resolution does not describe a valid plan.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise HvoxFormatError(path, f"cannot read file: {exc.strerror or exc}") from exc
    if len(data) < _PREAMBLE.size:
        raise HvoxFormatError(path, "truncated header")
    magic, version, sig_len = _PREAMBLE.unpack_from(data, 0)
    if magic != HVOX_MAGIC:
        raise HvoxFormatError(path, f"bad magic {magic!r}")
    if version != HVOX_VERSION:
        raise HvoxFormatError(path, f"unsupported version {version}")
    offset = _PREAMBLE.size
    if len(data) < offset + sig_len + _TRAILER.size:
        raise HvoxFormatError(path, "truncated header")
    try:
        signature = data[offset : offset + sig_len].decode("ascii")
        plan = compile_plan(parse_format(signature))
    except (UnicodeDecodeError, HybridVoxelError) as exc:
        raise HvoxFormatError(path, f"invalid signature: {exc}") from exc
    offset += sig_len
    rx, ry, rz, count = _TRAILER.unpack_from(data, offset)
    offset += _TRAILER.size
    if (rx, ry, rz) != plan.resolution:
        raise HvoxFormatError(
            path, f"resolution {(rx, ry, rz)} does not match signature {plan.resolution}"
        )
    if len(data) != offset + 4 * count:
        raise HvoxFormatError(path, f"expected {count} payload words, found {(len(data) - offset) / 4}")
    if count < 1:
        raise HvoxFormatError(path, "payload has no root pointer")
    words = np.frombuffer(data, dtype="<u4", count=count, offset=offset)
    root = int(words[0])
    if root != EMPTY and root + _root_words(plan) > count:
        raise HvoxFormatError(path, f"root pointer {root} outside payload of {count} words")
    return VolumeBuffer.from_words(words), plan
