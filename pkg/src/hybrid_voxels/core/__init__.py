"""Core volume engine for Hybrid Voxels.

Exposes the format, encoding, construction and traversal building blocks from
a single module.

Public API:
    - ``parse_format`` / ``format_to_string`` / ``compile_plan``: signatures and plans
    - ``encode3`` / ``decode3`` / ``morton_children``: Morton order
    - ``VolumeBuffer`` and the node codecs: bit-exact buffer layouts
    - ``save_hvox`` / ``load_hvox``: ``.hvox`` files
    - ``VoxelSource`` and in-memory sources: the Morton access contract
    - ``construct_volume`` / ``BuildOptions`` / ``MemoryMeter``: construction
    - ``Tracer`` / ``intersect_root`` / ``point_query``: traversal
    - ``volume_stats``: structural statistics

Importing this module performs only imports.
"""

from .buffer import (
    EMPTY,
    MAX_WORDS,
    SVDAGNode,
    SVMasks,
    SVONode,
    VolumeBuffer,
    df_entry,
    encode_svdag_node,
    pack_rgba,
    raw_entry,
    raw_index,
    read_svdag_node,
    read_svo_node,
    svo_child_offset,
    unpack_rgba,
    write_svdag_node,
    write_svo_node,
)
from .construct import BuildOptions, MemoryMeter, construct_volume, l1_distance_transform
from .format import (
    DFLevel,
    FormatPlan,
    HybridFormat,
    LevelDesc,
    RawLevel,
    SVDAGLevel,
    SVOLevel,
    compile_plan,
    format_to_string,
    parse_format,
)
from .hvox import hvox_size, load_hvox, save_hvox
from .intersect import (
    Hit,
    Ray,
    TraceOptions,
    Tracer,
    TraversalTrace,
    dda_level,
    intersect_root,
    point_query,
    traverse_sv,
)
from .morton import decode3, encode3, morton_children
from .source import BlockKind, BlockState, DenseGridSource, UniformSource, VoxelSource, sample_voxel
from .stats import VolumeStats, volume_stats

__all__ = [
    "EMPTY",
    "MAX_WORDS",
    "SVDAGNode",
    "SVMasks",
    "SVONode",
    "VolumeBuffer",
    "df_entry",
    "encode_svdag_node",
    "pack_rgba",
    "raw_entry",
    "raw_index",
    "read_svdag_node",
    "read_svo_node",
    "svo_child_offset",
    "unpack_rgba",
    "write_svdag_node",
    "write_svo_node",
    "BuildOptions",
    "MemoryMeter",
    "construct_volume",
    "l1_distance_transform",
    "DFLevel",
    "FormatPlan",
    "HybridFormat",
    "LevelDesc",
    "RawLevel",
    "SVDAGLevel",
    "SVOLevel",
    "compile_plan",
    "format_to_string",
    "parse_format",
    "hvox_size",
    "load_hvox",
    "save_hvox",
    "Hit",
    "Ray",
    "TraceOptions",
    "Tracer",
    "TraversalTrace",
    "dda_level",
    "intersect_root",
    "point_query",
    "traverse_sv",
    "decode3",
    "encode3",
    "morton_children",
    "BlockKind",
    "BlockState",
    "DenseGridSource",
    "UniformSource",
    "VoxelSource",
    "sample_voxel",
    "VolumeStats",
    "volume_stats",
]
