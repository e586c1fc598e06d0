"""Hybrid Voxels - composable voxel formats for Python.

A hybrid format stacks Raw grid, distance-field, SVO and SVDAG levels into
one hierarchy over a volume. Volumes are built out-of-core from triangle
meshes in Morton order, stored as a flat buffer of 32-bit words, saved as
``.hvox`` files and ray traced on the CPU.

Public exports:
    - ``parse_format`` / ``compile_plan``: signature text to a compiled plan
    - ``construct_volume`` / ``BuildOptions``: build a buffer from a voxel source
    - ``ChunkedVoxelSource`` / ``load_mesh``: voxelize a mesh chunk by chunk
    - ``Tracer`` / ``Ray`` / ``point_query``: ray and point queries
    - ``save_hvox`` / ``load_hvox``: ``.hvox`` files
    - ``volume_stats``: per-level structure counts
    - Exceptions: ``HybridVoxelError`` and its subclasses

Example::

    from hybrid_voxels import (
        ChunkedVoxelSource, Ray, Tracer, compile_plan, construct_volume,
        load_mesh, parse_format,
    )

    plan = compile_plan(parse_format("R(4³) G(5)"))
    source = ChunkedVoxelSource(load_mesh("bunny.obj"), plan.resolution)
    buffer = construct_volume(plan, source)
    hit = Tracer(buffer, plan).intersect(Ray((64, 64, -50), (0, 0, 1)))
"""

from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as get_version

try:
    __version__ = get_version("hybrid-voxels")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.0.0"

from .core import (
    BuildOptions,
    FormatPlan,
    HybridFormat,
    Ray,
    TraceOptions,
    Tracer,
    VolumeBuffer,
    compile_plan,
    construct_volume,
    format_to_string,
    load_hvox,
    parse_format,
    point_query,
    save_hvox,
    volume_stats,
)
from .exceptions import (
    BufferOverflowError,
    CoordinateRangeError,
    FormatSyntaxError,
    FormatValidationError,
    HvoxFormatError,
    HybridVoxelError,
    MeshError,
    MortonOrderError,
    ResolutionMismatchError,
    TraversalError,
)
from .voxelizer import ChunkedVoxelSource, Mesh, load_mesh

__all__ = [
    "BuildOptions",
    "FormatPlan",
    "HybridFormat",
    "Ray",
    "TraceOptions",
    "Tracer",
    "VolumeBuffer",
    "compile_plan",
    "construct_volume",
    "format_to_string",
    "load_hvox",
    "parse_format",
    "point_query",
    "save_hvox",
    "volume_stats",
    "ChunkedVoxelSource",
    "Mesh",
    "load_mesh",
    "BufferOverflowError",
    "CoordinateRangeError",
    "FormatSyntaxError",
    "FormatValidationError",
    "HvoxFormatError",
    "HybridVoxelError",
    "MeshError",
    "MortonOrderError",
    "ResolutionMismatchError",
    "TraversalError",
]
