# Copyright 2025 Softwell S.r.l. - Apache License 2.0
"""Command line interface.

Usage::

    hvox validate "R(4³) G(5)"
    hvox construct bunny.obj "R(4³) G(5)" -o bunny.hvox --whole-level-dedup
    hvox render bunny.hvox -o bunny.ppm --restart-sv --camera-position 300 200 -150
    hvox query bunny.hvox 10 20 30
    hvox stats bunny.hvox
    hvox bench manifest.toml -o results.csv

Embedding::

    from hybrid_voxels.cli import VoxelCli

    VoxelCli(output_format="json").run(["validate", "S(5)"])
"""

from __future__ import annotations

from typing import Any

import click

from ._builder import CliBuilder
from ._decorators import command
from ._logging import CommandLogger
from .commands import VoxelCommands

__all__ = ["VoxelCli", "VoxelCommands", "CommandLogger", "command", "main"]


class VoxelCli:
    """Click front-end over a command object.

    Accepts a class or an instance; a class is instantiated without arguments.
    """

    def __init__(
        self,
        target: type | object = VoxelCommands,
        *,
        name: str | None = "hvox",
        output_format: str = "auto",
        command_logger: CommandLogger | None = None,
    ) -> None:
        self._instance = target() if isinstance(target, type) else target
        builder = CliBuilder(self._instance, output_format=output_format, command_logger=command_logger)
        self._click_group = builder.build(name=name)

    @property
    def click_group(self) -> click.Group:
        """The generated click command tree (useful for testing or embedding)."""
        return self._click_group

    def run(self, args: list[str] | None = None, standalone_mode: bool = True) -> Any:
        """Launch the CLI."""
        return self._click_group(args=args, standalone_mode=standalone_mode)


def main(args: list[str] | None = None) -> Any:
    """Console script entry point."""
    return VoxelCli().run(args)
