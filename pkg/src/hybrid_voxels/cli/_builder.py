# Copyright 2025 Softwell S.r.l. - Apache License 2.0
"""Builds a click command group from an object's ``@command`` methods."""

from __future__ import annotations

import enum
import functools
import inspect
import logging
import sys
from typing import Any, get_type_hints

import click
from pydantic import ValidationError, validate_call

from hybrid_voxels.exceptions import HybridVoxelError

from ._decorators import COMMAND_MARKER
from ._formatters import OutputFormatter
from ._logging import CommandLogger
from ._type_map import ParamConverter


def _cli_name(name: str) -> str:
    """Convert a Python identifier to CLI convention (underscores to hyphens)."""
    return name.replace("_", "-")


def error_message(exc: Exception) -> str:
    """One-line description of a library or validation error."""
    if isinstance(exc, ValidationError):
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ())) or "input"
        extra = f" (+{exc.error_count() - 1} more)" if exc.error_count() > 1 else ""
        return f"invalid {where}: {first['msg']}{extra}"
    return str(exc)


def configure_verbosity(verbose: int) -> None:
    """``-v`` logs INFO, ``-vv`` DEBUG, on stderr."""
    if verbose <= 0:
        return
    level = logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("hybrid_voxels").setLevel(level)


class CliBuilder:
    """Generates a click Group from the marked methods of an instance."""

    def __init__(
        self,
        instance: Any,
        *,
        output_format: str = "auto",
        command_logger: CommandLogger | None = None,
    ):
        self._instance = instance
        self._formatter = OutputFormatter(output_format)
        self._converter = ParamConverter()
        self._logger = command_logger or CommandLogger()

    def build(self, name: str | None = None) -> click.Group:
        """Build the root click.Group with ``--verbose/-v`` and one command per marked method."""
        root_name = name or self._instance.__class__.__name__.lower()
        root = click.Group(
            name=root_name,
            help=inspect.getdoc(self._instance) or "",
            params=[click.Option(["--verbose", "-v"], count=True, help="-v INFO, -vv DEBUG logging on stderr")],
            callback=configure_verbosity,
        )
        for method_name, marker in self._marked_methods():
            root.add_command(self._make_command(method_name, marker))
        return root

    def _marked_methods(self) -> list[tuple[str, dict[str, Any]]]:
        """Marked methods in definition order, base classes first."""
        found: dict[str, dict[str, Any]] = {}
        for klass in reversed(type(self._instance).__mro__):
            for attr, value in vars(klass).items():
                marker = getattr(value, COMMAND_MARKER, None)
                if marker is not None:
                    found[attr] = marker
        return list(found.items())

    def _make_command(self, method_name: str, marker: dict[str, Any]) -> click.Command:
        """Create a click.Command from a single marked method; arguments go through ``validate_call``."""
        name = _cli_name(marker["name"])
        handler = getattr(self._instance, method_name)
        validated = functools.partial(validate_call(getattr(type(self._instance), method_name)), self._instance)
        params = self._converter.to_click_params(handler, marker.get("short"))
        enum_params = self._enum_param_map(handler)
        call = self._logger.wrap(name, validated, marker)
        formatter = self._formatter

        def callback(**kwargs: Any) -> None:
            for param_name, enum_type in enum_params.items():
                if isinstance(kwargs.get(param_name), str):
                    kwargs[param_name] = enum_type[kwargs[param_name]]
            try:
                result = call(**kwargs)
            except (HybridVoxelError, ValueError) as exc:
                raise click.ClickException(error_message(exc)) from exc
            output = formatter.format(result)
            if output is not None:
                click.echo(output)

        return click.Command(
            name=name,
            callback=callback,
            params=params,
            help=inspect.getdoc(handler) or "",
        )

    def _enum_param_map(self, handler: Any) -> dict[str, type[enum.Enum]]:
        """Return {param_name: EnumType} for parameters annotated with an Enum."""
        try:
            hints = get_type_hints(handler, include_extras=True)
        except Exception:
            return {}
        hints.pop("return", None)
        return {
            name: hint
            for name, hint in hints.items()
            if isinstance(hint, type) and issubclass(hint, enum.Enum)
        }
