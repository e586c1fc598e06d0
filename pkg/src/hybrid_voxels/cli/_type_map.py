# Copyright 2025 Softwell S.r.l. - Apache License 2.0
"""Mapping from Python type annotations to click parameter types."""

from __future__ import annotations

import enum
import inspect
from pathlib import Path
from types import UnionType
from typing import Any, Literal, Union, get_args, get_origin, get_type_hints

import click

__all__ = ["ParamConverter"]

# Direct mapping: Python type -> click.ParamType
_SIMPLE_MAP: dict[type, click.ParamType] = {
    str: click.STRING,
    int: click.INT,
    float: click.FLOAT,
    bool: click.BOOL,
    Path: click.Path(path_type=Path),
}


class ParamConverter:
    """Converts handler signature parameters to click parameters."""

    def to_click_params(self, func: Any, short: dict[str, str] | None = None) -> list[click.Parameter]:
        """Extract click parameters from a callable's signature.

        Parameters without default become click.Argument (positional).
        Parameters with default become click.Option; ``short`` adds a
        one-letter alias. ``self`` and ``*args``/``**kwargs`` are skipped.
        """
        short = short or {}
        sig = inspect.signature(func)
        try:
            hints = get_type_hints(func, include_extras=True)
        except Exception:
            hints = {}
        hints.pop("return", None)

        params: list[click.Parameter] = []
        for name, param in sig.parameters.items():
            if name == "self":
                continue
            if param.kind in (inspect.Parameter.VAR_POSITIONAL, inspect.Parameter.VAR_KEYWORD):
                continue
            has_default = param.default is not inspect.Parameter.empty
            params.append(self._make_param(name, hints.get(name), param.default, has_default, short.get(name)))
        return params

    def _make_param(
        self,
        name: str,
        hint: Any,
        default: Any,
        has_default: bool,
        short: str | None,
    ) -> click.Parameter:
        """Build a single click.Argument or click.Option."""
        click_type, is_flag = self._resolve_type(hint)
        cli_name = name.replace("_", "-")
        decls = [f"--{cli_name}"] + ([f"-{short}"] if short else [])

        if is_flag:
            return click.Option(
                [f"--{cli_name}/--no-{cli_name}"],
                default=default if has_default else False,
                show_default=True,
            )

        if not has_default:
            return click.Argument([name], type=click_type)

        if isinstance(default, enum.Enum):
            default = default.name
        return click.Option(
            decls + [name],
            type=click_type,
            default=default,
            show_default=default is not None,
            help=f"({_type_label(hint)})" if hint else None,
        )

    def _resolve_type(self, hint: Any) -> tuple[click.ParamType, bool]:
        """Return ``(click_type, is_flag)``."""
        if hint is None:
            return click.STRING, False

        # Unwrap Optional[X] -> X
        origin = get_origin(hint)
        if origin in (Union, UnionType):
            args = [a for a in get_args(hint) if a is not type(None)]
            if len(args) == 1:
                return self._resolve_type(args[0])

        if hint is bool:
            return click.BOOL, True

        if hint in _SIMPLE_MAP:
            return _SIMPLE_MAP[hint], False

        # Literal["a", "b"] -> Choice
        if origin is Literal:
            return click.Choice([str(v) for v in get_args(hint)]), False

        # Enum -> Choice of member names
        if isinstance(hint, type) and issubclass(hint, enum.Enum):
            return click.Choice([m.name for m in hint]), False

        # tuple[float, float, float] -> fixed-arity option
        if origin is tuple:
            items = [a for a in get_args(hint) if a is not Ellipsis]
            return click.Tuple([_SIMPLE_MAP.get(a, click.STRING) for a in items]), False

        return click.STRING, False


def _type_label(hint: Any) -> str:
    """Human-readable label for a type hint."""
    origin = get_origin(hint)
    if origin in (Union, UnionType):
        return " | ".join(_type_label(a) for a in get_args(hint) if a is not type(None))
    if origin is tuple:
        return " ".join(_type_label(a) for a in get_args(hint)).upper()
    if hasattr(hint, "__name__"):
        return hint.__name__
    return str(hint)
