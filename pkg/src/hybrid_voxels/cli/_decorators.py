# Copyright 2025 Softwell S.r.l. - Apache License 2.0
"""Marker decorator for CLI command methods.

``command(*, name=None, short=None, **kwargs)`` stores a payload on the
function under ``_cli_command`` and returns the function unchanged. The
builder collects marked methods in class definition order.

- ``name``: explicit command name; defaults to the method name with
  underscores turned into hyphens.
- ``short``: map of parameter name to a one-letter short option
  (``{"output": "o"}`` gives ``-o/--output``).
- Extra ``**kwargs`` are kept verbatim (for example ``logging_after=False``).
"""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

__all__ = ["command", "COMMAND_MARKER"]

COMMAND_MARKER = "_cli_command"


def command(
    *,
    name: str | None = None,
    short: dict[str, str] | None = None,
    **kwargs: Any,
) -> Callable[[Callable], Callable]:
    """Mark a method as a CLI command.

    Example::

        class Tools:
            @command(short={"output": "o"})
            def construct(self, mesh: Path, signature: str, output: Path = Path("out.hvox")):
                ...
    """

    def decorator(func: Callable) -> Callable:
        payload: dict[str, Any] = {"name": name or func.__name__, "short": dict(short or {})}
        payload.update(kwargs)
        setattr(func, COMMAND_MARKER, payload)
        return func

    return decorator
