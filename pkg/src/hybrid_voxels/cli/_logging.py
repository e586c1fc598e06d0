# Copyright 2025 Softwell S.r.l. - Apache License 2.0
"""Start/end logging with timing around CLI commands.

Configuration keys (global, or per command as ``logging_<key>`` on
:func:`command`):
    - ``enabled``: gate the logger entirely (default True)
    - ``before``: emit ``"<command> start"`` (default True)
    - ``after``: emit ``"<command> end (X ms)"`` (default True)
    - ``log``: use ``logger.info()`` when the logger has handlers (default True)
    - ``print``: always use ``print()`` (default False)

Messages go to the ``hybrid_voxels.cli`` logger. With no handler
configured anywhere they are dropped, so command output on stdout stays
machine readable.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from typing import Any

from genro_toolbox import dictExtract

__all__ = ["CommandLogger"]

_DEFAULTS = {"enabled": True, "before": True, "after": True, "log": True, "print": False}


class CommandLogger:
    """Wraps command handlers with start/end messages."""

    __slots__ = ("_logger", "_config")

    def __init__(self, logger: logging.Logger | None = None, **config: Any) -> None:
        self._logger = logger or logging.getLogger("hybrid_voxels.cli")
        self._config = dict(_DEFAULTS)
        self.configure(**config)

    def configure(self, **config: Any) -> None:
        """Update global switches; unknown keys raise ``KeyError``."""
        for key, value in config.items():
            if key not in _DEFAULTS:
                raise KeyError(f"unknown logging option '{key}'")
            self._config[key] = bool(value)

    def effective_config(self, marker: dict[str, Any] | None = None) -> dict[str, bool]:
        """Global switches overridden by the ``logging_*`` keys of a command marker."""
        local = dictExtract(marker or {}, "logging_", slice_prefix=True, pop=False)
        cfg = self._config | {k: bool(v) for k, v in local.items() if k in _DEFAULTS and v is not None}
        return cfg

    def _emit(self, message: str, cfg: dict[str, bool]) -> None:
        if cfg["print"]:
            print(message)
            return
        if cfg["log"] and self._logger.hasHandlers():
            self._logger.info(message)

    def wrap(self, name: str, handler: Callable, marker: dict[str, Any] | None = None) -> Callable:
        """Return ``handler`` wrapped with the configured messages."""
        cfg = self.effective_config(marker)
        if not cfg["enabled"]:
            return handler

        def logged(*args: Any, **kwargs: Any) -> Any:
            if cfg["before"]:
                self._emit(f"{name} start", cfg)
            t0 = time.perf_counter()
            result = handler(*args, **kwargs)
            elapsed = (time.perf_counter() - t0) * 1000
            if cfg["after"]:
                self._emit(f"{name} end ({elapsed:.2f} ms)", cfg)
            return result

        return logged
