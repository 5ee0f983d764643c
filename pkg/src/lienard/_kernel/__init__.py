"""Integrator kernel with two interchangeable backends.

`_core` is a compiled extension; `_fallback` is the pure-Python reference.
Both expose the same `run_core` and status constants. Selection happens at
import time; set LIENARD_KERNEL=python or LIENARD_KERNEL=compiled to force
one (forcing `compiled` raises if the extension is unavailable).
"""

import os

from . import _fallback

_FORCED = os.environ.get("LIENARD_KERNEL", "").strip().lower()

if _FORCED == "python":
    _impl = _fallback
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _FORCED == "compiled":
            raise ImportError(
                "LIENARD_KERNEL=compiled but the compiled kernel is not built"
            ) from None
        _impl = _fallback

STATUS_DONE = _fallback.STATUS_DONE
STATUS_EVENT = _fallback.STATUS_EVENT
STATUS_UNDERFLOW = _fallback.STATUS_UNDERFLOW
STATUS_BLOWUP = _fallback.STATUS_BLOWUP
STATUS_MAXSTEPS = _fallback.STATUS_MAXSTEPS

EVENT_NONE = _fallback.EVENT_NONE
EVENT_VLINE = _fallback.EVENT_VLINE
EVENT_XAXIS_POS = _fallback.EVENT_XAXIS_POS

DIR_INCREASING = _fallback.DIR_INCREASING
DIR_DECREASING = _fallback.DIR_DECREASING
DIR_EITHER = _fallback.DIR_EITHER


def backend_name() -> str:
    return "compiled" if _impl.__name__.endswith("_core") else "python"


def run_core(*args, **kwargs):
    return _impl.run_core(*args, **kwargs)


def use_backend(name: str):
    """Swap the active backend ('python' or 'compiled'); returns the old name."""
    global _impl
    old = backend_name()
    if name == "python":
        _impl = _fallback
    elif name == "compiled":
        from . import _core  # noqa: F811

        _impl = _core
    else:
        raise ValueError(f"unknown backend {name!r}")
    return old
