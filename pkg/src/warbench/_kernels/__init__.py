"""Kernel backend selection.

Prefers the compiled extension, falls back to the numpy twins when the
extension was not built. ``WARBENCH_FORCE_FALLBACK=1`` forces the numpy
backend (used by the benchmark and backend-agreement tests).
"""

import os

from . import fallback

try:
    from . import _corekernels as compiled
except ImportError:
    compiled = None

if compiled is not None and os.environ.get("WARBENCH_FORCE_FALLBACK") != "1":
    _active = compiled
    BACKEND = "compiled"
else:
    _active = fallback
    BACKEND = "fallback"

propagate_terminal = _active.propagate_terminal
propagate_terminal_cstep = _active.propagate_terminal_cstep

__all__ = [
    "BACKEND",
    "compiled",
    "fallback",
    "propagate_terminal",
    "propagate_terminal_cstep",
]
