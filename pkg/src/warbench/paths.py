"""Shock-path enumeration over the four-outcome alphabet.

A path of N steps is encoded as an integer in [0, 4^N): step k's outcome
index is ``(m >> 2k) & 3`` in :data:`warbench.shocks.OUTCOMES` order.
Enumeration is chunked so exact expectations never materialize the full
digit table at once.
"""

from __future__ import annotations

from collections.abc import Iterator

import numpy as np

from .errors import EnumerationLimitError
from .shocks import indices_to_shocks

#: Hard cap on exact enumeration: 4^12 ~= 1.7e7 path atoms.
MAX_ENUM_STEPS = 12

CHUNK = 1 << 16


def n_paths(n_steps: int) -> int:
    """4^n_steps, refusing horizons beyond the enumeration cap."""
    if n_steps > MAX_ENUM_STEPS:
        raise EnumerationLimitError(
            f"exact enumeration supports at most {MAX_ENUM_STEPS} steps "
            f"(got {n_steps}); use the iid worst-case backend instead"
        )
    return 4**n_steps


def decode_digits(indices: np.ndarray, n_steps: int) -> np.ndarray:
    """Outcome-index digits (K, n_steps) for the given path indices."""
    shifts = 2 * np.arange(n_steps, dtype=np.int64)
    return ((np.asarray(indices, dtype=np.int64)[:, None] >> shifts) & 3).astype(np.uint8)


def digits_to_shocks(digits: np.ndarray) -> np.ndarray:
    """(K, N) outcome digits -> (K, N, 2) uint8 shock array."""
    return indices_to_shocks(digits)


def iter_chunks(total: int, chunk: int = CHUNK) -> Iterator[tuple[int, int]]:
    """(start, stop) ranges covering [0, total)."""
    for start in range(0, total, chunk):
        yield start, min(start + chunk, total)


def path_log_probs(digits: np.ndarray, log_pmf: np.ndarray) -> np.ndarray:
    """Log product probability of each path under a per-step log-pmf."""
    with np.errstate(invalid="ignore"):
        return log_pmf[digits].sum(axis=1)
