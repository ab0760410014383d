"""Deterministic random-stream derivation.

Every stochastic routine takes an explicit ``numpy.random.Generator``.
Streams are derived from one master seed plus integer stream keys, so
independent components (simulation, gradient batches, multi-starts, ...)
never share state and any run is reproducible from the seed alone.

Structure::

    seed
      ├── (SIMULATE, path-block)      exact / gaussian path simulation
      ├── (OPTIMIZER, iteration)      per-iteration gradient batches
      ├── (WORSTCASE, start-index)    inner-minimization multi-starts
      └── (OBJECTIVE, eval-index)     standalone objective estimates
"""

from __future__ import annotations

import numpy as np

# Top-level stream keys. Fixed constants: changing them changes every
# seeded result, so treat as part of the output format.
SIMULATE = 1
OPTIMIZER = 2
WORSTCASE = 3
OBJECTIVE = 4
AGGREGATE = 5


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Generator for the stream identified by ``(seed, *keys)``.

    Identical arguments always produce an identical stream, and streams
    with different key paths are statistically independent.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))


def path_stream(seed: int, path_index: int) -> np.random.Generator:
    """Per-path substream: the path index is mixed into the seed."""
    return substream(seed, SIMULATE, path_index)
