"""Splittable, counter-based random streams.

Every stochastic component draws from an independent Philox substream
derived from (master seed, *key), where the key encodes the run's
coordinates (initial set size, run index, stream role). Substreams with
the same derivation are value-identical no matter where or in what order
they are instantiated, which is what makes paired runs and parallel
execution reproducible.
"""

from __future__ import annotations

import numpy as np

# Stream roles. INIT is shared by both algorithms of a paired run (it
# produces the initial sample); INIT_NOISE supplies the Bernoulli draw
# for the initial test, keyed without the initial set size so that cells
# of different sizes share it (common random numbers); SIGHT and RC are
# private continuation streams; FAMILY seeds generation.
ROLE_INIT = 0
ROLE_SIGHT = 1
ROLE_RC = 2
ROLE_FAMILY = 3
ROLE_INIT_NOISE = 4


def spawn_generator(master_seed: int, *key: int) -> np.random.Generator:
    """Return the Philox generator for substream (master_seed, *key)."""
    if master_seed < 0:
        raise ValueError("master_seed must be nonnegative")
    seq = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(seq))
