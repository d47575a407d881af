"""Seeded random streams.

Every trial draws from its own PCG64 substream keyed by
``(master_seed, trial_index)``, so trials can run in any order or process
and still reproduce bit-identical draws.
"""

import numpy as np

from soisim.errors import DomainError


def substream(master_seed: int, index: int = 0) -> np.random.Generator:
    """Return the generator for substream ``index`` of ``master_seed``.

    Args:
        master_seed (int): Non-negative master seed.
        index (int): Non-negative substream (trial) index.

    Returns:
        np.random.Generator: A PCG64 generator unique to the pair.
    """
    if master_seed < 0 or index < 0:
        raise DomainError(f"Seeds must be non-negative, got master_seed={master_seed}, index={index}")
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(seq))
