"""Deterministic seed derivation.

Every random draw in a run is keyed on the master seed plus a purpose tag
and, where relevant, a round index or instance id. Draws therefore do not
depend on call order, which keeps resumed and parallel runs identical to
sequential ones.
"""

import numpy as np

from poolal.core.util.hashing import key_word


def derive_seed(master: int, *keys: int | str) -> int:
    """Derive a child seed from a master seed and a sequence of keys.

    Args:
        master: Non-negative master seed.
        *keys: Purpose tags (str) and indices (non-negative int).

    Returns:
        A non-negative 63-bit integer seed.
    """
    words = [int(master)]
    for key in keys:
        if isinstance(key, str):
            words.append(key_word(key))
        else:
            if key < 0:
                raise ValueError(f"seed keys must be non-negative, got {key}")
            words.append(int(key))
    state = np.random.SeedSequence(words).generate_state(1, dtype=np.uint64)
    return int(state[0] >> np.uint64(1))


def rng_for(master: int, *keys: int | str) -> np.random.Generator:
    """Return a PCG64 generator seeded by ``derive_seed(master, *keys)``."""
    return np.random.default_rng(derive_seed(master, *keys))
