"""Counter-based random bits keyed by ``(seed, trial, counter)``.

Every value is a pure hash of its key, so any trial can be regenerated on its
own and the output of a sampler does not depend on how trials are split among
workers. The mixing function is the SplitMix64 finalizer applied in two
rounds: once to bind the trial to the seed and once to the counter.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


@njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _C1
    z = (z ^ (z >> np.uint64(27))) * _C2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def trial_key(seed_key, trial):
    return mix64(seed_key ^ (np.uint64(trial) * _GOLDEN))


@njit(cache=True, inline="always")
def draw(tkey, counter):
    """64 random bits for ``counter`` within a trial."""
    return mix64(tkey + (np.uint64(counter) + np.uint64(1)) * _GOLDEN)


@njit(cache=True, inline="always")
def uniform(tkey, counter):
    return np.float64(draw(tkey, counter) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


def seed_key(seed: int) -> np.uint64:
    """Fold an arbitrary integer seed into the 64-bit key space."""
    return np.uint64(mix64(np.uint64(seed & _MASK64)))


def bits(seed: int, trial: int, counter: int) -> int:
    """Python-level access to one 64-bit draw, for inspection and tests."""
    tkey = np.uint64(trial_key(seed_key(seed), np.uint64(trial)))
    return int(draw(tkey, np.uint64(counter)))
