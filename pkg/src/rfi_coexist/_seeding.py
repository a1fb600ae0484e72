"""Counter-based seed derivation shared by both Monte Carlo backends.

Each trial gets its own 32-bit Mersenne Twister seed: the high word of
splitmix64(stream_master + trial_index). The stream master itself is
splitmix64(user_seed XOR lobe_salt), so the two lobes and successive grid
points draw from unrelated streams while staying fully reproducible. Trial
results therefore depend only on (user_seed, lobe, trial_index), never on
worker count or scheduling order.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF

LOBE_SALT = {"main": 0x6D61696E_00000001, "side": 0x73696465_00000002}


def splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def stream_master(seed: int, lobe: str) -> int:
    """64-bit per-(seed, lobe) stream identifier."""
    return splitmix64((int(seed) & MASK64) ^ LOBE_SALT[lobe])


def trial_seed(master: int, trial: int) -> int:
    """32-bit MT19937 seed for one trial."""
    return splitmix64((master + trial) & MASK64) >> 32


def trial_seeds(master: int, trials: int) -> np.ndarray:
    """Vector of per-trial seeds as uint32 (numpy fallback path)."""
    return np.array([trial_seed(master, i) for i in range(trials)], dtype=np.uint32)
