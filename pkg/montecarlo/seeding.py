"""Counter-based stream derivation.

Every random stream is a pure function of the root seed and a tuple of
counters (sweep index, trial index, ...). Counters are folded in with the
SplitMix64 finalizer, so the derived 64-bit seed of any trial can be
recomputed in isolation and in any language. Reference vectors:

    splitmix64(1234567)                        == 6457827717110365317
    splitmix64(1234567 + 0x9E3779B97F4A7C15)   == 3203168211198807973
"""
from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

# stream tags for draws that are not indexed by trial
LINK_POWER_STREAM = 0x4C494E4B
SHOT_NOISE_STREAM = 0x53484F54
GEOMETRY_STREAM = 0x47454F4D


def splitmix64(state: int) -> int:
    z = (state + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(root: int, *counters: int) -> int:
    state = splitmix64(root & MASK64)
    for counter in counters:
        state = splitmix64(state ^ (counter & MASK64))
    return state


def rng_for(root: int, *counters: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(root, *counters)))
