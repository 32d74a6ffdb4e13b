"""Counter-based pseudorandomness for reproducible parallel simulation.

A 64-bit mixing function (the SplitMix64 finalizer) is applied to
counters derived from (seed, walk index, step index).  No generator
state is carried, so walk i step j yields the same draw no matter how
the walks are split across workers or in what order they run.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def walk_key(seed: int, walk: int) -> int:
    """Independent stream key for one walk."""
    return mix64((seed + _GAMMA * (walk + 1)) & _MASK)


def draw(key: int, step: int) -> int:
    """The step-th 64-bit draw of a stream."""
    return mix64((key + _GAMMA * (step + 1)) & _MASK)


def draw_bit(key: int, step: int) -> int:
    """Fair coin: the top bit of the draw."""
    return draw(key, step) >> 63


def draw_below(key: int, step: int, num: int, den: int) -> int:
    """Bernoulli trial with success probability num/den, decided in integers.

    Returns 1 with probability num/den (to within 2^-53, deterministically),
    using the top 53 bits of the draw; no floating point is involved.
    """
    k = draw(key, step) >> 11
    return 1 if k * den < num << 53 else 0
