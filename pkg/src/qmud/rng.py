"""Deterministic random streams.

Simulation results must be bit-reproducible across platforms and library
versions, so the package carries its own generator instead of relying on
numpy's (whose method streams may change between releases).  The core is
SplitMix64: state advances by the 64-bit golden-ratio constant and each
output is the standard finalizer of the new state.

Draw contracts, fixed forever:

* ``uniform()`` is ``(next_u64() >> 11) * 2**-53`` — one 64-bit output per
  call, value in [0, 1).
* ``normal()`` uses the Marsaglia polar transform: draw ``u, v`` uniform on
  (-1, 1) (two ``uniform()`` calls per attempt) until ``0 < u**2 + v**2 < 1``,
  then return ``u * f`` and cache ``v * f`` with ``f = sqrt(-2 ln s / s)``.
  A cached spare is returned by the next call without consuming draws.
* ``derive_seed(master, index)`` is the ``(index + 1)``-th raw output of the
  SplitMix64 stream seeded with ``master``; used to give every Monte Carlo
  trial (and nothing else) its own independent stream.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 output finalizer (Stafford variant 13)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Seed for the ``index``-th derived stream of ``master_seed``."""
    if index < 0:
        raise ValueError("index must be non-negative")
    return mix64((master_seed + _GAMMA * (index + 1)) & _MASK64)


class SplitMix64:
    """Tiny deterministic RNG; one instance per trial, never shared."""

    __slots__ = ("_state", "_spare")

    def __init__(self, seed: int):
        self._state = seed & _MASK64
        self._spare: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53

    def normal(self) -> float:
        """Standard normal via the Marsaglia polar method."""
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        while True:
            u = 2.0 * self.uniform() - 1.0
            v = 2.0 * self.uniform() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                f = math.sqrt(-2.0 * math.log(s) / s)
                self._spare = v * f
                return u * f
