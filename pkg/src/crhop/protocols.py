"""Channel-selection strategies, one choice per half-slot.

All strategies make two rendezvous attempts per timeslot: `select(1)` for the
first half-slot and `select(2)` for the second, called in that order every
slot. The dual-clock strategy hops its prime channels in the first half and
its non-prime channels in the second; the baselines advance a single clock
once per half-slot over the full available set.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError, NoChannelError
from .spectrum import is_prime, partition_prime

STRATEGY_KINDS = ("mdmca", "mrcs", "mmca", "memca")


def smallest_prime_at_least(n: int) -> int:
    p = max(n, 2)
    while not is_prime(p):
        p += 1
    return p


class MdmcaStrategy:
    """Dual modular clocks over the prime / non-prime split.

    Both clocks run modulo the available-set size m. Hop rates are redrawn
    uniformly from [0, m) every m slots (when the inner counter wraps), which
    also unsticks a rate of 0. The first half-slot maps clock 1 onto the
    prime list when it is nonempty, otherwise onto the full set; the second
    half-slot does the same with clock 2 and the non-prime list. The two
    halves can only pick the same channel when one of the lists is empty, in
    which case the second clock is nudged forward once.
    """

    kind = "mdmca"

    def __init__(self, channels, rng: np.random.Generator):
        self.cu = tuple(sorted(channels))
        if not self.cu:
            raise NoChannelError("empty available channel set")
        self.mp, self.np_ = (tuple(s) for s in partition_prime(self.cu))
        self.m = len(self.cu)
        self._rng = rng
        self.j1 = int(rng.integers(self.m))
        self.j2 = int(rng.integers(self.m))
        self.r1 = 0
        self.r2 = 0
        self.t = 0
        self._c1: int | None = None

    def select(self, half: int) -> int:
        if half == 1:
            if self.t == 0:
                self.r1 = int(self._rng.integers(self.m))
                self.r2 = int(self._rng.integers(self.m))
            self.j1 = (self.j1 + self.r1) % self.m
            c1 = self.mp[self.j1 % len(self.mp)] if self.mp else self.cu[self.j1]
            self._c1 = c1
            return c1
        if half != 2:
            raise InvalidParameterError(f"half must be 1 or 2, got {half}")
        self.j2 = (self.j2 + self.r2) % self.m
        c2 = self.np_[self.j2 % len(self.np_)] if self.np_ else self.cu[self.j2]
        if c2 == self._c1:  # only possible when mp or np_ is empty
            self.j2 = (self.j2 + 1) % self.m
            c2 = self.cu[self.j2]
        self.t = (self.t + 1) % self.m
        return c2


class MrcsStrategy:
    """Uniform random pick from the available set, independent per half-slot."""

    kind = "mrcs"

    def __init__(self, channels, rng: np.random.Generator):
        self.cu = tuple(sorted(channels))
        if not self.cu:
            raise NoChannelError("empty available channel set")
        self._rng = rng

    def select(self, half: int) -> int:
        return self.cu[int(self._rng.integers(len(self.cu)))]


class MmcaStrategy:
    """Single modular clock with prime modulus p >= m.

    The clock advances once per half-slot; indices past the end of the
    available set wrap onto it via j mod m. The rate is redrawn uniformly
    from [0, p) every 2p half-slots.
    """

    kind = "mmca"

    def __init__(self, channels, rng: np.random.Generator):
        self.cu = tuple(sorted(channels))
        if not self.cu:
            raise NoChannelError("empty available channel set")
        self.m = len(self.cu)
        self.p = smallest_prime_at_least(self.m)
        self._rng = rng
        self.j = int(rng.integers(self.p))
        self.r = 0
        self._steps = 0

    def select(self, half: int) -> int:
        if self._steps == 0:
            self.r = int(self._rng.integers(self.p))
        self._steps = (self._steps + 1) % (2 * self.p)
        self.j = (self.j + self.r) % self.p
        return self.cu[self.j if self.j < self.m else self.j % self.m]


class MemcaStrategy(MmcaStrategy):
    """Same clock core as MmcaStrategy; differs only in termination policy,
    which lives in the engine (extended responder window after completion)."""

    kind = "memca"


def make_strategy(kind: str, channels, rng: np.random.Generator):
    if kind == "mdmca":
        return MdmcaStrategy(channels, rng)
    if kind == "mrcs":
        return MrcsStrategy(channels, rng)
    if kind == "mmca":
        return MmcaStrategy(channels, rng)
    if kind == "memca":
        return MemcaStrategy(channels, rng)
    raise InvalidParameterError(f"unknown strategy kind {kind!r}")
